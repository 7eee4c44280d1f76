#include "offlang/textprep.hpp"

#include <fstream>

#include "offlang/error.hpp"
#include "offlang/unicode.hpp"
#include "text_io.hpp"

namespace offlang {
namespace {

using unicode::decode;
using unicode::encode;

bool is_variation_selector(char32_t cp) { return cp == 0xFE0F || cp == 0xFE0E; }

std::string strip_variation_selectors(std::string_view emoji) {
  std::u32string cps = decode(emoji);
  std::erase_if(cps, is_variation_selector);
  return encode(cps);
}

// Characters allowed inside a word when flanked by word characters
// ("don't", "e-mail", "3.5").
bool is_word_joiner(char32_t cp) { return cp == U'\'' || cp == U'’' || cp == U'-' || cp == U'.'; }

bool starts_tag(std::u32string_view s, std::size_t i) {
  return (s[i] == U'#' || s[i] == U'@') && i + 1 < s.size() && unicode::is_word_char(s[i + 1]);
}

void tokenize_chunk(std::u32string_view s, std::vector<std::string>& out) {
  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    if (const std::size_t len = unicode::emoji_cluster_length(s, i)) {
      out.push_back(encode(s.substr(i, len)));
      i += len;
      continue;
    }
    std::size_t j = i + 1;
    if (starts_tag(s, i)) {
      while (j < n && unicode::is_word_char(s[j])) ++j;
    } else if (unicode::is_punct(s[i])) {
      while (j < n && unicode::is_punct(s[j]) && !starts_tag(s, j)) ++j;
    } else {
      while (j < n) {
        if (unicode::emoji_cluster_length(s, j)) break;
        if (!unicode::is_punct(s[j])) {
          ++j;
        } else if (is_word_joiner(s[j]) && j + 1 < n && unicode::is_word_char(s[j - 1]) &&
                   unicode::is_word_char(s[j + 1])) {
          ++j;
        } else {
          break;
        }
      }
    }
    out.push_back(encode(s.substr(i, j - i)));
    i = j;
  }
}

bool all_letters(std::string_view token) {
  if (token.empty()) return false;
  for (char32_t cp : decode(token)) {
    if (!unicode::is_letter(cp)) return false;
  }
  return true;
}

}  // namespace

PrepConfig PrepConfig::identity() {
  PrepConfig cfg;
  cfg.lowercase = false;
  cfg.strip_punct = false;
  cfg.reduce_elongation = false;
  cfg.split_hashtags = false;
  cfg.remove_stopwords = false;
  cfg.stem = false;
  cfg.emoji_mode = EmojiMode::keep;
  cfg.tweet_tokenize = false;
  return cfg;
}

void EmojiSentimentLexicon::add(std::string emoji, double score) {
  if (!(score >= -1.0 && score <= 1.0)) {
    throw ValidationError("emoji score " + std::to_string(score) + " outside [-1,1]");
  }
  scores_[strip_variation_selectors(emoji)] = score;
}

std::optional<double> EmojiSentimentLexicon::score(std::string_view emoji) const {
  if (auto it = scores_.find(emoji); it != scores_.end()) return it->second;
  if (auto it = scores_.find(strip_variation_selectors(emoji)); it != scores_.end()) return it->second;
  return std::nullopt;
}

EmojiSentimentLexicon load_emoji_lexicon(std::istream& source) {
  EmojiSentimentLexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (detail::read_line(source, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos || comma == 0) throw ParseError("expected 'emoji,score'", line_no);
    const std::string_view emoji(line.data(), comma);
    const std::string_view field = detail::trim(std::string_view(line).substr(comma + 1));
    double score = 0.0;
    if (!detail::parse_double(field, score)) {
      if (line_no == 1 && emoji == "emoji") continue;
      throw ParseError("bad score '" + std::string(field) + "'", line_no);
    }
    if (score < -1.0 || score > 1.0) {
      throw ValidationError("line " + std::to_string(line_no) + ": emoji score outside [-1,1]");
    }
    lex.add(std::string(emoji), score);
  }
  return lex;
}

EmojiSentimentLexicon load_emoji_lexicon_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open emoji lexicon " + path);
  return load_emoji_lexicon(in);
}

WordSet load_word_list(std::istream& source) {
  WordSet words;
  std::string line;
  while (detail::read_line(source, line)) {
    const auto word = detail::trim(line);
    if (word.empty() || word.front() == '#') continue;
    words.insert(unicode::to_lower(word));
  }
  return words;
}

WordSet load_word_list_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open word list " + path);
  return load_word_list(in);
}

std::string reduce_elongation(std::string_view text) {
  const auto cps = decode(text);
  std::u32string out;
  out.reserve(cps.size());
  std::size_t run = 0;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    run = (i > 0 && cps[i] == cps[i - 1]) ? run + 1 : 1;
    if (run <= 2) out.push_back(cps[i]);
  }
  return encode(out);
}

std::vector<std::string> split_hashtag(std::string_view token) {
  if (token.empty() || token.front() != '#') {
    throw ContractError("split_hashtag expects a token starting with '#', got '" + std::string(token) + "'");
  }
  std::vector<std::string> segments;
  std::string current;
  for (char32_t cp : decode(token.substr(1))) {
    if (unicode::is_upper(cp) && !current.empty()) {
      segments.push_back(std::move(current));
      current.clear();
    }
    unicode::append(current, cp);
  }
  if (!current.empty()) segments.push_back(std::move(current));
  return segments;
}

std::string split_hashtags_in_text(std::string_view text) {
  const auto s = decode(text);
  std::string out;
  out.reserve(text.size() + 8);
  std::size_t i = 0;
  while (i < s.size()) {
    const bool boundary = i == 0 || !unicode::is_word_char(s[i - 1]);
    if (s[i] == U'#' && boundary && i + 1 < s.size() && unicode::is_word_char(s[i + 1])) {
      std::size_t j = i + 1;
      while (j < s.size() && unicode::is_word_char(s[j])) ++j;
      const auto segments = split_hashtag(encode(std::u32string_view(s).substr(i, j - i)));
      for (std::size_t k = 0; k < segments.size(); ++k) {
        if (k) out += ' ';
        out += segments[k];
      }
      i = j;
      continue;
    }
    unicode::append(out, s[i]);
    ++i;
  }
  return out;
}

std::vector<std::string> whitespace_split(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (char32_t cp : decode(text)) {
    if (unicode::is_space(cp)) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      unicode::append(current, cp);
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& chunk : whitespace_split(text)) {
    tokenize_chunk(decode(chunk), out);
  }
  return out;
}

bool is_placeholder(std::string_view token) {
  return token == "@USER" || token == "URL" || token == "@user" || token == "url";
}

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens, const WordSet& stoplist) {
  std::erase_if(tokens, [&](const std::string& t) { return stoplist.contains(unicode::to_lower(t)); });
  return tokens;
}

EmojiExtraction extract_emoji_sentiment(std::string_view text, const EmojiSentimentLexicon& lex,
                                        EmojiAggregate aggregate) {
  const auto s = decode(text);
  EmojiExtraction result;
  std::u32string out;
  double total = 0.0;
  std::size_t i = 0;
  while (i < s.size()) {
    if (const std::size_t len = unicode::emoji_cluster_length(s, i)) {
      total += lex.score(encode(std::u32string_view(s).substr(i, len))).value_or(0.0);
      ++result.emoji_count;
      i += len;
      // Keep neighbouring words apart once the emoji is gone.
      if (!out.empty() && !unicode::is_space(out.back()) && i < s.size() && !unicode::is_space(s[i])) {
        out.push_back(U' ');
      }
      continue;
    }
    out.push_back(s[i]);
    ++i;
  }
  if (result.emoji_count == 0) {
    result.text = std::string(text);
    return result;
  }
  result.text = encode(out);
  result.score = aggregate == EmojiAggregate::mean ? total / static_cast<double>(result.emoji_count) : total;
  return result;
}

Preprocessor::Preprocessor(PrepConfig cfg, WordSet stoplist, EmojiSentimentLexicon lex)
    : cfg_(std::move(cfg)), stoplist_(std::move(stoplist)), lex_(std::move(lex)) {
  if (cfg_.stem) stemmer_ = make_stemmer(cfg_.language);
}

TokenizedTweet Preprocessor::operator()(std::string_view text) const {
  TokenizedTweet result;
  result.raw_text = std::string(text);

  std::string working(text);
  if (cfg_.split_hashtags) working = split_hashtags_in_text(working);
  if (cfg_.reduce_elongation) working = reduce_elongation(working);
  if (cfg_.emoji_mode == EmojiMode::remove_and_score) {
    auto extraction = extract_emoji_sentiment(working, lex_, cfg_.emoji_aggregate);
    working = std::move(extraction.text);
    result.emoji_score = extraction.score;
  }

  auto tokens = cfg_.tweet_tokenize ? tokenize(working) : whitespace_split(working);
  result.base_tokens = tokens;

  if (cfg_.lowercase) {
    for (auto& t : tokens) t = unicode::to_lower(t);
  }
  if (cfg_.remove_mentions) {
    std::erase_if(tokens, [](const std::string& t) { return t == "@USER" || t == "@user"; });
  }
  if (cfg_.strip_punct) {
    std::vector<std::string> kept;
    kept.reserve(tokens.size());
    for (auto& t : tokens) {
      if (is_placeholder(t)) {
        kept.push_back(std::move(t));
        continue;
      }
      std::string stripped;
      for (char32_t cp : decode(t)) {
        if (!unicode::is_punct(cp)) unicode::append(stripped, cp);
      }
      if (!stripped.empty()) kept.push_back(std::move(stripped));
    }
    tokens = std::move(kept);
  }
  if (cfg_.remove_stopwords) tokens = remove_stopwords(std::move(tokens), stoplist_);
  if (cfg_.stem) {
    for (auto& t : tokens) {
      if (!is_placeholder(t) && all_letters(t)) t = stemmer_->stem(t);
    }
  }
  result.tokens = std::move(tokens);
  return result;
}

TokenizedTweet preprocess(std::string_view text, const PrepConfig& cfg, const WordSet& stoplist,
                          const EmojiSentimentLexicon& lex) {
  return Preprocessor(cfg, stoplist, lex)(text);
}

}  // namespace offlang
