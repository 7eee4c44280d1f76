#include "offlang/emolex.hpp"

#include <fmt/format.h>

#include <fstream>

#include "offlang/error.hpp"
#include "offlang/textprep.hpp"
#include "offlang/unicode.hpp"
#include "text_io.hpp"

namespace offlang {
namespace {

constexpr std::array<std::string_view, kEmotionCount> kNames = {
    "positive", "negative", "anger", "anticipation", "disgust", "fear", "joy", "sadness", "surprise", "trust"};
constexpr std::array<std::string_view, kEmotionCount> kShort = {"pos", "neg", "ang", "ant", "dis",
                                                                 "fea", "joy", "sad", "sur", "tru"};

}  // namespace

std::string_view to_string(Emotion e) { return kNames[static_cast<std::size_t>(e)]; }
std::string_view short_name(Emotion e) { return kShort[static_cast<std::size_t>(e)]; }

EmotionLexicon::Categories EmotionLexicon::categories(std::string_view word) const {
  const auto it = words_.find(word);
  return it == words_.end() ? Categories{} : it->second;
}

EmotionLexicon load_emotion_lexicon(std::istream& source) {
  EmotionLexicon lex;
  std::map<std::pair<std::string, std::size_t>, bool> seen;
  std::string line;
  std::size_t number = 0;
  while (detail::read_line(source, line)) {
    ++number;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split(line, '\t');
    if (fields.size() != 3) throw ParseError("expected word<TAB>category<TAB>flag", number);
    const auto word = unicode::to_lower(detail::trim(fields[0]));
    const auto category = detail::trim(fields[1]);
    const auto flag_text = detail::trim(fields[2]);

    std::size_t cat = kEmotionCount;
    for (std::size_t i = 0; i < kEmotionCount; ++i) {
      if (kNames[i] == category) cat = i;
    }
    if (cat == kEmotionCount) throw ParseError("unknown emotion category '" + std::string(category) + "'", number);
    if (flag_text != "0" && flag_text != "1") throw ParseError("flag must be 0 or 1, got '" + std::string(flag_text) + "'", number);
    const bool flag = flag_text == "1";
    if (word.empty()) throw ParseError("empty word", number);

    const auto [it, inserted] = seen.emplace(std::pair{word, cat}, flag);
    if (!inserted && it->second != flag) {
      throw ParseError("conflicting flags for '" + word + "' / " + std::string(category), number);
    }
    if (word.find(' ') != std::string::npos) {
      if (inserted && flag) ++lex.skipped_phrases;
      continue;
    }
    if (flag) lex.add(word, static_cast<Emotion>(cat));
  }
  return lex;
}

EmotionLexicon load_emotion_lexicon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open emotion lexicon " + path);
  return load_emotion_lexicon(in);
}

std::string_view to_string(NormBasis b) {
  switch (b) {
    case NormBasis::per_1000_posts: return "per_1000_posts";
    case NormBasis::per_post: return "per_post";
    case NormBasis::per_1000_tokens: return "per_1000_tokens";
  }
  return "?";
}

NormBasis parse_basis(std::string_view text) {
  for (auto b : {NormBasis::per_1000_posts, NormBasis::per_post, NormBasis::per_1000_tokens}) {
    if (to_string(b) == text) return b;
  }
  throw ValidationError("unknown normalization basis '" + std::string(text) + "'");
}

std::vector<std::string> emotion_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize(text)) out.push_back(unicode::to_lower(t));
  return out;
}

std::vector<EmotionProfile> emotion_counts(const Corpus& corpus, const EmotionLexicon& lex, NormBasis basis) {
  const auto& classes = level_classes(Level::A);
  std::vector<EmotionProfile> profiles(classes.size());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    profiles[c].label = classes[c];
    profiles[c].basis = basis;
  }
  for (const auto& t : corpus.tweets) {
    if (!t.label_a) continue;
    auto& p = profiles[static_cast<std::size_t>(*t.label_a)];
    ++p.posts;
    for (const auto& token : emotion_tokens(t.text)) {
      ++p.tokens;
      const auto cats = lex.categories(token);
      for (std::size_t e = 0; e < kEmotionCount; ++e) p.raw[e] += cats[e];
    }
  }
  for (auto& p : profiles) {
    double denom = 0.0;
    double scale = 1.0;
    switch (basis) {
      case NormBasis::per_1000_posts: denom = static_cast<double>(p.posts); scale = 1000.0; break;
      case NormBasis::per_post: denom = static_cast<double>(p.posts); break;
      case NormBasis::per_1000_tokens: denom = static_cast<double>(p.tokens); scale = 1000.0; break;
    }
    for (std::size_t e = 0; e < kEmotionCount; ++e) {
      p.values[e] = denom == 0.0 ? 0.0 : static_cast<double>(p.raw[e]) * scale / denom;
    }
  }
  return profiles;
}

std::string emotion_report(const std::vector<EmotionProfile>& profiles) {
  if (profiles.empty()) throw ContractError("emotion report needs at least one profile");
  std::string out = fmt::format("basis: {}\n{:<6} {:>6}", to_string(profiles.front().basis), "class", "posts");
  for (auto s : kShort) out += fmt::format(" {:>9}", s);
  out += '\n';
  for (const auto& p : profiles) {
    out += fmt::format("{:<6} {:>6}", p.label, p.posts);
    for (auto v : p.values) out += fmt::format(" {:>9.3f}", v);
    out += '\n';
  }
  return out;
}

}  // namespace offlang
