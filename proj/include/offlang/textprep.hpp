#pragma once

#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "offlang/stemmer.hpp"

namespace offlang {

enum class EmojiMode { remove_and_score, keep };
enum class EmojiAggregate { mean, sum };

// Switches for the tweet preprocessing pipeline. Defaults reproduce the
// sub-task A random-forest preprocessing with every step enabled.
struct PrepConfig {
  bool lowercase = true;
  bool strip_punct = true;
  bool reduce_elongation = true;
  bool split_hashtags = true;
  bool remove_stopwords = true;
  // Drops @USER tokens; the mention count survives in the surface features.
  bool remove_mentions = false;
  bool stem = true;
  EmojiMode emoji_mode = EmojiMode::remove_and_score;
  EmojiAggregate emoji_aggregate = EmojiAggregate::mean;
  // Off: plain whitespace split, no punctuation detachment.
  bool tweet_tokenize = true;
  std::string language = "en";

  // Every switch off: the pipeline reduces to a whitespace split.
  static PrepConfig identity();

  bool operator==(const PrepConfig&) const = default;
};

struct TokenizedTweet {
  std::vector<std::string> tokens;
  // Tokens as they left the tokenizer, before case folding and filtering.
  std::vector<std::string> base_tokens;
  double emoji_score = 0.0;
  std::string raw_text;
};

// Emoji (as literal UTF-8 sequences) to sentiment scores in [-1, 1].
class EmojiSentimentLexicon {
 public:
  EmojiSentimentLexicon() = default;

  void add(std::string emoji, double score);
  // Exact sequence first, then with variation selectors stripped.
  std::optional<double> score(std::string_view emoji) const;

  std::size_t size() const noexcept { return scores_.size(); }
  const std::map<std::string, double, std::less<>>& entries() const noexcept { return scores_; }

 private:
  std::map<std::string, double, std::less<>> scores_;
};

// CSV `emoji,score`; optional header row. Scores outside [-1,1] are rejected.
EmojiSentimentLexicon load_emoji_lexicon(std::istream& source);
EmojiSentimentLexicon load_emoji_lexicon_file(const std::string& path);

using WordSet = std::set<std::string, std::less<>>;

// One entry per line; blank lines and lines starting with '#' skipped; entries
// lowercased.
WordSet load_word_list(std::istream& source);
WordSet load_word_list_file(const std::string& path);

std::string reduce_elongation(std::string_view text);

// `token` must start with '#'.
std::vector<std::string> split_hashtag(std::string_view token);

// Rewrites every hashtag in running text into its space-separated segments.
std::string split_hashtags_in_text(std::string_view text);

std::vector<std::string> tokenize(std::string_view text);
std::vector<std::string> whitespace_split(std::string_view text);

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens, const WordSet& stoplist);

// `@USER` / `URL` in either case.
bool is_placeholder(std::string_view token);

struct EmojiExtraction {
  std::string text;
  double score = 0.0;
  std::size_t emoji_count = 0;
};

EmojiExtraction extract_emoji_sentiment(std::string_view text, const EmojiSentimentLexicon& lex,
                                        EmojiAggregate aggregate = EmojiAggregate::mean);

// Runs the configured steps in order: hashtag split, elongation reduction,
// emoji extraction, tokenization, lowercasing, punctuation removal, stopword
// removal, stemming.
class Preprocessor {
 public:
  Preprocessor(PrepConfig cfg, WordSet stoplist, EmojiSentimentLexicon lex);

  TokenizedTweet operator()(std::string_view text) const;

  const PrepConfig& config() const noexcept { return cfg_; }
  const WordSet& stoplist() const noexcept { return stoplist_; }
  const EmojiSentimentLexicon& emoji_lexicon() const noexcept { return lex_; }

 private:
  PrepConfig cfg_;
  WordSet stoplist_;
  EmojiSentimentLexicon lex_;
  std::shared_ptr<const Stemmer> stemmer_;
};

TokenizedTweet preprocess(std::string_view text, const PrepConfig& cfg, const WordSet& stoplist,
                          const EmojiSentimentLexicon& lex);

}  // namespace offlang
