#pragma once

#include <array>
#include <bitset>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "offlang/corpus.hpp"

namespace offlang {

// Report column order: pos, neg, ang, ant, dis, fea, joy, sad, sur, tru.
enum class Emotion { positive, negative, anger, anticipation, disgust, fear, joy, sadness, surprise, trust };
inline constexpr std::size_t kEmotionCount = 10;

std::string_view to_string(Emotion e);
std::string_view short_name(Emotion e);

class EmotionLexicon {
 public:
  using Categories = std::bitset<kEmotionCount>;

  void add(const std::string& word, Emotion e) { words_[word].set(static_cast<std::size_t>(e)); }
  Categories categories(std::string_view word) const;
  std::size_t size() const noexcept { return words_.size(); }

  // Multi-word rows skipped while loading.
  std::size_t skipped_phrases = 0;

 private:
  std::map<std::string, Categories, std::less<>> words_;
};

// NRC word-level TSV: `word<TAB>category<TAB>flag`, flag 0 or 1. Words are
// lowercased. Throws ParseError (with line) on unknown categories or flags and
// on the same (word, category) appearing with both flags.
EmotionLexicon load_emotion_lexicon(std::istream& source);
EmotionLexicon load_emotion_lexicon_file(const std::string& path);

enum class NormBasis { per_1000_posts, per_post, per_1000_tokens };

std::string_view to_string(NormBasis b);
NormBasis parse_basis(std::string_view text);

struct EmotionProfile {
  std::string label;
  std::array<double, kEmotionCount> values{};
  std::array<std::size_t, kEmotionCount> raw{};
  NormBasis basis = NormBasis::per_1000_posts;
  std::size_t posts = 0;
  std::size_t tokens = 0;
};

// Lowercased surface tokens of a post, as counted against the lexicon.
std::vector<std::string> emotion_tokens(std::string_view text);

// One profile per level-A class in order NOT, OFF. Tweets without a level-A
// label are skipped.
std::vector<EmotionProfile> emotion_counts(const Corpus& corpus, const EmotionLexicon& lex, NormBasis basis);

std::string emotion_report(const std::vector<EmotionProfile>& profiles);

}  // namespace offlang
