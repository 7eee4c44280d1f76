#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "offlang/textprep.hpp"

namespace offlang {

using TokenList = std::vector<std::string>;

// Term index and document frequencies learned from a training corpus.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Rebuilds a vocabulary from stored terms (index order) and document counts.
  Vocabulary(std::vector<std::string> terms, std::vector<std::uint32_t> df, std::uint32_t n_docs);

  std::size_t size() const noexcept { return terms_.size(); }
  std::uint32_t n_docs() const noexcept { return n_docs_; }

  // Index of `term`, or -1.
  std::int64_t index(std::string_view term) const;
  const std::string& term(std::size_t index) const { return terms_.at(index); }
  std::uint32_t df(std::size_t index) const { return df_.at(index); }
  double idf(std::size_t index) const;

  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::vector<std::uint32_t>& document_frequencies() const noexcept { return df_; }

  bool operator==(const Vocabulary& other) const {
    return terms_ == other.terms_ && df_ == other.df_ && n_docs_ == other.n_docs_;
  }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };

  std::vector<std::string> terms_;
  std::vector<std::uint32_t> df_;
  std::unordered_map<std::string, std::uint32_t, Hash, std::equal_to<>> index_;
  std::uint32_t n_docs_ = 0;
};

// Terms present in at least `min_df` documents, indexed in order of first
// occurrence. Throws ContractError on an empty document list or min_df < 1.
Vocabulary fit_vocabulary(std::span<const TokenList> docs, std::uint32_t min_df);

// Joins each window of 1..max_order consecutive tokens with a space.
TokenList expand_ngrams(const TokenList& tokens, std::size_t max_order);

using SparseBlock = std::vector<std::pair<std::uint32_t, double>>;

// Raw term frequency times smoothed idf ln((1+N)/(1+df))+1, L2-normalized.
// Out-of-vocabulary tokens are ignored.
SparseBlock tfidf(const TokenList& doc, const Vocabulary& vocab);

inline constexpr std::size_t kSurfaceFeatureCount = 9;

struct SurfaceFeatures {
  std::size_t url_count = 0;
  std::size_t mention_count = 0;
  std::size_t char_count = 0;
  std::size_t punct_count = 0;
  std::size_t word_count = 0;
  double avg_word_len = 0.0;
  double capital_pct = 0.0;
  std::size_t abusive_count = 0;
  double emoji_score = 0.0;

  // Fixed order: url, mention, chars, punct, words, avg word length,
  // capital share, abusive terms, emoji score.
  std::array<double, kSurfaceFeatureCount> to_array() const;
  static const std::array<std::string_view, kSurfaceFeatureCount>& names();
};

// Surface statistics of a post. Letters and punctuation inside the @USER and
// URL placeholders are not counted towards capital_pct, punct_count or words.
SurfaceFeatures surface(std::string_view raw_text, const TokenList& tokens, const WordSet& abusive_lex,
                        double emoji_score);

// Sparse TF-IDF block followed by the dense surface block at indices V..V+8.
class FeatureVector {
 public:
  FeatureVector() = default;
  FeatureVector(SparseBlock sparse, std::array<double, kSurfaceFeatureCount> dense, std::size_t vocab_size);

  std::size_t dimension() const noexcept { return vocab_size_ + kSurfaceFeatureCount; }
  std::size_t vocab_size() const noexcept { return vocab_size_; }
  const SparseBlock& sparse() const noexcept { return sparse_; }
  const std::array<double, kSurfaceFeatureCount>& dense() const noexcept { return dense_; }

  double operator[](std::size_t index) const;

  // Non-zero entries over the whole dimension, in index order.
  template <typename Fn>
  void for_each_nonzero(Fn&& fn) const {
    for (const auto& [i, v] : sparse_) {
      if (v != 0.0) fn(static_cast<std::size_t>(i), v);
    }
    for (std::size_t k = 0; k < kSurfaceFeatureCount; ++k) {
      if (dense_[k] != 0.0) fn(vocab_size_ + k, dense_[k]);
    }
  }

  bool operator==(const FeatureVector&) const = default;

 private:
  SparseBlock sparse_;
  std::array<double, kSurfaceFeatureCount> dense_{};
  std::size_t vocab_size_ = 0;
};

// `dense` must hold exactly nine values; sparse indices must be strictly
// increasing, below `vocab_size`, and finite.
FeatureVector assemble(SparseBlock sparse, std::span<const double> dense, std::size_t vocab_size);

// Binary little-endian encoding of a feature vector.
std::string serialize(const FeatureVector& v);
FeatureVector deserialize_feature_vector(std::string_view bytes);

// Text-to-vector transform: preprocessing, vocabulary and lexicons together.
struct FeatureParams {
  std::uint32_t min_df = 2;
  std::size_t ngram_max = 1;

  bool operator==(const FeatureParams&) const = default;
};

class Featurizer {
 public:
  Featurizer(Preprocessor prep, WordSet abusive_lex, FeatureParams params);

  // Learns the vocabulary from `texts`.
  void fit(std::span<const std::string> texts);
  void set_vocabulary(Vocabulary vocab) { vocab_ = std::move(vocab); }

  FeatureVector transform(std::string_view text) const;
  std::vector<FeatureVector> transform_all(std::span<const std::string> texts) const;

  const Preprocessor& preprocessor() const noexcept { return prep_; }
  const WordSet& abusive_lexicon() const noexcept { return abusive_; }
  const FeatureParams& params() const noexcept { return params_; }
  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  std::size_t dimension() const noexcept { return vocab_.size() + kSurfaceFeatureCount; }

 private:
  Preprocessor prep_;
  WordSet abusive_;
  FeatureParams params_;
  Vocabulary vocab_;
};

}  // namespace offlang
