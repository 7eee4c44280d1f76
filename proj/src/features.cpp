#include "offlang/features.hpp"

#include <algorithm>
#include <cmath>

#include "binary_io.hpp"
#include "offlang/error.hpp"
#include "offlang/unicode.hpp"

namespace offlang {
namespace {

struct FeatureVectorTruncated : ValidationError {
  FeatureVectorTruncated() : ValidationError("truncated feature vector encoding") {}
};

bool is_alphabetic_token(std::string_view token) {
  if (token.empty()) return false;
  for (char32_t cp : unicode::decode(token)) {
    if (!unicode::is_letter(cp)) return false;
  }
  return true;
}

bool matches_at(std::u32string_view s, std::size_t pos, std::u32string_view word) {
  if (s.substr(pos, word.size()) != word) return false;
  const bool left_ok = pos == 0 || !unicode::is_word_char(s[pos - 1]);
  const std::size_t end = pos + word.size();
  const bool right_ok = end == s.size() || !unicode::is_word_char(s[end]);
  return left_ok && right_ok;
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::uint32_t> df, std::uint32_t n_docs)
    : terms_(std::move(terms)), df_(std::move(df)), n_docs_(n_docs) {
  if (terms_.size() != df_.size()) throw ValidationError("vocabulary terms/df length mismatch");
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (df_[i] == 0 || df_[i] > n_docs_) throw ValidationError("document frequency out of range for '" + terms_[i] + "'");
    if (!index_.emplace(terms_[i], static_cast<std::uint32_t>(i)).second) {
      throw ValidationError("duplicate vocabulary term '" + terms_[i] + "'");
    }
  }
}

std::int64_t Vocabulary::index(std::string_view term) const {
  const auto it = index_.find(term);
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

double Vocabulary::idf(std::size_t i) const {
  return std::log((1.0 + n_docs_) / (1.0 + df_.at(i))) + 1.0;
}

Vocabulary fit_vocabulary(std::span<const TokenList> docs, std::uint32_t min_df) {
  if (docs.empty()) throw ContractError("cannot fit a vocabulary on zero documents");
  if (min_df < 1) throw ContractError("min_df must be at least 1");

  std::vector<std::string> order;
  std::unordered_map<std::string, std::uint32_t> df;
  for (const auto& doc : docs) {
    std::unordered_map<std::string_view, bool> seen;
    for (const auto& token : doc) {
      if (!seen.emplace(token, true).second) continue;
      auto [it, inserted] = df.emplace(token, 0);
      if (inserted) order.push_back(token);
      ++it->second;
    }
  }

  std::vector<std::string> terms;
  std::vector<std::uint32_t> counts;
  for (auto& term : order) {
    const auto count = df.at(term);
    if (count >= min_df) {
      terms.push_back(std::move(term));
      counts.push_back(count);
    }
  }
  return Vocabulary(std::move(terms), std::move(counts), static_cast<std::uint32_t>(docs.size()));
}

TokenList expand_ngrams(const TokenList& tokens, std::size_t max_order) {
  if (max_order <= 1) return tokens;
  TokenList out = tokens;
  for (std::size_t order = 2; order <= max_order; ++order) {
    for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
      std::string gram = tokens[i];
      for (std::size_t k = 1; k < order; ++k) {
        gram += ' ';
        gram += tokens[i + k];
      }
      out.push_back(std::move(gram));
    }
  }
  return out;
}

SparseBlock tfidf(const TokenList& doc, const Vocabulary& vocab) {
  std::unordered_map<std::uint32_t, std::uint32_t> tf;
  for (const auto& token : doc) {
    const auto idx = vocab.index(token);
    if (idx >= 0) ++tf[static_cast<std::uint32_t>(idx)];
  }
  SparseBlock block;
  block.reserve(tf.size());
  for (const auto& [idx, count] : tf) block.emplace_back(idx, count * vocab.idf(idx));
  // Index order fixes the summation order of the norm.
  std::sort(block.begin(), block.end());
  double norm2 = 0.0;
  for (const auto& entry : block) norm2 += entry.second * entry.second;
  if (norm2 > 0.0) {
    const double norm = std::sqrt(norm2);
    for (auto& entry : block) entry.second /= norm;
  }
  return block;
}

std::array<double, kSurfaceFeatureCount> SurfaceFeatures::to_array() const {
  return {static_cast<double>(url_count),   static_cast<double>(mention_count),
          static_cast<double>(char_count),  static_cast<double>(punct_count),
          static_cast<double>(word_count),  avg_word_len,
          capital_pct,                      static_cast<double>(abusive_count),
          emoji_score};
}

const std::array<std::string_view, kSurfaceFeatureCount>& SurfaceFeatures::names() {
  static const std::array<std::string_view, kSurfaceFeatureCount> n{
      "url_count", "mention_count", "char_count",    "punct_count", "word_count",
      "avg_word_len", "capital_pct", "abusive_count", "emoji_score"};
  return n;
}

SurfaceFeatures surface(std::string_view raw_text, const TokenList& tokens, const WordSet& abusive_lex,
                        double emoji_score) {
  SurfaceFeatures f;
  f.emoji_score = emoji_score;

  const auto s = unicode::decode(raw_text);
  f.char_count = s.size();
  std::size_t letters = 0;
  std::size_t upper = 0;
  for (std::size_t i = 0; i < s.size();) {
    if (matches_at(s, i, U"@USER")) {
      ++f.mention_count;
      i += 5;
      continue;
    }
    if (matches_at(s, i, U"URL")) {
      ++f.url_count;
      i += 3;
      continue;
    }
    if (unicode::is_letter(s[i])) {
      ++letters;
      if (unicode::is_upper(s[i])) ++upper;
    } else if (unicode::is_punct(s[i])) {
      ++f.punct_count;
    }
    ++i;
  }
  f.capital_pct = letters ? static_cast<double>(upper) / static_cast<double>(letters) : 0.0;

  std::size_t word_chars = 0;
  for (const auto& token : tokens) {
    if (is_alphabetic_token(token) && token != "URL") {
      ++f.word_count;
      word_chars += unicode::scalar_count(token);
    }
    if (abusive_lex.contains(unicode::to_lower(token))) ++f.abusive_count;
  }
  f.avg_word_len = f.word_count ? static_cast<double>(word_chars) / static_cast<double>(f.word_count) : 0.0;
  return f;
}

FeatureVector::FeatureVector(SparseBlock sparse, std::array<double, kSurfaceFeatureCount> dense,
                             std::size_t vocab_size)
    : sparse_(std::move(sparse)), dense_(dense), vocab_size_(vocab_size) {}

double FeatureVector::operator[](std::size_t index) const {
  if (index >= vocab_size_) {
    const std::size_t k = index - vocab_size_;
    if (k >= kSurfaceFeatureCount) throw ContractError("feature index out of range");
    return dense_[k];
  }
  const auto it = std::lower_bound(sparse_.begin(), sparse_.end(), index,
                                   [](const auto& entry, std::size_t i) { return entry.first < i; });
  return (it != sparse_.end() && it->first == index) ? it->second : 0.0;
}

FeatureVector assemble(SparseBlock sparse, std::span<const double> dense, std::size_t vocab_size) {
  if (dense.size() != kSurfaceFeatureCount) {
    throw ContractError("dense block must have " + std::to_string(kSurfaceFeatureCount) + " values, got " +
                        std::to_string(dense.size()));
  }
  for (std::size_t i = 0; i < sparse.size(); ++i) {
    if (i > 0 && sparse[i].first <= sparse[i - 1].first) {
      throw ContractError("sparse indices must be strictly increasing");
    }
    if (sparse[i].first >= vocab_size) throw ContractError("sparse index beyond vocabulary size");
    if (!std::isfinite(sparse[i].second)) throw ContractError("non-finite sparse value");
  }
  std::array<double, kSurfaceFeatureCount> block{};
  std::copy(dense.begin(), dense.end(), block.begin());
  return FeatureVector(std::move(sparse), block, vocab_size);
}

std::string serialize(const FeatureVector& v) {
  detail::ByteWriter w;
  w.u64(v.vocab_size());
  w.u64(v.sparse().size());
  for (const auto& [i, value] : v.sparse()) {
    w.u32(i);
    w.f64(value);
  }
  for (double d : v.dense()) w.f64(d);
  return w.take();
}

FeatureVector deserialize_feature_vector(std::string_view bytes) {
  detail::ByteReader<FeatureVectorTruncated> r(bytes);
  const auto vocab_size = r.u64();
  const auto nnz = r.u64();
  if (nnz > r.remaining() / 12) throw FeatureVectorTruncated();
  SparseBlock sparse;
  sparse.reserve(nnz);
  for (std::uint64_t k = 0; k < nnz; ++k) {
    const auto i = r.u32();
    sparse.emplace_back(i, r.f64());
  }
  std::array<double, kSurfaceFeatureCount> dense{};
  for (auto& d : dense) d = r.f64();
  return assemble(std::move(sparse), dense, vocab_size);
}

Featurizer::Featurizer(Preprocessor prep, WordSet abusive_lex, FeatureParams params)
    : prep_(std::move(prep)), abusive_(std::move(abusive_lex)), params_(params) {}

void Featurizer::fit(std::span<const std::string> texts) {
  std::vector<TokenList> docs;
  docs.reserve(texts.size());
  for (const auto& text : texts) docs.push_back(expand_ngrams(prep_(text).tokens, params_.ngram_max));
  vocab_ = fit_vocabulary(docs, params_.min_df);
}

FeatureVector Featurizer::transform(std::string_view text) const {
  const auto tweet = prep_(text);
  auto sparse = tfidf(expand_ngrams(tweet.tokens, params_.ngram_max), vocab_);
  const auto dense = surface(tweet.raw_text, tweet.base_tokens, abusive_, tweet.emoji_score).to_array();
  return FeatureVector(std::move(sparse), dense, vocab_.size());
}

std::vector<FeatureVector> Featurizer::transform_all(std::span<const std::string> texts) const {
  std::vector<FeatureVector> out;
  out.reserve(texts.size());
  for (const auto& text : texts) out.push_back(transform(text));
  return out;
}

}  // namespace offlang
