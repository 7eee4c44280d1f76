#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "offlang/error.hpp"
#include "offlang/features.hpp"
#include "offlang/random.hpp"

namespace offlang {

// Number of candidate features examined at each node.
struct MaxFeatures {
  enum class Kind : std::uint8_t { sqrt, all, fraction };

  Kind kind = Kind::sqrt;
  double fraction = 1.0;

  static MaxFeatures sqrt() { return {Kind::sqrt, 1.0}; }
  static MaxFeatures all() { return {Kind::all, 1.0}; }
  static MaxFeatures of(double f) { return {Kind::fraction, f}; }

  // At least one, at most n_features.
  std::size_t resolve(std::size_t n_features) const;

  std::string to_string() const;
  static MaxFeatures parse(std::string_view text);

  bool operator==(const MaxFeatures&) const = default;
};

struct ForestParams {
  std::uint32_t n_trees = 100;
  std::optional<std::uint32_t> max_depth;
  std::uint32_t min_samples_leaf = 1;
  MaxFeatures max_features = MaxFeatures::sqrt();
  std::uint64_t seed = 0;
  bool bootstrap = true;

  // Throws ValidationError on broken invariants.
  void validate() const;
  std::string describe() const;

  bool operator==(const ForestParams&) const = default;
};

// Gini impurity 1 - sum (c_i/n)^2. Throws ContractError when all counts are 0.
double gini(std::span<const std::uint64_t> counts);

// Row-major and column-major views of a set of feature vectors. Absent sparse
// entries read as 0.0.
class SampleMatrix {
 public:
  struct Entry {
    std::uint32_t row;
    double value;
  };

  SampleMatrix() = default;
  explicit SampleMatrix(std::span<const FeatureVector> rows);

  std::size_t rows() const noexcept { return row_start_.empty() ? 0 : row_start_.size() - 1; }
  std::size_t features() const noexcept { return n_features_; }

  double value(std::size_t row, std::size_t feature) const;
  std::span<const Entry> column(std::size_t feature) const {
    return {col_entries_.data() + col_start_[feature], col_start_[feature + 1] - col_start_[feature]};
  }

 private:
  std::size_t n_features_ = 0;
  std::vector<std::size_t> row_start_;
  std::vector<std::uint32_t> row_index_;
  std::vector<double> row_value_;
  std::vector<std::size_t> col_start_;
  std::vector<Entry> col_entries_;
};

// Features plus class indices into `classes`.
struct TrainingData {
  SampleMatrix X;
  std::vector<std::uint32_t> y;
  std::vector<std::string> classes;

  std::size_t size() const noexcept { return y.size(); }
};

// Class list for a label vector: the OLID level order when every label belongs
// to one level, otherwise sorted unique labels.
std::vector<std::string> infer_classes(std::span<const std::string> y);

// Throws ContractError if sizes differ, X is empty, or a label is missing from
// `classes`. An empty `classes` means infer_classes(y).
TrainingData make_training_data(std::span<const FeatureVector> X, std::span<const std::string> y,
                                std::vector<std::string> classes = {});

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // go left when x[feature] <= threshold
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  std::uint32_t leaf = 0;  // leaf slot, valid when feature < 0

  bool is_leaf() const noexcept { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct SplitRecord {
  std::uint32_t feature;
  double threshold;
  bool operator==(const SplitRecord&) const = default;
};

// Nodes in preorder (root first, left subtree before right). Leaves hold
// per-class sample counts.
class DecisionTree {
 public:
  DecisionTree() = default;
  DecisionTree(std::vector<TreeNode> nodes, std::vector<std::uint32_t> leaf_counts, std::size_t n_classes);

  std::size_t n_classes() const noexcept { return n_classes_; }
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  const std::vector<std::uint32_t>& leaf_counts() const noexcept { return leaf_counts_; }
  std::size_t leaf_count() const noexcept { return n_classes_ ? leaf_counts_.size() / n_classes_ : 0; }

  // Class counts of the leaf reached by x.
  std::span<const std::uint32_t> leaf_for(const FeatureVector& x) const;
  std::span<const std::uint32_t> leaf_for(const SampleMatrix& X, std::size_t row) const;

  // Internal-node splits in preorder.
  std::vector<SplitRecord> split_sequence() const;
  std::size_t depth() const;

  bool operator==(const DecisionTree&) const = default;

 private:
  std::vector<TreeNode> nodes_;
  std::vector<std::uint32_t> leaf_counts_;
  std::size_t n_classes_ = 0;
};

// Grows one tree by greedy weighted-Gini splitting. `weights[i]` is how many
// times row i is in the sample (0 excludes it). Among equally good splits the
// lowest feature index, then the lowest threshold, wins.
DecisionTree train_tree(const SampleMatrix& X, std::span<const std::uint32_t> y, std::size_t n_classes,
                        std::span<const std::uint32_t> weights, const ForestParams& params, Rng& rng);

// Convenience overload: every row weighted once.
DecisionTree train_tree(const TrainingData& data, const ForestParams& params, Rng& rng);

// Draws rows.size() indices from `rows` with replacement; returns per-row
// multiplicities over the full matrix of `n_rows`.
std::vector<std::uint32_t> bootstrap_weights(std::size_t n_rows, std::span<const std::uint32_t> rows, Rng& rng);

class RandomForest {
 public:
  RandomForest() = default;
  RandomForest(std::vector<DecisionTree> trees, ForestParams params, std::vector<std::string> classes,
               std::size_t n_features);

  const std::vector<DecisionTree>& trees() const noexcept { return trees_; }
  const ForestParams& params() const noexcept { return params_; }
  const std::vector<std::string>& classes() const noexcept { return classes_; }
  std::size_t n_features() const noexcept { return n_features_; }

  // Mean of per-tree leaf class frequencies. Throws ContractError when x has
  // the wrong dimension.
  std::vector<double> predict_proba(const FeatureVector& x) const;
  std::vector<double> predict_proba(const SampleMatrix& X, std::size_t row) const;

  // Argmax of predict_proba; ties go to the lowest class index.
  std::uint32_t predict_index(const FeatureVector& x) const;
  std::uint32_t predict_index(const SampleMatrix& X, std::size_t row) const;
  const std::string& predict(const FeatureVector& x) const { return classes_[predict_index(x)]; }

  bool operator==(const RandomForest&) const = default;

 private:
  std::vector<DecisionTree> trees_;
  ForestParams params_;
  std::vector<std::string> classes_;
  std::size_t n_features_ = 0;
};

std::uint32_t argmax_lowest(std::span<const double> proba);

// Tree t is trained on a bootstrap sample drawn from Rng(derive_seed(seed, t)).
// `rows` restricts training to a subset (empty = all rows). Output does not
// depend on `threads`.
RandomForest train_forest(const TrainingData& data, const ForestParams& params, std::size_t threads = 1,
                          std::span<const std::uint32_t> rows = {});

RandomForest train_forest(std::span<const FeatureVector> X, std::span<const std::string> y,
                          const ForestParams& params, std::size_t threads = 1);

// Model file errors carry a code so callers can tell them apart.
class ModelFormatError : public ValidationError {
 public:
  enum class Code { version, truncated, corrupt };

  ModelFormatError(Code code, const std::string& what) : ValidationError(what), code_(code) {}
  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

inline constexpr std::uint32_t kModelFormatVersion = 1;

std::string save_model(const RandomForest& model);
RandomForest load_model(std::string_view bytes);

}  // namespace offlang
