#include "offlang/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>
#include <unordered_map>

#include "binary_io.hpp"
#include "offlang/corpus.hpp"
#include "text_io.hpp"

namespace offlang {
namespace {

using Wide = __int128;

// Split quality as the exact ratio num/den of
//   sum_children (sum_k c_k^2) / n_child,
// which is larger exactly when the weighted child Gini impurity is smaller.
struct Candidate {
  bool valid = false;
  std::uint32_t feature = 0;
  double threshold = 0.0;
  Wide num = 0;
  Wide den = 1;
};

bool better(const Candidate& c, const Candidate& best) {
  if (!best.valid) return true;
  const Wide lhs = c.num * best.den;
  const Wide rhs = best.num * c.den;
  if (lhs != rhs) return lhs > rhs;
  if (c.feature != best.feature) return c.feature < best.feature;
  return c.threshold < best.threshold;
}

double midpoint_threshold(double a, double b) {
  const double t = std::midpoint(a, b);
  return t < b ? t : a;
}

class TreeBuilder {
 public:
  TreeBuilder(const SampleMatrix& X, std::span<const std::uint32_t> y, std::size_t n_classes,
              std::span<const std::uint32_t> weights, const ForestParams& params, Rng& rng)
      : X_(X), y_(y), n_classes_(n_classes), weights_(weights), params_(params), rng_(rng),
        mark_(X.rows(), 0), mtry_(params.max_features.resolve(X.features())) {}

  DecisionTree build() {
    std::vector<std::uint32_t> root_rows;
    for (std::uint32_t r = 0; r < weights_.size(); ++r) {
      if (weights_[r] > 0) root_rows.push_back(r);
    }
    if (root_rows.empty()) throw ContractError("cannot train a tree on zero samples");

    struct Item {
      std::vector<std::uint32_t> rows;
      std::uint32_t depth;
      std::int64_t parent;
      bool is_left;
    };
    std::vector<Item> stack;
    stack.push_back({std::move(root_rows), 0, -1, false});

    std::vector<std::int64_t> counts(n_classes_);
    while (!stack.empty()) {
      Item item = std::move(stack.back());
      stack.pop_back();

      const auto index = static_cast<std::uint32_t>(nodes_.size());
      nodes_.emplace_back();
      if (item.parent >= 0) {
        auto& parent = nodes_[static_cast<std::size_t>(item.parent)];
        (item.is_left ? parent.left : parent.right) = index;
      }

      std::fill(counts.begin(), counts.end(), 0);
      std::int64_t total = 0;
      for (auto r : item.rows) {
        counts[y_[r]] += weights_[r];
        total += weights_[r];
      }
      const auto nonzero_classes = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; });
      const bool depth_exhausted = params_.max_depth && item.depth >= *params_.max_depth;
      const bool too_small = total < 2 * static_cast<std::int64_t>(params_.min_samples_leaf);

      Candidate best;
      if (nonzero_classes > 1 && !depth_exhausted && !too_small) best = find_split(item.rows, counts, total);

      if (!best.valid) {
        make_leaf(index, counts);
        continue;
      }

      nodes_[index].feature = static_cast<std::int32_t>(best.feature);
      nodes_[index].threshold = best.threshold;
      std::vector<std::uint32_t> left, right;
      for (auto r : item.rows) (X_.value(r, best.feature) <= best.threshold ? left : right).push_back(r);
      stack.push_back({std::move(right), item.depth + 1, index, false});
      stack.push_back({std::move(left), item.depth + 1, index, true});
    }
    return DecisionTree(std::move(nodes_), std::move(leaf_counts_), n_classes_);
  }

 private:
  struct Entry {
    double value;
    std::uint32_t cls;
    std::uint32_t weight;
  };

  void make_leaf(std::uint32_t index, const std::vector<std::int64_t>& counts) {
    nodes_[index].feature = -1;
    nodes_[index].leaf = static_cast<std::uint32_t>(leaf_counts_.size() / n_classes_);
    for (auto c : counts) leaf_counts_.push_back(static_cast<std::uint32_t>(c));
  }

  Candidate find_split(const std::vector<std::uint32_t>& rows, const std::vector<std::int64_t>& counts,
                       std::int64_t total) {
    ++stamp_;
    for (auto r : rows) mark_[r] = stamp_;

    Candidate best;
    const std::size_t n_features = X_.features();
    if (params_.max_features.kind == MaxFeatures::Kind::all || mtry_ >= n_features) {
      for (std::uint32_t f = 0; f < n_features; ++f) evaluate(f, rows, counts, total, best);
      return best;
    }

    // Lazy Fisher-Yates over feature indices; constant features do not count
    // towards the mtry budget.
    std::unordered_map<std::uint32_t, std::uint32_t> swapped;
    auto at = [&](std::uint32_t i) {
      const auto it = swapped.find(i);
      return it == swapped.end() ? i : it->second;
    };
    std::size_t informative = 0;
    for (std::uint32_t k = 0; k < n_features && informative < mtry_; ++k) {
      const auto j = static_cast<std::uint32_t>(k + rng_.below(n_features - k));
      const std::uint32_t f = at(j);
      swapped[j] = at(k);
      if (evaluate(f, rows, counts, total, best)) ++informative;
    }
    return best;
  }

  // Scans every threshold of feature f; false when f is constant in the node.
  bool evaluate(std::uint32_t f, const std::vector<std::uint32_t>& rows, const std::vector<std::int64_t>& counts,
                std::int64_t total, Candidate& best) {
    entries_.clear();
    nonzero_.assign(n_classes_, 0);
    const auto column = X_.column(f);
    if (column.size() <= rows.size() * 4) {
      for (const auto& e : column) {
        if (mark_[e.row] != stamp_) continue;
        entries_.push_back({e.value, y_[e.row], weights_[e.row]});
        nonzero_[y_[e.row]] += weights_[e.row];
      }
    } else {
      for (auto r : rows) {
        const double v = X_.value(r, f);
        if (v == 0.0) continue;
        entries_.push_back({v, y_[r], weights_[r]});
        nonzero_[y_[r]] += weights_[r];
      }
    }
    for (std::uint32_t c = 0; c < n_classes_; ++c) {
      const auto zeros = counts[c] - nonzero_[c];
      if (zeros > 0) entries_.push_back({0.0, c, static_cast<std::uint32_t>(zeros)});
    }
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
      return a.value < b.value || (a.value == b.value && a.cls < b.cls);
    });
    if (entries_.front().value == entries_.back().value) return false;

    const auto min_leaf = static_cast<std::int64_t>(params_.min_samples_leaf);
    left_.assign(n_classes_, 0);
    right_.assign(counts.begin(), counts.end());
    std::int64_t n_left = 0;
    std::int64_t n_right = total;
    std::int64_t sq_left = 0;
    std::int64_t sq_right = 0;
    for (auto c : counts) sq_right += c * c;

    for (std::size_t i = 0; i + 1 < entries_.size(); ++i) {
      const auto& e = entries_[i];
      const std::int64_t w = e.weight;
      sq_left += 2 * left_[e.cls] * w + w * w;
      sq_right += -2 * right_[e.cls] * w + w * w;
      left_[e.cls] += w;
      right_[e.cls] -= w;
      n_left += w;
      n_right -= w;
      if (n_right < min_leaf) break;
      if (entries_[i + 1].value == e.value || n_left < min_leaf) continue;

      Candidate c;
      c.valid = true;
      c.feature = f;
      c.threshold = midpoint_threshold(e.value, entries_[i + 1].value);
      c.num = static_cast<Wide>(sq_left) * n_right + static_cast<Wide>(sq_right) * n_left;
      c.den = static_cast<Wide>(n_left) * n_right;
      if (better(c, best)) best = c;
    }
    return true;
  }

  const SampleMatrix& X_;
  std::span<const std::uint32_t> y_;
  std::size_t n_classes_;
  std::span<const std::uint32_t> weights_;
  const ForestParams& params_;
  Rng& rng_;

  std::vector<std::uint32_t> mark_;
  std::uint32_t stamp_ = 0;
  std::size_t mtry_;
  std::vector<Entry> entries_;
  std::vector<std::int64_t> nonzero_, left_, right_;
  std::vector<TreeNode> nodes_;
  std::vector<std::uint32_t> leaf_counts_;
};

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

struct ModelTruncated : ModelFormatError {
  ModelTruncated() : ModelFormatError(Code::truncated, "model file is truncated") {}
};

constexpr std::string_view kModelMagic = "OLRF";

}  // namespace

std::size_t MaxFeatures::resolve(std::size_t n_features) const {
  if (n_features == 0) return 0;
  std::size_t k = n_features;
  switch (kind) {
    case Kind::all: k = n_features; break;
    case Kind::sqrt: k = static_cast<std::size_t>(std::sqrt(static_cast<double>(n_features))); break;
    case Kind::fraction: k = static_cast<std::size_t>(fraction * static_cast<double>(n_features)); break;
  }
  return std::clamp<std::size_t>(k, 1, n_features);
}

std::string MaxFeatures::to_string() const {
  switch (kind) {
    case Kind::sqrt: return "sqrt";
    case Kind::all: return "all";
    case Kind::fraction: break;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", fraction);
  return buf;
}

MaxFeatures MaxFeatures::parse(std::string_view text) {
  if (text == "sqrt") return sqrt();
  if (text == "all") return all();
  double f = 0.0;
  if (!detail::parse_double(text, f) || !(f > 0.0 && f <= 1.0)) {
    throw ValidationError("max_features must be sqrt, all, or a fraction in (0,1], got '" + std::string(text) + "'");
  }
  return of(f);
}

void ForestParams::validate() const {
  if (n_trees < 1) throw ValidationError("n_trees must be at least 1");
  if (min_samples_leaf < 1) throw ValidationError("min_samples_leaf must be at least 1");
  if (max_features.kind == MaxFeatures::Kind::fraction && !(max_features.fraction > 0.0 && max_features.fraction <= 1.0)) {
    throw ValidationError("max_features fraction must lie in (0,1]");
  }
}

std::string ForestParams::describe() const {
  return "n_trees=" + std::to_string(n_trees) +
         " max_depth=" + (max_depth ? std::to_string(*max_depth) : std::string("none")) +
         " min_samples_leaf=" + std::to_string(min_samples_leaf) + " max_features=" + max_features.to_string() +
         " bootstrap=" + (bootstrap ? "true" : "false");
}

double gini(std::span<const std::uint64_t> counts) {
  std::uint64_t n = 0;
  for (auto c : counts) n += c;
  if (n == 0) throw ContractError("gini of an empty node");
  double sum = 0.0;
  for (auto c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(n);
    sum += p * p;
  }
  return 1.0 - sum;
}

SampleMatrix::SampleMatrix(std::span<const FeatureVector> rows) {
  if (rows.empty()) return;
  n_features_ = rows.front().dimension();
  row_start_.reserve(rows.size() + 1);
  row_start_.push_back(0);
  std::vector<std::size_t> col_count(n_features_ + 1, 0);
  for (const auto& v : rows) {
    if (v.dimension() != n_features_) throw ContractError("feature vectors differ in dimension");
    v.for_each_nonzero([&](std::size_t i, double value) {
      row_index_.push_back(static_cast<std::uint32_t>(i));
      row_value_.push_back(value);
      ++col_count[i + 1];
    });
    row_start_.push_back(row_index_.size());
  }
  col_start_.assign(n_features_ + 1, 0);
  std::partial_sum(col_count.begin(), col_count.end(), col_start_.begin());
  col_entries_.resize(row_index_.size());
  std::vector<std::size_t> cursor(col_start_.begin(), col_start_.end() - 1);
  for (std::size_t r = 0; r + 1 < row_start_.size(); ++r) {
    for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
      col_entries_[cursor[row_index_[k]]++] = {static_cast<std::uint32_t>(r), row_value_[k]};
    }
  }
}

double SampleMatrix::value(std::size_t row, std::size_t feature) const {
  const auto first = row_index_.begin() + static_cast<std::ptrdiff_t>(row_start_[row]);
  const auto last = row_index_.begin() + static_cast<std::ptrdiff_t>(row_start_[row + 1]);
  const auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(feature));
  if (it == last || *it != feature) return 0.0;
  return row_value_[static_cast<std::size_t>(it - row_index_.begin())];
}

std::vector<std::string> infer_classes(std::span<const std::string> y) {
  std::set<std::string> unique(y.begin(), y.end());
  std::optional<Level> shared;
  bool one_level = !unique.empty();
  for (const auto& label : unique) {
    const auto level = level_of(label);
    if (!level || (shared && *shared != *level)) {
      one_level = false;
      break;
    }
    shared = level;
  }
  if (one_level) return level_classes(*shared);
  return {unique.begin(), unique.end()};
}

TrainingData make_training_data(std::span<const FeatureVector> X, std::span<const std::string> y,
                                std::vector<std::string> classes) {
  if (X.size() != y.size()) {
    throw ContractError("X has " + std::to_string(X.size()) + " rows but y has " + std::to_string(y.size()));
  }
  if (X.empty()) throw ContractError("training data is empty");
  TrainingData data;
  data.classes = classes.empty() ? infer_classes(y) : std::move(classes);
  data.X = SampleMatrix(X);
  data.y.reserve(y.size());
  for (const auto& label : y) {
    const auto it = std::find(data.classes.begin(), data.classes.end(), label);
    if (it == data.classes.end()) throw ContractError("label '" + label + "' not in class list");
    data.y.push_back(static_cast<std::uint32_t>(it - data.classes.begin()));
  }
  return data;
}

DecisionTree::DecisionTree(std::vector<TreeNode> nodes, std::vector<std::uint32_t> leaf_counts, std::size_t n_classes)
    : nodes_(std::move(nodes)), leaf_counts_(std::move(leaf_counts)), n_classes_(n_classes) {
  if (n_classes_ == 0 || nodes_.empty()) throw ContractError("tree needs nodes and classes");
  if (leaf_counts_.size() % n_classes_ != 0) throw ContractError("leaf counts not a multiple of class count");
}

std::span<const std::uint32_t> DecisionTree::leaf_for(const FeatureVector& x) const {
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const auto& n = nodes_[i];
    i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return {leaf_counts_.data() + nodes_[i].leaf * n_classes_, n_classes_};
}

std::span<const std::uint32_t> DecisionTree::leaf_for(const SampleMatrix& X, std::size_t row) const {
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const auto& n = nodes_[i];
    i = X.value(row, static_cast<std::size_t>(n.feature)) <= n.threshold ? n.left : n.right;
  }
  return {leaf_counts_.data() + nodes_[i].leaf * n_classes_, n_classes_};
}

std::vector<SplitRecord> DecisionTree::split_sequence() const {
  std::vector<SplitRecord> out;
  for (const auto& n : nodes_) {
    if (!n.is_leaf()) out.push_back({static_cast<std::uint32_t>(n.feature), n.threshold});
  }
  return out;
}

std::size_t DecisionTree::depth() const {
  std::size_t deepest = 0;
  std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [i, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (!nodes_[i].is_leaf()) {
      stack.emplace_back(nodes_[i].left, d + 1);
      stack.emplace_back(nodes_[i].right, d + 1);
    }
  }
  return deepest;
}

DecisionTree train_tree(const SampleMatrix& X, std::span<const std::uint32_t> y, std::size_t n_classes,
                        std::span<const std::uint32_t> weights, const ForestParams& params, Rng& rng) {
  params.validate();
  if (X.rows() == 0 || y.size() != X.rows() || weights.size() != X.rows()) {
    throw ContractError("train_tree needs equal, non-zero numbers of rows, labels and weights");
  }
  for (auto label : y) {
    if (label >= n_classes) throw ContractError("class index out of range");
  }
  return TreeBuilder(X, y, n_classes, weights, params, rng).build();
}

DecisionTree train_tree(const TrainingData& data, const ForestParams& params, Rng& rng) {
  const std::vector<std::uint32_t> ones(data.size(), 1);
  return train_tree(data.X, data.y, data.classes.size(), ones, params, rng);
}

std::vector<std::uint32_t> bootstrap_weights(std::size_t n_rows, std::span<const std::uint32_t> rows, Rng& rng) {
  std::vector<std::uint32_t> weights(n_rows, 0);
  if (rows.empty()) {
    for (std::size_t i = 0; i < n_rows; ++i) ++weights[rng.below(n_rows)];
  } else {
    for (std::size_t i = 0; i < rows.size(); ++i) ++weights[rows[rng.below(rows.size())]];
  }
  return weights;
}

RandomForest::RandomForest(std::vector<DecisionTree> trees, ForestParams params, std::vector<std::string> classes,
                           std::size_t n_features)
    : trees_(std::move(trees)), params_(params), classes_(std::move(classes)), n_features_(n_features) {
  if (trees_.empty()) throw ContractError("forest without trees");
  for (const auto& t : trees_) {
    if (t.n_classes() != classes_.size()) throw ContractError("tree class count differs from forest classes");
  }
}

namespace {

template <typename LeafFn>
std::vector<double> average_leaves(const std::vector<DecisionTree>& trees, std::size_t n_classes, LeafFn&& leaf) {
  std::vector<double> proba(n_classes, 0.0);
  for (const auto& tree : trees) {
    const auto counts = leaf(tree);
    double total = 0.0;
    for (auto c : counts) total += c;
    for (std::size_t k = 0; k < n_classes; ++k) proba[k] += counts[k] / total;
  }
  for (auto& p : proba) p /= static_cast<double>(trees.size());
  return proba;
}

}  // namespace

std::vector<double> RandomForest::predict_proba(const FeatureVector& x) const {
  if (x.dimension() != n_features_) {
    throw ContractError("feature vector has dimension " + std::to_string(x.dimension()) + ", model expects " +
                        std::to_string(n_features_));
  }
  return average_leaves(trees_, classes_.size(), [&](const DecisionTree& t) { return t.leaf_for(x); });
}

std::vector<double> RandomForest::predict_proba(const SampleMatrix& X, std::size_t row) const {
  if (X.features() != n_features_) throw ContractError("sample matrix dimension does not match model");
  return average_leaves(trees_, classes_.size(), [&](const DecisionTree& t) { return t.leaf_for(X, row); });
}

std::uint32_t argmax_lowest(std::span<const double> proba) {
  std::uint32_t best = 0;
  for (std::uint32_t k = 1; k < proba.size(); ++k) {
    if (proba[k] > proba[best]) best = k;
  }
  return best;
}

std::uint32_t RandomForest::predict_index(const FeatureVector& x) const { return argmax_lowest(predict_proba(x)); }

std::uint32_t RandomForest::predict_index(const SampleMatrix& X, std::size_t row) const {
  return argmax_lowest(predict_proba(X, row));
}

RandomForest train_forest(const TrainingData& data, const ForestParams& params, std::size_t threads,
                          std::span<const std::uint32_t> rows) {
  params.validate();
  if (data.size() == 0) throw ContractError("training data is empty");
  if (data.X.rows() != data.size()) throw ContractError("feature rows and labels differ in count");

  std::vector<DecisionTree> trees(params.n_trees);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= trees.size()) return;
      try {
        Rng rng(derive_seed(params.seed, t));
        std::vector<std::uint32_t> weights;
        if (params.bootstrap) {
          weights = bootstrap_weights(data.size(), rows, rng);
        } else if (rows.empty()) {
          weights.assign(data.size(), 1);
        } else {
          weights.assign(data.size(), 0);
          for (auto r : rows) weights[r] = 1;
        }
        trees[t] = train_tree(data.X, data.y, data.classes.size(), weights, params, rng);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = trees.size();
      }
    }
  };

  const std::size_t n_threads = std::clamp<std::size_t>(threads, 1, trees.size());
  if (n_threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return RandomForest(std::move(trees), params, data.classes, data.X.features());
}

RandomForest train_forest(std::span<const FeatureVector> X, std::span<const std::string> y,
                          const ForestParams& params, std::size_t threads) {
  return train_forest(make_training_data(X, y), params, threads);
}

std::string save_model(const RandomForest& model) {
  detail::ByteWriter body;
  body.u64(model.n_features());
  body.u32(static_cast<std::uint32_t>(model.classes().size()));
  for (const auto& c : model.classes()) body.str(c);

  const auto& p = model.params();
  body.u32(p.n_trees);
  body.u8(p.max_depth ? 1 : 0);
  body.u32(p.max_depth.value_or(0));
  body.u32(p.min_samples_leaf);
  body.u8(static_cast<std::uint8_t>(p.max_features.kind));
  body.f64(p.max_features.fraction);
  body.u64(p.seed);
  body.u8(p.bootstrap ? 1 : 0);

  body.u32(static_cast<std::uint32_t>(model.trees().size()));
  for (const auto& tree : model.trees()) {
    body.u32(static_cast<std::uint32_t>(tree.nodes().size()));
    for (const auto& n : tree.nodes()) {
      body.u32(static_cast<std::uint32_t>(n.feature));
      body.f64(n.threshold);
      body.u32(n.left);
      body.u32(n.right);
      body.u32(n.leaf);
    }
    body.u32(static_cast<std::uint32_t>(tree.leaf_counts().size()));
    for (auto c : tree.leaf_counts()) body.u32(c);
  }

  detail::ByteWriter out;
  out.raw(kModelMagic);
  out.u32(kModelFormatVersion);
  out.raw(body.bytes());
  out.u64(fnv1a(body.bytes()));
  return out.take();
}

RandomForest load_model(std::string_view bytes) {
  using Code = ModelFormatError::Code;
  if (bytes.size() < 8) {
    if (bytes.substr(0, std::min(bytes.size(), kModelMagic.size())) != kModelMagic.substr(0, std::min(bytes.size(), kModelMagic.size()))) {
      throw ModelFormatError(Code::version, "not a model file (bad magic)");
    }
    throw ModelTruncated();
  }
  if (bytes.substr(0, 4) != kModelMagic) throw ModelFormatError(Code::version, "not a model file (bad magic)");
  detail::ByteReader<ModelTruncated> header(bytes.substr(4, 4));
  const auto version = header.u32();
  if (version != kModelFormatVersion) {
    throw ModelFormatError(Code::version, "model format version " + std::to_string(version) + " not supported (expected " +
                                              std::to_string(kModelFormatVersion) + ")");
  }

  const std::string_view rest = bytes.substr(8);
  detail::ByteReader<ModelTruncated> r(rest);
  const auto n_features = r.u64();
  const auto n_classes = r.u32();
  if (n_classes == 0) throw ModelFormatError(Code::corrupt, "model has no classes");
  std::vector<std::string> classes;
  for (std::uint32_t i = 0; i < n_classes; ++i) classes.push_back(r.str());

  ForestParams p;
  p.n_trees = r.u32();
  const bool has_depth = r.u8() != 0;
  const auto depth = r.u32();
  if (has_depth) p.max_depth = depth;
  p.min_samples_leaf = r.u32();
  const auto kind = r.u8();
  if (kind > 2) throw ModelFormatError(Code::corrupt, "unknown max_features kind");
  p.max_features.kind = static_cast<MaxFeatures::Kind>(kind);
  p.max_features.fraction = r.f64();
  p.seed = r.u64();
  p.bootstrap = r.u8() != 0;

  const auto n_trees = r.u32();
  if (n_trees != p.n_trees || n_trees == 0) throw ModelFormatError(Code::corrupt, "tree count mismatch");
  std::vector<DecisionTree> trees;
  trees.reserve(n_trees);
  for (std::uint32_t t = 0; t < n_trees; ++t) {
    const auto n_nodes = r.u32();
    if (n_nodes == 0 || n_nodes > r.remaining() / 24) throw ModelTruncated();
    std::vector<TreeNode> nodes(n_nodes);
    for (auto& n : nodes) {
      n.feature = static_cast<std::int32_t>(r.u32());
      n.threshold = r.f64();
      n.left = r.u32();
      n.right = r.u32();
      n.leaf = r.u32();
    }
    const auto n_counts = r.u32();
    if (n_counts > r.remaining() / 4) throw ModelTruncated();
    std::vector<std::uint32_t> counts(n_counts);
    for (auto& c : counts) c = r.u32();
    if (n_counts % n_classes != 0) throw ModelFormatError(Code::corrupt, "leaf table size mismatch");
    const std::size_t n_leaves = n_counts / n_classes;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& n = nodes[i];
      if (n.is_leaf()) {
        if (n.leaf >= n_leaves) throw ModelFormatError(Code::corrupt, "leaf slot out of range");
        std::uint64_t sum = 0;
        for (std::size_t k = 0; k < n_classes; ++k) sum += counts[n.leaf * n_classes + k];
        if (sum == 0) throw ModelFormatError(Code::corrupt, "empty leaf");
      } else if (static_cast<std::uint64_t>(n.feature) >= n_features || n.left <= i || n.right <= i ||
                 n.left >= n_nodes || n.right >= n_nodes || !std::isfinite(n.threshold)) {
        throw ModelFormatError(Code::corrupt, "malformed tree node");
      }
    }
    trees.emplace_back(std::move(nodes), std::move(counts), n_classes);
  }
  const std::size_t body_size = rest.size() - r.remaining();
  const auto checksum = r.u64();
  if (r.remaining() != 0) throw ModelFormatError(Code::corrupt, "trailing bytes after model");
  if (checksum != fnv1a(rest.substr(0, body_size))) throw ModelFormatError(Code::corrupt, "model checksum mismatch");
  return RandomForest(std::move(trees), p, std::move(classes), n_features);
}

}  // namespace offlang
