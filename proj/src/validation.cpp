#include "offlang/validation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "offlang/metrics.hpp"

namespace offlang {
namespace {

void shuffle(std::vector<std::uint32_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

}  // namespace

std::vector<Fold> kfold(std::size_t n, std::size_t k, std::span<const std::uint32_t> y, std::uint64_t seed,
                        bool stratified) {
  if (k < 2) throw ContractError("k must be at least 2");
  if (k > n) throw ContractError("k=" + std::to_string(k) + " exceeds the number of samples (" + std::to_string(n) + ")");
  if (stratified && y.size() != n) throw ContractError("stratified folds need one label per sample");

  Rng rng(seed);
  // Groups are dealt one after another with a running offset, so the overall
  // fold sizes stay within one of each other too.
  std::vector<std::vector<std::uint32_t>> groups;
  if (stratified) {
    std::map<std::uint32_t, std::vector<std::uint32_t>> by_class;
    for (std::uint32_t i = 0; i < n; ++i) by_class[y[i]].push_back(i);
    for (auto& [cls, rows] : by_class) groups.push_back(std::move(rows));
  } else {
    groups.emplace_back(n);
    for (std::uint32_t i = 0; i < n; ++i) groups[0][i] = i;
  }

  std::vector<Fold> folds(k);
  std::size_t offset = 0;
  for (auto& rows : groups) {
    shuffle(rows, rng);
    for (auto r : rows) folds[offset++ % k].test.push_back(r);
  }
  for (auto& fold : folds) {
    std::sort(fold.test.begin(), fold.test.end());
    std::vector<bool> held(n, false);
    for (auto r : fold.test) held[r] = true;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (!held[i]) fold.train.push_back(i);
    }
  }
  return folds;
}

CVResult cross_validate(const TrainingData& data, const ForestParams& params, std::size_t k, std::uint64_t seed,
                        std::size_t threads) {
  params.validate();
  const auto folds = kfold(data.size(), k, data.y, seed, true);
  CVResult result;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    ForestParams fold_params = params;
    fold_params.seed = derive_seed(params.seed, f);
    const auto forest = train_forest(data, fold_params, threads, folds[f].train);
    std::vector<std::uint32_t> truth, pred;
    for (auto r : folds[f].test) {
      truth.push_back(data.y[r]);
      pred.push_back(forest.predict_index(data.X, r));
    }
    result.folds.push_back(macro_f1(truth, pred, data.classes.size()));
  }
  double sum = 0.0;
  for (auto s : result.folds) sum += s;
  result.mean = sum / static_cast<double>(result.folds.size());
  double var = 0.0;
  for (auto s : result.folds) var += (s - result.mean) * (s - result.mean);
  result.std = std::sqrt(var / static_cast<double>(result.folds.size()));
  return result;
}

GridResult grid_search(std::span<const ForestParams> grid, const TrainingData& data, std::size_t k,
                       std::uint64_t seed, std::size_t threads) {
  if (grid.empty()) throw ContractError("grid search needs at least one grid point");
  GridResult out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.results.push_back(cross_validate(data, grid[i], k, seed, threads));
    if (out.results[i].mean > out.results[out.best].mean) out.best = i;
  }
  return out;
}

std::vector<ForestParams> default_grid(std::uint64_t seed) {
  std::vector<ForestParams> grid;
  for (std::uint32_t trees : {100u, 300u}) {
    for (std::optional<std::uint32_t> depth : {std::optional<std::uint32_t>{}, std::optional<std::uint32_t>{16}}) {
      for (std::uint32_t leaf : {1u, 3u}) {
        ForestParams p;
        p.n_trees = trees;
        p.max_depth = depth;
        p.min_samples_leaf = leaf;
        p.seed = seed;
        grid.push_back(p);
      }
    }
  }
  return grid;
}

}  // namespace offlang
