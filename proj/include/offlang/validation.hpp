#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "offlang/forest.hpp"

namespace offlang {

struct Fold {
  std::vector<std::uint32_t> train;
  std::vector<std::uint32_t> test;
};

// k folds over 0..n-1. Test sets partition the indices and differ in size by at
// most one. When stratified, each class is shuffled and dealt round-robin so
// per-class fold counts also differ by at most one. `y` may be empty when not
// stratified. Throws ContractError unless 2 <= k <= n.
std::vector<Fold> kfold(std::size_t n, std::size_t k, std::span<const std::uint32_t> y, std::uint64_t seed,
                        bool stratified = true);

struct CVResult {
  std::vector<double> folds;  // macro-F1 per fold
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

// Fold f trains a forest with seed derive_seed(params.seed, f) on the fold
// complement and scores macro-F1 over data.classes on the held-out rows.
CVResult cross_validate(const TrainingData& data, const ForestParams& params, std::size_t k, std::uint64_t seed,
                        std::size_t threads = 1);

struct GridResult {
  std::size_t best = 0;
  std::vector<CVResult> results;  // one per grid point
};

// Highest mean macro-F1 wins; ties go to the earliest grid point. Throws
// ContractError on an empty grid.
GridResult grid_search(std::span<const ForestParams> grid, const TrainingData& data, std::size_t k,
                       std::uint64_t seed, std::size_t threads = 1);

// n_trees {100, 300} x max_depth {none, 16} x min_samples_leaf {1, 3}.
std::vector<ForestParams> default_grid(std::uint64_t seed = 0);

}  // namespace offlang
