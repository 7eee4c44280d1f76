#include <doctest.h>

#include <cmath>

#include "offlang/error.hpp"
#include "offlang/forest.hpp"
#include "support/tree_oracle.hpp"

using namespace offlang;

namespace {

FeatureVector vec(std::vector<double> values) {
  SparseBlock sparse;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0.0) sparse.emplace_back(static_cast<std::uint32_t>(i), values[i]);
  }
  return FeatureVector(sparse, {}, values.size());
}

std::vector<FeatureVector> random_points(std::size_t n, std::size_t dim, Rng& rng) {
  std::vector<FeatureVector> X;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(dim);
    for (auto& x : v) x = rng.below(3) == 0 ? 0.0 : static_cast<double>(rng.below(100)) / 10.0;
    X.push_back(vec(v));
  }
  return X;
}

}  // namespace

TEST_CASE("gini") {
  CHECK(gini(std::vector<std::uint64_t>{4, 0}) == 0.0);
  CHECK(gini(std::vector<std::uint64_t>{2, 2}) == 0.5);
  CHECK(gini(std::vector<std::uint64_t>{1, 3}) == 0.375);
  CHECK_THROWS_AS(gini(std::vector<std::uint64_t>{0, 0}), ContractError);
}

TEST_CASE("single split on one feature") {
  const std::vector<FeatureVector> X{vec({0}), vec({0}), vec({1}), vec({1})};
  const std::vector<std::string> y{"NOT", "NOT", "OFF", "OFF"};
  ForestParams p;
  p.max_features = MaxFeatures::all();
  Rng rng(1);
  const auto tree = train_tree(make_training_data(X, y), p, rng);
  CHECK(tree.split_sequence() == std::vector<SplitRecord>{{0, 0.5}});
  for (std::size_t i = 0; i < 4; ++i) {
    const auto leaf = tree.leaf_for(X[i]);
    CHECK(std::count(leaf.begin(), leaf.end(), 0u) == 1);
  }
}

TEST_CASE("pure labels give a single leaf") {
  const std::vector<FeatureVector> X{vec({0, 1}), vec({3, 2})};
  const std::vector<std::string> y{"OFF", "OFF"};
  Rng rng(1);
  const auto tree = train_tree(make_training_data(X, y), ForestParams{}, rng);
  CHECK(tree.nodes().size() == 1);
  CHECK(tree.split_sequence().empty());
}

TEST_CASE("8-point dataset matches the exhaustive oracle at depth 2") {
  const std::vector<std::vector<double>> dense{{1, 5}, {2, 3}, {3, 8}, {4, 1}, {5, 7}, {6, 2}, {7, 6}, {8, 4}};
  const std::vector<std::uint32_t> y{0, 0, 1, 0, 1, 0, 1, 1};
  std::vector<FeatureVector> X;
  for (const auto& d : dense) X.push_back(vec(d));
  ForestParams p;
  p.max_features = MaxFeatures::all();
  p.max_depth = 2;
  Rng rng(3);
  const auto tree = train_tree(SampleMatrix(X), y, 2, std::vector<std::uint32_t>(8, 1), p, rng);
  const auto oracle = testing::TreeOracle(dense, y, 2, {2, 1}).run();
  const auto got = tree.split_sequence();
  REQUIRE(got.size() == oracle.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].feature == oracle[i].feature);
    CHECK(got[i].threshold == oracle[i].threshold);
  }
  CHECK(tree.depth() <= 2);
}

TEST_CASE("bootstrap weights") {
  SUBCASE("sizes") {
    Rng rng(5);
    const auto w = bootstrap_weights(50, {}, rng);
    CHECK(std::accumulate(w.begin(), w.end(), 0u) == 50);
    const std::vector<std::uint32_t> rows{3, 7, 9};
    const auto s = bootstrap_weights(10, rows, rng);
    CHECK(std::accumulate(s.begin(), s.end(), 0u) == 3);
    CHECK(s[0] == 0);
  }
  SUBCASE("each row is drawn once per bootstrap on average") {
    const std::size_t n = 20, reps = 5000;
    std::vector<double> totals(n, 0.0);
    for (std::size_t r = 0; r < reps; ++r) {
      Rng rng(derive_seed(99, r));
      const auto w = bootstrap_weights(n, {}, rng);
      for (std::size_t i = 0; i < n; ++i) totals[i] += w[i];
    }
    // Pearson chi-square of the inclusion totals against the uniform
    // expectation; 19 degrees of freedom, 0.999 quantile is 43.8.
    const double expected = static_cast<double>(reps);
    double chi2 = 0.0;
    for (auto t : totals) chi2 += (t - expected) * (t - expected) / expected;
    CHECK(chi2 < 43.8);
  }
}

TEST_CASE("forest determinism and thread independence") {
  Rng rng(8);
  const auto X = random_points(120, 6, rng);
  std::vector<std::string> y;
  for (const auto& x : X) y.push_back(x[0] + x[1] > 8.0 ? "OFF" : "NOT");
  ForestParams p;
  p.n_trees = 12;
  p.seed = 42;
  const auto data = make_training_data(X, y);
  const auto a = save_model(train_forest(data, p, 1));
  CHECK(save_model(train_forest(data, p, 1)) == a);
  CHECK(save_model(train_forest(data, p, 4)) == a);
  p.seed = 43;
  CHECK(save_model(train_forest(data, p, 1)) != a);
}

TEST_CASE("one tree without bootstrap equals train_tree") {
  Rng data_rng(9);
  const auto X = random_points(40, 4, data_rng);
  std::vector<std::string> y;
  for (const auto& x : X) y.push_back(x[2] > 4.0 ? "OFF" : "NOT");
  ForestParams p;
  p.n_trees = 1;
  p.bootstrap = false;
  p.seed = 5;
  const auto data = make_training_data(X, y);
  const auto forest = train_forest(data, p);
  Rng rng(derive_seed(p.seed, 0));
  CHECK(forest.trees().front() == train_tree(data, p, rng));
}

TEST_CASE("separable data is fitted exactly") {
  Rng rng(10);
  std::vector<FeatureVector> X;
  std::vector<std::string> y;
  for (int i = 0; i < 40; ++i) {
    const bool off = i % 2 == 0;
    const double margin = off ? 6.0 : 1.0;
    X.push_back(vec({margin + static_cast<double>(rng.below(100)) / 100.0, static_cast<double>(rng.below(10))}));
    y.push_back(off ? "OFF" : "NOT");
  }
  ForestParams p;
  p.n_trees = 25;
  const auto forest = train_forest(X, y, p);
  for (std::size_t i = 0; i < X.size(); ++i) CHECK(forest.predict(X[i]) == y[i]);
}

TEST_CASE("prediction rules") {
  // Two hand-built stumps with leaves (0.8, 0.2) and (0.4, 0.6).
  const std::vector<TreeNode> leaf_only{TreeNode{}};
  const DecisionTree t1(leaf_only, {8, 2}, 2);
  const DecisionTree t2(leaf_only, {2, 3}, 2);
  const RandomForest f({t1, t2}, ForestParams{}, {"NOT", "OFF"}, 12);
  const auto x = vec({0, 0, 0});
  const auto proba = f.predict_proba(x);
  CHECK(proba[0] == doctest::Approx(0.6));
  CHECK(proba[1] == doctest::Approx(0.4));
  CHECK(f.predict(x) == "NOT");

  // Equal vote: the first class wins.
  const RandomForest tie({DecisionTree(leaf_only, {1, 0}, 2), DecisionTree(leaf_only, {0, 1}, 2)}, ForestParams{},
                         {"NOT", "OFF"}, 12);
  CHECK(tie.predict(x) == "NOT");

  const RandomForest pure({DecisionTree(leaf_only, {0, 5}, 2)}, ForestParams{}, {"NOT", "OFF"}, 12);
  CHECK(pure.predict_proba(x)[1] == 1.0);

  CHECK_THROWS_AS(f.predict_proba(vec({0, 0})), ContractError);
}

TEST_CASE("predict is argmax of predict_proba") {
  Rng rng(12);
  const auto X = random_points(80, 5, rng);
  std::vector<std::string> y;
  for (std::size_t i = 0; i < X.size(); ++i) y.push_back(std::vector<std::string>{"IND", "GRP", "OTH"}[rng.below(3)]);
  ForestParams p;
  p.n_trees = 7;
  const auto f = train_forest(X, y, p);
  CHECK(f.classes() == std::vector<std::string>{"IND", "GRP", "OTH"});
  for (const auto& x : random_points(100, 5, rng)) {
    const auto pr = f.predict_proba(x);
    CHECK(f.predict_index(x) == argmax_lowest(pr));
    CHECK(std::accumulate(pr.begin(), pr.end(), 0.0) == doctest::Approx(1.0));
  }
}

TEST_CASE("model files") {
  Rng rng(13);
  const auto X = random_points(60, 5, rng);
  std::vector<std::string> y;
  for (const auto& x : X) y.push_back(x[3] > 5.0 ? "OFF" : "NOT");
  ForestParams p;
  p.n_trees = 5;
  p.max_depth = 6;
  p.max_features = MaxFeatures::of(0.5);
  const auto f = train_forest(X, y, p);
  const auto bytes = save_model(f);
  const auto g = load_model(bytes);
  CHECK(g == f);
  for (const auto& x : random_points(100, 5, rng)) CHECK(g.predict_proba(x) == f.predict_proba(x));

  auto code_of = [](const std::string& b) {
    try {
      load_model(b);
    } catch (const ModelFormatError& e) {
      return static_cast<int>(e.code());
    }
    return -1;
  };
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK(code_of(bad_magic) == static_cast<int>(ModelFormatError::Code::version));
  std::string bad_version = bytes;
  bad_version[4] = 9;
  CHECK(code_of(bad_version) == static_cast<int>(ModelFormatError::Code::version));
  CHECK(code_of(bytes.substr(0, bytes.size() / 2)) == static_cast<int>(ModelFormatError::Code::truncated));
  CHECK(code_of(bytes.substr(0, bytes.size() - 1)) == static_cast<int>(ModelFormatError::Code::truncated));
  CHECK(code_of(bytes.substr(0, 6)) == static_cast<int>(ModelFormatError::Code::truncated));
  std::string flipped = bytes;
  flipped[bytes.size() / 2] ^= 0x10;
  CHECK(code_of(flipped) != -1);
}

TEST_CASE("parameter validation") {
  ForestParams p;
  p.n_trees = 0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  CHECK(MaxFeatures::sqrt().resolve(100) == 10);
  CHECK(MaxFeatures::sqrt().resolve(2) == 1);
  CHECK(MaxFeatures::of(0.01).resolve(10) == 1);
  CHECK(MaxFeatures::all().resolve(7) == 7);
  CHECK(MaxFeatures::parse("0.25") == MaxFeatures::of(0.25));
  CHECK_THROWS_AS(MaxFeatures::parse("1.5"), ValidationError);
  CHECK_THROWS_AS(make_training_data(std::vector<FeatureVector>{}, std::vector<std::string>{}), ContractError);
}
