#include <doctest.h>

#include <algorithm>

#include "offlang/error.hpp"
#include "offlang/metrics.hpp"
#include "offlang/random.hpp"

using namespace offlang;

namespace {

const std::vector<std::string> kAB{"NOT", "OFF"};

}  // namespace

TEST_CASE("Danish test confusion reconstruction") {
  const ConfusionMatrix m(kAB, {{278, 16}, {9, 25}});
  const auto s = scores(m);
  CHECK(s.accuracy == doctest::Approx(0.9238).epsilon(0.0001 / 0.9238));
  CHECK(s.macro_f1 == doctest::Approx(0.8118).epsilon(0.0001 / 0.8118));
  CHECK(s.per_class[0].f1 == doctest::Approx(0.9570).epsilon(1e-4));
  CHECK(s.per_class[1].f1 == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("confusion from label vectors") {
  const std::vector<std::string> t{"NOT", "OFF", "OFF", "NOT"};
  const std::vector<std::string> p{"NOT", "NOT", "OFF", "OFF"};
  const auto m = confusion(t, p, kAB);
  CHECK(m.at(0, 0) == 1);
  CHECK(m.at(0, 1) == 1);
  CHECK(m.at(1, 0) == 1);
  CHECK(m.at(1, 1) == 1);
  CHECK(m.total() == 4);

  const auto diag = confusion(t, t, kAB);
  CHECK(diag.at(0, 1) == 0);
  CHECK(diag.at(1, 0) == 0);
  CHECK(scores(diag).macro_f1 == 1.0);
  CHECK(scores(diag).accuracy == 1.0);

  CHECK_THROWS_AS(confusion(t, std::vector<std::string>{"NOT"}, kAB), ContractError);
  CHECK_THROWS_AS(confusion(std::vector<std::string>{"NOT"}, std::vector<std::string>{"UNT"}, kAB), ContractError);
  CHECK_THROWS_AS(confusion(std::vector<std::string>{}, std::vector<std::string>{}, kAB), ContractError);
}

TEST_CASE("zero over zero is zero") {
  const ConfusionMatrix m(kAB, {{0, 0}, {0, 5}});
  const auto s = scores(m);
  CHECK(s.per_class[0].precision == 0.0);
  CHECK(s.per_class[0].recall == 0.0);
  CHECK(s.per_class[0].f1 == 0.0);
  CHECK(s.macro_f1 == 0.5);
}

TEST_CASE("constant predictor closed form q/(1+q)") {
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 1000;
    const std::size_t majority = 501 + rng.below(498);
    std::vector<std::string> truth(n, "OFF");
    std::fill(truth.begin(), truth.begin() + static_cast<long>(majority), "NOT");
    const auto pred = majority_baseline(truth, n, kAB);
    const double q = static_cast<double>(majority) / n;
    CHECK(scores(confusion(truth, pred, kAB)).macro_f1 == doctest::Approx(q / (1 + q)).epsilon(1e-12));
  }
}

TEST_CASE("majority baseline") {
  CHECK(majority_baseline(std::vector<std::string>{"OFF", "NOT", "OFF"}, 2, kAB) ==
        std::vector<std::string>{"OFF", "OFF"});
  // Ties go to the first class in the list.
  CHECK(majority_baseline(std::vector<std::string>{"OFF", "NOT"}, 1, kAB).front() == "NOT");
  CHECK_THROWS_AS(majority_baseline(std::vector<std::string>{}, 1, kAB), ContractError);

  std::vector<std::string> eval(10, "NOT");
  const auto p = majority_baseline(std::vector<std::string>{"NOT"}, eval.size(), kAB);
  const auto s = scores(confusion(eval, p, kAB));
  CHECK(s.accuracy == 1.0);
  CHECK(s.macro_f1 == 0.5);

  // Three balanced classes, constant IND prediction: F1(IND) = 2*(1/3)/(1/3+1) = 0.5.
  const std::vector<std::string> abc{"IND", "GRP", "OTH"};
  std::vector<std::string> uniform;
  for (int i = 0; i < 30; ++i) uniform.push_back(abc[i % 3]);
  const auto q = majority_baseline(std::vector<std::string>{"IND"}, uniform.size(), abc);
  CHECK(scores(confusion(uniform, q, abc)).macro_f1 == doctest::Approx(0.5 / 3));
}

TEST_CASE("metric properties on random matrices") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 2 + rng.below(3);
    std::vector<std::string> classes;
    for (std::size_t i = 0; i < k; ++i) classes.push_back("c" + std::to_string(i));
    std::vector<std::vector<std::uint64_t>> counts(k, std::vector<std::uint64_t>(k));
    for (auto& row : counts) {
      for (auto& c : row) c = rng.below(20);
    }
    counts[0][0] += 1;
    const ConfusionMatrix m(classes, counts);
    const auto s = scores(m);
    CHECK(s.accuracy == doctest::Approx(static_cast<double>(m.trace()) / m.total()));
    CHECK(s.macro_f1 >= 0.0);
    CHECK(s.macro_f1 <= 1.0);

    // Reverse the class order on both axes.
    std::vector<std::string> rc(classes.rbegin(), classes.rend());
    std::vector<std::vector<std::uint64_t>> rcounts(k, std::vector<std::uint64_t>(k));
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) rcounts[k - 1 - i][k - 1 - j] = counts[i][j];
    }
    CHECK(scores(ConfusionMatrix(rc, rcounts)).macro_f1 == doctest::Approx(s.macro_f1).epsilon(1e-12));
  }
}

TEST_CASE("rendered confusion") {
  const ConfusionMatrix m(kAB, {{278, 16}, {9, 25}});
  const auto text = render_confusion(m);
  CHECK(text.find("NOT") < text.find("OFF"));
  CHECK(text.find("294") != std::string::npos);  // row sum
  CHECK(text.find("287") != std::string::npos);  // column sum
  CHECK(text.find("328") != std::string::npos);
  CHECK(text.find("\x1b[") == std::string::npos);
  CHECK(render_confusion(m, RenderOptions{true}).find("\x1b[1m") != std::string::npos);

  const std::vector<std::string> abc{"IND", "GRP", "OTH"};
  const auto t3 = render_confusion(ConfusionMatrix(abc));
  CHECK(t3.find("IND") < t3.find("GRP"));
  CHECK(t3.find("GRP") < t3.find("OTH"));
  // Header, three class rows, total row.
  CHECK(std::count(t3.begin(), t3.end(), '\n') == 5);
}
