// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "offlang/balance.hpp"
#include "offlang/cli.hpp"
#include "offlang/emolex.hpp"
#include "offlang/features.hpp"
#include "offlang/forest.hpp"
#include "offlang/manifest.hpp"
#include "offlang/metrics.hpp"
#include "offlang/validation.hpp"
#include "support/synthetic.hpp"
#include "support/tree_oracle.hpp"

using namespace offlang;
using namespace offlang::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int cli(std::vector<std::string> args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = run_cli(args, o, e);
  if (out) *out = o.str();
  if (code != 0) std::cerr << "  cli " << args.front() << " exited " << code << ": " << e.str();
  return code;
}

std::string olid_row(const std::string& id, const std::string& text, const char* a, const char* b, const char* c) {
  return id + "\t" + text + "\t" + a + "\t" + b + "\t" + c + "\n";
}

const std::string kHeader = "id\ttweet\tsubtask_a\tsubtask_b\tsubtask_c\n";

// 1. Evaluate the reconstructed Danish test confusion through the CLI.
Outcome metrics_fixture() {
  const auto dir = scratch_dir("acc1");
  std::string gold = kHeader, pred = "id\tlabel\n";
  std::size_t id = 0;
  auto emit = [&](const char* truth, const char* p, int n) {
    for (int i = 0; i < n; ++i, ++id) {
      gold += olid_row(std::to_string(id), "tweet " + std::to_string(id), truth, "NULL", "NULL");
      pred += std::to_string(id) + "\t" + p + "\n";
    }
  };
  emit("NOT", "NOT", 278);
  emit("NOT", "OFF", 16);
  emit("OFF", "NOT", 9);
  emit("OFF", "OFF", 25);
  write_text(dir / "gold.tsv", gold);
  write_text(dir / "pred.tsv", pred);
  const auto manifest = (dir / "eval.json").string();
  if (cli({"evaluate", (dir / "gold.tsv").string(), (dir / "pred.tsv").string(), "--manifest", manifest}) != 0) {
    return {false, "evaluate failed"};
  }
  const auto doc = read_manifest(manifest);
  const double acc = doc["results"]["accuracy"];
  const double f1 = doc["results"]["macro_f1"];
  const bool ok = std::abs(acc - 0.9238) <= 1e-4 && std::abs(f1 - 0.8118) <= 1e-4;
  return {ok, fmt::format("accuracy={:.6f} (0.9238±0.0001) macro_f1={:.6f} (0.8118±0.0001)", acc, f1)};
}

// 2. Majority baseline at NOT prevalence 0.869.
Outcome baseline_fixture() {
  std::vector<std::string> train(100, "NOT"), eval;
  train.resize(130, "OFF");
  for (int i = 0; i < 1000; ++i) eval.push_back(i < 869 ? "NOT" : "OFF");
  const std::vector<std::string> classes{"NOT", "OFF"};
  const auto pred = majority_baseline(train, eval.size(), classes);
  const double f1 = scores(confusion(eval, pred, classes)).macro_f1;
  return {std::abs(f1 - 0.465) <= 1e-3, fmt::format("macro_f1={:.6f} (0.465±0.001), closed form {:.6f}", f1, 0.869 / 1.869)};
}

// 3. The published balancing plan through the balance command.
Outcome balancing_fixture() {
  const auto dir = scratch_dir("acc3");
  std::string base = kHeader, pool = kHeader, weak = "id\tconfidence\tstd\n";
  std::size_t id = 0;
  auto add = [&](std::string& out, const char* c, std::size_t n, bool pooled) {
    for (std::size_t i = 0; i < n; ++i, ++id) {
      const auto sid = "s" + std::to_string(id);
      out += olid_row(sid, "@USER synthetic " + sid, "OFF", "TIN", c);
      if (pooled) weak += fmt::format("{}\t{:.4f}\t{:.4f}\n", sid, 0.5 + 0.5 * double((id * 7919) % 1000) / 1000.0, double(id % 17) / 100.0);
    }
  };
  add(base, "IND", 2407, false);
  add(base, "GRP", 1074, false);
  add(base, "OTH", 395, false);
  add(pool, "GRP", 600, true);
  add(pool, "OTH", 600, true);
  write_text(dir / "base.tsv", base);
  write_text(dir / "pool.tsv", pool);
  write_text(dir / "weak.tsv", weak);
  write_text(dir / "plan.cfg",
             "base=base.tsv\npool=pool.tsv\nweak=weak.tsv\nout=balanced.tsv\nlevel=C\n"
             "target_per_class=3876\nadd.OTH=300\nadd.GRP=237\nseed=2020\n");
  if (cli({"balance", (dir / "plan.cfg").string()}) != 0) return {false, "balance failed"};
  const auto corpus = load_corpus_file_auto((dir / "balanced.tsv").string());
  const auto d = class_distribution(corpus, Level::C);
  const bool ok = d.at("IND") == 3876 && d.at("GRP") == 3876 && d.at("OTH") == 3876 && corpus.size() == 11628;
  return {ok, fmt::format("IND={} GRP={} OTH={} total={} (3876 each, 11628)", d.at("IND"), d.at("GRP"), d.at("OTH"),
                          corpus.size())};
}

// 4. Tree growth against the brute-force oracle.
Outcome tree_oracle_fixture() {
  Rng rng(4);
  std::size_t mismatches = 0, nodes = 0;
  const double values[] = {0.0, 0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0};
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(15);
    const std::size_t f = 1 + rng.below(3);
    const std::uint32_t k = 2 + static_cast<std::uint32_t>(rng.below(2));
    std::vector<std::vector<double>> dense(n, std::vector<double>(f + kSurfaceFeatureCount, 0.0));
    std::vector<FeatureVector> X;
    std::vector<std::uint32_t> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      SparseBlock sparse;
      for (std::size_t j = 0; j < f; ++j) {
        const double v = values[rng.below(std::size(values))];
        dense[i][j] = v;
        if (v != 0.0) sparse.emplace_back(static_cast<std::uint32_t>(j), v);
      }
      X.emplace_back(sparse, std::array<double, kSurfaceFeatureCount>{}, f);
      y[i] = static_cast<std::uint32_t>(rng.below(k));
    }
    ForestParams params;
    params.max_features = MaxFeatures::all();
    params.min_samples_leaf = 1 + static_cast<std::uint32_t>(rng.below(3));
    if (rng.below(2)) params.max_depth = 1 + static_cast<std::uint32_t>(rng.below(4));
    const std::vector<std::uint32_t> weights(n, 1);
    Rng tree_rng(trial);
    const auto tree = train_tree(SampleMatrix(X), y, k, weights, params, tree_rng);
    OracleOptions opts{params.max_depth, params.min_samples_leaf};
    const auto expected = TreeOracle(dense, y, k, opts).run();
    const auto got = tree.split_sequence();
    nodes += expected.size();
    bool same = got.size() == expected.size();
    for (std::size_t i = 0; same && i < got.size(); ++i) {
      same = got[i].feature == expected[i].feature && got[i].threshold == expected[i].threshold;
    }
    if (!same) ++mismatches;
  }
  return {mismatches == 0, fmt::format("{} mismatching trees of 200 ({} oracle splits compared)", mismatches, nodes)};
}

// 5. TF-IDF values and normalisation.
Outcome tfidf_fixture() {
  const std::vector<TokenList> docs{{"a", "b"}, {"b", "c"}};
  const auto vocab = fit_vocabulary(docs, 1);
  const auto v0 = tfidf(docs[0], vocab);
  const auto v1 = tfidf(docs[1], vocab);
  // idf(a) = ln(3/2) + 1, idf(b) = 1; each row divided by sqrt(idf(a)^2 + 1).
  const double big = 0.8148024746671689, small = 0.5797386715376657;
  double worst = 0.0;
  auto check = [&](const SparseBlock& v, std::uint32_t i0, double x0, std::uint32_t i1, double x1) {
    if (v.size() != 2 || v[0].first != i0 || v[1].first != i1) {
      worst = 1.0;
      return;
    }
    worst = std::max({worst, std::abs(v[0].second - x0), std::abs(v[1].second - x1)});
  };
  check(v0, 0, big, 1, small);
  check(v1, 1, small, 2, big);

  Rng rng(5);
  std::vector<TokenList> random_docs;
  for (int d = 0; d < 1000; ++d) {
    TokenList doc;
    const auto len = 1 + rng.below(40);
    for (std::size_t t = 0; t < len; ++t) doc.push_back("w" + std::to_string(rng.below(300)));
    random_docs.push_back(std::move(doc));
  }
  const auto rv = fit_vocabulary(random_docs, 1);
  double worst_norm = 0.0;
  for (const auto& doc : random_docs) {
    double sq = 0.0;
    for (const auto& [i, x] : tfidf(doc, rv)) sq += x * x;
    worst_norm = std::max(worst_norm, std::abs(std::sqrt(sq) - 1.0));
  }
  return {worst <= 1e-9 && worst_norm <= 1e-9,
          fmt::format("max fixture error {:.2e}, max |norm-1| {:.2e} over 1000 docs (tol 1e-9)", worst, worst_norm)};
}

void write_experiment(const fs::path& dir, const Corpus& corpus, const Lexicon& lex, const std::string& extra) {
  write_corpus_file(corpus, (dir / "train.tsv").string());
  std::string abusive;
  for (std::size_t i = 0; i < lex.off_words.size(); i += 2) abusive += lex.off_words[i] + "\n";
  write_text(dir / "abusive.txt", abusive);
  write_text(dir / "stop.txt", "og\ni\njeg\ndet\nat\nen\n");
  write_text(dir / "experiment.cfg", "corpus=train.tsv\nstoplist=stop.txt\nabusive_lexicon=abusive.txt\n"
                                     "level=A\nseed=2960\nprep.language=da\n" + extra);
}

// 6. Byte-identical models across reruns and thread counts.
Outcome determinism_fixture() {
  const auto dir = scratch_dir("acc6");
  const auto lex = make_lexicon(6);
  write_experiment(dir, make_separable_corpus(2960, 6, 0.13, &lex), lex, "");
  const auto cfg = (dir / "experiment.cfg").string();
  std::vector<std::string> hashes;
  for (const char* threads : {"1", "8", "1", "8"}) {
    const auto model = (dir / (std::string("model_") + threads + ".bin")).string();
    if (cli({"--threads", threads, "train", cfg, "--out", model}) != 0) return {false, "train failed"};
    hashes.push_back(file_sha256(model));
  }
  const bool ok = std::all_of(hashes.begin(), hashes.end(), [&](const auto& h) { return h == hashes.front(); });
  return {ok, fmt::format("4 runs (threads 1,8,1,8) on 2960 rows, model sha256 {}", hashes.front().substr(0, 16))};
}

// 7. Fold properties and a rigged grid.
Outcome cv_grid_fixture() {
  Rng rng(7);
  std::size_t bad_sizes = 0, bad_strata = 0, bad_partition = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(300);
    const std::size_t k = 2 + rng.below(std::min<std::size_t>(n - 1, 12));
    std::vector<std::uint32_t> y(n);
    for (auto& c : y) c = static_cast<std::uint32_t>(rng.below(rng.below(2) ? 2 : 4));
    const auto folds = kfold(n, k, y, trial, true);
    std::vector<int> seen(n, 0);
    std::size_t lo = n, hi = 0;
    std::map<std::uint32_t, std::pair<std::size_t, std::size_t>> strata;
    for (const auto& f : folds) {
      for (auto r : f.test) ++seen[r];
      lo = std::min(lo, f.test.size());
      hi = std::max(hi, f.test.size());
      std::map<std::uint32_t, std::size_t> per;
      for (auto r : f.test) ++per[y[r]];
      for (std::uint32_t c = 0; c < 4; ++c) {
        auto& [mn, mx] = strata.try_emplace(c, n, 0).first->second;
        mn = std::min(mn, per[c]);
        mx = std::max(mx, per[c]);
      }
      if (f.train.size() + f.test.size() != n) ++bad_partition;
    }
    if (std::any_of(seen.begin(), seen.end(), [](int s) { return s != 1; })) ++bad_partition;
    if (hi - lo > 1) ++bad_sizes;
    for (const auto& [c, mm] : strata) bad_strata += mm.second - mm.first > 1;
  }

  // XOR on two features: a depth-1 stump cannot beat chance, full trees can.
  std::vector<FeatureVector> X;
  std::vector<std::string> labels;
  Rng data_rng(77);
  for (int i = 0; i < 200; ++i) {
    const double a = static_cast<double>(data_rng.below(1000)) / 1000.0;
    const double b = static_cast<double>(data_rng.below(1000)) / 1000.0;
    X.emplace_back(SparseBlock{{0, a + 0.001}, {1, b + 0.001}}, std::array<double, kSurfaceFeatureCount>{}, 2);
    labels.push_back((a < 0.5) == (b < 0.5) ? "NOT" : "OFF");
  }
  const auto data = make_training_data(X, labels);
  ForestParams weak, strong;
  weak.n_trees = 1;
  weak.max_depth = 1;
  strong.n_trees = 25;
  const std::vector<ForestParams> grid{weak, strong};
  const auto g = grid_search(grid, data, 5, 7);
  const bool ok = bad_sizes == 0 && bad_strata == 0 && bad_partition == 0 && g.best == 1;
  return {ok, fmt::format("200 random fold sets: {} size, {} strata, {} partition violations; rigged grid best={} "
                          "(stump {:.3f}, forest {:.3f})",
                          bad_sizes, bad_strata, bad_partition, g.best, g.results[0].mean, g.results[1].mean)};
}

// 8. Emotion counts: hand fixture and duplication invariance.
Outcome emotion_fixture() {
  std::istringstream lex_src("hate\tnegative\t1\nugly\tnegative\t1\nugly\tdisgust\t1\nlove\tjoy\t1\n");
  const auto lex = load_emotion_lexicon(lex_src);
  Corpus hand;
  auto tweet = [](std::string id, std::string text, LabelA a) {
    Tweet t;
    t.id = std::move(id);
    t.text = std::move(text);
    t.label_a = a;
    return t;
  };
  hand.tweets = {tweet("1", "I hate this ugly thing", LabelA::OFF), tweet("2", "HATE it", LabelA::OFF),
                 tweet("3", "love it", LabelA::NOT)};
  const auto p = emotion_counts(hand, lex, NormBasis::per_1000_posts);
  const bool hand_ok = p[1].values[1] == 1500.0 && p[1].values[4] == 500.0 && p[0].values[6] == 1000.0;

  Rng rng(8);
  const std::vector<std::string> words{"hate", "ugly", "love", "cat", "tree", "day"};
  Corpus c;
  for (int i = 0; i < 300; ++i) {
    std::string text;
    for (std::size_t k = 0; k < 1 + rng.below(12); ++k) text += words[rng.below(words.size())] + " ";
    c.tweets.push_back(tweet(std::to_string(i), text, rng.below(3) ? LabelA::NOT : LabelA::OFF));
  }
  Corpus doubled = c;
  for (const auto& t : c.tweets) {
    auto d = t;
    d.id += "_copy";
    doubled.tweets.push_back(d);
  }
  const auto a = emotion_counts(c, lex, NormBasis::per_1000_posts);
  const auto b = emotion_counts(doubled, lex, NormBasis::per_1000_posts);
  bool invariant = true;
  for (std::size_t i = 0; i < a.size(); ++i) invariant &= a[i].values == b[i].values;
  return {hand_ok && invariant, fmt::format("hand OFF/neg={} (1500), OFF/dis={} (500); duplication invariant: {}",
                                            p[1].values[1], p[1].values[4], invariant ? "yes" : "no")};
}

// 9. Default grid, 10-fold CV, end to end on a separable corpus.
Outcome default_grid_fixture() {
  const auto dir = scratch_dir("acc9");
  const auto lex = make_lexicon(9);
  write_experiment(dir, make_separable_corpus(3000, 9, 0.13, &lex), lex, "cv.k=10\n");
  const auto best = (dir / "best.cfg").string();
  const auto manifest = (dir / "grid.json").string();
  const auto threads = std::to_string(std::max(1u, std::thread::hardware_concurrency()));
  if (cli({"--threads", threads, "gridsearch", (dir / "experiment.cfg").string(), "--out", best, "--manifest", manifest}) != 0) {
    return {false, "gridsearch failed"};
  }
  const auto doc = read_manifest(manifest);
  const std::size_t b = doc["results"]["best"];
  const auto& points = doc["results"]["points"];
  double lowest = 1.0;
  for (const auto& pt : points) lowest = std::min(lowest, pt["cv"]["mean"].get<double>());
  const double mean = points[b]["cv"]["mean"];
  return {mean >= 0.95 && points.size() == 8,
          fmt::format("{} grid points x 10 folds on 3000 rows: best mean macro-F1 {:.4f} (>= 0.95), worst point {:.4f}",
                      points.size(), mean, lowest)};
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "metrics fixture", 1.0, metrics_fixture},
      {2, "majority baseline", 1.0, baseline_fixture},
      {3, "balancing plan", 5.0, balancing_fixture},
      {4, "tree oracle equivalence", 30.0, tree_oracle_fixture},
      {5, "tf-idf oracle", 5.0, tfidf_fixture},
      {6, "pipeline determinism", 120.0, determinism_fixture},
      {7, "cv and grid properties", 60.0, cv_grid_fixture},
      {8, "emotion invariance", 10.0, emotion_fixture},
      {9, "default grid cv", 0.0, default_grid_fixture},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.budget_s == 0.0 || secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::string timing = fmt::format("{:.2f}s", secs);
    if (c.budget_s > 0.0) timing += fmt::format(" of {:.0f}s", c.budget_s);
    std::cout << fmt::format("[{}] {}. {}: {} [{}]{}\n", pass ? "PASS" : "FAIL", c.number, c.name, o.detail, timing,
                             in_time ? "" : " over time budget")
              << std::flush;
  }
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
