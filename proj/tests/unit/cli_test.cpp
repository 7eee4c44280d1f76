#include <doctest.h>

#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "offlang/cli.hpp"
#include "offlang/corpus.hpp"
#include "offlang/manifest.hpp"
#include "support/synthetic.hpp"

using namespace offlang;
using namespace offlang::testing;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int code = run_cli(args, o, e);
  return {code, o.str(), e.str()};
}

const std::string kHeader = "id\ttweet\tsubtask_a\tsubtask_b\tsubtask_c\n";

// Small separable experiment; returns the config path.
std::string experiment(const fs::path& dir, const std::string& extra = "") {
  const auto lex = make_lexicon(21);
  write_corpus_file(make_separable_corpus(150, 21, 0.3, &lex), (dir / "train.tsv").string());
  write_text(dir / "abusive.txt", lex.off_words[0] + "\n" + lex.off_words[1] + "\n");
  write_text(dir / "stop.txt", "og\ni\n");
  const auto cfg = dir / "experiment.cfg";
  write_text(cfg, "corpus=train.tsv\nstoplist=stop.txt\nabusive_lexicon=abusive.txt\nlevel=A\nseed=11\n"
                  "prep.language=da\nforest.n_trees=15\n" + extra);
  return cfg.string();
}

}  // namespace

TEST_CASE("validate exit codes") {
  const auto dir = scratch_dir("cli_validate");
  write_text(dir / "ok.tsv", kHeader + "1\thej\tNOT\tNULL\tNULL\n");
  write_text(dir / "bad.tsv", kHeader + "1\thej\tNOT\tTIN\tNULL\n");
  CHECK(cli({"validate", (dir / "ok.tsv").string()}).code == 0);
  CHECK(cli({"validate", (dir / "bad.tsv").string()}).code == 2);
  CHECK(cli({"validate", (dir / "missing.tsv").string()}).code == 1);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("stats reports unlabeled rows") {
  const auto dir = scratch_dir("cli_stats");
  write_text(dir / "c.tsv", kHeader + "1\ta\tOFF\tTIN\tIND\n2\tb\tNOT\tNULL\tNULL\n3\tc\tOFF\tUNT\tNULL\n");
  const auto r = cli({"stats", (dir / "c.tsv").string(), "--level", "C"});
  CHECK(r.code == 0);
  CHECK(r.out.find("IND") != std::string::npos);
  CHECK(r.out.find("unlabeled") != std::string::npos);
}

TEST_CASE("balance") {
  const auto dir = scratch_dir("cli_balance");
  write_text(dir / "base.tsv", kHeader + "1\ta\tOFF\tTIN\tIND\n2\tb\tOFF\tTIN\tGRP\n3\tc\tOFF\tTIN\tOTH\n");
  write_text(dir / "pool.tsv", kHeader + "p1\td\tOFF\tTIN\tGRP\n");
  write_text(dir / "weak.tsv", "id\tconfidence\tstd\np1\t0.9\t0.1\n");
  write_text(dir / "identity.cfg",
             "base=base.tsv\npool=pool.tsv\nweak=weak.tsv\nout=same.tsv\nlevel=C\ntarget_per_class=1\nseed=1\n");
  CHECK(cli({"balance", (dir / "identity.cfg").string()}).code == 0);
  CHECK(read_text(dir / "same.tsv") == read_text(dir / "base.tsv"));
  CHECK(fs::exists(dir / "same.tsv.manifest.json"));

  write_text(dir / "short.cfg", "base=base.tsv\npool=pool.tsv\nweak=weak.tsv\nout=x.tsv\nlevel=C\n"
                                "target_per_class=3\nadd.GRP=2\nseed=1\n");
  CHECK(cli({"balance", (dir / "short.cfg").string()}).code == 2);
}

TEST_CASE("train, predict, evaluate and rerun") {
  const auto dir = scratch_dir("cli_train");
  const auto cfg = experiment(dir);
  const auto model = (dir / "model.bin").string();
  REQUIRE(cli({"train", cfg, "--out", model}).code == 0);
  const auto manifest = read_manifest(model + ".manifest.json");
  CHECK(manifest.at("results").at("training_macro_f1").get<double>() == 1.0);
  const auto first_hash = file_sha256(model);
  REQUIRE(cli({"train", cfg, "--out", model}).code == 0);
  CHECK(file_sha256(model) == first_hash);

  const auto preds = (dir / "preds.tsv").string();
  REQUIRE(cli({"predict", model, (dir / "train.tsv").string(), "--out", preds}).code == 0);
  CHECK(read_text(preds).rfind("id\tlabel\n", 0) == 0);
  const auto eval = cli({"evaluate", (dir / "train.tsv").string(), preds});
  CHECK(eval.code == 0);
  CHECK(eval.out.find("1.000") != std::string::npos);

  // Unlabeled input is fine for prediction.
  write_text(dir / "unlabeled.tsv", "id\ttweet\nu1\t@USER hello URL\n");
  const auto unl = cli({"predict", model, (dir / "unlabeled.tsv").string()});
  CHECK(unl.code == 0);
  CHECK(unl.out.find("u1\t") != std::string::npos);

  fs::copy_file(model, dir / "alone.bin");
  CHECK(cli({"predict", (dir / "alone.bin").string(), (dir / "train.tsv").string()}).code == 2);

  const auto other = scratch_dir("cli_train_other");
  const auto other_cfg = experiment(other, "features.min_df=1\n");
  REQUIRE(cli({"train", other_cfg, "--out", (other / "m.bin").string()}).code == 0);
  CHECK(cli({"predict", model, (dir / "train.tsv").string(), "--transform", (other / "m.bin.transform").string()})
            .code == 2);

  const auto rerun = cli({"rerun", model + ".manifest.json"});
  CHECK(rerun.code == 0);
  write_text(dir / "abusive.txt", "changed\n");
  CHECK(cli({"rerun", model + ".manifest.json"}).code == 2);
}

TEST_CASE("evaluate rejects mismatched ids") {
  const auto dir = scratch_dir("cli_eval");
  write_text(dir / "gold.tsv", kHeader + "1\ta\tOFF\tTIN\tIND\n2\tb\tNOT\tNULL\tNULL\n");
  write_text(dir / "same.tsv", "1\tOFF\n2\tNOT\n");
  write_text(dir / "extra.tsv", "1\tOFF\n2\tNOT\n3\tNOT\n");
  write_text(dir / "short.tsv", "1\tOFF\n");
  const auto same = cli({"evaluate", (dir / "gold.tsv").string(), (dir / "same.tsv").string()});
  CHECK(same.code == 0);
  CHECK(same.out.find("1.000") != std::string::npos);
  CHECK(cli({"evaluate", (dir / "gold.tsv").string(), (dir / "extra.tsv").string()}).code == 2);
  CHECK(cli({"evaluate", (dir / "gold.tsv").string(), (dir / "short.tsv").string()}).code == 2);
}

TEST_CASE("experiment config errors") {
  const auto dir = scratch_dir("cli_cfg");
  const auto cfg = experiment(dir);
  fs::remove(dir / "stop.txt");
  CHECK(cli({"train", cfg, "--out", (dir / "m.bin").string()}).code == 1);

  const auto dir2 = scratch_dir("cli_cfg2");
  const auto cfg2 = experiment(dir2);
  CHECK(cli({"cv", cfg2, "--k", "1000"}).code == 2);
  const auto cv = cli({"cv", cfg2, "--k", "3"});
  CHECK(cv.code == 0);

  const auto one = experiment(scratch_dir("cli_grid1"), "grid.n_trees=5\ngrid.max_depth=none\n");
  const auto best = fs::path(one).parent_path() / "best.cfg";
  CHECK(cli({"gridsearch", one, "--k", "3", "--out", best.string()}).code == 0);
  CHECK(read_text(best).find("forest.n_trees=5") != std::string::npos);

  const auto empty = experiment(scratch_dir("cli_grid0"), "grid.n_trees=\n");
  CHECK(cli({"gridsearch", empty, "--k", "3"}).code == 2);
}

TEST_CASE("emostats") {
  const auto dir = scratch_dir("cli_emo");
  write_text(dir / "c.tsv", kHeader + "1\tI hate this\tOFF\tUNT\tNULL\n2\tlovely day\tNOT\tNULL\tNULL\n");
  write_text(dir / "lex.tsv", "hate\tanger\t1\nhate\tnegative\t1\nlovely\tjoy\t1\n");
  const auto out = (dir / "emo.txt").string();
  const auto r = cli({"emostats", (dir / "c.tsv").string(), (dir / "lex.tsv").string(), "--out", out});
  CHECK(r.code == 0);
  const auto text = read_text(out);
  CHECK(text.find("1000.000") != std::string::npos);
  CHECK(fs::exists(out + ".manifest.json"));
  CHECK(cli({"emostats", (dir / "c.tsv").string(), (dir / "lex.tsv").string(), "--basis", "bogus"}).code == 2);
}
