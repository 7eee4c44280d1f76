#include "offlang/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>

#include "offlang/balance.hpp"
#include "offlang/emolex.hpp"
#include "offlang/experiment.hpp"
#include "offlang/manifest.hpp"
#include "offlang/metrics.hpp"
#include "offlang/validation.hpp"
#include "text_io.hpp"

namespace offlang {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct Context {
  std::vector<std::string> argv;
  std::ostream& out;
  std::ostream& err;
  std::size_t threads = 1;
  bool color = false;
};

std::string join_ids(const std::vector<std::string>& ids, std::size_t limit = 20) {
  std::string s;
  for (std::size_t i = 0; i < ids.size() && i < limit; ++i) s += (i ? ", " : "") + ids[i];
  if (ids.size() > limit) s += fmt::format(", ... ({} more)", ids.size() - limit);
  return s;
}

json distribution_json(const std::map<std::string, std::size_t>& d, Level level) {
  json j = json::object();
  for (const auto& cls : level_classes(level)) j[cls] = d.at(cls);
  return j;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_relative() ? base / path : path;
}

std::string manifest_path_for(const std::string& output) { return output + ".manifest.json"; }

// --- validate / stats -------------------------------------------------------

int cmd_validate(Context& ctx, const std::string& path) {
  const auto corpus = load_corpus_file_auto(path);
  ctx.out << fmt::format("{}: ok, {} tweets ({})\n", path, corpus.size(),
                         corpus.schema == Schema::olid_labeled ? "labeled" : "text only");
  if (corpus.schema == Schema::olid_labeled) {
    for (Level level : {Level::A, Level::B, Level::C}) {
      const auto d = class_distribution(corpus, level);
      std::size_t n = 0;
      for (const auto& [k, v] : d) n += v;
      ctx.out << fmt::format("  level {}: {} labeled\n", to_string(level), n);
    }
  }
  return 0;
}

int cmd_stats(Context& ctx, const std::string& path, const std::string& level_text, const std::string& manifest) {
  const Level level = parse_level(level_text);
  const auto corpus = load_corpus_file_auto(path);
  const auto d = class_distribution(corpus, level);
  const auto unlabeled = unlabeled_count(corpus, level);
  ctx.out << fmt::format("{:<10} {:>8}\n", "label", "count");
  for (const auto& cls : level_classes(level)) ctx.out << fmt::format("{:<10} {:>8}\n", cls, d.at(cls));
  ctx.out << fmt::format("{:<10} {:>8}\n", "unlabeled:", unlabeled);
  ctx.out << fmt::format("{:<10} {:>8}\n", "total", corpus.size());
  if (!manifest.empty()) {
    Manifest m("stats", ctx.argv);
    m.add_input("corpus", path);
    m.results()["level"] = to_string(level);
    m.results()["distribution"] = distribution_json(d, level);
    m.results()["unlabeled"] = unlabeled;
    m.write(manifest);
  }
  return 0;
}

// --- balance ------------------------------------------------------------------

int cmd_balance(Context& ctx, const std::string& config_path, std::string out_path) {
  const auto cfg = Config::parse_file(config_path);
  cfg.reject_unknown({"base", "pool", "weak", "out", "target_per_class", "seed", "level", "add.", "target."});
  const fs::path base_dir = fs::path(config_path).parent_path();
  const auto plan = parse_balance_plan(cfg);

  const auto base_path = resolve(base_dir, cfg.require("base")).string();
  if (out_path.empty()) {
    const auto o = cfg.get("out");
    if (!o) throw ValidationError("no output path: set out= in the config or pass --out");
    out_path = resolve(base_dir, *o).string();
  }

  const auto base = load_corpus_file_auto(base_path);
  Corpus pool;
  WeakLabelMap weak;
  std::string pool_path, weak_path;
  if (const auto p = cfg.get("pool")) {
    pool_path = resolve(base_dir, *p).string();
    pool = load_corpus_file_auto(pool_path);
  }
  if (const auto w = cfg.get("weak")) {
    weak_path = resolve(base_dir, *w).string();
    weak = load_weak_labels_file(weak_path);
  }
  bool wants_pool = false;
  for (const auto& [label, n] : plan.additions) wants_pool |= n > 0;
  if (wants_pool && (pool_path.empty() || weak_path.empty())) {
    throw ValidationError("the plan adds pool tweets but pool= or weak= is not set");
  }

  const auto result = apply_plan(base, pool, weak, plan);
  write_corpus_file(result.corpus, out_path);
  ctx.out << render_balance_report(result, plan.level);
  ctx.out << fmt::format("wrote {} tweets to {}\n", result.corpus.size(), out_path);

  Manifest m("balance", ctx.argv);
  m.doc()["config"] = cfg.values();
  m.doc()["seed"] = plan.seed;
  m.add_input("config", config_path);
  m.add_input("base", base_path);
  if (!pool_path.empty()) m.add_input("pool", pool_path);
  if (!weak_path.empty()) m.add_input("weak", weak_path);
  m.add_output("corpus", out_path);
  auto& r = m.results();
  r["level"] = to_string(plan.level);
  r["before"] = distribution_json(result.before, plan.level);
  r["after_additions"] = distribution_json(result.after_additions, plan.level);
  r["after"] = distribution_json(result.after, plan.level);
  r["total"] = result.corpus.size();
  r["additions"] = json::array();
  for (const auto& s : result.additions) {
    r["additions"].push_back({{"id", s.tweet.id},
                              {"label", std::string(*s.tweet.label(plan.level))},
                              {"confidence", s.weak.confidence},
                              {"std", s.weak.std}});
  }
  r["duplicate_of"] = json::object();
  for (const auto& [dup, orig] : result.duplicate_of) r["duplicate_of"][dup] = orig;
  m.write(manifest_path_for(out_path));
  return 0;
}

// --- train / cv / gridsearch ------------------------------------------------

struct Prepared {
  ExperimentConfig exp;
  Corpus corpus;
  LabeledTexts texts;
  Featurizer featurizer;
  TrainingData data;
};

Prepared prepare(Context& ctx, const std::string& config_path) {
  auto exp = ExperimentConfig::load(config_path);
  auto corpus = load_corpus_file_auto(exp.corpus.string());
  auto texts = labeled_texts(corpus, exp.level);
  if (texts.texts.empty()) {
    throw ValidationError(fmt::format("{} has no tweets labeled at level {}", exp.corpus.string(), to_string(exp.level)));
  }
  if (texts.skipped) ctx.err << fmt::format("note: skipped {} tweets without a level {} label\n", texts.skipped, to_string(exp.level));
  auto featurizer = make_featurizer(exp);
  featurizer.fit(texts.texts);
  const auto X = featurizer.transform_all(texts.texts);
  auto data = make_training_data(X, texts.labels, level_classes(exp.level));
  return {std::move(exp), std::move(corpus), std::move(texts), std::move(featurizer), std::move(data)};
}

void add_experiment_inputs(Manifest& m, const std::string& config_path, const ExperimentConfig& exp) {
  m.doc()["config"] = exp.raw.values();
  m.doc()["seed"] = exp.seed;
  m.add_input("config", config_path);
  const char* roles[] = {"corpus", "stoplist", "abusive_lexicon", "emoji_lexicon"};
  const std::optional<fs::path> paths[] = {exp.corpus, exp.stoplist, exp.abusive_lexicon, exp.emoji_lexicon};
  for (std::size_t i = 0; i < 4; ++i) {
    if (paths[i]) m.add_input(roles[i], paths[i]->string());
  }
}

json params_json(const ForestParams& p) {
  return {{"n_trees", p.n_trees},
          {"max_depth", p.max_depth ? json(*p.max_depth) : json("none")},
          {"min_samples_leaf", p.min_samples_leaf},
          {"max_features", p.max_features.to_string()},
          {"bootstrap", p.bootstrap},
          {"seed", p.seed}};
}

int cmd_train(Context& ctx, const std::string& config_path, std::string out_path) {
  auto run = prepare(ctx, config_path);
  if (out_path.empty()) {
    if (!run.exp.model) throw ValidationError("no model path: set model= in the config or pass --out");
    out_path = run.exp.model->string();
  }
  const auto forest = train_forest(run.data, run.exp.forest, ctx.threads);

  std::vector<std::uint32_t> pred;
  for (std::size_t i = 0; i < run.data.size(); ++i) pred.push_back(forest.predict_index(run.data.X, i));
  const double train_f1 = macro_f1(run.data.y, pred, run.data.classes.size());

  const std::string transform_path = out_path + ".transform";
  detail::write_file(out_path, save_model(forest));
  detail::write_file(transform_path, save_transform(run.featurizer));

  Manifest m("train", ctx.argv);
  add_experiment_inputs(m, config_path, run.exp);
  m.add_output("model", out_path);
  m.add_output("transform", transform_path);
  auto& r = m.results();
  r["level"] = to_string(run.exp.level);
  r["params"] = params_json(run.exp.forest);
  r["classes"] = run.data.classes;
  r["training_rows"] = run.data.size();
  r["vocabulary_size"] = run.featurizer.vocabulary().size();
  r["n_features"] = forest.n_features();
  r["training_macro_f1"] = train_f1;
  m.write(manifest_path_for(out_path));

  ctx.out << fmt::format("trained {} trees on {} tweets ({} features, vocabulary {})\n", forest.trees().size(),
                         run.data.size(), forest.n_features(), run.featurizer.vocabulary().size());
  ctx.out << fmt::format("training macro-F1 {:.4f}\nmodel: {}\n", train_f1, out_path);
  return 0;
}

std::string cv_table(const CVResult& r) {
  std::string s = fmt::format("{:<6} {:>9}\n", "fold", "macro_f1");
  for (std::size_t i = 0; i < r.folds.size(); ++i) s += fmt::format("{:<6} {:>9.4f}\n", i, r.folds[i]);
  s += fmt::format("{:<6} {:>9.4f}\n{:<6} {:>9.4f}\n", "mean", r.mean, "std", r.std);
  return s;
}

json cv_json(const CVResult& r) { return {{"folds", r.folds}, {"mean", r.mean}, {"std", r.std}}; }

int cmd_cv(Context& ctx, const std::string& config_path, std::size_t k, const std::string& manifest) {
  auto run = prepare(ctx, config_path);
  if (k == 0) k = run.exp.cv_k;
  const auto result = cross_validate(run.data, run.exp.forest, k, run.exp.seed, ctx.threads);
  ctx.out << fmt::format("{}-fold cross-validation, {}\n", k, run.exp.forest.describe());
  ctx.out << cv_table(result);
  if (!manifest.empty()) {
    Manifest m("cv", ctx.argv);
    add_experiment_inputs(m, config_path, run.exp);
    m.results()["k"] = k;
    m.results()["params"] = params_json(run.exp.forest);
    m.results()["cv"] = cv_json(result);
    m.write(manifest);
  }
  return 0;
}

int cmd_gridsearch(Context& ctx, const std::string& config_path, std::size_t k, std::string best_path,
                   const std::string& manifest) {
  auto run = prepare(ctx, config_path);
  if (k == 0) k = run.exp.cv_k;
  const auto grid = run.exp.grid;
  const auto result = grid_search(grid, run.data, k, run.exp.seed, ctx.threads);

  std::vector<std::size_t> order(grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return result.results[a].mean > result.results[b].mean; });
  ctx.out << fmt::format("{:<5} {:<6} {:>8} {:>8}  {}\n", "rank", "point", "mean", "std", "params");
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const auto i = order[rank];
    ctx.out << fmt::format("{:<5} {:<6} {:>8.4f} {:>8.4f}  {}\n", rank + 1, i, result.results[i].mean,
                           result.results[i].std, grid[i].describe());
  }

  if (best_path.empty()) best_path = config_path + ".best";
  const auto& best = grid[result.best];
  detail::write_file(best_path, fmt::format("# best of {} grid points, mean macro-F1 {:.6f}\nseed={}\n{}", grid.size(),
                                            result.results[result.best].mean, run.exp.seed,
                                            forest_params_config(best)));
  ctx.out << fmt::format("best: point {} ({})\nwrote {}\n", result.best, best.describe(), best_path);

  Manifest m("gridsearch", ctx.argv);
  add_experiment_inputs(m, config_path, run.exp);
  m.add_output("best_params", best_path);
  m.results()["k"] = k;
  m.results()["best"] = result.best;
  m.results()["points"] = json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    m.results()["points"].push_back({{"params", params_json(grid[i])}, {"cv", cv_json(result.results[i])}});
  }
  m.write(manifest.empty() ? manifest_path_for(best_path) : manifest);
  return 0;
}

// --- predict / evaluate -------------------------------------------------------

int cmd_predict(Context& ctx, const std::string& model_path, const std::string& corpus_path,
                std::string transform_path, const std::string& out_path) {
  const auto model = load_model(detail::read_file(model_path));
  if (transform_path.empty()) transform_path = model_path + ".transform";
  if (!fs::exists(transform_path)) {
    throw ValidationError("no transform for " + model_path + " (expected " + transform_path +
                          "); features cannot be rebuilt without the training vocabulary");
  }
  const auto featurizer = load_transform(detail::read_file(transform_path));
  if (featurizer.dimension() != model.n_features()) {
    throw ValidationError(fmt::format("transform produces {} features but the model expects {}",
                                      featurizer.dimension(), model.n_features()));
  }
  const auto corpus = load_corpus_file_auto(corpus_path);
  std::string tsv = "id\tlabel\n";
  for (const auto& t : corpus.tweets) tsv += t.id + "\t" + model.predict(featurizer.transform(t.text)) + "\n";

  if (out_path.empty()) {
    ctx.out << tsv;
    return 0;
  }
  detail::write_file(out_path, tsv);
  Manifest m("predict", ctx.argv);
  m.add_input("model", model_path);
  m.add_input("transform", transform_path);
  m.add_input("corpus", corpus_path);
  m.add_output("predictions", out_path);
  m.results()["rows"] = corpus.size();
  m.write(manifest_path_for(out_path));
  ctx.err << fmt::format("wrote {} predictions to {}\n", corpus.size(), out_path);
  return 0;
}

std::vector<std::pair<std::string, std::string>> load_predictions(const std::string& path) {
  const auto text = detail::read_file(path);
  std::istringstream in(text);
  std::vector<std::pair<std::string, std::string>> rows;
  std::set<std::string> seen;
  std::string line;
  std::size_t number = 0;
  while (detail::read_line(in, line)) {
    ++number;
    if (line.empty()) continue;
    const auto fields = detail::split(line, '\t');
    if (fields.size() != 2) throw ParseError(path + ": expected id<TAB>label", number);
    if (number == 1 && fields[0] == "id" && fields[1] == "label") continue;
    std::string id(fields[0]);
    if (!seen.insert(id).second) throw ValidationError(path + ": duplicate prediction for id " + id);
    rows.emplace_back(std::move(id), std::string(fields[1]));
  }
  if (rows.empty()) throw ValidationError(path + ": no predictions");
  return rows;
}

int cmd_evaluate(Context& ctx, const std::string& gold_path, const std::string& pred_path,
                 const std::string& level_text, const std::string& external_path, const std::string& manifest) {
  const auto gold = load_corpus_file_auto(gold_path);
  const auto preds = load_predictions(pred_path);

  Level level;
  if (!level_text.empty()) {
    level = parse_level(level_text);
  } else {
    const auto l = level_of(preds.front().second);
    if (!l) throw ValidationError("unknown predicted label '" + preds.front().second + "'");
    level = *l;
  }

  std::map<std::string, std::string> truth;
  for (const auto& t : gold.tweets) {
    if (const auto label = t.label(level)) truth.emplace(t.id, *label);
  }
  std::vector<std::string> y_true, y_pred, missing_gold;
  std::set<std::string> matched;
  for (const auto& [id, label] : preds) {
    const auto it = truth.find(id);
    if (it == truth.end()) {
      missing_gold.push_back(id);
      continue;
    }
    matched.insert(id);
    y_true.push_back(it->second);
    y_pred.push_back(label);
  }
  std::vector<std::string> missing_pred;
  for (const auto& [id, label] : truth) {
    if (!matched.count(id)) missing_pred.push_back(id);
  }
  if (!missing_gold.empty() || !missing_pred.empty()) {
    std::string msg = "predictions and gold corpus do not match";
    if (!missing_gold.empty()) msg += fmt::format("\n  {} predicted ids not in gold: {}", missing_gold.size(), join_ids(missing_gold));
    if (!missing_pred.empty()) msg += fmt::format("\n  {} gold ids without prediction: {}", missing_pred.size(), join_ids(missing_pred));
    throw ValidationError(msg);
  }

  const auto& classes = level_classes(level);
  const auto cm = confusion(y_true, y_pred, classes);
  const auto s = scores(cm);
  std::optional<ExternalModelRecord> external;
  if (!external_path.empty()) external = ExternalModelRecord::from_config(Config::parse_file(external_path));

  if (external) ctx.out << fmt::format("model: {}\n", external->model);
  ctx.out << fmt::format("level {}: {} tweets\n", to_string(level), cm.total());
  ctx.out << render_scores(cm, s) << "\n";
  ctx.out << render_confusion(cm, RenderOptions{ctx.color});

  if (!manifest.empty()) {
    Manifest m("evaluate", ctx.argv);
    m.add_input("gold", gold_path);
    m.add_input("predictions", pred_path);
    if (external) {
      m.add_input("external_config", external_path);
      m.doc()["external_model"] = {{"model", external->model},
                                   {"max_seq_len", external->max_seq_len},
                                   {"batch_train", external->batch_train},
                                   {"batch_val", external->batch_val},
                                   {"batch_test", external->batch_test},
                                   {"learning_rate", external->learning_rate},
                                   {"epochs", external->epochs},
                                   {"notes", external->notes}};
    }
    auto& r = m.results();
    r["level"] = to_string(level);
    r["accuracy"] = s.accuracy;
    r["macro_f1"] = s.macro_f1;
    r["classes"] = classes;
    r["confusion"] = cm.counts();
    m.write(manifest);
  }
  return 0;
}

// --- emostats / rerun -------------------------------------------------------

int cmd_emostats(Context& ctx, const std::string& corpus_path, const std::string& lexicon_path,
                 const std::string& basis_text, const std::string& out_path, const std::string& manifest) {
  const auto basis = parse_basis(basis_text);
  const auto corpus = load_corpus_file_auto(corpus_path);
  const auto lex = load_emotion_lexicon_file(lexicon_path);
  if (lex.skipped_phrases) ctx.err << fmt::format("note: ignored {} multi-word lexicon entries\n", lex.skipped_phrases);
  const auto profiles = emotion_counts(corpus, lex, basis);
  const auto report = emotion_report(profiles);
  if (out_path.empty()) {
    ctx.out << report;
  } else {
    detail::write_file(out_path, report);
  }
  const std::string manifest_file = !manifest.empty() ? manifest : out_path.empty() ? "" : manifest_path_for(out_path);
  if (!manifest_file.empty()) {
    Manifest m("emostats", ctx.argv);
    m.add_input("corpus", corpus_path);
    m.add_input("lexicon", lexicon_path);
    if (!out_path.empty()) m.add_output("report", out_path);
    m.results()["basis"] = to_string(basis);
    for (const auto& p : profiles) {
      json row = {{"posts", p.posts}, {"tokens", p.tokens}};
      for (std::size_t e = 0; e < kEmotionCount; ++e) row[std::string(short_name(static_cast<Emotion>(e)))] = p.values[e];
      m.results()["profiles"][p.label] = row;
    }
    m.write(manifest_file);
  }
  return 0;
}

int cmd_rerun(Context& ctx, const std::string& manifest_path) {
  const auto doc = read_manifest(manifest_path);
  std::vector<std::string> args;
  fs::path cwd;
  try {
    args = doc.at("argv").get<std::vector<std::string>>();
    cwd = doc.at("cwd").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(manifest_path + ": manifest lacks argv/cwd");
  }
  if (args.empty() || args.front() == "rerun") throw ValidationError(manifest_path + ": nothing to rerun");

  const auto original_cwd = fs::current_path();
  fs::current_path(cwd);
  int status = 0;
  try {
    status = run_cli(args, ctx.out, ctx.err);
  } catch (...) {
    fs::current_path(original_cwd);
    throw;
  }
  std::vector<std::string> changed;
  if (status == 0) {
    for (const auto& o : doc.at("outputs")) {
      const auto path = o.at("path").get<std::string>();
      if (file_sha256(path) != o.at("sha256").get<std::string>()) changed.push_back(path);
    }
  }
  fs::current_path(original_cwd);
  if (status != 0) return status;
  if (!changed.empty()) {
    ctx.err << "rerun produced different outputs: " << join_ids(changed) << "\n";
    return 2;
  }
  ctx.err << fmt::format("rerun reproduced {} output file(s) bit for bit\n", doc.at("outputs").size());
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Offensive-language corpus tools and random-forest classifier", "offlang"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  Context ctx{args, out, err};
  app.add_option("--threads", ctx.threads, "Worker threads for training")->check(CLI::PositiveNumber);

  std::string a, b, level = "A", out_path, manifest, transform, external, basis = "per_1000_posts";
  std::size_t k = 0;
  std::function<int()> action;

  auto* validate = app.add_subcommand("validate", "Check a corpus file for format and hierarchy errors");
  validate->add_option("corpus", a)->required();
  validate->callback([&] { action = [&] { return cmd_validate(ctx, a); }; });

  auto* stats = app.add_subcommand("stats", "Class distribution at one level");
  stats->add_option("corpus", a)->required();
  stats->add_option("--level", level, "A, B or C");
  stats->add_option("--manifest", manifest);
  stats->callback([&] { action = [&] { return cmd_stats(ctx, a, level, manifest); }; });

  auto* balance = app.add_subcommand("balance", "Add confident pool tweets and oversample to a target");
  balance->add_option("config", a)->required();
  balance->add_option("--out", out_path);
  balance->callback([&] { action = [&] { return cmd_balance(ctx, a, out_path); }; });

  auto* train = app.add_subcommand("train", "Train a random forest from an experiment config");
  train->add_option("config", a)->required();
  train->add_option("--out", out_path, "Model file (default: model= from the config)");
  train->callback([&] { action = [&] { return cmd_train(ctx, a, out_path); }; });

  auto* cv = app.add_subcommand("cv", "k-fold cross-validation");
  cv->add_option("config", a)->required();
  cv->add_option("--k", k, "Number of folds (default: cv.k or 10)");
  cv->add_option("--manifest", manifest);
  cv->callback([&] { action = [&] { return cmd_cv(ctx, a, k, manifest); }; });

  auto* grid = app.add_subcommand("gridsearch", "Cross-validated grid search over forest parameters");
  grid->add_option("config", a)->required();
  grid->add_option("--k", k);
  grid->add_option("--out", out_path, "Best-parameters file (default: <config>.best)");
  grid->add_option("--manifest", manifest);
  grid->callback([&] { action = [&] { return cmd_gridsearch(ctx, a, k, out_path, manifest); }; });

  auto* predict = app.add_subcommand("predict", "Label a corpus with a trained model");
  predict->add_option("model", a)->required();
  predict->add_option("corpus", b)->required();
  predict->add_option("--transform", transform, "Feature transform (default: <model>.transform)");
  predict->add_option("--out", out_path, "Predictions TSV (default: stdout)");
  predict->callback([&] { action = [&] { return cmd_predict(ctx, a, b, transform, out_path); }; });

  auto* evaluate = app.add_subcommand("evaluate", "Score a predictions file against a gold corpus");
  evaluate->add_option("gold", a)->required();
  evaluate->add_option("predictions", b)->required();
  evaluate->add_option("--level", level, "Label level (default: inferred from predictions)")->default_str("");
  evaluate->add_option("--external-config", external, "Hyperparameters of the model that produced the predictions");
  evaluate->add_option("--manifest", manifest);
  evaluate->callback([&] {
    action = [&] { return cmd_evaluate(ctx, a, b, evaluate->count("--level") ? level : "", external, manifest); };
  });

  auto* emostats = app.add_subcommand("emostats", "Emotion-lexicon word counts per level-A class");
  emostats->add_option("corpus", a)->required();
  emostats->add_option("lexicon", b)->required();
  emostats->add_option("--basis", basis, "per_1000_posts, per_post or per_1000_tokens");
  emostats->add_option("--out", out_path);
  emostats->add_option("--manifest", manifest);
  emostats->callback([&] { action = [&] { return cmd_emostats(ctx, a, b, basis, out_path, manifest); }; });

  auto* rerun = app.add_subcommand("rerun", "Repeat a recorded run and check its outputs are identical");
  rerun->add_option("manifest", a)->required();
  rerun->callback([&] { action = [&] { return cmd_rerun(ctx, a); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const char* no_color = std::getenv("NO_COLOR");
  ctx.color = &out == &std::cout && isatty(STDOUT_FILENO) && !(no_color && *no_color);

  try {
    return action();
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace offlang
