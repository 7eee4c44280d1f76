#include "offlang/experiment.hpp"

#include <json.hpp>

#include "offlang/error.hpp"
#include "offlang/validation.hpp"
#include "text_io.hpp"

namespace offlang {
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::optional<fs::path> path_key(const Config& cfg, std::string_view key, const fs::path& base) {
  const auto v = cfg.get(key);
  if (!v || v->empty()) return std::nullopt;
  fs::path p(*v);
  if (p.is_relative()) p = base / p;
  if (!fs::exists(p)) throw IoError(std::string(key) + ": file not found: " + p.string());
  return p;
}

std::optional<std::uint32_t> parse_depth(std::string_view key, std::string_view text) {
  if (text == "none") return std::nullopt;
  long long d = 0;
  if (!detail::parse_int(text, d) || d < 1) {
    throw ValidationError(std::string(key) + " must be 'none' or a positive integer, got '" + std::string(text) + "'");
  }
  return static_cast<std::uint32_t>(d);
}

std::uint32_t parse_positive(std::string_view key, std::string_view text) {
  long long n = 0;
  if (!detail::parse_int(text, n) || n < 1 || n > 0xFFFFFFFFLL) {
    throw ValidationError(std::string(key) + " must be a positive integer, got '" + std::string(text) + "'");
  }
  return static_cast<std::uint32_t>(n);
}

std::vector<std::string> list(const std::string& text) {
  std::vector<std::string> out;
  for (auto part : detail::split(text, ',')) {
    const auto t = detail::trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

}  // namespace

ExternalModelRecord ExternalModelRecord::nordic_bert_danish() {
  ExternalModelRecord r;
  r.model = "Nordic BERT (Danish, sub-task A)";
  r.batch_train = 32;
  r.batch_val = 16;
  r.batch_test = 16;
  return r;
}

ExternalModelRecord ExternalModelRecord::bert_subtask_c() {
  ExternalModelRecord r;
  r.model = "BERT (English, sub-task C)";
  r.batch_train = 32;
  r.batch_val = 16;
  r.batch_test = 8;
  return r;
}

ExternalModelRecord ExternalModelRecord::from_config(const Config& cfg) {
  cfg.reject_unknown({"model", "preset", "max_seq_len", "batch_train", "batch_val", "batch_test", "learning_rate",
                      "epochs", "notes"});
  ExternalModelRecord r;
  if (const auto preset = cfg.get("preset")) {
    if (*preset == "nordic_bert_danish") {
      r = nordic_bert_danish();
    } else if (*preset == "bert_subtask_c") {
      r = bert_subtask_c();
    } else {
      throw ValidationError("unknown external model preset '" + *preset + "'");
    }
  }
  r.model = cfg.get_or("model", r.model);
  if (r.model.empty()) throw ValidationError("external model record needs a model name");
  auto u32 = [&](std::string_view key, std::uint32_t& out) {
    if (const auto v = cfg.get(key)) out = parse_positive(key, *v);
  };
  u32("max_seq_len", r.max_seq_len);
  u32("batch_train", r.batch_train);
  u32("batch_val", r.batch_val);
  u32("batch_test", r.batch_test);
  u32("epochs", r.epochs);
  if (const auto lr = cfg.get_double("learning_rate")) {
    if (*lr <= 0.0) throw ValidationError("learning_rate must be positive");
    r.learning_rate = *lr;
  }
  r.notes = cfg.get_or("notes", r.notes);
  return r;
}

PrepConfig parse_prep_config(const Config& cfg, PrepConfig p) {
  auto flag = [&](const char* key, bool& out) {
    if (const auto v = cfg.get_bool(std::string("prep.") + key)) out = *v;
  };
  flag("lowercase", p.lowercase);
  flag("strip_punct", p.strip_punct);
  flag("reduce_elongation", p.reduce_elongation);
  flag("split_hashtags", p.split_hashtags);
  flag("remove_stopwords", p.remove_stopwords);
  flag("remove_mentions", p.remove_mentions);
  flag("stem", p.stem);
  flag("tweet_tokenize", p.tweet_tokenize);
  if (const auto v = cfg.get("prep.emoji_mode")) {
    if (*v == "remove_and_score") {
      p.emoji_mode = EmojiMode::remove_and_score;
    } else if (*v == "keep") {
      p.emoji_mode = EmojiMode::keep;
    } else {
      throw ValidationError("prep.emoji_mode must be remove_and_score or keep");
    }
  }
  if (const auto v = cfg.get("prep.emoji_aggregate")) {
    if (*v == "mean") {
      p.emoji_aggregate = EmojiAggregate::mean;
    } else if (*v == "sum") {
      p.emoji_aggregate = EmojiAggregate::sum;
    } else {
      throw ValidationError("prep.emoji_aggregate must be mean or sum");
    }
  }
  p.language = cfg.get_or("prep.language", p.language);
  return p;
}

ForestParams parse_forest_params(const Config& cfg, std::string_view prefix, ForestParams p) {
  const std::string head = std::string(prefix) + ".";
  if (const auto v = cfg.get(head + "n_trees")) p.n_trees = parse_positive(head + "n_trees", *v);
  if (const auto v = cfg.get(head + "max_depth")) p.max_depth = parse_depth(head + "max_depth", *v);
  if (const auto v = cfg.get(head + "min_samples_leaf")) p.min_samples_leaf = parse_positive(head + "min_samples_leaf", *v);
  if (const auto v = cfg.get(head + "max_features")) p.max_features = MaxFeatures::parse(*v);
  if (const auto v = cfg.get_bool(head + "bootstrap")) p.bootstrap = *v;
  p.validate();
  return p;
}

std::string forest_params_config(const ForestParams& p) {
  std::string out;
  out += "forest.n_trees=" + std::to_string(p.n_trees) + "\n";
  out += "forest.max_depth=" + (p.max_depth ? std::to_string(*p.max_depth) : std::string("none")) + "\n";
  out += "forest.min_samples_leaf=" + std::to_string(p.min_samples_leaf) + "\n";
  out += "forest.max_features=" + p.max_features.to_string() + "\n";
  out += std::string("forest.bootstrap=") + (p.bootstrap ? "true" : "false") + "\n";
  return out;
}

std::vector<ForestParams> parse_grid(const Config& cfg, const ForestParams& base) {
  const auto section = cfg.section("grid");
  if (section.empty()) {
    auto grid = default_grid(base.seed);
    for (auto& p : grid) {
      p.max_features = base.max_features;
      p.bootstrap = base.bootstrap;
    }
    return grid;
  }
  for (const auto& [key, value] : section) {
    if (key != "n_trees" && key != "max_depth" && key != "min_samples_leaf" && key != "max_features") {
      throw ValidationError("unknown grid key 'grid." + key + "'");
    }
  }
  auto values = [&](const char* key, std::string fallback) {
    const auto it = section.find(key);
    return list(it == section.end() ? fallback : it->second);
  };
  const auto trees = values("n_trees", std::to_string(base.n_trees));
  const auto depths = values("max_depth", base.max_depth ? std::to_string(*base.max_depth) : "none");
  const auto leaves = values("min_samples_leaf", std::to_string(base.min_samples_leaf));
  const auto feats = values("max_features", base.max_features.to_string());

  std::vector<ForestParams> grid;
  for (const auto& t : trees) {
    for (const auto& d : depths) {
      for (const auto& l : leaves) {
        for (const auto& f : feats) {
          ForestParams p = base;
          p.n_trees = parse_positive("grid.n_trees", t);
          p.max_depth = parse_depth("grid.max_depth", d);
          p.min_samples_leaf = parse_positive("grid.min_samples_leaf", l);
          p.max_features = MaxFeatures::parse(f);
          p.validate();
          grid.push_back(p);
        }
      }
    }
  }
  return grid;
}

ExperimentConfig ExperimentConfig::from_config(const Config& cfg, const fs::path& base_dir) {
  cfg.reject_unknown({"corpus", "stoplist", "abusive_lexicon", "emoji_lexicon", "model", "level", "seed", "prep.",
                      "features.", "forest.", "grid.", "cv."});
  ExperimentConfig e;
  e.raw = cfg;
  const auto seed = cfg.get_u64("seed");
  if (!seed) throw ValidationError("config must set seed");
  e.seed = *seed;
  if (const auto level = cfg.get("level")) e.level = parse_level(*level);

  const auto corpus = path_key(cfg, "corpus", base_dir);
  if (!corpus) throw ValidationError("config must set corpus");
  e.corpus = *corpus;
  e.stoplist = path_key(cfg, "stoplist", base_dir);
  e.abusive_lexicon = path_key(cfg, "abusive_lexicon", base_dir);
  e.emoji_lexicon = path_key(cfg, "emoji_lexicon", base_dir);
  if (const auto m = cfg.get("model"); m && !m->empty()) {
    e.model = fs::path(*m).is_relative() ? base_dir / *m : fs::path(*m);
  }

  e.prep = parse_prep_config(cfg);
  if (e.prep.remove_stopwords && !e.stoplist) {
    throw IoError("prep.remove_stopwords is on but no stoplist file is configured");
  }
  if (const auto v = cfg.get_int("features.min_df")) {
    if (*v < 1) throw ValidationError("features.min_df must be at least 1");
    e.features.min_df = static_cast<std::uint32_t>(*v);
  }
  if (const auto v = cfg.get_int("features.ngram_max")) {
    if (*v < 1) throw ValidationError("features.ngram_max must be at least 1");
    e.features.ngram_max = static_cast<std::size_t>(*v);
  }
  for (const auto& [key, value] : cfg.section("features")) {
    if (key != "min_df" && key != "ngram_max") throw ValidationError("unknown config key 'features." + key + "'");
  }

  ForestParams base;
  base.seed = e.seed;
  e.forest = parse_forest_params(cfg, "forest", base);
  e.grid = parse_grid(cfg, e.forest);
  if (const auto k = cfg.get_int("cv.k")) {
    if (*k < 2) throw ValidationError("cv.k must be at least 2");
    e.cv_k = static_cast<std::size_t>(*k);
  }
  return e;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
  return from_config(Config::parse_file(path.string()), path.parent_path());
}

std::vector<fs::path> ExperimentConfig::input_files() const {
  std::vector<fs::path> out{corpus};
  for (const auto& p : {stoplist, abusive_lexicon, emoji_lexicon}) {
    if (p) out.push_back(*p);
  }
  return out;
}

Featurizer make_featurizer(const ExperimentConfig& exp) {
  WordSet stoplist;
  if (exp.stoplist && exp.prep.remove_stopwords) stoplist = load_word_list_file(exp.stoplist->string());
  WordSet abusive;
  if (exp.abusive_lexicon) abusive = load_word_list_file(exp.abusive_lexicon->string());
  EmojiSentimentLexicon emoji;
  if (exp.emoji_lexicon) emoji = load_emoji_lexicon_file(exp.emoji_lexicon->string());
  return Featurizer(Preprocessor(exp.prep, std::move(stoplist), std::move(emoji)), std::move(abusive), exp.features);
}

LabeledTexts labeled_texts(const Corpus& corpus, Level level) {
  LabeledTexts out;
  for (const auto& t : corpus.tweets) {
    const auto label = t.label(level);
    if (!label) {
      ++out.skipped;
      continue;
    }
    out.ids.push_back(t.id);
    out.texts.push_back(t.text);
    out.labels.emplace_back(*label);
  }
  return out;
}

std::string save_transform(const Featurizer& f) {
  const auto& prep = f.preprocessor().config();
  json doc;
  doc["format"] = "offlang-transform";
  doc["version"] = 1;
  doc["prep"] = {{"lowercase", prep.lowercase},
                 {"strip_punct", prep.strip_punct},
                 {"reduce_elongation", prep.reduce_elongation},
                 {"split_hashtags", prep.split_hashtags},
                 {"remove_stopwords", prep.remove_stopwords},
                 {"remove_mentions", prep.remove_mentions},
                 {"stem", prep.stem},
                 {"tweet_tokenize", prep.tweet_tokenize},
                 {"emoji_mode", prep.emoji_mode == EmojiMode::keep ? "keep" : "remove_and_score"},
                 {"emoji_aggregate", prep.emoji_aggregate == EmojiAggregate::sum ? "sum" : "mean"},
                 {"language", prep.language}};
  doc["features"] = {{"min_df", f.params().min_df}, {"ngram_max", f.params().ngram_max}};
  doc["stoplist"] = json::array();
  for (const auto& w : f.preprocessor().stoplist()) doc["stoplist"].push_back(w);
  doc["abusive_lexicon"] = json::array();
  for (const auto& w : f.abusive_lexicon()) doc["abusive_lexicon"].push_back(w);
  doc["emoji_lexicon"] = json::array();
  for (const auto& [e, s] : f.preprocessor().emoji_lexicon().entries()) doc["emoji_lexicon"].push_back({e, s});
  const auto& v = f.vocabulary();
  doc["vocabulary"] = {{"n_docs", v.n_docs()}, {"terms", v.terms()}, {"df", v.document_frequencies()}};
  return doc.dump() + "\n";
}

Featurizer load_transform(std::string_view json_text) {
  try {
    const auto doc = json::parse(json_text);
    if (doc.at("format") != "offlang-transform" || doc.at("version") != 1) {
      throw ValidationError("unsupported transform file");
    }
    const auto& p = doc.at("prep");
    PrepConfig prep;
    prep.lowercase = p.at("lowercase");
    prep.strip_punct = p.at("strip_punct");
    prep.reduce_elongation = p.at("reduce_elongation");
    prep.split_hashtags = p.at("split_hashtags");
    prep.remove_stopwords = p.at("remove_stopwords");
    prep.remove_mentions = p.value("remove_mentions", false);
    prep.stem = p.at("stem");
    prep.tweet_tokenize = p.at("tweet_tokenize");
    prep.emoji_mode = p.at("emoji_mode") == "keep" ? EmojiMode::keep : EmojiMode::remove_and_score;
    prep.emoji_aggregate = p.at("emoji_aggregate") == "sum" ? EmojiAggregate::sum : EmojiAggregate::mean;
    prep.language = p.at("language");

    FeatureParams fp;
    fp.min_df = doc.at("features").at("min_df");
    fp.ngram_max = doc.at("features").at("ngram_max");

    WordSet stoplist, abusive;
    for (const auto& w : doc.at("stoplist")) stoplist.insert(w.get<std::string>());
    for (const auto& w : doc.at("abusive_lexicon")) abusive.insert(w.get<std::string>());
    EmojiSentimentLexicon emoji;
    for (const auto& e : doc.at("emoji_lexicon")) emoji.add(e.at(0).get<std::string>(), e.at(1).get<double>());

    const auto& v = doc.at("vocabulary");
    Featurizer f(Preprocessor(prep, std::move(stoplist), std::move(emoji)), std::move(abusive), fp);
    f.set_vocabulary(Vocabulary(v.at("terms").get<std::vector<std::string>>(),
                                v.at("df").get<std::vector<std::uint32_t>>(), v.at("n_docs").get<std::uint32_t>()));
    return f;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed transform file: ") + e.what());
  }
}

}  // namespace offlang
