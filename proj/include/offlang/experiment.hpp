#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "offlang/config.hpp"
#include "offlang/corpus.hpp"
#include "offlang/features.hpp"
#include "offlang/forest.hpp"

namespace offlang {

// Hyperparameters of a transformer run made outside this tool. Recorded in
// manifests for provenance only.
struct ExternalModelRecord {
  std::string model;
  std::uint32_t max_seq_len = 128;
  std::uint32_t batch_train = 32;
  std::uint32_t batch_val = 16;
  std::uint32_t batch_test = 16;
  double learning_rate = 2e-5;
  std::uint32_t epochs = 4;
  std::string notes;

  static ExternalModelRecord nordic_bert_danish();
  static ExternalModelRecord bert_subtask_c();

  // Keys: model, preset, max_seq_len, batch_train, batch_val, batch_test,
  // learning_rate, epochs, notes. A preset fills defaults the other keys
  // override.
  static ExternalModelRecord from_config(const Config& cfg);
};

// Everything `train`, `cv` and `gridsearch` read from a config file. Relative
// paths resolve against the config file's directory.
struct ExperimentConfig {
  std::filesystem::path corpus;
  std::optional<std::filesystem::path> stoplist;
  std::optional<std::filesystem::path> abusive_lexicon;
  std::optional<std::filesystem::path> emoji_lexicon;
  std::optional<std::filesystem::path> model;

  Level level = Level::A;
  PrepConfig prep;
  FeatureParams features;
  ForestParams forest;
  std::vector<ForestParams> grid;
  std::size_t cv_k = 10;
  std::uint64_t seed = 0;

  Config raw;

  // Throws ValidationError for bad values and IoError for missing files.
  static ExperimentConfig from_config(const Config& cfg, const std::filesystem::path& base_dir);
  static ExperimentConfig load(const std::filesystem::path& path);

  std::vector<std::filesystem::path> input_files() const;
};

// Keys shared by experiment configs, e.g. forest.n_trees or prep.stem.
PrepConfig parse_prep_config(const Config& cfg, PrepConfig defaults = {});
ForestParams parse_forest_params(const Config& cfg, std::string_view prefix, ForestParams defaults = {});
std::string forest_params_config(const ForestParams& p);

// Cartesian product of grid.n_trees, grid.max_depth, grid.min_samples_leaf,
// grid.max_features (comma lists). No grid keys at all gives default_grid().
std::vector<ForestParams> parse_grid(const Config& cfg, const ForestParams& base);

Featurizer make_featurizer(const ExperimentConfig& exp);

// Tweets labelled at `level` and their labels.
struct LabeledTexts {
  std::vector<std::string> ids;
  std::vector<std::string> texts;
  std::vector<std::string> labels;
  std::size_t skipped = 0;
};
LabeledTexts labeled_texts(const Corpus& corpus, Level level);

// JSON snapshot of a fitted featurizer: preprocessing switches, lexicons,
// stoplist and vocabulary.
std::string save_transform(const Featurizer& f);
Featurizer load_transform(std::string_view json_text);

}  // namespace offlang
