#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace offlang {

// Levels of the OLID annotation hierarchy.
enum class Level { A, B, C };

enum class LabelA { NOT, OFF };
enum class LabelB { TIN, UNT };
enum class LabelC { IND, GRP, OTH };

std::string_view to_string(Level level);
std::string_view to_string(LabelA label);
std::string_view to_string(LabelB label);
std::string_view to_string(LabelC label);

Level parse_level(std::string_view text);

// Class names of a level in canonical order (NOT,OFF / TIN,UNT / IND,GRP,OTH).
const std::vector<std::string>& level_classes(Level level);

// Level a class name belongs to; nullopt for unknown names.
std::optional<Level> level_of(std::string_view label);

struct Tweet {
  std::string id;
  std::string text;
  std::optional<LabelA> label_a;
  std::optional<LabelB> label_b;
  std::optional<LabelC> label_c;

  // Label name at `level`, nullopt when absent.
  std::optional<std::string_view> label(Level level) const;

  // Sets the label at `level` and fills in the ancestors the hierarchy implies
  // (TIN implies OFF, any level-C label implies OFF/TIN).
  void assign(std::string_view label_name);

  bool operator==(const Tweet&) const = default;
};

enum class Schema { olid_labeled, text_only };
enum class Split { train, dev, test, pool };

std::string_view to_string(Split split);
Split parse_split(std::string_view text);

struct Corpus {
  std::vector<Tweet> tweets;
  std::string language = "und";
  Split split = Split::train;
  Schema schema = Schema::olid_labeled;

  std::size_t size() const noexcept { return tweets.size(); }
  bool empty() const noexcept { return tweets.empty(); }
};

struct WeakLabel {
  std::string id;
  double confidence = 0.0;
  double std = 0.0;
};

using WeakLabelMap = std::map<std::string, WeakLabel>;

// Parses an OLID-style TSV. Throws ParseError for malformed rows and
// ValidationError for duplicate ids or hierarchy violations (all offending ids
// listed in the message).
Corpus load_corpus(std::istream& source, Schema schema);
Corpus load_corpus_file(const std::string& path, Schema schema);

// Like load_corpus but picks the schema from the header row.
Corpus load_corpus_auto(std::istream& source);
Corpus load_corpus_file_auto(const std::string& path);

// Writes the corpus in its schema's TSV layout with LF line endings.
std::string serialize(const Corpus& corpus);
void write_corpus_file(const Corpus& corpus, const std::string& path);

// Checks id uniqueness, non-empty fields and the label hierarchy.
void validate(const Corpus& corpus);

WeakLabelMap load_weak_labels(std::istream& source);
WeakLabelMap load_weak_labels_file(const std::string& path);

// Per-label tweet counts at `level`; every class of the level is present
// (zero when unseen). Tweets without a label at the level are skipped.
std::map<std::string, std::size_t> class_distribution(const Corpus& corpus, Level level);

// Number of tweets with no label at `level`.
std::size_t unlabeled_count(const Corpus& corpus, Level level);

}  // namespace offlang
