#include "offlang/corpus.hpp"

#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <unordered_set>

#include "offlang/error.hpp"
#include "text_io.hpp"

namespace offlang {
namespace {

constexpr std::string_view kLabeledHeader = "id\ttweet\tsubtask_a\tsubtask_b\tsubtask_c";
constexpr std::string_view kTextOnlyHeader = "id\ttweet";
constexpr std::string_view kAbsent = "NULL";

template <typename Enum>
std::optional<Enum> parse_label(std::string_view field, std::size_t line,
                                const std::vector<std::string>& names) {
  if (field == kAbsent) return std::nullopt;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == field) return static_cast<Enum>(i);
  }
  if (field.empty()) throw ParseError("empty label field (use NULL for absent labels)", line);
  throw ParseError("unknown label '" + std::string(field) + "'", line);
}

// Empty when the tweet satisfies the hierarchy, else a short reason.
std::string hierarchy_problem(const Tweet& t) {
  if (t.label_b && t.label_a != LabelA::OFF) return "subtask_b label without OFF";
  if (t.label_c && t.label_b != LabelB::TIN) return "subtask_c label without TIN";
  return {};
}

}  // namespace

std::string_view to_string(Level level) {
  switch (level) {
    case Level::A: return "A";
    case Level::B: return "B";
    case Level::C: return "C";
  }
  return "?";
}

std::string_view to_string(LabelA label) { return level_classes(Level::A)[static_cast<int>(label)]; }
std::string_view to_string(LabelB label) { return level_classes(Level::B)[static_cast<int>(label)]; }
std::string_view to_string(LabelC label) { return level_classes(Level::C)[static_cast<int>(label)]; }

Level parse_level(std::string_view text) {
  if (text == "A" || text == "a") return Level::A;
  if (text == "B" || text == "b") return Level::B;
  if (text == "C" || text == "c") return Level::C;
  throw ValidationError("unknown level '" + std::string(text) + "' (expected A, B or C)");
}

const std::vector<std::string>& level_classes(Level level) {
  static const std::vector<std::string> a{"NOT", "OFF"};
  static const std::vector<std::string> b{"TIN", "UNT"};
  static const std::vector<std::string> c{"IND", "GRP", "OTH"};
  switch (level) {
    case Level::A: return a;
    case Level::B: return b;
    case Level::C: return c;
  }
  return a;
}

std::optional<Level> level_of(std::string_view label) {
  for (Level level : {Level::A, Level::B, Level::C}) {
    for (const auto& name : level_classes(level)) {
      if (name == label) return level;
    }
  }
  return std::nullopt;
}

std::optional<std::string_view> Tweet::label(Level level) const {
  switch (level) {
    case Level::A:
      if (label_a) return to_string(*label_a);
      break;
    case Level::B:
      if (label_b) return to_string(*label_b);
      break;
    case Level::C:
      if (label_c) return to_string(*label_c);
      break;
  }
  return std::nullopt;
}

void Tweet::assign(std::string_view label_name) {
  const auto level = level_of(label_name);
  if (!level) throw ValidationError("unknown label '" + std::string(label_name) + "'");
  const auto& names = level_classes(*level);
  std::size_t index = 0;
  while (names[index] != label_name) ++index;
  switch (*level) {
    case Level::A:
      label_a = static_cast<LabelA>(index);
      if (label_a == LabelA::NOT) {
        label_b.reset();
        label_c.reset();
      }
      break;
    case Level::B:
      label_a = LabelA::OFF;
      label_b = static_cast<LabelB>(index);
      if (label_b == LabelB::UNT) label_c.reset();
      break;
    case Level::C:
      label_a = LabelA::OFF;
      label_b = LabelB::TIN;
      label_c = static_cast<LabelC>(index);
      break;
  }
}

std::string_view to_string(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::dev: return "dev";
    case Split::test: return "test";
    case Split::pool: return "pool";
  }
  return "?";
}

Split parse_split(std::string_view text) {
  for (Split s : {Split::train, Split::dev, Split::test, Split::pool}) {
    if (to_string(s) == text) return s;
  }
  throw ValidationError("unknown split '" + std::string(text) + "'");
}

Corpus load_corpus(std::istream& source, Schema schema) {
  const std::string_view header = schema == Schema::olid_labeled ? kLabeledHeader : kTextOnlyHeader;
  const std::size_t columns = schema == Schema::olid_labeled ? 5 : 2;

  Corpus corpus;
  corpus.schema = schema;
  std::string line;
  if (!detail::read_line(source, line)) throw ParseError("missing header row", 1);
  if (line != header) throw ParseError("unexpected header '" + line + "'", 1);

  std::size_t line_no = 1;
  while (detail::read_line(source, line)) {
    ++line_no;
    const auto fields = detail::split(line, '\t');
    if (fields.size() != columns) {
      throw ParseError("expected " + std::to_string(columns) + " columns, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    Tweet t;
    t.id = std::string(fields[0]);
    t.text = std::string(fields[1]);
    if (t.id.empty()) throw ParseError("empty id", line_no);
    if (t.text.empty()) throw ParseError("empty tweet text", line_no);
    if (schema == Schema::olid_labeled) {
      t.label_a = parse_label<LabelA>(fields[2], line_no, level_classes(Level::A));
      t.label_b = parse_label<LabelB>(fields[3], line_no, level_classes(Level::B));
      t.label_c = parse_label<LabelC>(fields[4], line_no, level_classes(Level::C));
    }
    corpus.tweets.push_back(std::move(t));
  }
  if (source.bad()) throw IoError("read error while loading corpus");
  validate(corpus);
  return corpus;
}

Corpus load_corpus_auto(std::istream& source) {
  std::string first;
  if (!detail::read_line(source, first)) throw ParseError("missing header row", 1);
  Schema schema;
  if (first == kLabeledHeader) {
    schema = Schema::olid_labeled;
  } else if (first == kTextOnlyHeader) {
    schema = Schema::text_only;
  } else {
    throw ParseError("unrecognized header '" + first + "'", 1);
  }
  // Re-prepend the header so load_corpus sees the whole stream.
  std::string remaining{std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>()};
  std::istringstream rest(first + '\n' + remaining);
  return load_corpus(rest, schema);
}

Corpus load_corpus_file(const std::string& path, Schema schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus " + path);
  return load_corpus(in, schema);
}

Corpus load_corpus_file_auto(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus " + path);
  return load_corpus_auto(in);
}

std::string serialize(const Corpus& corpus) {
  std::string out;
  const bool labeled = corpus.schema == Schema::olid_labeled;
  out += labeled ? kLabeledHeader : kTextOnlyHeader;
  out += '\n';
  for (const auto& t : corpus.tweets) {
    out += t.id;
    out += '\t';
    out += t.text;
    if (labeled) {
      for (Level level : {Level::A, Level::B, Level::C}) {
        out += '\t';
        out += t.label(level).value_or(kAbsent);
      }
    }
    out += '\n';
  }
  return out;
}

void write_corpus_file(const Corpus& corpus, const std::string& path) {
  detail::write_file(path, serialize(corpus));
}

void validate(const Corpus& corpus) {
  std::unordered_set<std::string_view> seen;
  std::vector<std::string> duplicates;
  std::vector<std::string> violations;
  for (const auto& t : corpus.tweets) {
    if (t.id.empty()) throw ValidationError("tweet with empty id");
    if (t.text.empty()) throw ValidationError("tweet " + t.id + " has empty text");
    if (!seen.insert(t.id).second) duplicates.push_back(t.id);
    if (auto problem = hierarchy_problem(t); !problem.empty()) {
      violations.push_back(t.id + " (" + problem + ")");
    }
  }
  if (!duplicates.empty()) {
    std::string msg = "duplicate id(s):";
    for (const auto& id : duplicates) msg += " " + id;
    throw ValidationError(msg);
  }
  if (!violations.empty()) {
    std::string msg = "label hierarchy violated by:";
    for (const auto& v : violations) msg += " " + v;
    throw ValidationError(msg);
  }
}

WeakLabelMap load_weak_labels(std::istream& source) {
  WeakLabelMap labels;
  std::string line;
  std::size_t line_no = 0;
  while (detail::read_line(source, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = detail::split(line, '\t');
    if (line_no == 1 && fields.size() == 3 && fields[0] == "id") continue;  // optional header
    if (fields.size() != 3) {
      throw ParseError("expected 3 columns (id, confidence, std), found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    WeakLabel w;
    w.id = std::string(fields[0]);
    if (w.id.empty()) throw ParseError("empty id", line_no);
    if (!detail::parse_double(fields[1], w.confidence)) throw ParseError("bad confidence", line_no);
    if (!detail::parse_double(fields[2], w.std)) throw ParseError("bad std", line_no);
    if (w.confidence < 0.0 || w.confidence > 1.0) {
      throw ValidationError("line " + std::to_string(line_no) + ": confidence " +
                            std::string(fields[1]) + " of id " + w.id + " outside [0,1]");
    }
    if (w.std < 0.0) {
      throw ValidationError("line " + std::to_string(line_no) + ": negative std for id " + w.id);
    }
    if (labels.contains(w.id)) {
      throw ValidationError("line " + std::to_string(line_no) + ": duplicate id " + w.id);
    }
    labels.emplace(w.id, std::move(w));
  }
  return labels;
}

WeakLabelMap load_weak_labels_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open weak labels " + path);
  return load_weak_labels(in);
}

std::map<std::string, std::size_t> class_distribution(const Corpus& corpus, Level level) {
  std::map<std::string, std::size_t> counts;
  for (const auto& name : level_classes(level)) counts[name] = 0;
  for (const auto& t : corpus.tweets) {
    if (auto label = t.label(level)) ++counts[std::string(*label)];
  }
  return counts;
}

std::size_t unlabeled_count(const Corpus& corpus, Level level) {
  std::size_t n = 0;
  for (const auto& t : corpus.tweets) {
    if (!t.label(level)) ++n;
  }
  return n;
}

}  // namespace offlang
