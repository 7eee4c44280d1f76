#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "offlang/config.hpp"
#include "offlang/corpus.hpp"

namespace offlang {

struct BalancePlan {
  std::map<std::string, std::size_t> additions;  // label -> pool tweets to add
  std::size_t target_per_class = 0;
  std::map<std::string, std::size_t> class_targets;  // per-class overrides
  std::uint64_t seed = 0;
  Level level = Level::C;

  std::size_t target_for(const std::string& label) const;

  // Throws ValidationError on a zero target or labels outside `level`.
  void validate() const;
};

// Keys: target_per_class, seed, level, add.<LABEL>, target.<LABEL>.
BalancePlan parse_balance_plan(const Config& cfg);

struct Selected {
  Tweet tweet;
  WeakLabel weak;
};

// The n pool tweets labelled `label` (at the label's level) with the highest
// confidence; ties go to lower std, then to the lexicographically smaller id.
// Throws ValidationError when fewer than n qualify or a candidate has no weak
// label.
std::vector<Selected> select_top_confident(const Corpus& pool, const WeakLabelMap& weak, const std::string& label,
                                           std::size_t n);

struct OversampleResult {
  Corpus corpus;
  std::vector<std::pair<std::string, std::string>> duplicate_of;  // new id -> original id
};

// Tops every class below its target up with uniform draws (with replacement)
// from that class's originals. Classes at or above target are untouched.
// Output is the originals in order, then the duplicates grouped by class in
// level order. Duplicates get ids `<orig>_dup<k>`, made unique within the
// corpus.
OversampleResult oversample(const Corpus& corpus, const std::map<std::string, std::size_t>& targets, Level level,
                            std::uint64_t seed);
OversampleResult oversample(const Corpus& corpus, std::size_t target_per_class, Level level, std::uint64_t seed);

struct BalanceResult {
  Corpus corpus;
  std::vector<Selected> additions;
  std::vector<std::pair<std::string, std::string>> duplicate_of;
  std::map<std::string, std::size_t> before;
  std::map<std::string, std::size_t> after_additions;
  std::map<std::string, std::size_t> after;
};

// base + selected pool additions, then oversampled to the plan's targets.
BalanceResult apply_plan(const Corpus& base, const Corpus& pool, const WeakLabelMap& weak, const BalancePlan& plan);

// Per-class before / +added / after table.
std::string render_balance_report(const BalanceResult& r, Level level);

}  // namespace offlang
