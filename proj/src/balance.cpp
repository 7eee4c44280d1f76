#include "offlang/balance.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <set>

#include "offlang/error.hpp"
#include "offlang/random.hpp"
#include "text_io.hpp"

namespace offlang {
namespace {

void check_label(const std::string& label, Level level) {
  if (level_of(label) != level) {
    throw ValidationError("label '" + label + "' is not a level " + std::string(to_string(level)) + " class");
  }
}

std::size_t to_count(const std::string& key, const std::string& value) {
  long long n = 0;
  if (!detail::parse_int(value, n)) throw ValidationError("config key '" + key + "' is not an integer: " + value);
  if (n < 0) throw ValidationError("config key '" + key + "' must not be negative");
  return static_cast<std::size_t>(n);
}

}  // namespace

std::size_t BalancePlan::target_for(const std::string& label) const {
  const auto it = class_targets.find(label);
  return it == class_targets.end() ? target_per_class : it->second;
}

void BalancePlan::validate() const {
  if (target_per_class < 1) throw ValidationError("target_per_class must be at least 1");
  for (const auto& [label, n] : additions) check_label(label, level);
  for (const auto& [label, n] : class_targets) {
    check_label(label, level);
    if (n < 1) throw ValidationError("target for " + label + " must be at least 1");
  }
}

BalancePlan parse_balance_plan(const Config& cfg) {
  BalancePlan plan;
  const auto target = cfg.get_int("target_per_class");
  if (!target) throw ValidationError("balance plan needs target_per_class");
  if (*target < 1) throw ValidationError("target_per_class must be at least 1");
  plan.target_per_class = static_cast<std::size_t>(*target);
  const auto seed = cfg.get_u64("seed");
  if (!seed) throw ValidationError("balance plan needs an explicit seed");
  plan.seed = *seed;
  if (const auto level = cfg.get("level")) plan.level = parse_level(*level);
  for (const auto& [label, value] : cfg.section("add")) plan.additions[label] = to_count("add." + label, value);
  for (const auto& [label, value] : cfg.section("target")) plan.class_targets[label] = to_count("target." + label, value);
  plan.validate();
  return plan;
}

std::vector<Selected> select_top_confident(const Corpus& pool, const WeakLabelMap& weak, const std::string& label,
                                           std::size_t n) {
  const auto level = level_of(label);
  if (!level) throw ValidationError("unknown label '" + label + "'");
  std::vector<Selected> candidates;
  std::vector<std::string> missing;
  for (const auto& t : pool.tweets) {
    if (t.label(*level) != label) continue;
    const auto it = weak.find(t.id);
    if (it == weak.end()) {
      missing.push_back(t.id);
      continue;
    }
    candidates.push_back({t, it->second});
  }
  if (!missing.empty()) {
    std::string ids;
    for (const auto& id : missing) ids += (ids.empty() ? "" : ", ") + id;
    throw ValidationError("pool tweets without a weak label: " + ids);
  }
  if (candidates.size() < n) {
    throw ValidationError(fmt::format("requested {} {} tweets from the pool but only {} are available (short by {})", n,
                                      label, candidates.size(), n - candidates.size()));
  }
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(n), candidates.end(),
                    [](const Selected& a, const Selected& b) {
                      if (a.weak.confidence != b.weak.confidence) return a.weak.confidence > b.weak.confidence;
                      if (a.weak.std != b.weak.std) return a.weak.std < b.weak.std;
                      return a.tweet.id < b.tweet.id;
                    });
  candidates.resize(n);
  return candidates;
}

OversampleResult oversample(const Corpus& corpus, const std::map<std::string, std::size_t>& targets, Level level,
                            std::uint64_t seed) {
  const auto& classes = level_classes(level);
  std::map<std::string, std::vector<std::size_t>> members;
  std::vector<std::string> unlabeled;
  for (std::size_t i = 0; i < corpus.tweets.size(); ++i) {
    const auto label = corpus.tweets[i].label(level);
    if (!label) {
      unlabeled.push_back(corpus.tweets[i].id);
      continue;
    }
    members[std::string(*label)].push_back(i);
  }
  if (!unlabeled.empty()) {
    throw ValidationError(fmt::format("{} tweets lack a level {} label (first: {})", unlabeled.size(),
                                      to_string(level), unlabeled.front()));
  }

  OversampleResult out;
  out.corpus = corpus;
  std::set<std::string> ids;
  for (const auto& t : corpus.tweets) ids.insert(t.id);
  std::map<std::string, std::size_t> copies;

  Rng rng(seed);
  for (const auto& cls : classes) {
    const auto it = targets.find(cls);
    const std::size_t target = it == targets.end() ? 0 : it->second;
    const auto& originals = members[cls];
    if (originals.size() >= target) continue;
    if (originals.empty()) throw ValidationError("class " + cls + " has no originals to oversample");
    for (std::size_t k = originals.size(); k < target; ++k) {
      Tweet dup = corpus.tweets[originals[rng.below(originals.size())]];
      const std::string original = dup.id;
      do {
        dup.id = original + "_dup" + std::to_string(++copies[original]);
      } while (!ids.insert(dup.id).second);
      out.duplicate_of.emplace_back(dup.id, original);
      out.corpus.tweets.push_back(std::move(dup));
    }
  }
  return out;
}

OversampleResult oversample(const Corpus& corpus, std::size_t target_per_class, Level level, std::uint64_t seed) {
  std::map<std::string, std::size_t> targets;
  for (const auto& cls : level_classes(level)) targets[cls] = target_per_class;
  return oversample(corpus, targets, level, seed);
}

BalanceResult apply_plan(const Corpus& base, const Corpus& pool, const WeakLabelMap& weak, const BalancePlan& plan) {
  plan.validate();
  BalanceResult r;
  r.before = class_distribution(base, plan.level);

  Corpus merged = base;
  std::set<std::string> ids;
  for (const auto& t : base.tweets) ids.insert(t.id);
  for (const auto& cls : level_classes(plan.level)) {
    const auto it = plan.additions.find(cls);
    if (it == plan.additions.end() || it->second == 0) continue;
    for (auto& s : select_top_confident(pool, weak, cls, it->second)) {
      if (!ids.insert(s.tweet.id).second) throw ValidationError("pool tweet id " + s.tweet.id + " already in base corpus");
      Tweet t = s.tweet;
      t.assign(cls);
      merged.tweets.push_back(t);
      r.additions.push_back(std::move(s));
    }
  }
  r.after_additions = class_distribution(merged, plan.level);

  std::map<std::string, std::size_t> targets;
  for (const auto& cls : level_classes(plan.level)) targets[cls] = plan.target_for(cls);
  auto over = oversample(merged, targets, plan.level, plan.seed);
  r.corpus = std::move(over.corpus);
  r.duplicate_of = std::move(over.duplicate_of);
  r.after = class_distribution(r.corpus, plan.level);
  return r;
}

std::string render_balance_report(const BalanceResult& r, Level level) {
  std::string out = fmt::format("{:<6} {:>8} {:>8} {:>10} {:>8}\n", "class", "before", "added", "duplicated", "after");
  std::size_t totals[4] = {0, 0, 0, 0};
  for (const auto& cls : level_classes(level)) {
    const auto before = r.before.at(cls);
    const auto mid = r.after_additions.at(cls);
    const auto after = r.after.at(cls);
    out += fmt::format("{:<6} {:>8} {:>8} {:>10} {:>8}\n", cls, before, mid - before, after - mid, after);
    totals[0] += before;
    totals[1] += mid - before;
    totals[2] += after - mid;
    totals[3] += after;
  }
  out += fmt::format("{:<6} {:>8} {:>8} {:>10} {:>8}\n", "total", totals[0], totals[1], totals[2], totals[3]);
  return out;
}

}  // namespace offlang
