#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace offlang {

// Rows are true classes, columns predicted classes, both in `classes` order.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::vector<std::string> classes);
  ConfusionMatrix(std::vector<std::string> classes, std::vector<std::vector<std::uint64_t>> counts);

  const std::vector<std::string>& classes() const noexcept { return classes_; }
  const std::vector<std::vector<std::uint64_t>>& counts() const noexcept { return counts_; }
  std::size_t size() const noexcept { return classes_.size(); }
  std::uint64_t at(std::size_t truth, std::size_t predicted) const { return counts_.at(truth).at(predicted); }
  void add(std::size_t truth, std::size_t predicted, std::uint64_t n = 1) { counts_.at(truth).at(predicted) += n; }

  std::uint64_t total() const;
  std::uint64_t trace() const;
  std::uint64_t row_sum(std::size_t truth) const;
  std::uint64_t column_sum(std::size_t predicted) const;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::vector<std::string> classes_;
  std::vector<std::vector<std::uint64_t>> counts_;
};

// Throws ContractError on length mismatch, empty input or labels outside
// `classes`.
ConfusionMatrix confusion(std::span<const std::string> y_true, std::span<const std::string> y_pred,
                          const std::vector<std::string>& classes);
ConfusionMatrix confusion(std::span<const std::uint32_t> y_true, std::span<const std::uint32_t> y_pred,
                          const std::vector<std::string>& classes);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;
};

struct Scores {
  double accuracy = 0.0;
  std::vector<ClassScores> per_class;  // in matrix class order
  double macro_f1 = 0.0;
};

// Any 0/0 ratio counts as 0. Macro-F1 averages over every declared class,
// including classes with no true instances.
Scores scores(const ConfusionMatrix& m);

double macro_f1(std::span<const std::uint32_t> y_true, std::span<const std::uint32_t> y_pred,
                std::size_t n_classes);

// Predicts the most frequent training class for every evaluation item; ties
// go to the class listed first in `classes`.
std::vector<std::string> majority_baseline(std::span<const std::string> y_train, std::size_t n_eval,
                                           const std::vector<std::string>& classes);

struct RenderOptions {
  bool color = false;
};

// Aligned grid with a header row of predicted classes, row and column sums.
std::string render_confusion(const ConfusionMatrix& m, RenderOptions options = {});

// Accuracy, per-class precision/recall/F1 and macro-F1 as a text report.
std::string render_scores(const ConfusionMatrix& m, const Scores& s);

}  // namespace offlang
