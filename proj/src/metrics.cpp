#include "offlang/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "offlang/error.hpp"

namespace offlang {
namespace {

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

std::size_t class_index(const std::vector<std::string>& classes, const std::string& label) {
  const auto it = std::find(classes.begin(), classes.end(), label);
  if (it == classes.end()) throw ContractError("label '" + label + "' is not in the class list");
  return static_cast<std::size_t>(it - classes.begin());
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> classes)
    : classes_(std::move(classes)), counts_(classes_.size(), std::vector<std::uint64_t>(classes_.size(), 0)) {
  if (classes_.empty()) throw ContractError("confusion matrix needs at least one class");
}

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> classes, std::vector<std::vector<std::uint64_t>> counts)
    : classes_(std::move(classes)), counts_(std::move(counts)) {
  if (classes_.empty()) throw ContractError("confusion matrix needs at least one class");
  if (counts_.size() != classes_.size()) throw ContractError("confusion matrix must be square");
  for (const auto& row : counts_) {
    if (row.size() != classes_.size()) throw ContractError("confusion matrix must be square");
  }
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t n = 0;
  for (const auto& row : counts_) {
    for (auto c : row) n += c;
  }
  return n;
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) n += counts_[i][i];
  return n;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t truth) const {
  std::uint64_t n = 0;
  for (auto c : counts_.at(truth)) n += c;
  return n;
}

std::uint64_t ConfusionMatrix::column_sum(std::size_t predicted) const {
  std::uint64_t n = 0;
  for (const auto& row : counts_) n += row.at(predicted);
  return n;
}

ConfusionMatrix confusion(std::span<const std::string> y_true, std::span<const std::string> y_pred,
                          const std::vector<std::string>& classes) {
  if (y_true.size() != y_pred.size()) {
    throw ContractError("y_true has " + std::to_string(y_true.size()) + " labels but y_pred has " +
                        std::to_string(y_pred.size()));
  }
  if (y_true.empty()) throw ContractError("cannot build a confusion matrix from zero items");
  ConfusionMatrix m(classes);
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    m.add(class_index(classes, y_true[i]), class_index(classes, y_pred[i]));
  }
  return m;
}

ConfusionMatrix confusion(std::span<const std::uint32_t> y_true, std::span<const std::uint32_t> y_pred,
                          const std::vector<std::string>& classes) {
  if (y_true.size() != y_pred.size()) throw ContractError("y_true/y_pred length mismatch");
  if (y_true.empty()) throw ContractError("cannot build a confusion matrix from zero items");
  ConfusionMatrix m(classes);
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] >= classes.size() || y_pred[i] >= classes.size()) throw ContractError("class index out of range");
    m.add(y_true[i], y_pred[i]);
  }
  return m;
}

Scores scores(const ConfusionMatrix& m) {
  Scores s;
  const double total = static_cast<double>(m.total());
  s.accuracy = ratio(static_cast<double>(m.trace()), total);
  double f1_sum = 0.0;
  for (std::size_t c = 0; c < m.size(); ++c) {
    ClassScores cs;
    const double tp = static_cast<double>(m.at(c, c));
    cs.support = m.row_sum(c);
    cs.precision = ratio(tp, static_cast<double>(m.column_sum(c)));
    cs.recall = ratio(tp, static_cast<double>(cs.support));
    cs.f1 = ratio(2.0 * cs.precision * cs.recall, cs.precision + cs.recall);
    f1_sum += cs.f1;
    s.per_class.push_back(cs);
  }
  s.macro_f1 = f1_sum / static_cast<double>(m.size());
  return s;
}

double macro_f1(std::span<const std::uint32_t> y_true, std::span<const std::uint32_t> y_pred,
                std::size_t n_classes) {
  std::vector<std::string> names(n_classes);
  for (std::size_t i = 0; i < n_classes; ++i) names[i] = std::to_string(i);
  return scores(confusion(y_true, y_pred, names)).macro_f1;
}

std::vector<std::string> majority_baseline(std::span<const std::string> y_train, std::size_t n_eval,
                                           const std::vector<std::string>& classes) {
  if (y_train.empty()) throw ContractError("majority baseline needs training labels");
  std::vector<std::size_t> counts(classes.size(), 0);
  for (const auto& label : y_train) ++counts[class_index(classes, label)];
  // max_element returns the first maximum, i.e. the lowest class index.
  const auto best = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  return std::vector<std::string>(n_eval, classes[best]);
}

std::string render_confusion(const ConfusionMatrix& m, RenderOptions options) {
  std::size_t width = 5;  // "total"
  for (const auto& c : m.classes()) width = std::max(width, c.size());
  width = std::max(width, fmt::formatted_size("{}", m.total()));

  const char* bold = options.color ? "\x1b[1m" : "";
  const char* reset = options.color ? "\x1b[0m" : "";

  std::string out = fmt::format("{:<{}}", "true\\pred", std::max<std::size_t>(width, 9));
  const std::size_t label_width = std::max<std::size_t>(width, 9);
  for (const auto& c : m.classes()) out += fmt::format(" {:>{}}", c, width);
  out += fmt::format(" {:>{}}\n", "total", width);
  for (std::size_t i = 0; i < m.size(); ++i) {
    out += fmt::format("{:<{}}", m.classes()[i], label_width);
    for (std::size_t j = 0; j < m.size(); ++j) {
      const auto cell = fmt::format("{:>{}}", m.at(i, j), width);
      out += " ";
      out += i == j ? fmt::format("{}{}{}", bold, cell, reset) : cell;
    }
    out += fmt::format(" {:>{}}\n", m.row_sum(i), width);
  }
  out += fmt::format("{:<{}}", "total", label_width);
  for (std::size_t j = 0; j < m.size(); ++j) out += fmt::format(" {:>{}}", m.column_sum(j), width);
  out += fmt::format(" {:>{}}\n", m.total(), width);
  return out;
}

std::string render_scores(const ConfusionMatrix& m, const Scores& s) {
  std::string out = fmt::format("accuracy  {:.4f}\nmacro_f1  {:.4f}\n\n", s.accuracy, s.macro_f1);
  out += fmt::format("{:<8} {:>9} {:>9} {:>9} {:>8}\n", "class", "precision", "recall", "f1", "support");
  for (std::size_t c = 0; c < m.size(); ++c) {
    const auto& cs = s.per_class[c];
    out += fmt::format("{:<8} {:>9.4f} {:>9.4f} {:>9.4f} {:>8}\n", m.classes()[c], cs.precision, cs.recall,
                       cs.f1, cs.support);
  }
  return out;
}

}  // namespace offlang
