#pragma once

#include <optional>
#include <string>

#include "trepan/data.hpp"
#include "trepan/distill.hpp"
#include "trepan/oracle.hpp"

namespace trepan {

enum class SizeCategory { Small, Medium, Large, Oversize };

std::string to_string(SizeCategory c);

/// Fraction of `test` classified correctly. Throws on an empty set or a
/// schema mismatch.
double accuracy(const DecisionTree& tree, const LabeledDataset& test);

/// Fraction of `test` on which tree and oracle agree; true labels are unused.
double fidelity(const DecisionTree& tree, const Oracle& oracle, const LabeledDataset& test);

inline constexpr double kComplexityCoefficient = 5.0;

/// alpha * n / k + (1 - alpha) * b / k^2 with n leaves and b the sum of leaf depths.
double syntactic_complexity(std::size_t n_leaves, std::size_t b_total, double alpha);
double syntactic_complexity(const DecisionTree& tree, double alpha);

SizeCategory size_category(std::size_t n_internal);
SizeCategory size_category(const DecisionTree& tree);

struct MetricsReport {
  double accuracy = 0.0;
  std::optional<double> fidelity;
  double syntactic_complexity = 0.0;
  SizeCategory size_category = SizeCategory::Small;
  std::size_t n_leaves = 0;
  std::size_t n_internal = 0;
  std::size_t b_total = 0;
  double alpha = 0.5;

  /// `key: value` lines.
  std::string to_text() const;
  std::string to_json() const;
};

MetricsReport evaluate(const DecisionTree& tree, const LabeledDataset& test, const Oracle* oracle,
                       double alpha = 0.5);

}  // namespace trepan
