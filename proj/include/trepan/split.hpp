#pragma once

#include <cstddef>

#include "trepan/data_types.hpp"

namespace trepan {

/// Binary single-feature test. The true branch is `value == category` for
/// categorical features and `value <= threshold` for numeric ones.
struct Split {
  enum class Test { CategoricalEquals, NumericLE };

  std::size_t feature = 0;
  Test test = Test::CategoricalEquals;
  std::size_t category = 0;
  double threshold = 0.0;

  static Split equals(std::size_t feature, std::size_t category) {
    return {feature, Test::CategoricalEquals, category, 0.0};
  }
  static Split less_equal(std::size_t feature, double threshold) {
    return {feature, Test::NumericLE, 0, threshold};
  }

  bool outcome(const Instance& x) const {
    const double v = x.values[feature];
    return test == Test::CategoricalEquals ? static_cast<std::size_t>(v) == category
                                           : v <= threshold;
  }

  friend bool operator==(const Split&, const Split&) = default;
};

}  // namespace trepan
