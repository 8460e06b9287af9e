#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace trepan {

enum class FeatureKind { Categorical, Numeric };

struct Feature {
  std::string name;
  FeatureKind kind = FeatureKind::Numeric;
  std::vector<std::string> values;  // categorical only
  double min = 0.0;                 // numeric only
  double max = 1.0;

  bool categorical() const noexcept { return kind == FeatureKind::Categorical; }
};

/// A feature vector aligned with its schema. Categorical entries hold the
/// index of the value in the feature's value list; numeric entries hold the
/// raw number.
struct Instance {
  std::vector<double> values;

  friend bool operator==(const Instance&, const Instance&) = default;
  friend auto operator<=>(const Instance&, const Instance&) = default;
};

/// Class labels are indices into FeatureSchema::class_labels.
using Label = std::size_t;

}  // namespace trepan
