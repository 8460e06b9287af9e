#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "trepan/data_types.hpp"
#include "trepan/split.hpp"

namespace trepan {

class FeatureSchema {
 public:
  FeatureSchema() = default;
  /// Validates names, value lists and numeric bounds; throws Error(Data).
  FeatureSchema(std::vector<Feature> features, std::string class_name,
                std::vector<std::string> class_labels);

  const std::vector<Feature>& features() const noexcept { return features_; }
  const Feature& feature(std::size_t i) const { return features_.at(i); }
  std::size_t size() const noexcept { return features_.size(); }
  const std::string& class_name() const noexcept { return class_name_; }
  const std::vector<std::string>& class_labels() const noexcept { return class_labels_; }
  std::size_t class_count() const noexcept { return class_labels_.size(); }

  std::optional<std::size_t> find(std::string_view name) const;
  std::optional<std::size_t> category_index(std::size_t feature, std::string_view value) const;
  std::optional<Label> label_index(std::string_view label) const;
  std::vector<std::string> feature_names() const;

  /// Stable hex digest of the canonical JSON form.
  std::string fingerprint() const;
  std::string to_json() const;

  /// Renders one value of feature `i` the way it appears in CSV files.
  std::string format_value(std::size_t i, double v) const;

 private:
  std::vector<Feature> features_;
  std::string class_name_;
  std::vector<std::string> class_labels_;
};

FeatureSchema parse_schema(std::string_view json_text);
FeatureSchema load_schema(const std::string& path);

struct LabeledDataset {
  FeatureSchema schema;
  std::vector<Instance> instances;
  std::vector<Label> labels;

  std::size_t size() const noexcept { return instances.size(); }
};

/// Minimal RFC-4180 reader: quoted fields, doubled quotes, CRLF.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);
std::string read_file(const std::string& path, const char* what);

/// Parses one cell of feature `i`; throws Error(Data) naming `where` on
/// unparseable, unknown or out-of-range values.
double parse_value(const FeatureSchema& schema, std::size_t i, const std::string& cell,
                   const std::string& where);

LabeledDataset parse_dataset(std::string_view csv_text, const FeatureSchema& schema);
LabeledDataset load_dataset(const std::string& csv_path, const FeatureSchema& schema);

/// Shuffled split; the first returned set holds round((1 - test_fraction) * n) rows.
std::pair<LabeledDataset, LabeledDataset> train_test_split(const LabeledDataset& data,
                                                          double test_fraction,
                                                          std::uint64_t seed);

/// Deterministic stream for (seed, stream id).
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream);

/// Per-feature restriction along a root-to-node path: an allowed-value mask
/// for categorical features and a half-open interval (lo, hi] for numeric ones.
struct FeatureRestriction {
  std::vector<std::uint8_t> allowed;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

class NodeConstraint {
 public:
  NodeConstraint() = default;
  static NodeConstraint unconstrained(const FeatureSchema& schema);

  const FeatureRestriction& operator[](std::size_t i) const { return restrictions_.at(i); }
  FeatureRestriction& operator[](std::size_t i) { return restrictions_.at(i); }
  std::size_t size() const noexcept { return restrictions_.size(); }

  /// Whether feature `i` still admits some value within the schema domain.
  bool satisfiable(const FeatureSchema& schema, std::size_t i) const;
  bool satisfiable(const FeatureSchema& schema) const;
  bool admits(const Instance& x) const;

  /// Effective numeric interval for feature `i`: the restriction clipped to [min, max].
  std::pair<double, double> numeric_bounds(const FeatureSchema& schema, std::size_t i) const;

  friend bool operator==(const NodeConstraint& a, const NodeConstraint& b) {
    if (a.restrictions_.size() != b.restrictions_.size()) return false;
    for (std::size_t i = 0; i < a.restrictions_.size(); ++i) {
      const auto& x = a.restrictions_[i];
      const auto& y = b.restrictions_[i];
      if (x.allowed != y.allowed || x.lo != y.lo || x.hi != y.hi) return false;
    }
    return true;
  }

 private:
  std::vector<FeatureRestriction> restrictions_;
};

/// Conjunction of `parent` with one branch of `split`; throws
/// UnsatisfiableConstraint when the branch admits nothing.
NodeConstraint refine_constraint(const FeatureSchema& schema, const NodeConstraint& parent,
                                 const Split& split, bool branch);

/// Non-throwing variant for callers that prune.
std::optional<NodeConstraint> try_refine_constraint(const FeatureSchema& schema,
                                                    const NodeConstraint& parent,
                                                    const Split& split, bool branch);

struct FeatureMarginal {
  std::vector<double> probabilities;  // categorical, add-one smoothed
  std::vector<double> pool;           // numeric, sorted sample values
  double bandwidth = 0.0;             // numeric Gaussian kernel width
};

class Marginals {
 public:
  const FeatureMarginal& operator[](std::size_t i) const { return features_.at(i); }
  std::size_t size() const noexcept { return features_.size(); }

 private:
  friend Marginals estimate_marginals(const std::vector<const Instance*>& examples,
                                      const FeatureSchema& schema);
  std::vector<FeatureMarginal> features_;
};

/// Empirical per-feature marginals; throws Error(Data) on an empty example set.
Marginals estimate_marginals(const std::vector<const Instance*>& examples,
                             const FeatureSchema& schema);
Marginals estimate_marginals(const std::vector<Instance>& examples, const FeatureSchema& schema);

/// Silverman's rule, floored at 1e-6 * (max - min).
double kernel_bandwidth(std::vector<double> sorted_pool, double min, double max);

/// Redraws of the kernel-perturbed pool value before falling back to a
/// uniform draw inside the interval.
inline constexpr int kMaxNumericAttempts = 1000;

/// Samples each feature independently from its marginal restricted to the
/// constraint. Throws UnsatisfiableConstraint if any feature admits nothing.
Instance draw_instance(const Marginals& marginals, const NodeConstraint& constraint,
                       const FeatureSchema& schema, std::mt19937_64& rng);

}  // namespace trepan
