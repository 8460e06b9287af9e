#include <algorithm>
#include <cmath>

#include "trepan/distill.hpp"
#include "trepan/error.hpp"

namespace trepan {

std::vector<std::size_t> class_counts(const std::vector<Label>& labels, std::size_t classes) {
  std::vector<std::size_t> counts(classes, 0);
  for (Label y : labels) ++counts.at(y);
  return counts;
}

double entropy_bits(const std::vector<std::size_t>& counts) {
  std::size_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) return 0.0;
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h / std::log(2.0);
}

double gain_from_counts(const std::vector<std::size_t>& parent,
                        const std::vector<std::size_t>& true_branch) {
  std::vector<std::size_t> false_branch(parent.size());
  std::size_t n = 0, nt = 0;
  for (std::size_t k = 0; k < parent.size(); ++k) {
    false_branch[k] = parent[k] - true_branch[k];
    n += parent[k];
    nt += true_branch[k];
  }
  if (n == 0) return 0.0;
  const double wt = static_cast<double>(nt) / static_cast<double>(n);
  const double wf = static_cast<double>(n - nt) / static_cast<double>(n);
  const double g = entropy_bits(parent) - wt * entropy_bits(true_branch) - wf * entropy_bits(false_branch);
  return g > 0.0 ? g : 0.0;
}

std::vector<Split> candidate_splits(const std::vector<Instance>& examples, const FeatureSchema& schema,
                                    const NodeConstraint& constraint,
                                    std::size_t max_numeric_thresholds) {
  std::vector<Split> out;
  if (examples.empty()) return out;
  const auto both_branches_open = [&](const Split& s) {
    return try_refine_constraint(schema, constraint, s, true).has_value() &&
           try_refine_constraint(schema, constraint, s, false).has_value();
  };

  for (std::size_t f = 0; f < schema.size(); ++f) {
    const auto& feature = schema.feature(f);
    if (feature.categorical()) {
      std::vector<std::uint8_t> present(feature.values.size(), 0);
      for (const auto& x : examples) present[static_cast<std::size_t>(x.values[f])] = 1;
      for (std::size_t v = 0; v < feature.values.size(); ++v) {
        if (!present[v] || !constraint[f].allowed[v]) continue;
        Split s = Split::equals(f, v);
        if (both_branches_open(s)) out.push_back(s);
      }
      continue;
    }

    std::vector<double> values;
    values.reserve(examples.size());
    for (const auto& x : examples) values.push_back(x.values[f]);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (values.size() < 2) continue;
    std::vector<double> mids;
    mids.reserve(values.size() - 1);
    for (std::size_t i = 0; i + 1 < values.size(); ++i) mids.push_back(0.5 * (values[i] + values[i + 1]));

    std::vector<double> chosen;
    const std::size_t m = mids.size();
    const std::size_t cap = std::max<std::size_t>(1, max_numeric_thresholds);
    if (m <= cap) {
      chosen = std::move(mids);
    } else if (cap == 1) {
      chosen.push_back(mids[(m - 1) / 2]);
    } else {
      // Evenly spaced by index, both ends included.
      for (std::size_t i = 0; i < cap; ++i) chosen.push_back(mids[(i * (m - 1) + (cap - 1) / 2) / (cap - 1)]);
    }
    for (double t : chosen) {
      if (!std::isfinite(t) || t < feature.min || t > feature.max) continue;
      Split s = Split::less_equal(f, t);
      if (both_branches_open(s)) out.push_back(s);
    }
  }
  return out;
}

double info_gain(const Split& split, const std::vector<Instance>& examples,
                 const std::vector<Label>& labels, std::size_t classes) {
  std::vector<std::size_t> parent(classes, 0), yes(classes, 0);
  for (std::size_t i = 0; i < examples.size(); ++i) {
    ++parent.at(labels[i]);
    if (split.outcome(examples[i])) ++yes[labels[i]];
  }
  return gain_from_counts(parent, yes);
}

double modified_gain(double gain, double ic) {
  if (ic > 0.0 && ic < 1.0) return (1.0 - ic) * gain;
  return 0.0;
}

double modified_gain(const Split& split, const std::vector<Instance>& examples,
                     const std::vector<Label>& labels, std::size_t classes, double ic) {
  return modified_gain(info_gain(split, examples, labels, classes), ic);
}

ScoredSplit score_node(const std::vector<Instance>& examples, const std::vector<Label>& labels,
                       const FeatureSchema& schema, const NodeConstraint& constraint,
                       SplitMode mode, const std::vector<double>& ic,
                       std::size_t max_numeric_thresholds, bool zero_gain_fallback) {
  if (mode == SplitMode::Reloaded && ic.size() != schema.size()) {
    throw Error(ErrorKind::Internal, "information-content table does not cover the schema");
  }
  const auto candidates = candidate_splits(examples, schema, constraint, max_numeric_thresholds);
  std::vector<double> gains;
  gains.reserve(candidates.size());
  for (const auto& s : candidates) gains.push_back(info_gain(s, examples, labels, schema.class_count()));

  const auto pick = [&](auto score_of) {
    ScoredSplit best;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const double score = score_of(i);
      if (!best.split || score > best.score || (score == best.score && gains[i] > best.gain)) {
        best.split = candidates[i];
        best.score = score;
        best.gain = gains[i];
      }
    }
    return best;
  };

  if (mode == SplitMode::Plain) return pick([&](std::size_t i) { return gains[i]; });

  ScoredSplit best = pick([&](std::size_t i) { return modified_gain(gains[i], ic[candidates[i].feature]); });
  if (best.split && best.score == 0.0 && zero_gain_fallback) {
    best = pick([&](std::size_t i) { return gains[i]; });
    best.fallback = true;
  }
  return best;
}

}  // namespace trepan
