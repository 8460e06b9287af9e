#include <algorithm>
#include <cmath>
#include <numeric>

#include "trepan/data.hpp"
#include "trepan/error.hpp"

namespace trepan {

NodeConstraint NodeConstraint::unconstrained(const FeatureSchema& schema) {
  NodeConstraint c;
  c.restrictions_.resize(schema.size());
  for (std::size_t i = 0; i < schema.size(); ++i) {
    const auto& f = schema.feature(i);
    if (f.categorical()) c.restrictions_[i].allowed.assign(f.values.size(), 1);
  }
  return c;
}

bool NodeConstraint::satisfiable(const FeatureSchema& schema, std::size_t i) const {
  const auto& r = restrictions_.at(i);
  const auto& f = schema.feature(i);
  if (f.categorical()) {
    return std::any_of(r.allowed.begin(), r.allowed.end(), [](auto a) { return a != 0; });
  }
  const double upper = std::min(r.hi, f.max);
  if (r.lo >= f.min) return r.lo < upper;
  return f.min <= upper;
}

bool NodeConstraint::satisfiable(const FeatureSchema& schema) const {
  for (std::size_t i = 0; i < restrictions_.size(); ++i) {
    if (!satisfiable(schema, i)) return false;
  }
  return true;
}

bool NodeConstraint::admits(const Instance& x) const {
  for (std::size_t i = 0; i < restrictions_.size(); ++i) {
    const auto& r = restrictions_[i];
    const double v = x.values[i];
    if (!r.allowed.empty()) {
      if (!r.allowed[static_cast<std::size_t>(v)]) return false;
    } else if (!(v > r.lo && v <= r.hi)) {
      return false;
    }
  }
  return true;
}

std::pair<double, double> NodeConstraint::numeric_bounds(const FeatureSchema& schema,
                                                         std::size_t i) const {
  const auto& r = restrictions_.at(i);
  const auto& f = schema.feature(i);
  return {std::max(r.lo, f.min), std::min(r.hi, f.max)};
}

std::optional<NodeConstraint> try_refine_constraint(const FeatureSchema& schema,
                                                    const NodeConstraint& parent,
                                                    const Split& split, bool branch) {
  NodeConstraint child = parent;
  auto& r = child[split.feature];
  if (split.test == Split::Test::CategoricalEquals) {
    if (r.allowed.empty() || split.category >= r.allowed.size()) {
      throw SchemaMismatch("split tests a non-categorical feature for equality");
    }
    if (branch) {
      const bool was = r.allowed[split.category] != 0;
      std::fill(r.allowed.begin(), r.allowed.end(), 0);
      r.allowed[split.category] = was ? 1 : 0;
    } else {
      r.allowed[split.category] = 0;
    }
  } else {
    if (!r.allowed.empty()) throw SchemaMismatch("numeric split on a categorical feature");
    if (branch) {
      r.hi = std::min(r.hi, split.threshold);
    } else {
      r.lo = std::max(r.lo, split.threshold);
    }
  }
  if (!child.satisfiable(schema, split.feature)) return std::nullopt;
  return child;
}

NodeConstraint refine_constraint(const FeatureSchema& schema, const NodeConstraint& parent,
                                 const Split& split, bool branch) {
  auto child = try_refine_constraint(schema, parent, split, branch);
  if (!child) {
    throw UnsatisfiableConstraint("branch '" + std::string(branch ? "true" : "false") +
                                  "' of split on '" + schema.feature(split.feature).name +
                                  "' admits no value");
  }
  return *std::move(child);
}

namespace {

double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

double kernel_bandwidth(std::vector<double> pool, double min, double max) {
  std::sort(pool.begin(), pool.end());
  const double floor = 1e-6 * (max - min);
  const auto m = static_cast<double>(pool.size());
  if (pool.size() < 2) return floor;
  const double mean = std::accumulate(pool.begin(), pool.end(), 0.0) / m;
  double ss = 0.0;
  for (double v : pool) ss += (v - mean) * (v - mean);
  const double sigma = std::sqrt(ss / (m - 1.0));
  const double iqr = quantile(pool, 0.75) - quantile(pool, 0.25);
  const double h = 0.9 * std::min(sigma, iqr / 1.34) * std::pow(m, -0.2);
  return std::max(h, floor);
}

Marginals estimate_marginals(const std::vector<const Instance*>& examples,
                             const FeatureSchema& schema) {
  if (examples.empty()) throw Error(ErrorKind::Data, "cannot estimate marginals from no examples");
  Marginals out;
  out.features_.resize(schema.size());
  for (std::size_t i = 0; i < schema.size(); ++i) {
    const auto& f = schema.feature(i);
    auto& m = out.features_[i];
    if (f.categorical()) {
      std::vector<double> counts(f.values.size(), 1.0);
      for (const auto* x : examples) counts[static_cast<std::size_t>(x->values[i])] += 1.0;
      const double total = static_cast<double>(examples.size() + f.values.size());
      m.probabilities.reserve(counts.size());
      for (double c : counts) m.probabilities.push_back(c / total);
    } else {
      m.pool.reserve(examples.size());
      for (const auto* x : examples) m.pool.push_back(x->values[i]);
      std::sort(m.pool.begin(), m.pool.end());
      m.bandwidth = kernel_bandwidth(m.pool, f.min, f.max);
    }
  }
  return out;
}

Marginals estimate_marginals(const std::vector<Instance>& examples, const FeatureSchema& schema) {
  std::vector<const Instance*> ptrs;
  ptrs.reserve(examples.size());
  for (const auto& x : examples) ptrs.push_back(&x);
  return estimate_marginals(ptrs, schema);
}

Instance draw_instance(const Marginals& marginals, const NodeConstraint& constraint,
                       const FeatureSchema& schema, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Instance x;
  x.values.resize(schema.size());
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (!constraint.satisfiable(schema, i)) {
      throw UnsatisfiableConstraint("feature '" + schema.feature(i).name + "' admits no value");
    }
    const auto& r = constraint[i];
    const auto& m = marginals[i];
    if (schema.feature(i).categorical()) {
      double mass = 0.0;
      for (std::size_t v = 0; v < m.probabilities.size(); ++v) {
        if (r.allowed[v]) mass += m.probabilities[v];
      }
      double u = unit(rng) * mass;
      std::size_t chosen = m.probabilities.size();
      for (std::size_t v = 0; v < m.probabilities.size(); ++v) {
        if (!r.allowed[v]) continue;
        chosen = v;
        if (u < m.probabilities[v]) break;
        u -= m.probabilities[v];
      }
      x.values[i] = static_cast<double>(chosen);
      continue;
    }

    const auto [low, high] = constraint.numeric_bounds(schema, i);
    const auto inside = [&, low = low, high = high](double v) {
      return v > r.lo && v <= r.hi && v >= low && v <= high;
    };
    std::normal_distribution<double> noise(0.0, m.bandwidth);
    std::uniform_int_distribution<std::size_t> pick(0, m.pool.size() - 1);
    bool done = false;
    for (int attempt = 0; attempt < kMaxNumericAttempts && !done; ++attempt) {
      const double v = m.pool[pick(rng)] + noise(rng);
      if (inside(v)) {
        x.values[i] = v;
        done = true;
      }
    }
    if (!done) x.values[i] = high - unit(rng) * (high - low);
  }
  return x;
}

}  // namespace trepan
