#include <cstdio>

#include "json.hpp"

#include "trepan/error.hpp"
#include "trepan/metrics.hpp"

namespace trepan {

std::string to_string(SizeCategory c) {
  switch (c) {
    case SizeCategory::Small: return "small";
    case SizeCategory::Medium: return "medium";
    case SizeCategory::Large: return "large";
    case SizeCategory::Oversize: return "oversize";
  }
  return "oversize";
}

namespace {

void check_test_set(const DecisionTree& tree, const LabeledDataset& test) {
  if (test.size() == 0) throw Error(ErrorKind::Data, "test set is empty");
  if (tree.fingerprint() != test.schema.fingerprint()) {
    throw SchemaMismatch("tree schema " + tree.fingerprint() + " does not match data schema " +
                         test.schema.fingerprint());
  }
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

double accuracy(const DecisionTree& tree, const LabeledDataset& test) {
  check_test_set(tree, test);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    hits += classify_with_tree(tree, test.instances[i]) == test.labels[i] ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(test.size());
}

double fidelity(const DecisionTree& tree, const Oracle& oracle, const LabeledDataset& test) {
  check_test_set(tree, test);
  if (oracle.fingerprint() != tree.fingerprint()) {
    throw SchemaMismatch("oracle schema " + oracle.fingerprint() + " does not match tree schema " +
                         tree.fingerprint());
  }
  std::size_t hits = 0;
  for (const auto& x : test.instances) hits += classify_with_tree(tree, x) == oracle.predict(x) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(test.size());
}

double syntactic_complexity(std::size_t n_leaves, std::size_t b_total, double alpha) {
  const double k = kComplexityCoefficient;
  return alpha * static_cast<double>(n_leaves) / k + (1.0 - alpha) * static_cast<double>(b_total) / (k * k);
}

double syntactic_complexity(const DecisionTree& tree, double alpha) {
  return syntactic_complexity(tree.n_leaves(), tree.b_total(), alpha);
}

SizeCategory size_category(std::size_t n_internal) {
  if (n_internal <= 10) return SizeCategory::Small;
  if (n_internal <= 20) return SizeCategory::Medium;
  if (n_internal <= 30) return SizeCategory::Large;
  return SizeCategory::Oversize;
}

SizeCategory size_category(const DecisionTree& tree) { return size_category(tree.n_internal()); }

std::string MetricsReport::to_text() const {
  std::string out;
  out += "accuracy: " + fixed(accuracy) + "\n";
  if (fidelity) out += "fidelity: " + fixed(*fidelity) + "\n";
  out += "syntactic_complexity: " + fixed(syntactic_complexity) + "\n";
  out += "size_category: " + to_string(size_category) + "\n";
  out += "n_leaves: " + std::to_string(n_leaves) + "\n";
  out += "n_internal: " + std::to_string(n_internal) + "\n";
  out += "b_total: " + std::to_string(b_total) + "\n";
  out += "alpha: " + fixed(alpha) + "\n";
  return out;
}

std::string MetricsReport::to_json() const {
  nlohmann::json j{{"accuracy", accuracy},
                   {"fidelity", fidelity ? nlohmann::json(*fidelity) : nlohmann::json(nullptr)},
                   {"syntactic_complexity", syntactic_complexity},
                   {"size_category", to_string(size_category)},
                   {"n_leaves", n_leaves},
                   {"n_internal", n_internal},
                   {"b_total", b_total},
                   {"alpha", alpha}};
  return j.dump(1) + "\n";
}

MetricsReport evaluate(const DecisionTree& tree, const LabeledDataset& test, const Oracle* oracle,
                       double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorKind::Usage, "alpha must lie in [0, 1]");
  MetricsReport r;
  r.accuracy = accuracy(tree, test);
  if (oracle) r.fidelity = fidelity(tree, *oracle, test);
  r.syntactic_complexity = syntactic_complexity(tree, alpha);
  r.size_category = size_category(tree);
  r.n_leaves = tree.n_leaves();
  r.n_internal = tree.n_internal();
  r.b_total = tree.b_total();
  r.alpha = alpha;
  return r;
}

}  // namespace trepan
