#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trepan/data.hpp"
#include "trepan/ontology.hpp"
#include "trepan/oracle.hpp"
#include "trepan/split.hpp"

namespace trepan {

enum class SplitMode { Plain, Reloaded };

std::string to_string(SplitMode mode);
SplitMode parse_split_mode(const std::string& text);

struct DistillConfig {
  std::size_t size_limit = 10;  // max internal nodes
  std::size_t s_min = 1000;     // oracle-labeled examples per node
  double leaf_epsilon = 0.01;   // leaf once >= 1 - epsilon share one class
  std::size_t max_numeric_thresholds = 32;
  std::uint64_t seed = 0;
  SplitMode mode = SplitMode::Plain;
  bool zero_gain_fallback = true;
  /// Queue priority is reach * score when set, the bare score otherwise.
  bool reach_weighted_priority = true;
  /// Nodes reached by fewer real training examples sample from their
  /// parent's marginals instead of estimating their own.
  std::size_t min_marginal_support = 10;

  /// Throws Error(Usage) when an invariant is violated.
  void validate() const;
  std::string to_json() const;
  std::string hash() const;
};

struct TreeNode {
  bool leaf = true;
  Split split;
  std::size_t true_child = 0;
  std::size_t false_child = 0;
  // Majority statistics over the node's examples; kept for internal nodes too.
  Label label = 0;
  std::size_t support = 0;
  double purity = 1.0;
};

struct Provenance {
  std::string mode = "plain";
  std::string config_json;
  std::string config_hash;
  std::string oracle_kind = "none";
  std::string oracle_fingerprint;
  std::optional<std::string> ontology_hash;
  std::uint64_t seed = 0;
  /// Nodes whose split was chosen by plain gain because every modified gain was zero.
  std::vector<std::size_t> fallback_nodes;
};

/// Binary tree stored as a node arena with the root at index 0.
class DecisionTree {
 public:
  DecisionTree(FeatureSchema schema, std::vector<TreeNode> nodes, Provenance provenance = {});

  const FeatureSchema& schema() const noexcept { return schema_; }
  std::string fingerprint() const { return schema_.fingerprint(); }
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }
  const Provenance& provenance() const noexcept { return provenance_; }

  std::size_t n_leaves() const noexcept { return n_leaves_; }
  std::size_t n_internal() const noexcept { return n_internal_; }
  /// Sum over leaves of the number of edges on the root-to-leaf path.
  std::size_t b_total() const noexcept { return b_total_; }

  /// Index of the leaf reached by `x`.
  std::size_t leaf_for(const Instance& x) const;

  std::string to_json() const;
  std::string to_dot() const;

 private:
  FeatureSchema schema_;
  std::vector<TreeNode> nodes_;
  Provenance provenance_;
  std::size_t n_leaves_ = 0;
  std::size_t n_internal_ = 0;
  std::size_t b_total_ = 0;
};

DecisionTree tree_from_json(const std::string& text);
DecisionTree load_tree(const std::string& path);

/// Root-to-leaf traversal; `<=` is inclusive. Throws SchemaMismatch for
/// instances that do not fit the tree's schema.
Label classify_with_tree(const DecisionTree& tree, const Instance& x);

/// Per-class counts of `labels`.
std::vector<std::size_t> class_counts(const std::vector<Label>& labels, std::size_t classes);

/// Shannon entropy of a count vector, in bits.
double entropy_bits(const std::vector<std::size_t>& counts);

/// H(S) - sum_b |S_b|/|S| H(S_b) in bits, from parent and true-branch counts.
double gain_from_counts(const std::vector<std::size_t>& parent,
                        const std::vector<std::size_t>& true_branch);

std::vector<Split> candidate_splits(const std::vector<Instance>& examples, const FeatureSchema& schema,
                                    const NodeConstraint& constraint,
                                    std::size_t max_numeric_thresholds = 32);

double info_gain(const Split& split, const std::vector<Instance>& examples,
                 const std::vector<Label>& labels, std::size_t classes);

/// (1 - ic) * gain when 0 < ic < 1, else 0.
double modified_gain(double gain, double ic);
double modified_gain(const Split& split, const std::vector<Instance>& examples,
                     const std::vector<Label>& labels, std::size_t classes, double ic);

struct ScoredSplit {
  std::optional<Split> split;
  double score = 0.0;  // the mode's score (modified gain in Reloaded mode)
  double gain = 0.0;   // plain information gain of the chosen split
  bool fallback = false;
};

/// Best candidate by score, then raw gain, then feature order, then value
/// order / lower threshold. `ic` holds one entry per schema feature and is
/// ignored in Plain mode.
ScoredSplit score_node(const std::vector<Instance>& examples, const std::vector<Label>& labels,
                       const FeatureSchema& schema, const NodeConstraint& constraint,
                       SplitMode mode, const std::vector<double>& ic,
                       std::size_t max_numeric_thresholds = 32, bool zero_gain_fallback = true);

struct OntologyContext {
  const onto::SubsumptionIndex* index = nullptr;
  onto::ConceptMapping mapping;
  std::string ontology_hash;
};

/// Best-first extraction of a surrogate tree from `oracle`.
DecisionTree extract(const Oracle& oracle, const LabeledDataset& train, const DistillConfig& config,
                     const OntologyContext* ontology = nullptr);

/// Greedy induction from the true labels with the same split machinery and
/// stopping rules; no oracle and no sampling.
DecisionTree direct_induce(const LabeledDataset& train, const DistillConfig& config);

}  // namespace trepan
