#include <algorithm>
#include <memory>
#include <queue>

#include "json.hpp"

#include "trepan/distill.hpp"
#include "trepan/error.hpp"
#include "trepan/hash.hpp"

namespace trepan {

using nlohmann::json;

std::string to_string(SplitMode mode) { return mode == SplitMode::Plain ? "plain" : "reloaded"; }

SplitMode parse_split_mode(const std::string& text) {
  if (text == "plain") return SplitMode::Plain;
  if (text == "reloaded") return SplitMode::Reloaded;
  throw Error(ErrorKind::Usage, "unknown mode '" + text + "' (expected plain or reloaded)");
}

void DistillConfig::validate() const {
  if (size_limit < 1) throw Error(ErrorKind::Usage, "size limit must be at least 1");
  if (s_min < 1) throw Error(ErrorKind::Usage, "s_min must be at least 1");
  if (!(leaf_epsilon > 0.0 && leaf_epsilon < 0.5)) {
    throw Error(ErrorKind::Usage, "leaf epsilon must lie in (0, 0.5)");
  }
  if (max_numeric_thresholds < 1) throw Error(ErrorKind::Usage, "threshold cap must be at least 1");
}

std::string DistillConfig::to_json() const {
  json j{{"size_limit", size_limit},
         {"s_min", s_min},
         {"leaf_epsilon", leaf_epsilon},
         {"max_numeric_thresholds", max_numeric_thresholds},
         {"seed", seed},
         {"mode", trepan::to_string(mode)},
         {"zero_gain_fallback", zero_gain_fallback},
         {"reach_weighted_priority", reach_weighted_priority},
         {"min_marginal_support", min_marginal_support}};
  return j.dump();
}

std::string DistillConfig::hash() const { return digest(to_json()); }

namespace {

struct OpenNode {
  std::size_t id = 0;
  NodeConstraint constraint;
  std::vector<std::size_t> real;  // training rows reaching the node
  std::shared_ptr<const Marginals> marginals;
  double reach = 1.0;
  std::vector<Instance> examples;
  std::vector<Label> labels;
  ScoredSplit best;
};

struct QueueEntry {
  double priority;  // larger expands first
  double tie;       // same weighting applied to the plain gain
  std::size_t id;
  std::size_t slot;
};

struct QueueOrder {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (a.priority != b.priority) return a.priority < b.priority;
    if (a.tie != b.tie) return a.tie < b.tie;
    return a.id > b.id;
  }
};

// Shared best-first growth. With an oracle, nodes are topped up to s_min by
// constrained sampling and every example carries the oracle's label; without
// one, nodes see only the real examples with their true labels.
class Grower {
 public:
  Grower(const LabeledDataset& train, const DistillConfig& config, const Oracle* oracle,
         std::vector<double> ic)
      : train_(train), schema_(train.schema), config_(config), oracle_(oracle), ic_(std::move(ic)) {
    if (oracle_) {
      labels_ = oracle_->predict_all(train.instances);
    } else {
      labels_ = train.labels;
    }
  }

  DecisionTree run(Provenance provenance) {
    OpenNode root;
    root.constraint = NodeConstraint::unconstrained(schema_);
    root.real.resize(train_.size());
    for (std::size_t i = 0; i < root.real.size(); ++i) root.real[i] = i;
    if (oracle_) {
      if (root.real.empty()) throw Error(ErrorKind::Data, "extraction needs training examples");
      root.marginals = std::make_shared<Marginals>(estimate_marginals(train_.instances, schema_));
    }
    root.id = new_node();
    if (!evaluate(root)) return finish(std::move(provenance));
    push(std::move(root));

    std::size_t n_internal = 0;
    while (!queue_.empty() && n_internal < config_.size_limit) {
      QueueEntry top = queue_.top();
      queue_.pop();
      OpenNode node = std::move(open_[top.slot]);
      open_[top.slot].examples.clear();
      expand(node, provenance);
      ++n_internal;
    }
    return finish(std::move(provenance));
  }

 private:
  std::size_t new_node() {
    nodes_.emplace_back();
    return nodes_.size() - 1;
  }

  // Fills the node's examples and statistics; returns true when it should be
  // queued for expansion.
  bool evaluate(OpenNode& node) {
    node.examples.clear();
    node.labels.clear();
    for (std::size_t i : node.real) {
      node.examples.push_back(train_.instances[i]);
      node.labels.push_back(labels_[i]);
    }
    if (oracle_ && node.examples.size() < config_.s_min) {
      if (!node.constraint.satisfiable(schema_)) return close_leaf(node);
      auto rng = make_stream(config_.seed, node.id);
      while (node.examples.size() < config_.s_min) {
        Instance x = draw_instance(*node.marginals, node.constraint, schema_, rng);
        node.labels.push_back(oracle_->predict(x));
        node.examples.push_back(std::move(x));
      }
    }

    auto& tn = nodes_[node.id];
    tn.leaf = true;
    tn.support = node.examples.size();
    if (node.examples.empty()) {
      // Only reachable without an oracle: inherit nothing, label 0.
      tn.label = 0;
      tn.purity = 1.0;
      return false;
    }
    const auto counts = class_counts(node.labels, schema_.class_count());
    const auto top = std::max_element(counts.begin(), counts.end());
    tn.label = static_cast<Label>(top - counts.begin());
    tn.purity = static_cast<double>(*top) / static_cast<double>(node.examples.size());
    if (tn.purity >= 1.0 - config_.leaf_epsilon) return close_leaf(node);

    node.best = score_node(node.examples, node.labels, schema_, node.constraint, config_.mode, ic_,
                           config_.max_numeric_thresholds, config_.zero_gain_fallback);
    if (!node.best.split || !(node.best.score > 0.0)) return close_leaf(node);
    return true;
  }

  bool close_leaf(OpenNode& node) {
    node.examples.clear();
    node.labels.clear();
    return false;
  }

  void push(OpenNode node) {
    const double w = config_.reach_weighted_priority ? node.reach : 1.0;
    QueueEntry e{w * node.best.score, w * node.best.gain, node.id, open_.size()};
    open_.push_back(std::move(node));
    queue_.push(e);
  }

  void expand(OpenNode& node, Provenance& provenance) {
    const Split split = *node.best.split;
    if (node.best.fallback) provenance.fallback_nodes.push_back(node.id);

    std::size_t n_true = 0;
    for (const auto& x : node.examples) n_true += split.outcome(x) ? 1 : 0;
    const double total = static_cast<double>(node.examples.size());

    std::size_t child_ids[2];
    for (int b = 0; b < 2; ++b) {
      const bool branch = b == 0;
      OpenNode child;
      auto constraint = try_refine_constraint(schema_, node.constraint, split, branch);
      child.id = new_node();
      child_ids[b] = child.id;
      const std::size_t n_branch = branch ? n_true : node.examples.size() - n_true;
      child.reach = node.reach * static_cast<double>(n_branch) / total;
      if (!constraint) {
        // Candidate filtering keeps both branches open; stay total regardless.
        auto& tn = nodes_[child.id];
        tn.label = nodes_[node.id].label;
        tn.support = 0;
        continue;
      }
      child.constraint = std::move(*constraint);
      for (std::size_t i : node.real) {
        if (split.outcome(train_.instances[i]) == branch) child.real.push_back(i);
      }
      if (oracle_) {
        if (child.real.size() >= std::max<std::size_t>(1, config_.min_marginal_support)) {
          std::vector<const Instance*> reaching;
          reaching.reserve(child.real.size());
          for (std::size_t i : child.real) reaching.push_back(&train_.instances[i]);
          child.marginals = std::make_shared<Marginals>(estimate_marginals(reaching, schema_));
        } else {
          child.marginals = node.marginals;
        }
      }
      if (evaluate(child)) push(std::move(child));
    }
    auto& tn = nodes_[node.id];
    tn.leaf = false;
    tn.split = split;
    tn.true_child = child_ids[0];
    tn.false_child = child_ids[1];
  }

  DecisionTree finish(Provenance provenance) {
    // Anything still queued stays a majority-label leaf.
    return DecisionTree(schema_, std::move(nodes_), std::move(provenance));
  }

  const LabeledDataset& train_;
  const FeatureSchema& schema_;
  const DistillConfig& config_;
  const Oracle* oracle_;
  std::vector<double> ic_;
  std::vector<Label> labels_;
  std::vector<TreeNode> nodes_;
  std::vector<OpenNode> open_;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder> queue_;
};

Provenance base_provenance(const DistillConfig& config) {
  Provenance p;
  p.mode = to_string(config.mode);
  p.config_json = config.to_json();
  p.config_hash = config.hash();
  p.seed = config.seed;
  return p;
}

}  // namespace

DecisionTree extract(const Oracle& oracle, const LabeledDataset& train, const DistillConfig& config,
                     const OntologyContext* ontology) {
  config.validate();
  if (oracle.fingerprint() != train.schema.fingerprint()) {
    throw SchemaMismatch("oracle schema fingerprint " + oracle.fingerprint() +
                         " does not match training data " + train.schema.fingerprint());
  }
  std::vector<double> ic;
  Provenance provenance = base_provenance(config);
  provenance.oracle_kind = oracle.kind();
  provenance.oracle_fingerprint = oracle.fingerprint();
  if (config.mode == SplitMode::Reloaded) {
    if (!ontology || !ontology->index) {
      throw Error(ErrorKind::Usage, "reloaded mode requires an ontology and a feature mapping");
    }
    ic = onto::feature_information_content(*ontology->index, ontology->mapping,
                                           train.schema.feature_names());
  }
  if (ontology && ontology->index) provenance.ontology_hash = ontology->ontology_hash;
  Grower grower(train, config, &oracle, std::move(ic));
  return grower.run(std::move(provenance));
}

DecisionTree direct_induce(const LabeledDataset& train, const DistillConfig& config) {
  DistillConfig plain = config;
  plain.mode = SplitMode::Plain;
  plain.validate();
  Grower grower(train, plain, nullptr, {});
  return grower.run(base_provenance(plain));
}

}  // namespace trepan
