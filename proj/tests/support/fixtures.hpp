#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "trepan/data.hpp"
#include "trepan/distill.hpp"
#include "trepan/oracle.hpp"

#ifndef TREPAN_DATA_DIR
#define TREPAN_DATA_DIR "data"
#endif

namespace trepan::testing {

inline std::string data_path(const std::string& rel) { return std::string(TREPAN_DATA_DIR) + "/" + rel; }

// n binary categorical features f0..f(n-1) with values {"0","1"}, classes {"neg","pos"}.
inline FeatureSchema binary_schema(std::size_t n) {
  std::vector<Feature> fs;
  for (std::size_t i = 0; i < n; ++i) {
    Feature f;
    f.name = "f" + std::to_string(i);
    f.kind = FeatureKind::Categorical;
    f.values = {"0", "1"};
    fs.push_back(f);
  }
  return FeatureSchema(fs, "y", {"neg", "pos"});
}

// Every point of the binary grid, in lexicographic order.
inline std::vector<Instance> binary_grid(std::size_t n) {
  std::vector<Instance> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Instance x;
    for (std::size_t i = 0; i < n; ++i) x.values.push_back(static_cast<double>((mask >> (n - 1 - i)) & 1));
    out.push_back(x);
  }
  return out;
}

inline TableOracle table_from(const FeatureSchema& schema, const std::vector<Instance>& xs,
                              const std::function<Label(const Instance&)>& f) {
  std::map<Instance, Label> table;
  for (const auto& x : xs) table[x] = f(x);
  return TableOracle(schema, table);
}

inline LabeledDataset dataset_from(const FeatureSchema& schema, const std::vector<Instance>& xs,
                                   const std::function<Label(const Instance&)>& f) {
  LabeledDataset d{schema, xs, {}};
  for (const auto& x : xs) d.labels.push_back(f(x));
  return d;
}

// Depth-3 target over three binary features:
// f0=1 ? (f1=1 ? pos : (f2=1 ? pos : neg)) : (f2=1 ? (f1=1 ? neg : pos) : neg)
inline Label depth3_target(const Instance& x) {
  const bool a = x.values[0] == 1, b = x.values[1] == 1, c = x.values[2] == 1;
  if (a) return (b || c) ? 1 : 0;
  return (c && !b) ? 1 : 0;
}

// Leaf-count accounting by walking the arena, independent of the tree's own counters.
struct Shape {
  std::size_t leaves = 0, internal = 0, depth_sum = 0;
};

inline void walk(const DecisionTree& t, std::size_t id, std::size_t depth, Shape& s) {
  const auto& n = t.nodes()[id];
  if (n.leaf) {
    ++s.leaves;
    s.depth_sum += depth;
    return;
  }
  ++s.internal;
  walk(t, n.true_child, depth + 1, s);
  walk(t, n.false_child, depth + 1, s);
}

inline Shape shape_of(const DecisionTree& t) {
  Shape s;
  walk(t, 0, 0, s);
  return s;
}

// Full binary tree of the given depth over binary features, splitting on f<depth>.
inline DecisionTree full_tree(const FeatureSchema& schema, std::size_t depth) {
  std::vector<TreeNode> nodes;
  std::function<std::size_t(std::size_t)> build = [&](std::size_t d) -> std::size_t {
    const std::size_t id = nodes.size();
    nodes.emplace_back();
    if (d == depth) {
      nodes[id].label = 0;
      return id;
    }
    const std::size_t t = build(d + 1);
    const std::size_t f = build(d + 1);
    nodes[id].leaf = false;
    nodes[id].split = Split::equals(d, 1);
    nodes[id].true_child = t;
    nodes[id].false_child = f;
    return id;
  };
  build(0);
  return DecisionTree(schema, nodes);
}

}  // namespace trepan::testing
