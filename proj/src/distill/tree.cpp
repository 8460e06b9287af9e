#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "trepan/distill.hpp"
#include "trepan/error.hpp"

namespace trepan {

using nlohmann::json;

DecisionTree::DecisionTree(FeatureSchema schema, std::vector<TreeNode> nodes, Provenance provenance)
    : schema_(std::move(schema)), nodes_(std::move(nodes)), provenance_(std::move(provenance)) {
  if (nodes_.empty()) throw Error(ErrorKind::Data, "tree has no nodes");
  std::vector<std::uint8_t> seen(nodes_.size(), 0);
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [id, depth] = stack.back();
    stack.pop_back();
    if (id >= nodes_.size() || seen[id]) throw Error(ErrorKind::Data, "tree nodes do not form a tree");
    seen[id] = 1;
    const auto& n = nodes_[id];
    if (n.leaf) {
      ++n_leaves_;
      b_total_ += depth;
      if (n.label >= schema_.class_count()) throw Error(ErrorKind::Data, "leaf label out of range");
      continue;
    }
    ++n_internal_;
    if (n.split.feature >= schema_.size()) throw Error(ErrorKind::Data, "split feature out of range");
    stack.push_back({n.false_child, depth + 1});
    stack.push_back({n.true_child, depth + 1});
  }
}

std::size_t DecisionTree::leaf_for(const Instance& x) const {
  std::size_t id = 0;
  while (!nodes_[id].leaf) {
    const auto& n = nodes_[id];
    id = n.split.outcome(x) ? n.true_child : n.false_child;
  }
  return id;
}

Label classify_with_tree(const DecisionTree& tree, const Instance& x) {
  const auto& schema = tree.schema();
  if (x.values.size() != schema.size()) {
    throw SchemaMismatch("instance has " + std::to_string(x.values.size()) +
                         " values, tree schema has " + std::to_string(schema.size()) + " features");
  }
  return tree.nodes()[tree.leaf_for(x)].label;
}

namespace {

json split_to_json(const FeatureSchema& schema, const Split& s) {
  const auto& f = schema.feature(s.feature);
  if (s.test == Split::Test::CategoricalEquals) {
    return {{"feature", f.name}, {"test", "equals"}, {"value", f.values.at(s.category)}};
  }
  return {{"feature", f.name}, {"test", "le"}, {"threshold", s.threshold}};
}

json node_to_json(const DecisionTree& tree, std::size_t id) {
  const auto& n = tree.nodes()[id];
  if (n.leaf) {
    return {{"label", tree.schema().class_labels().at(n.label)},
            {"support", n.support},
            {"purity", n.purity}};
  }
  return {{"split", split_to_json(tree.schema(), n.split)},
          {"true", node_to_json(tree, n.true_child)},
          {"false", node_to_json(tree, n.false_child)}};
}

Split split_from_json(const FeatureSchema& schema, const json& j) {
  const auto name = j.at("feature").get<std::string>();
  auto f = schema.find(name);
  if (!f) throw Error(ErrorKind::Data, "tree: unknown feature '" + name + "'");
  const auto test = j.at("test").get<std::string>();
  if (test == "equals") {
    if (!schema.feature(*f).categorical()) throw Error(ErrorKind::Data, "tree: equality test on numeric feature");
    auto v = schema.category_index(*f, j.at("value").get<std::string>());
    if (!v) throw Error(ErrorKind::Data, "tree: unknown value for feature '" + name + "'");
    return Split::equals(*f, *v);
  }
  if (test == "le") {
    if (schema.feature(*f).categorical()) throw Error(ErrorKind::Data, "tree: threshold test on categorical feature");
    return Split::less_equal(*f, j.at("threshold").get<double>());
  }
  throw Error(ErrorKind::Data, "tree: unknown test '" + test + "'");
}

std::size_t node_from_json(const FeatureSchema& schema, const json& j, std::vector<TreeNode>& out) {
  const std::size_t id = out.size();
  out.emplace_back();
  if (j.contains("split")) {
    TreeNode n;
    n.leaf = false;
    n.split = split_from_json(schema, j.at("split"));
    n.true_child = node_from_json(schema, j.at("true"), out);
    n.false_child = node_from_json(schema, j.at("false"), out);
    out[id] = n;
    return id;
  }
  TreeNode n;
  auto label = schema.label_index(j.at("label").get<std::string>());
  if (!label) throw Error(ErrorKind::Data, "tree: unknown leaf label");
  n.label = *label;
  n.support = j.at("support").get<std::size_t>();
  n.purity = j.at("purity").get<double>();
  out[id] = n;
  return id;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string DecisionTree::to_json() const {
  json provenance{
      {"mode", provenance_.mode},
      {"config", provenance_.config_json.empty() ? json(nullptr) : json::parse(provenance_.config_json)},
      {"config_hash", provenance_.config_hash},
      {"oracle", {{"kind", provenance_.oracle_kind}, {"fingerprint", provenance_.oracle_fingerprint}}},
      {"ontology_hash", provenance_.ontology_hash ? json(*provenance_.ontology_hash) : json(nullptr)},
      {"seed", provenance_.seed},
      {"fallback_nodes", provenance_.fallback_nodes},
  };
  json doc{{"format", "trepan-tree"},
           {"version", 1},
           {"schema_fingerprint", fingerprint()},
           {"schema", json::parse(schema_.to_json())},
           {"provenance", provenance},
           {"stats", {{"n_leaves", n_leaves_}, {"n_internal", n_internal_}, {"b_total", b_total_}}},
           {"root", node_to_json(*this, 0)}};
  return doc.dump(1) + "\n";
}

DecisionTree tree_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format") != "trepan-tree") throw Error(ErrorKind::Data, "not a tree document");
    if (doc.at("version").get<int>() != 1) throw Error(ErrorKind::Data, "unsupported tree version");
    FeatureSchema schema = parse_schema(doc.at("schema").dump());
    if (schema.fingerprint() != doc.at("schema_fingerprint").get<std::string>()) {
      throw SchemaMismatch("tree: stored fingerprint does not match the embedded schema");
    }
    Provenance p;
    if (doc.contains("provenance")) {
      const auto& jp = doc.at("provenance");
      p.mode = jp.value("mode", "plain");
      if (jp.contains("config") && !jp.at("config").is_null()) p.config_json = jp.at("config").dump();
      p.config_hash = jp.value("config_hash", "");
      if (jp.contains("oracle")) {
        p.oracle_kind = jp.at("oracle").value("kind", "none");
        p.oracle_fingerprint = jp.at("oracle").value("fingerprint", "");
      }
      if (jp.contains("ontology_hash") && !jp.at("ontology_hash").is_null()) {
        p.ontology_hash = jp.at("ontology_hash").get<std::string>();
      }
      p.seed = jp.value("seed", std::uint64_t{0});
      p.fallback_nodes = jp.value("fallback_nodes", std::vector<std::size_t>{});
    }
    std::vector<TreeNode> nodes;
    node_from_json(schema, doc.at("root"), nodes);
    DecisionTree tree(std::move(schema), std::move(nodes), std::move(p));
    if (doc.contains("stats")) {
      const auto& s = doc.at("stats");
      if (s.value("n_leaves", tree.n_leaves()) != tree.n_leaves() ||
          s.value("n_internal", tree.n_internal()) != tree.n_internal() ||
          s.value("b_total", tree.b_total()) != tree.b_total()) {
        throw Error(ErrorKind::Data, "tree: stored stats disagree with the node structure");
      }
    }
    return tree;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Data, std::string("malformed tree document: ") + e.what());
  }
}

DecisionTree load_tree(const std::string& path) { return tree_from_json(read_file(path, "tree")); }

std::string DecisionTree::to_dot() const {
  // Nodes are named by preorder position so the output depends only on the
  // tree's structure, not on arena layout.
  std::ostringstream os;
  os << "digraph tree {\n";
  os << "  node [fontname=\"Helvetica\"];\n";
  std::vector<std::size_t> order(nodes_.size(), 0);
  std::vector<std::size_t> stack{0};
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t next = 0;
  while (!stack.empty()) {
    const std::size_t id = stack.back();
    stack.pop_back();
    order[id] = next++;
    const auto& n = nodes_[id];
    if (n.leaf) {
      os << "  n" << order[id] << " [shape=ellipse, label=\""
         << escape(schema_.class_labels()[n.label]) << " (" << n.support << ", "
         << format_number(n.purity) << ")\"];\n";
      continue;
    }
    const auto& f = schema_.feature(n.split.feature);
    std::string test = n.split.test == Split::Test::CategoricalEquals
                           ? f.name + " = " + f.values[n.split.category]
                           : f.name + " <= " + format_number(n.split.threshold);
    os << "  n" << order[id] << " [shape=box, label=\"" << escape(test) << "\"];\n";
    edges.push_back({id, n.true_child});
    edges.push_back({id, n.false_child});
    stack.push_back(n.false_child);
    stack.push_back(n.true_child);
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    os << "  n" << order[edges[i].first] << " -> n" << order[edges[i].second] << " [label=\""
       << (i % 2 == 0 ? "true" : "false") << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace trepan
