#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "trepan/data.hpp"
#include "trepan/distill.hpp"
#include "trepan/error.hpp"
#include "trepan/hash.hpp"
#include "trepan/metrics.hpp"
#include "trepan/ontology.hpp"
#include "trepan/oracle.hpp"

namespace {

using namespace trepan;
using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

enum Exit { kOk = 0, kNotFound = 2, kUsage = 64, kData = 65, kInternal = 70 };

void report_warnings(const std::vector<std::string>& warnings) {
  if (warnings.empty()) return;
  std::cerr << "trepan: warning: " << warnings.front();
  if (warnings.size() > 1) std::cerr << " (and " << warnings.size() - 1 << " more)";
  std::cerr << "\n";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::NotFound, "cannot write output: " + path);
  out << text;
  if (!out) throw Error(ErrorKind::Internal, "write failed: " + path);
}

std::string strip_json_suffix(const std::string& path) {
  if (path.size() > 5 && path.compare(path.size() - 5, 5, ".json") == 0) return path.substr(0, path.size() - 5);
  return path;
}

// A zero fraction trains on everything and holds nothing out.
std::pair<LabeledDataset, LabeledDataset> split_or_all(const LabeledDataset& all, double fraction,
                                                       std::uint64_t seed) {
  if (fraction <= 0.0) return {all, LabeledDataset{all.schema, {}, {}}};
  return train_test_split(all, fraction, seed);
}

std::vector<std::size_t> parse_hidden(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || v == 0) throw Error(ErrorKind::Usage, "bad hidden size '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorKind::Usage, "--hidden needs at least one candidate size");
  return out;
}

// Resolved flags of a parsed subcommand, in declaration order.
struct ResolvedFlags {
  json flags = json::object();
  std::vector<std::string> argv;
};

ResolvedFlags resolve(const CLI::App& sub) {
  ResolvedFlags r;
  r.argv.push_back(sub.get_name());
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_name();
    if (name == "--help" || name == "--config" || name.empty()) continue;
    if (opt->get_expected_min() == 0) {
      const bool on = opt->count() > 0;
      r.flags[name.substr(2)] = on;
      if (on) r.argv.push_back(name);
      continue;
    }
    std::string value;
    if (opt->count() > 0) {
      value = opt->results().back();
    } else {
      value = opt->get_default_str();
    }
    r.flags[name.substr(2)] = value;
    if (!value.empty()) {
      r.argv.push_back(name);
      r.argv.push_back(value);
    }
  }
  return r;
}

struct Manifest {
  std::string command;
  ResolvedFlags flags;
  json inputs = json::object();
  json outputs = json::object();
  std::optional<std::uint64_t> seed;

  void input(const std::string& role, const std::string& path) {
    if (path.empty()) return;
    inputs[role] = {{"path", path}, {"digest", digest(read_file(path, role.c_str()))}};
  }
  void output(const std::string& role, const std::string& path, const std::string& content) {
    outputs[role] = {{"path", path}, {"digest", digest(content)}};
  }
};

class Runner {
 public:
  int run(std::vector<std::string> args);

 private:
  void write_manifest(const Manifest& m, const std::string& path);

  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void Runner::write_manifest(const Manifest& m, const std::string& path) {
  if (path.empty()) return;
  const auto elapsed = std::chrono::steady_clock::now() - start_;
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
  json doc{{"format", "trepan-manifest"},
           {"version", 1},
           {"tool", "trepan"},
           {"tool_version", kVersion},
           {"command", m.command},
           {"flags", m.flags.flags},
           {"argv", m.flags.argv},
           {"inputs", m.inputs},
           {"outputs", m.outputs},
           {"seed", m.seed ? json(*m.seed) : json(nullptr)},
           {"started_at", static_cast<std::int64_t>(std::time(nullptr))},
           {"duration_ms", ms}};
  write_file(path, doc.dump(1) + "\n");
}

int Runner::run(std::vector<std::string> args) {
  CLI::App app{"Decision-tree extraction from black-box classifiers, optionally guided by an ontology"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "TOML/INI file with flag values; command-line flags take precedence");

  // train-oracle
  auto* train = app.add_subcommand("train-oracle", "Train the single-hidden-layer network oracle");
  std::string t_data, t_schema, t_out, t_manifest, t_hidden = "2,4,8,16";
  std::uint64_t t_seed = 0;
  MlpConfig mlp;
  double t_test_fraction = 0.25;
  std::uint64_t t_split_seed = 1;
  train->add_option("--data", t_data, "Training CSV")->required();
  train->add_option("--schema", t_schema, "Feature schema JSON")->required();
  train->add_option("--out", t_out, "Model document to write")->required();
  train->add_option("--seed", t_seed, "Training seed")->required();
  train->add_option("--hidden", t_hidden, "Comma-separated hidden-size candidates");
  train->add_option("--epochs", mlp.max_epochs, "Maximum epochs")->check(CLI::PositiveNumber);
  train->add_option("--learning-rate", mlp.learning_rate, "SGD step size")->check(CLI::PositiveNumber);
  train->add_option("--patience", mlp.patience, "Early-stopping patience in epochs");
  train->add_option("--batch-size", mlp.batch_size, "Mini-batch size")->check(CLI::PositiveNumber);
  train->add_option("--folds", mlp.folds, "Cross-validation folds")->check(CLI::Range(2, 100));
  train->add_option("--validation-fraction", mlp.validation_fraction, "Early-stopping holdout")
      ->check(CLI::Range(0.01, 0.9));
  train->add_option("--test-fraction", t_test_fraction, "Held-out share of the data")->check(CLI::Range(0.0, 0.9));
  train->add_option("--split-seed", t_split_seed, "Seed of the train/test split");
  train->add_option("--manifest", t_manifest, "Manifest path (default: <out>.manifest.json)");

  // distill
  auto* dist = app.add_subcommand("distill", "Extract a surrogate decision tree");
  std::string d_oracle, d_data, d_schema, d_mode = "plain", d_ontology, d_mapping, d_out, d_dot, d_manifest;
  DistillConfig dc;
  bool d_strict = false, d_unweighted = false;
  double d_test_fraction = 0.25, d_alpha = 0.5;
  std::uint64_t d_split_seed = 1;
  std::optional<std::uint64_t> d_seed;
  dist->add_option("--oracle", d_oracle, "Model document or predictions CSV (not needed for direct mode)");
  dist->add_option("--data", d_data, "Dataset CSV")->required();
  dist->add_option("--schema", d_schema, "Feature schema JSON")->required();
  dist->add_option("--mode", d_mode, "plain, reloaded, or direct (induction from true labels)")
      ->check(CLI::IsMember({"plain", "reloaded", "direct"}));
  dist->add_option("--ontology", d_ontology, "Ontology source (required for reloaded)");
  dist->add_option("--mapping", d_mapping, "Feature-to-concept mapping (required for reloaded)");
  dist->add_option("--size-limit", dc.size_limit, "Maximum internal nodes")->check(CLI::PositiveNumber);
  dist->add_option("--s-min", dc.s_min, "Examples per node")->check(CLI::PositiveNumber);
  dist->add_option("--epsilon", dc.leaf_epsilon, "Leaf purity tolerance");
  dist->add_option("--max-thresholds", dc.max_numeric_thresholds, "Numeric thresholds per feature")
      ->check(CLI::PositiveNumber);
  dist->add_option("--min-marginal-support", dc.min_marginal_support,
                   "Real examples needed to estimate a node's own marginals");
  dist->add_flag("--strict-gain", d_strict, "Disable the plain-gain fallback when every modified gain is 0");
  dist->add_flag("--unweighted-priority", d_unweighted, "Queue on split score alone, not reach * score");
  dist->add_option("--seed", d_seed, "Sampling seed")->required();
  dist->add_option("--test-fraction", d_test_fraction, "Held-out share for fidelity")->check(CLI::Range(0.0, 0.9));
  dist->add_option("--split-seed", d_split_seed, "Seed of the train/test split");
  dist->add_option("--alpha", d_alpha, "Complexity weight")->check(CLI::Range(0.0, 1.0));
  dist->add_option("--out", d_out, "Tree document to write")->required();
  dist->add_option("--dot", d_dot, "DOT file (default: <out>.dot)");
  dist->add_option("--manifest", d_manifest, "Manifest path (default: <out>.manifest.json)");

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "Accuracy, fidelity and complexity of a tree");
  std::string e_tree, e_data, e_schema, e_oracle, e_out, e_manifest;
  double e_alpha = 0.5;
  eval->add_option("--tree", e_tree, "Tree document")->required();
  eval->add_option("--data", e_data, "Test CSV")->required();
  eval->add_option("--schema", e_schema, "Feature schema JSON")->required();
  eval->add_option("--oracle", e_oracle, "Oracle for fidelity");
  eval->add_option("--alpha", e_alpha, "Complexity weight")->check(CLI::Range(0.0, 1.0));
  eval->add_option("--out", e_out, "Report JSON to write");
  eval->add_option("--manifest", e_manifest, "Manifest path (default: <out>.manifest.json)");

  // ic
  auto* ic = app.add_subcommand("ic", "Information content of concepts and features");
  std::string i_ontology, i_mapping, i_concept, i_schema, i_manifest;
  bool i_strict = false;
  ic->add_option("--ontology", i_ontology, "Ontology source")->required();
  ic->add_option("--mapping", i_mapping, "Feature-to-concept mapping");
  ic->add_option("--concept", i_concept, "Concept expression to inspect");
  ic->add_option("--schema", i_schema, "Schema listing the features for the mapping table");
  ic->add_flag("--strict-declarations", i_strict, "Reject names without CONCEPT/ROLE declarations");
  ic->add_option("--manifest", i_manifest, "Manifest path");

  // render
  auto* render = app.add_subcommand("render", "Render a tree document");
  std::string r_tree, r_out, r_format = "dot", r_manifest;
  render->add_option("--tree", r_tree, "Tree document")->required();
  render->add_option("--out", r_out, "Output file (default: stdout)");
  render->add_option("--format", r_format, "Output format")->check(CLI::IsMember({"dot"}));
  render->add_option("--manifest", r_manifest, "Manifest path");

  // replay
  auto* replay = app.add_subcommand("replay", "Re-run a command from its manifest");
  std::string p_manifest, p_out, p_dot, p_new_manifest;
  replay->add_option("source", p_manifest, "Manifest written by an earlier run")->required();
  replay->add_option("--out", p_out, "Redirect the primary output");
  replay->add_option("--dot", p_dot, "Redirect the DOT output");
  replay->add_option("--manifest", p_new_manifest, "Redirect the manifest");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "trepan: usage: " << e.what() << "\n";
    return kUsage;
  }

  if (train->parsed()) {
    Manifest m{"train-oracle", resolve(*train)};
    m.seed = t_seed;
    mlp.hidden_candidates = parse_hidden(t_hidden);
    mlp.seed = t_seed;
    const FeatureSchema schema = load_schema(t_schema);
    const LabeledDataset all = load_dataset(t_data, schema);
    m.input("schema", t_schema);
    m.input("data", t_data);
    auto [tr, te] = split_or_all(all, t_test_fraction, t_split_seed);
    const MlpModel model = train_mlp(tr, mlp);
    const std::string doc = model.to_json();
    write_file(t_out, doc);
    m.output("model", t_out, doc);
    const auto& info = model.training_info();
    std::cout << "hidden_size: " << model.hidden_size() << "\n";
    std::cout << "train_accuracy: " << info.train_accuracy << "\n";
    std::cout << "validation_accuracy: " << info.validation_accuracy << "\n";
    if (te.size() > 0) {
      std::size_t hits = 0;
      for (std::size_t i = 0; i < te.size(); ++i) hits += model.predict(te.instances[i]) == te.labels[i] ? 1 : 0;
      std::cout << "test_accuracy: " << static_cast<double>(hits) / static_cast<double>(te.size()) << "\n";
    }
    write_manifest(m, t_manifest.empty() ? t_out + ".manifest.json" : t_manifest);
    return kOk;
  }

  if (dist->parsed()) {
    Manifest m{"distill", resolve(*dist)};
    m.seed = *d_seed;
    dc.seed = *d_seed;
    dc.zero_gain_fallback = !d_strict;
    dc.reach_weighted_priority = !d_unweighted;
    const bool direct = d_mode == "direct";
    if (!direct) dc.mode = parse_split_mode(d_mode);
    if (dc.mode == SplitMode::Reloaded && (d_ontology.empty() || d_mapping.empty())) {
      throw Error(ErrorKind::Usage, "--mode reloaded requires --ontology and --mapping");
    }
    if (!direct && d_oracle.empty()) throw Error(ErrorKind::Usage, "--oracle is required unless --mode direct");
    dc.validate();

    const FeatureSchema schema = load_schema(d_schema);
    const LabeledDataset all = load_dataset(d_data, schema);
    m.input("schema", d_schema);
    m.input("data", d_data);
    auto [tr, te] = split_or_all(all, d_test_fraction, d_split_seed);
    OracleHandle oracle;
    if (!d_oracle.empty()) {
      oracle = load_oracle(d_oracle, schema);
      m.input("oracle", d_oracle);
    }
    std::optional<onto::TBox> tbox;
    std::optional<onto::SubsumptionIndex> index;
    OntologyContext ctx;
    if (!d_ontology.empty()) {
      tbox = onto::load_tbox(d_ontology);
      report_warnings(tbox->warnings);
      index = onto::classify(*tbox);
      ctx.index = &*index;
      ctx.ontology_hash = digest(read_file(d_ontology, "ontology"));
      m.input("ontology", d_ontology);
      if (!d_mapping.empty()) {
        ctx.mapping = onto::load_mapping(d_mapping, *tbox);
        m.input("mapping", d_mapping);
      }
    }

    const DecisionTree tree = direct ? direct_induce(tr, dc) : extract(*oracle, tr, dc, ctx.index ? &ctx : nullptr);
    const std::string doc = tree.to_json();
    const std::string dot = tree.to_dot();
    const std::string dot_path = d_dot.empty() ? strip_json_suffix(d_out) + ".dot" : d_dot;
    write_file(d_out, doc);
    write_file(dot_path, dot);
    m.output("tree", d_out, doc);
    m.output("dot", dot_path, dot);

    std::cout << "mode: " << d_mode << "\n";
    std::cout << "n_leaves: " << tree.n_leaves() << "\n";
    std::cout << "n_internal: " << tree.n_internal() << "\n";
    std::cout << "b_total: " << tree.b_total() << "\n";
    std::cout << "U: " << syntactic_complexity(tree, d_alpha) << "\n";
    std::cout << "size_category: " << to_string(size_category(tree)) << "\n";
    if (!tree.provenance().fallback_nodes.empty()) {
      std::cout << "fallback_nodes: " << tree.provenance().fallback_nodes.size() << "\n";
    }
    if (te.size() > 0) {
      std::cout << "heldout_accuracy: " << accuracy(tree, te) << "\n";
      if (oracle) std::cout << "heldout_fidelity: " << fidelity(tree, *oracle, te) << "\n";
    }
    write_manifest(m, d_manifest.empty() ? d_out + ".manifest.json" : d_manifest);
    return kOk;
  }

  if (eval->parsed()) {
    Manifest m{"evaluate", resolve(*eval)};
    const FeatureSchema schema = load_schema(e_schema);
    const LabeledDataset data = load_dataset(e_data, schema);
    const DecisionTree tree = load_tree(e_tree);
    m.input("schema", e_schema);
    m.input("data", e_data);
    m.input("tree", e_tree);
    if (tree.fingerprint() != schema.fingerprint()) {
      throw SchemaMismatch("tree schema " + tree.fingerprint() + " does not match " + e_schema + " (" +
                           schema.fingerprint() + ")");
    }
    OracleHandle oracle;
    if (!e_oracle.empty()) {
      oracle = load_oracle(e_oracle, schema);
      m.input("oracle", e_oracle);
    }
    const MetricsReport report = evaluate(tree, data, oracle.get(), e_alpha);
    std::cout << report.to_text();
    if (!e_out.empty()) {
      const std::string doc = report.to_json();
      write_file(e_out, doc);
      m.output("report", e_out, doc);
      write_manifest(m, e_manifest.empty() ? e_out + ".manifest.json" : e_manifest);
    } else {
      write_manifest(m, e_manifest);
    }
    return kOk;
  }

  if (ic->parsed()) {
    Manifest m{"ic", resolve(*ic)};
    onto::ParseOptions opts;
    opts.require_declarations = i_strict;
    const onto::TBox tbox = onto::load_tbox(i_ontology, opts);
    report_warnings(tbox.warnings);
    m.input("ontology", i_ontology);
    const onto::SubsumptionIndex index = onto::classify(tbox);
    if (index.inconsistent()) throw InconsistentTBox();
    std::cout << "sub_T: " << index.size() << "\n";
    if (!i_concept.empty()) {
      const auto c = onto::parse_concept(i_concept, tbox);
      const std::size_t id = index.require(c);
      std::cout << "concept: " << c.to_string() << "\n";
      std::cout << "subconcepts: " << onto::subconcepts(index, id).size() << "\n";
      std::cout << "ic: " << onto::information_content(index, c) << "\n";
      std::cout << "downcov:";
      for (const auto& d : onto::downcov(index, c)) std::cout << " " << d.to_string();
      std::cout << "\n";
    }
    if (!i_mapping.empty()) {
      const auto mapping = onto::load_mapping(i_mapping, tbox);
      m.input("mapping", i_mapping);
      std::vector<std::string> features;
      if (!i_schema.empty()) {
        features = load_schema(i_schema).feature_names();
        m.input("schema", i_schema);
      } else {
        for (const auto& [f, c] : mapping) features.push_back(f);
      }
      const auto values = onto::feature_information_content(index, mapping, features);
      for (std::size_t i = 0; i < features.size(); ++i) {
        auto it = mapping.find(features[i]);
        std::cout << features[i] << "\t" << (it == mapping.end() ? "-" : it->second.to_string()) << "\t"
                  << values[i] << "\n";
      }
    }
    write_manifest(m, i_manifest);
    return kOk;
  }

  if (render->parsed()) {
    Manifest m{"render", resolve(*render)};
    const DecisionTree tree = load_tree(r_tree);
    m.input("tree", r_tree);
    const std::string dot = tree.to_dot();
    if (r_out.empty()) {
      std::cout << dot;
    } else {
      write_file(r_out, dot);
      m.output("dot", r_out, dot);
    }
    write_manifest(m, r_manifest.empty() && !r_out.empty() ? r_out + ".manifest.json" : r_manifest);
    return kOk;
  }

  if (replay->parsed()) {
    json doc;
    try {
      doc = json::parse(read_file(p_manifest, "manifest"));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::Data, std::string("malformed manifest: ") + e.what());
    }
    if (doc.value("format", "") != "trepan-manifest") throw Error(ErrorKind::Data, "not a manifest");
    std::vector<std::string> argv = doc.at("argv").get<std::vector<std::string>>();
    const std::map<std::string, std::string> redirect{{"--out", p_out}, {"--dot", p_dot}, {"--manifest", p_new_manifest}};
    std::vector<std::string> out{argv.front()};
    for (std::size_t i = 1; i < argv.size(); ++i) {
      auto it = redirect.find(argv[i]);
      if (it != redirect.end() && i + 1 < argv.size()) {
        out.push_back(argv[i]);
        out.push_back(it->second.empty() ? argv[i + 1] : it->second);
        ++i;
        continue;
      }
      out.push_back(argv[i]);
    }
    for (const auto& [flag, value] : redirect) {
      if (!value.empty() && std::find(out.begin(), out.end(), flag) == out.end()) {
        out.push_back(flag);
        out.push_back(value);
      }
    }
    return run(out);
  }
  return kUsage;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage: return kUsage;
    case ErrorKind::Data: return kData;
    case ErrorKind::NotFound: return kNotFound;
    case ErrorKind::Internal: return kInternal;
  }
  return kInternal;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return Runner{}.run(args);
  } catch (const Error& e) {
    std::cerr << "trepan: error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "trepan: internal error: " << e.what() << "\n";
    return kInternal;
  }
}
