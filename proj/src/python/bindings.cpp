#include <memory>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "trepan/data.hpp"
#include "trepan/distill.hpp"
#include "trepan/error.hpp"
#include "trepan/hash.hpp"
#include "trepan/metrics.hpp"
#include "trepan/ontology.hpp"
#include "trepan/oracle.hpp"

namespace py = pybind11;
using namespace trepan;

namespace {

// A TBox with its classification; keeps the index alive for OntologyContext.
struct Ontology {
  onto::TBox tbox;
  onto::SubsumptionIndex index;
  std::string hash;

  static std::shared_ptr<Ontology> from_text(const std::string& text) {
    auto o = std::make_shared<Ontology>();
    o->tbox = onto::parse_tbox(text);
    o->index = onto::classify(o->tbox);
    o->hash = digest(text);
    return o;
  }
  static std::shared_ptr<Ontology> load(const std::string& path) {
    return from_text(read_file(path, "ontology"));
  }

  // Rejects names outside sub(T) with near-match suggestions.
  onto::ConceptExpr concept_of(const std::string& text) const {
    auto c = onto::parse_concept(text, tbox);
    index.require(c);
    return c;
  }

  std::vector<std::string> names(const std::vector<onto::ConceptExpr>& cs) const {
    std::vector<std::string> out;
    for (const auto& c : cs) out.push_back(c.to_string());
    return out;
  }
};

DistillConfig make_config(std::size_t size_limit, std::size_t s_min, double epsilon, std::uint64_t seed,
                          const std::string& mode, bool strict_gain) {
  DistillConfig c;
  c.size_limit = size_limit;
  c.s_min = s_min;
  c.leaf_epsilon = epsilon;
  c.seed = seed;
  c.mode = parse_split_mode(mode);
  c.zero_gain_fallback = !strict_gain;
  return c;
}

}  // namespace

PYBIND11_MODULE(_trepan, m) {
  m.doc() = "Ontology-guided decision-tree distillation";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::class_<FeatureSchema>(m, "FeatureSchema")
      .def_property_readonly("feature_names", &FeatureSchema::feature_names)
      .def_property_readonly("class_name", &FeatureSchema::class_name)
      .def_property_readonly("class_labels", &FeatureSchema::class_labels)
      .def("fingerprint", &FeatureSchema::fingerprint)
      .def("to_json", &FeatureSchema::to_json)
      .def("__len__", &FeatureSchema::size);
  m.def("load_schema", &load_schema, py::arg("path"));
  m.def("parse_schema", [](const std::string& text) { return parse_schema(text); }, py::arg("text"));

  py::class_<LabeledDataset>(m, "Dataset")
      .def_readonly("schema", &LabeledDataset::schema)
      .def("__len__", &LabeledDataset::size);
  m.def("load_dataset", &load_dataset, py::arg("path"), py::arg("schema"));
  m.def("parse_dataset", [](const std::string& text, const FeatureSchema& s) { return parse_dataset(text, s); },
        py::arg("text"), py::arg("schema"));
  m.def("train_test_split", &train_test_split, py::arg("data"), py::arg("test_fraction"), py::arg("seed"));

  py::class_<Ontology, std::shared_ptr<Ontology>>(m, "Ontology")
      .def_static("from_text", &Ontology::from_text, py::arg("text"))
      .def_static("load", &Ontology::load, py::arg("path"))
      .def_property_readonly("sub_size", [](const Ontology& o) { return o.index.size(); })
      .def_property_readonly("warnings", [](const Ontology& o) { return o.tbox.warnings; })
      .def("subsumes", [](const Ontology& o, const std::string& sub, const std::string& sup) {
             return o.index.subsumes(o.index.require(o.concept_of(sub)), o.index.require(o.concept_of(sup)));
           })
      .def("information_content",
           [](const Ontology& o, const std::string& c) { return onto::information_content(o.index, o.concept_of(c)); })
      .def("downcov", [](const Ontology& o, const std::string& c) { return o.names(onto::downcov(o.index, o.concept_of(c))); })
      .def("subconcepts",
           [](const Ontology& o, const std::string& c) { return o.names(onto::subconcepts(o.index, o.concept_of(c))); });

  py::class_<Oracle, std::shared_ptr<Oracle>>(m, "Oracle")
      .def_property_readonly("kind", &Oracle::kind)
      .def("fingerprint", &Oracle::fingerprint)
      .def("predict_all", [](const Oracle& o, const LabeledDataset& d) { return o.predict_all(d.instances); });
  py::class_<MlpModel, Oracle, std::shared_ptr<MlpModel>>(m, "MlpModel")
      .def_property_readonly("hidden_size", &MlpModel::hidden_size)
      .def("to_json", &MlpModel::to_json);
  m.def(
      "train_mlp",
      [](const LabeledDataset& train, std::vector<std::size_t> hidden, std::size_t epochs, std::uint64_t seed) {
        MlpConfig c;
        c.hidden_candidates = std::move(hidden);
        c.max_epochs = epochs;
        c.seed = seed;
        return std::make_shared<MlpModel>(train_mlp(train, c));
      },
      py::arg("train"), py::arg("hidden") = std::vector<std::size_t>{2, 4, 8, 16}, py::arg("epochs") = 300,
      py::arg("seed") = 1);
  m.def("load_mlp", [](const std::string& path) { return std::make_shared<MlpModel>(load_mlp(path)); },
        py::arg("path"));

  py::class_<DecisionTree>(m, "DecisionTree")
      .def_property_readonly("n_leaves", &DecisionTree::n_leaves)
      .def_property_readonly("n_internal", &DecisionTree::n_internal)
      .def_property_readonly("b_total", &DecisionTree::b_total)
      .def("to_json", &DecisionTree::to_json)
      .def("to_dot", &DecisionTree::to_dot);
  m.def("tree_from_json", &tree_from_json, py::arg("text"));

  m.def(
      "extract",
      [](const Oracle& oracle, const LabeledDataset& train, std::size_t size_limit, std::size_t s_min,
         double epsilon, std::uint64_t seed, const std::string& mode, std::shared_ptr<Ontology> ontology,
         const std::string& mapping, bool strict_gain) {
        const auto cfg = make_config(size_limit, s_min, epsilon, seed, mode, strict_gain);
        if (!ontology) return extract(oracle, train, cfg);
        OntologyContext ctx{&ontology->index, onto::parse_mapping(mapping, ontology->tbox), ontology->hash};
        return extract(oracle, train, cfg, &ctx);
      },
      py::arg("oracle"), py::arg("train"), py::arg("size_limit") = 10, py::arg("s_min") = 1000,
      py::arg("epsilon") = 0.01, py::arg("seed") = 0, py::arg("mode") = "plain", py::arg("ontology") = nullptr,
      py::arg("mapping") = "", py::arg("strict_gain") = false);
  m.def(
      "direct_induce",
      [](const LabeledDataset& train, std::size_t size_limit) {
        DistillConfig c;
        c.size_limit = size_limit;
        return direct_induce(train, c);
      },
      py::arg("train"), py::arg("size_limit") = 10);

  m.def("accuracy", &accuracy, py::arg("tree"), py::arg("test"));
  m.def("fidelity", &fidelity, py::arg("tree"), py::arg("oracle"), py::arg("test"));
  m.def("syntactic_complexity", py::overload_cast<std::size_t, std::size_t, double>(&syntactic_complexity),
        py::arg("n_leaves"), py::arg("b_total"), py::arg("alpha") = 0.5);
  m.def("size_category", [](std::size_t n) { return to_string(size_category(n)); }, py::arg("n_internal"));
}
