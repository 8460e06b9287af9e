#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "trepan/data.hpp"
#include "trepan/error.hpp"
#include "trepan/hash.hpp"

namespace trepan {

using nlohmann::json;

FeatureSchema::FeatureSchema(std::vector<Feature> features, std::string class_name,
                             std::vector<std::string> class_labels)
    : features_(std::move(features)),
      class_name_(std::move(class_name)),
      class_labels_(std::move(class_labels)) {
  std::set<std::string> names;
  for (const auto& f : features_) {
    if (f.name.empty()) throw Error(ErrorKind::Data, "schema: empty feature name");
    if (!names.insert(f.name).second) {
      throw Error(ErrorKind::Data, "schema: duplicate feature '" + f.name + "'");
    }
    if (f.categorical()) {
      if (f.values.empty()) {
        throw Error(ErrorKind::Data, "schema: feature '" + f.name + "' has no values");
      }
      std::set<std::string> seen(f.values.begin(), f.values.end());
      if (seen.size() != f.values.size()) {
        throw Error(ErrorKind::Data, "schema: feature '" + f.name + "' lists a value twice");
      }
    } else if (!(std::isfinite(f.min) && std::isfinite(f.max) && f.min < f.max)) {
      throw Error(ErrorKind::Data, "schema: feature '" + f.name + "' needs finite min < max");
    }
  }
  if (class_name_.empty()) throw Error(ErrorKind::Data, "schema: missing class feature name");
  if (names.count(class_name_)) {
    throw Error(ErrorKind::Data, "schema: class feature '" + class_name_ + "' is also a feature");
  }
  std::set<std::string> labels(class_labels_.begin(), class_labels_.end());
  if (class_labels_.size() < 2 || labels.size() != class_labels_.size()) {
    throw Error(ErrorKind::Data, "schema: class needs at least two distinct labels");
  }
}

std::optional<std::size_t> FeatureSchema::find(std::string_view name) const {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> FeatureSchema::category_index(std::size_t feature,
                                                         std::string_view value) const {
  const auto& vals = features_.at(feature).values;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i] == value) return i;
  }
  return std::nullopt;
}

std::optional<Label> FeatureSchema::label_index(std::string_view label) const {
  for (std::size_t i = 0; i < class_labels_.size(); ++i) {
    if (class_labels_[i] == label) return i;
  }
  return std::nullopt;
}

std::vector<std::string> FeatureSchema::feature_names() const {
  std::vector<std::string> out;
  for (const auto& f : features_) out.push_back(f.name);
  return out;
}

std::string FeatureSchema::to_json() const {
  json features = json::array();
  for (const auto& f : features_) {
    json j{{"name", f.name}};
    if (f.categorical()) {
      j["type"] = "categorical";
      j["values"] = f.values;
    } else {
      j["type"] = "numeric";
      j["min"] = f.min;
      j["max"] = f.max;
    }
    features.push_back(std::move(j));
  }
  json doc{{"features", features}, {"class", {{"name", class_name_}, {"labels", class_labels_}}}};
  return doc.dump();
}

std::string FeatureSchema::fingerprint() const { return digest(to_json()); }

std::string FeatureSchema::format_value(std::size_t i, double v) const {
  const auto& f = features_.at(i);
  if (f.categorical()) return f.values.at(static_cast<std::size_t>(v));
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

FeatureSchema parse_schema(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Data, std::string("schema: ") + e.what());
  }
  try {
    std::vector<Feature> features;
    for (const auto& jf : doc.at("features")) {
      Feature f;
      f.name = jf.at("name").get<std::string>();
      const auto type = jf.at("type").get<std::string>();
      if (type == "categorical") {
        f.kind = FeatureKind::Categorical;
        f.values = jf.at("values").get<std::vector<std::string>>();
      } else if (type == "numeric") {
        f.kind = FeatureKind::Numeric;
        f.min = jf.at("min").get<double>();
        f.max = jf.at("max").get<double>();
      } else {
        throw Error(ErrorKind::Data, "schema: feature '" + f.name + "' has unknown type '" + type + "'");
      }
      features.push_back(std::move(f));
    }
    const auto& cls = doc.at("class");
    return FeatureSchema(std::move(features), cls.at("name").get<std::string>(),
                         cls.at("labels").get<std::vector<std::string>>());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Data, std::string("schema: ") + e.what());
  }
}

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::NotFound, std::string(what) + " not found: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FeatureSchema load_schema(const std::string& path) { return parse_schema(read_file(path, "schema")); }

}  // namespace trepan
