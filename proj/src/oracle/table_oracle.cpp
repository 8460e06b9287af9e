#include <algorithm>
#include <cmath>

#include "trepan/error.hpp"
#include "trepan/oracle.hpp"

namespace trepan {

TableOracle::TableOracle(FeatureSchema schema, std::map<Instance, Label> table)
    : Oracle(std::move(schema)), table_(std::move(table)) {}

Label TableOracle::predict(const Instance& x) const {
  check_instance(x);
  if (auto it = table_.find(x); it != table_.end()) return it->second;
  const auto render = [&](const Instance& v) {
    std::string row;
    for (std::size_t i = 0; i < v.values.size(); ++i) {
      if (i) row += ",";
      row += schema().format_value(i, v.values[i]);
    }
    return row;
  };
  // Nearest listed key: fewest differing features, then smallest numeric gap.
  const Instance* nearest = nullptr;
  std::pair<std::size_t, double> best{0, 0.0};
  for (const auto& [key, label] : table_) {
    std::pair<std::size_t, double> d{0, 0.0};
    for (std::size_t i = 0; i < key.values.size(); ++i) {
      if (key.values[i] == x.values[i]) continue;
      ++d.first;
      if (!schema().feature(i).categorical()) d.second += std::abs(key.values[i] - x.values[i]);
    }
    if (!nearest || d < best) {
      nearest = &key;
      best = d;
    }
  }
  std::string msg = "table oracle has no prediction for instance (" + render(x) + ")";
  if (nearest) msg += "; nearest listed instance is (" + render(*nearest) + ")";
  throw UnlistedInstance(msg);
}

TableOracle parse_table_oracle(std::string_view csv_text, const FeatureSchema& schema) {
  auto rows = parse_csv(csv_text);
  if (rows.empty()) throw Error(ErrorKind::Data, "predictions csv: missing header row");
  const auto& header = rows.front();
  if (header.size() != schema.size() + 1 || header.back() != "predicted") {
    throw Error(ErrorKind::Data,
                "predictions csv: expected the schema's feature columns followed by 'predicted'");
  }
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (header[i] != schema.feature(i).name) {
      throw Error(ErrorKind::Data, "predictions csv: column " + std::to_string(i + 1) + " is '" +
                                       header[i] + "', expected '" + schema.feature(i).name + "'");
    }
  }
  std::map<Instance, Label> table;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "predictions row " + std::to_string(r);
    if (row.size() != header.size()) {
      throw Error(ErrorKind::Data, where + ": wrong number of fields");
    }
    Instance x;
    for (std::size_t i = 0; i < schema.size(); ++i) x.values.push_back(parse_value(schema, i, row[i], where));
    auto label = schema.label_index(row.back());
    if (!label) throw Error(ErrorKind::Data, where + ": unknown class label '" + row.back() + "'");
    auto [it, inserted] = table.emplace(std::move(x), *label);
    if (!inserted && it->second != *label) {
      throw Error(ErrorKind::Data, where + ": conflicts with an earlier row for the same instance");
    }
  }
  return TableOracle(schema, std::move(table));
}

TableOracle table_oracle(const std::string& csv_path, const FeatureSchema& schema) {
  return parse_table_oracle(read_file(csv_path, "predictions"), schema);
}

OracleHandle load_oracle(const std::string& path, const FeatureSchema& schema) {
  const bool is_csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  if (is_csv) return std::make_shared<TableOracle>(table_oracle(path, schema));
  auto model = std::make_shared<MlpModel>(load_mlp(path));
  if (model->fingerprint() != schema.fingerprint()) {
    throw SchemaMismatch("oracle schema fingerprint " + model->fingerprint() +
                         " does not match schema " + schema.fingerprint());
  }
  return model;
}

}  // namespace trepan
