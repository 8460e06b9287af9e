#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "trepan/data.hpp"
#include "trepan/error.hpp"

namespace trepan {

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        field_started = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        if (field_started || !field.empty() || !row.empty()) {
          row.push_back(std::move(field));
          rows.push_back(std::move(row));
        }
        row.clear();
        field.clear();
        field_started = false;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (quoted) throw Error(ErrorKind::Data, "csv: unterminated quoted field");
  if (field_started || !field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

double parse_value(const FeatureSchema& schema, std::size_t i, const std::string& cell,
                   const std::string& where) {
  const auto& f = schema.feature(i);
  if (f.categorical()) {
    auto idx = schema.category_index(i, cell);
    if (!idx) {
      throw Error(ErrorKind::Data,
                  where + ": unknown value '" + cell + "' for feature '" + f.name + "'");
    }
    return static_cast<double>(*idx);
  }
  const char* begin = cell.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  while (end && *end == ' ') ++end;
  if (cell.empty() || end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
    throw Error(ErrorKind::Data,
                where + ": cannot parse '" + cell + "' as a number for feature '" + f.name + "'");
  }
  if (v < f.min || v > f.max) {
    throw Error(ErrorKind::Data, where + ": value " + cell + " of feature '" + f.name +
                                     "' outside [" + schema.format_value(i, f.min) + ", " +
                                     schema.format_value(i, f.max) + "]");
  }
  return v;
}

LabeledDataset parse_dataset(std::string_view csv_text, const FeatureSchema& schema) {
  auto rows = parse_csv(csv_text);
  if (rows.empty()) throw Error(ErrorKind::Data, "csv: missing header row");
  const auto& header = rows.front();

  std::vector<std::size_t> column(schema.size());
  for (std::size_t i = 0; i < schema.size(); ++i) {
    auto it = std::find(header.begin(), header.end(), schema.feature(i).name);
    if (it == header.end()) {
      throw Error(ErrorKind::Data, "csv: missing column '" + schema.feature(i).name + "'");
    }
    column[i] = static_cast<std::size_t>(it - header.begin());
  }
  auto cls = std::find(header.begin(), header.end(), schema.class_name());
  if (cls == header.end()) {
    throw Error(ErrorKind::Data, "csv: missing class column '" + schema.class_name() + "'");
  }
  const auto class_col = static_cast<std::size_t>(cls - header.begin());

  LabeledDataset data{schema, {}, {}};
  data.instances.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "row " + std::to_string(r);
    if (row.size() != header.size()) {
      throw Error(ErrorKind::Data, where + ": expected " + std::to_string(header.size()) +
                                       " fields, found " + std::to_string(row.size()));
    }
    Instance x;
    x.values.reserve(schema.size());
    for (std::size_t i = 0; i < schema.size(); ++i) {
      x.values.push_back(parse_value(schema, i, row[column[i]], where));
    }
    auto label = schema.label_index(row[class_col]);
    if (!label) {
      throw Error(ErrorKind::Data, where + ": unknown class label '" + row[class_col] + "'");
    }
    data.instances.push_back(std::move(x));
    data.labels.push_back(*label);
  }
  return data;
}

LabeledDataset load_dataset(const std::string& csv_path, const FeatureSchema& schema) {
  return parse_dataset(read_file(csv_path, "dataset"), schema);
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

std::pair<LabeledDataset, LabeledDataset> train_test_split(const LabeledDataset& data,
                                                          double test_fraction,
                                                          std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorKind::Usage, "test fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  auto rng = make_stream(seed, 0x5911);
  // Fisher-Yates with an explicit draw keeps the order independent of the
  // standard library's shuffle implementation.
  for (std::size_t i = order.size(); i > 1; --i) {
    std::size_t j = rng() % i;
    std::swap(order[i - 1], order[j]);
  }
  const auto n_test =
      static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(data.size())));
  const std::size_t n_train = data.size() - n_test;
  LabeledDataset train{data.schema, {}, {}};
  LabeledDataset test{data.schema, {}, {}};
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto& dst = k < n_train ? train : test;
    dst.instances.push_back(data.instances[order[k]]);
    dst.labels.push_back(data.labels[order[k]]);
  }
  return {std::move(train), std::move(test)};
}

}  // namespace trepan
