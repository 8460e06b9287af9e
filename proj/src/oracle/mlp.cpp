#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

#include "trepan/error.hpp"
#include "trepan/oracle.hpp"

namespace trepan {

using nlohmann::json;

std::vector<Label> Oracle::predict_all(const std::vector<Instance>& xs) const {
  std::vector<Label> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(predict(x));
  return out;
}

void Oracle::check_instance(const Instance& x) const {
  if (x.values.size() != schema_.size()) {
    throw SchemaMismatch("instance has " + std::to_string(x.values.size()) +
                         " values, oracle schema has " + std::to_string(schema_.size()) +
                         " features");
  }
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    const auto& f = schema_.feature(i);
    const double v = x.values[i];
    if (f.categorical() && !(v >= 0 && static_cast<std::size_t>(v) < f.values.size())) {
      throw SchemaMismatch("feature '" + f.name + "' has no value with index " + std::to_string(v));
    }
  }
}

InputEncoder::InputEncoder(const FeatureSchema& schema) : schema_(schema) {
  for (const auto& f : schema.features()) {
    offsets_.push_back(width_);
    width_ += f.categorical() ? f.values.size() : 1;
  }
}

Eigen::VectorXd InputEncoder::encode(const Instance& x) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(width_));
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    const auto& f = schema_.feature(i);
    const auto at = static_cast<Eigen::Index>(offsets_[i]);
    if (f.categorical()) {
      v[at + static_cast<Eigen::Index>(x.values[i])] = 1.0;
    } else {
      v[at] = (x.values[i] - f.min) / (f.max - f.min);
    }
  }
  return v;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& z) {
  Eigen::VectorXd e = (z.array() - z.maxCoeff()).exp();
  return e / e.sum();
}

Label argmax(const Eigen::VectorXd& p) {
  Label best = 0;
  for (Eigen::Index k = 1; k < p.size(); ++k) {
    if (p[k] > p[static_cast<Eigen::Index>(best)]) best = static_cast<Label>(k);
  }
  return best;
}

namespace {

Eigen::VectorXd sigmoid(const Eigen::VectorXd& a) {
  return (1.0 / (1.0 + (-a.array()).exp())).matrix();
}

// Adds the gradient of -log p_y for one sample into `grad`; returns the loss.
double accumulate(const MlpModel::Parameters& p, const Eigen::VectorXd& x, Label y,
                  MlpModel::Parameters* grad) {
  const Eigen::VectorXd h = sigmoid(p.w1 * x + p.b1);
  const Eigen::VectorXd z = p.w2 * h + p.b2;
  const double zmax = z.maxCoeff();
  const double log_norm = zmax + std::log((z.array() - zmax).exp().sum());
  const auto yi = static_cast<Eigen::Index>(y);
  const double loss = log_norm - z[yi];
  if (grad) {
    Eigen::VectorXd dz = (z.array() - log_norm).exp().matrix();
    dz[yi] -= 1.0;
    grad->w2.noalias() += dz * h.transpose();
    grad->b2 += dz;
    const Eigen::VectorXd da = ((p.w2.transpose() * dz).array() * h.array() * (1.0 - h.array())).matrix();
    grad->w1.noalias() += da * x.transpose();
    grad->b1 += da;
  }
  return loss;
}

void scale(MlpModel::Parameters& p, double s) {
  p.w1 *= s;
  p.b1 *= s;
  p.w2 *= s;
  p.b2 *= s;
}

void set_zero(MlpModel::Parameters& p) {
  p.w1.setZero();
  p.b1.setZero();
  p.w2.setZero();
  p.b2.setZero();
}

Label predict_encoded(const MlpModel::Parameters& p, const Eigen::VectorXd& x) {
  const Eigen::VectorXd z = p.w2 * sigmoid(p.w1 * x + p.b1) + p.b2;
  return argmax(z);
}

double accuracy_on(const MlpModel::Parameters& p, const std::vector<Eigen::VectorXd>& xs,
                   const std::vector<Label>& ys, const std::vector<std::size_t>& idx) {
  if (idx.empty()) return 0.0;
  std::size_t hit = 0;
  for (std::size_t i : idx) hit += predict_encoded(p, xs[i]) == ys[i] ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(idx.size());
}

void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
}

struct FitResult {
  MlpModel::Parameters params;
  std::size_t best_epoch = 0;
  double best_accuracy = -1.0;
};

// Mini-batch gradient descent with early stopping on validation accuracy.
FitResult fit(const std::vector<Eigen::VectorXd>& xs, const std::vector<Label>& ys,
              std::size_t classes, std::size_t hidden, const MlpConfig& cfg,
              std::vector<std::size_t> train_idx, const std::vector<std::size_t>& val_idx,
              std::mt19937_64& rng) {
  const auto inputs = static_cast<std::size_t>(xs.front().size());
  MlpModel::Parameters p = zero_parameters(inputs, hidden, classes);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double a1 = std::sqrt(6.0 / static_cast<double>(inputs + hidden));
  const double a2 = std::sqrt(6.0 / static_cast<double>(hidden + classes));
  for (Eigen::Index i = 0; i < p.w1.size(); ++i) p.w1.data()[i] = a1 * u(rng);
  for (Eigen::Index i = 0; i < p.w2.size(); ++i) p.w2.data()[i] = a2 * u(rng);

  const auto& monitor = val_idx.empty() ? train_idx : val_idx;
  FitResult best{p, 0, accuracy_on(p, xs, ys, monitor)};
  MlpModel::Parameters grad = zero_parameters(inputs, hidden, classes);
  std::size_t stale = 0;
  const std::size_t batch = std::max<std::size_t>(1, cfg.batch_size);

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    shuffle(train_idx, rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < train_idx.size(); start += batch) {
      const std::size_t end = std::min(train_idx.size(), start + batch);
      set_zero(grad);
      for (std::size_t k = start; k < end; ++k) {
        epoch_loss += accumulate(p, xs[train_idx[k]], ys[train_idx[k]], &grad);
      }
      scale(grad, cfg.learning_rate / static_cast<double>(end - start));
      p.w1 -= grad.w1;
      p.b1 -= grad.b1;
      p.w2 -= grad.w2;
      p.b2 -= grad.b2;
    }
    if (!std::isfinite(epoch_loss) || !p.w1.allFinite() || !p.w2.allFinite()) {
      throw TrainingDiverged(epoch);
    }
    const double acc = accuracy_on(p, xs, ys, monitor);
    if (acc > best.best_accuracy) {
      best = {p, epoch, acc};
      stale = 0;
    } else if (++stale >= cfg.patience) {
      break;
    }
  }
  return best;
}

}  // namespace

MlpModel::Parameters zero_parameters(std::size_t inputs, std::size_t hidden, std::size_t classes) {
  const auto d = static_cast<Eigen::Index>(inputs);
  const auto h = static_cast<Eigen::Index>(hidden);
  const auto k = static_cast<Eigen::Index>(classes);
  return {Eigen::MatrixXd::Zero(h, d), Eigen::VectorXd::Zero(h), Eigen::MatrixXd::Zero(k, h),
          Eigen::VectorXd::Zero(k)};
}

double cross_entropy(const MlpModel::Parameters& params, const std::vector<Eigen::VectorXd>& inputs,
                     const std::vector<Label>& labels, MlpModel::Parameters* grad) {
  if (inputs.empty()) return 0.0;
  if (grad) {
    *grad = zero_parameters(static_cast<std::size_t>(params.w1.cols()),
                            static_cast<std::size_t>(params.w1.rows()),
                            static_cast<std::size_t>(params.w2.rows()));
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) loss += accumulate(params, inputs[i], labels[i], grad);
  const double inv = 1.0 / static_cast<double>(inputs.size());
  if (grad) scale(*grad, inv);
  return loss * inv;
}

MlpModel::MlpModel(FeatureSchema schema, Parameters params, MlpTrainingInfo info)
    : Oracle(std::move(schema)), encoder_(this->schema()), params_(std::move(params)),
      info_(std::move(info)) {
  const auto d = static_cast<Eigen::Index>(encoder_.width());
  const auto k = static_cast<Eigen::Index>(this->schema().class_count());
  const auto h = params_.b1.size();
  if (h < 1 || params_.w1.rows() != h || params_.w1.cols() != d || params_.w2.rows() != k ||
      params_.w2.cols() != h || params_.b2.size() != k) {
    throw Error(ErrorKind::Data, "mlp: parameter dimensions do not match the schema");
  }
  if (!params_.w1.allFinite() || !params_.b1.allFinite() || !params_.w2.allFinite() ||
      !params_.b2.allFinite()) {
    throw Error(ErrorKind::Data, "mlp: non-finite weights");
  }
}

Eigen::VectorXd MlpModel::probabilities(const Instance& x) const {
  check_instance(x);
  const Eigen::VectorXd in = encoder_.encode(x);
  return softmax(params_.w2 * sigmoid(params_.w1 * in + params_.b1) + params_.b2);
}

Label MlpModel::predict(const Instance& x) const {
  check_instance(x);
  return predict_encoded(params_, encoder_.encode(x));
}

MlpModel train_mlp(const LabeledDataset& train, const MlpConfig& config) {
  if (config.hidden_candidates.empty()) throw Error(ErrorKind::Usage, "mlp: no hidden-size candidates");
  if (std::find(config.hidden_candidates.begin(), config.hidden_candidates.end(), 0u) !=
      config.hidden_candidates.end()) {
    throw Error(ErrorKind::Usage, "mlp: hidden sizes must be positive");
  }
  if (train.size() < 20) throw Error(ErrorKind::Data, "mlp: need at least 20 training instances");
  std::vector<std::size_t> per_class(train.schema.class_count(), 0);
  for (Label y : train.labels) ++per_class[y];
  if (std::count_if(per_class.begin(), per_class.end(), [](auto c) { return c > 0; }) < 2) {
    throw Error(ErrorKind::Data, "mlp: training data contains a single class");
  }
  if (!(config.validation_fraction > 0.0 && config.validation_fraction < 1.0)) {
    throw Error(ErrorKind::Usage, "mlp: validation fraction must lie in (0, 1)");
  }
  const std::size_t folds = std::max<std::size_t>(2, config.folds);

  InputEncoder encoder(train.schema);
  std::vector<Eigen::VectorXd> xs;
  xs.reserve(train.size());
  for (const auto& x : train.instances) xs.push_back(encoder.encode(x));
  const std::size_t classes = train.schema.class_count();

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  auto split_rng = make_stream(config.seed, 0);
  shuffle(order, split_rng);

  MlpTrainingInfo info;
  info.hidden_candidates = config.hidden_candidates;
  info.seed = config.seed;
  for (std::size_t c = 0; c < config.hidden_candidates.size(); ++c) {
    const std::size_t hidden = config.hidden_candidates[c];
    double total = 0.0;
    for (std::size_t f = 0; f < folds; ++f) {
      std::vector<std::size_t> fit_idx, held_out;
      for (std::size_t k = 0; k < order.size(); ++k) (k % folds == f ? held_out : fit_idx).push_back(order[k]);
      const auto n_val = static_cast<std::size_t>(
          std::llround(config.validation_fraction * static_cast<double>(fit_idx.size())));
      std::vector<std::size_t> val(fit_idx.end() - static_cast<std::ptrdiff_t>(n_val), fit_idx.end());
      fit_idx.resize(fit_idx.size() - n_val);
      auto rng = make_stream(config.seed, 1 + c * folds + f);
      auto result = fit(xs, train.labels, classes, hidden, config, fit_idx, val, rng);
      total += accuracy_on(result.params, xs, train.labels, held_out);
    }
    info.cv_accuracy.push_back(total / static_cast<double>(folds));
  }
  const auto best = static_cast<std::size_t>(
      std::max_element(info.cv_accuracy.begin(), info.cv_accuracy.end()) - info.cv_accuracy.begin());
  info.selected_hidden = config.hidden_candidates[best];

  const auto n_val = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(config.validation_fraction * static_cast<double>(order.size()))));
  std::vector<std::size_t> fit_idx(order.begin(), order.end() - static_cast<std::ptrdiff_t>(n_val));
  std::vector<std::size_t> val(order.end() - static_cast<std::ptrdiff_t>(n_val), order.end());
  auto rng = make_stream(config.seed, 0xF17A1);
  auto result = fit(xs, train.labels, classes, info.selected_hidden, config, fit_idx, val, rng);
  info.best_epoch = result.best_epoch;
  info.validation_accuracy = result.best_accuracy;
  info.train_accuracy = accuracy_on(result.params, xs, train.labels, fit_idx);
  return MlpModel(train.schema, std::move(result.params), std::move(info));
}

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::MatrixXd matrix_from_json(const json& j, Eigen::Index cols_hint) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows ? static_cast<Eigen::Index>(j.at(0).size()) : cols_hint;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j.at(r).size()) != cols) {
      throw Error(ErrorKind::Data, "mlp: ragged weight matrix");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
  }
  return m;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = j.at(i).get<double>();
  return v;
}

}  // namespace

std::string MlpModel::to_json() const {
  json encoding = json::array();
  for (std::size_t i = 0; i < schema().size(); ++i) {
    const auto& f = schema().feature(i);
    json e{{"feature", f.name}, {"offset", encoder_.offset(i)}};
    if (f.categorical()) {
      e["type"] = "one-hot";
      e["values"] = f.values;
    } else {
      e["type"] = "min-max";
      e["min"] = f.min;
      e["max"] = f.max;
    }
    encoding.push_back(std::move(e));
  }
  json doc{
      {"format", "trepan-mlp"},
      {"version", 1},
      {"schema", json::parse(schema().to_json())},
      {"schema_fingerprint", fingerprint()},
      {"encoding", encoding},
      {"hidden_size", hidden_size()},
      {"activation", {{"hidden", "sigmoid"}, {"output", "softmax"}}},
      {"w1", matrix_to_json(params_.w1)},
      {"b1", vector_to_json(params_.b1)},
      {"w2", matrix_to_json(params_.w2)},
      {"b2", vector_to_json(params_.b2)},
      {"training",
       {{"hidden_candidates", info_.hidden_candidates},
        {"cv_accuracy", info_.cv_accuracy},
        {"selected_hidden", info_.selected_hidden},
        {"best_epoch", info_.best_epoch},
        {"validation_accuracy", info_.validation_accuracy},
        {"train_accuracy", info_.train_accuracy},
        {"seed", info_.seed}}},
  };
  return doc.dump(1);
}

MlpModel mlp_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format") != "trepan-mlp") throw Error(ErrorKind::Data, "not an mlp model document");
    if (doc.at("version").get<int>() != 1) throw Error(ErrorKind::Data, "unsupported mlp model version");
    FeatureSchema schema = parse_schema(doc.at("schema").dump());
    if (schema.fingerprint() != doc.at("schema_fingerprint").get<std::string>()) {
      throw SchemaMismatch("mlp: stored schema fingerprint does not match the embedded schema");
    }
    MlpModel::Parameters p;
    const InputEncoder enc(schema);
    p.w1 = matrix_from_json(doc.at("w1"), static_cast<Eigen::Index>(enc.width()));
    p.b1 = vector_from_json(doc.at("b1"));
    p.w2 = matrix_from_json(doc.at("w2"), p.b1.size());
    p.b2 = vector_from_json(doc.at("b2"));
    MlpTrainingInfo info;
    if (doc.contains("training")) {
      const auto& t = doc.at("training");
      info.hidden_candidates = t.value("hidden_candidates", std::vector<std::size_t>{});
      info.cv_accuracy = t.value("cv_accuracy", std::vector<double>{});
      info.selected_hidden = t.value("selected_hidden", std::size_t{0});
      info.best_epoch = t.value("best_epoch", std::size_t{0});
      info.validation_accuracy = t.value("validation_accuracy", 0.0);
      info.train_accuracy = t.value("train_accuracy", 0.0);
      info.seed = t.value("seed", std::uint64_t{0});
    }
    return MlpModel(std::move(schema), std::move(p), std::move(info));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Data, std::string("mlp model: ") + e.what());
  }
}

MlpModel load_mlp(const std::string& path) { return mlp_from_json(read_file(path, "model")); }

}  // namespace trepan
