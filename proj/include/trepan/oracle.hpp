#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "trepan/data.hpp"

namespace trepan {

/// Black-box classifier queried by the extractor. Implementations are
/// immutable after construction, so predict() may run concurrently.
class Oracle {
 public:
  virtual ~Oracle() = default;

  /// Throws SchemaMismatch when `x` does not fit the oracle's schema.
  virtual Label predict(const Instance& x) const = 0;
  virtual std::string kind() const = 0;

  const FeatureSchema& schema() const noexcept { return schema_; }
  std::string fingerprint() const { return schema_.fingerprint(); }
  std::vector<Label> predict_all(const std::vector<Instance>& xs) const;

 protected:
  explicit Oracle(FeatureSchema schema) : schema_(std::move(schema)) {}
  void check_instance(const Instance& x) const;

 private:
  FeatureSchema schema_;
};

using OracleHandle = std::shared_ptr<const Oracle>;

/// One-hot for categorical features, min-max scaling from the schema bounds
/// for numeric ones.
class InputEncoder {
 public:
  InputEncoder() = default;
  explicit InputEncoder(const FeatureSchema& schema);

  std::size_t width() const noexcept { return width_; }
  /// First encoded column of feature i.
  std::size_t offset(std::size_t i) const { return offsets_.at(i); }
  Eigen::VectorXd encode(const Instance& x) const;

 private:
  FeatureSchema schema_;
  std::vector<std::size_t> offsets_;
  std::size_t width_ = 0;
};

struct MlpConfig {
  std::vector<std::size_t> hidden_candidates{2, 4, 8, 16};
  std::size_t max_epochs = 300;
  double learning_rate = 0.5;
  double validation_fraction = 0.2;
  std::size_t patience = 25;
  std::size_t batch_size = 16;
  std::size_t folds = 5;
  std::uint64_t seed = 1;
};

struct MlpTrainingInfo {
  std::vector<std::size_t> hidden_candidates;
  std::vector<double> cv_accuracy;  // mean held-out fold accuracy per candidate
  std::size_t selected_hidden = 0;
  std::size_t best_epoch = 0;
  double validation_accuracy = 0.0;
  double train_accuracy = 0.0;
  std::uint64_t seed = 0;
};

/// Sigmoid hidden layer, softmax output.
class MlpModel final : public Oracle {
 public:
  struct Parameters {
    Eigen::MatrixXd w1;  // hidden x input
    Eigen::VectorXd b1;
    Eigen::MatrixXd w2;  // classes x hidden
    Eigen::VectorXd b2;
  };

  MlpModel(FeatureSchema schema, Parameters params, MlpTrainingInfo info = {});

  Label predict(const Instance& x) const override;
  std::string kind() const override { return "mlp"; }

  Eigen::VectorXd probabilities(const Instance& x) const;
  const Parameters& parameters() const noexcept { return params_; }
  const InputEncoder& encoder() const noexcept { return encoder_; }
  std::size_t hidden_size() const { return static_cast<std::size_t>(params_.b1.size()); }
  const MlpTrainingInfo& training_info() const noexcept { return info_; }

  std::string to_json() const;

 private:
  InputEncoder encoder_;
  Parameters params_;
  MlpTrainingInfo info_;
};

MlpModel::Parameters zero_parameters(std::size_t inputs, std::size_t hidden, std::size_t classes);

// Numerically stable softmax.
Eigen::VectorXd softmax(const Eigen::VectorXd& z);

/// Lowest index wins ties.
Label argmax(const Eigen::VectorXd& p);

/// Mean cross-entropy over (inputs, labels) and, when `grad` is non-null,
/// its analytic gradient with respect to every parameter.
double cross_entropy(const MlpModel::Parameters& params, const std::vector<Eigen::VectorXd>& inputs,
                     const std::vector<Label>& labels, MlpModel::Parameters* grad);

/// Selects the hidden size by k-fold cross-validation, then retrains on a
/// (1 - validation_fraction) split with early stopping on validation accuracy.
MlpModel train_mlp(const LabeledDataset& train, const MlpConfig& config);

MlpModel mlp_from_json(const std::string& text);
MlpModel load_mlp(const std::string& path);

/// Exact-match lookup over exported predictions.
class TableOracle final : public Oracle {
 public:
  TableOracle(FeatureSchema schema, std::map<Instance, Label> table);

  /// Throws UnlistedInstance for instances missing from the table.
  Label predict(const Instance& x) const override;
  std::string kind() const override { return "table"; }
  std::size_t size() const noexcept { return table_.size(); }

 private:
  std::map<Instance, Label> table_;
};

/// Predictions CSV: feature columns in schema order plus a `predicted` column.
/// Duplicate rows with conflicting labels are rejected.
TableOracle parse_table_oracle(std::string_view csv_text, const FeatureSchema& schema);
TableOracle table_oracle(const std::string& csv_path, const FeatureSchema& schema);

/// Dispatches on the file: `.csv` loads a table oracle, anything else a model document.
OracleHandle load_oracle(const std::string& path, const FeatureSchema& schema);

}  // namespace trepan
