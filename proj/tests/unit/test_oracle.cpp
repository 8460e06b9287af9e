#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "gradcheck.hpp"
#include "trepan/error.hpp"
#include "trepan/oracle.hpp"

using namespace trepan;
using trepan::testing::binary_grid;
using trepan::testing::binary_schema;
using trepan::testing::gradient_error;
using trepan::testing::random_parameters;

namespace {

FeatureSchema two_numeric() {
  std::vector<Feature> fs(2);
  fs[0].name = "x";
  fs[1].name = "y";
  for (auto& f : fs) {
    f.min = -1;
    f.max = 1;
  }
  return FeatureSchema(fs, "c", {"low", "high"});
}

}  // namespace

TEST(Softmax, NormalizedAndPositive) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 30.0);
  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXd z(4);
    for (int i = 0; i < 4; ++i) z[i] = g(rng);
    auto p = softmax(z);
    EXPECT_NEAR(p.sum(), 1.0, 1e-9);
    EXPECT_GT(p.minCoeff(), 0.0);
  }
  Eigen::VectorXd big(2);
  big << 1000.0, 1000.0;
  EXPECT_NEAR(softmax(big)[0], 0.5, 1e-12);
}

TEST(Argmax, TiesGoToLowestIndex) {
  Eigen::VectorXd p(3);
  p << 0.4, 0.4, 0.2;
  EXPECT_EQ(argmax(p), 0u);
  p << 0.2, 0.4, 0.4;
  EXPECT_EQ(argmax(p), 1u);
}

TEST(Mlp, ZeroOutputLayerPredictsFirstLabel) {
  auto schema = binary_schema(3);
  std::mt19937_64 rng(1);
  auto p = random_parameters(rng, 6, 3, 2);
  p.w2.setZero();
  p.b2.setZero();
  MlpModel m(schema, p);
  for (const auto& x : binary_grid(3)) EXPECT_EQ(m.predict(x), 0u);
}

TEST(Mlp, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) EXPECT_LT(gradient_error(rng), 1e-4) << "network " << t;
}

TEST(Mlp, EncoderOneHotAndMinMax) {
  std::vector<Feature> fs(2);
  fs[0].name = "g";
  fs[0].kind = FeatureKind::Categorical;
  fs[0].values = {"a", "b", "c"};
  fs[1].name = "v";
  fs[1].min = 10;
  fs[1].max = 20;
  FeatureSchema schema(fs, "y", {"n", "p"});
  InputEncoder enc(schema);
  EXPECT_EQ(enc.width(), 4u);
  EXPECT_EQ(enc.offset(1), 3u);
  auto e = enc.encode(Instance{{2, 15}});
  EXPECT_EQ(e[0], 0.0);
  EXPECT_EQ(e[2], 1.0);
  EXPECT_DOUBLE_EQ(e[3], 0.5);
  EXPECT_LT(enc.encode(Instance{{0, 11}})[3], enc.encode(Instance{{0, 12}})[3]);
}

TEST(Mlp, LearnsLinearlySeparableData) {
  auto schema = two_numeric();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  LabeledDataset d{schema, {}, {}};
  while (d.size() < 200) {
    const double x = u(rng), y = u(rng);
    if (std::abs(x + y) < 0.05) continue;
    d.instances.push_back(Instance{{x, y}});
    d.labels.push_back(x + y > 0 ? 1 : 0);
  }
  MlpConfig cfg;
  cfg.hidden_candidates = {2, 4};
  cfg.max_epochs = 2000;
  cfg.patience = 200;
  cfg.seed = 3;
  auto m = train_mlp(d, cfg);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < d.size(); ++i) hits += m.predict(d.instances[i]) == d.labels[i];
  EXPECT_GE(hits / 200.0, 0.99);
}

TEST(Mlp, LearnsXor) {
  auto schema = binary_schema(2);
  LabeledDataset d{schema, {}, {}};
  for (int rep = 0; rep < 10; ++rep) {
    for (const auto& x : binary_grid(2)) {
      d.instances.push_back(x);
      d.labels.push_back(x.values[0] != x.values[1] ? 1 : 0);
    }
  }
  MlpConfig cfg;
  cfg.hidden_candidates = {4};
  cfg.max_epochs = 2000;
  cfg.patience = 400;
  cfg.seed = 2;
  auto m = train_mlp(d, cfg);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < d.size(); ++i) hits += m.predict(d.instances[i]) == d.labels[i];
  EXPECT_GE(hits / static_cast<double>(d.size()), 0.95);
}

TEST(Mlp, TrainingIsDeterministic) {
  auto schema = trepan::testing::binary_schema(3);
  auto d = trepan::testing::dataset_from(schema, binary_grid(3), trepan::testing::depth3_target);
  LabeledDataset big{schema, {}, {}};
  for (int r = 0; r < 5; ++r) {
    big.instances.insert(big.instances.end(), d.instances.begin(), d.instances.end());
    big.labels.insert(big.labels.end(), d.labels.begin(), d.labels.end());
  }
  MlpConfig cfg;
  cfg.hidden_candidates = {2, 4};
  cfg.max_epochs = 60;
  auto a = train_mlp(big, cfg), b = train_mlp(big, cfg);
  EXPECT_EQ(a.hidden_size(), b.hidden_size());
  EXPECT_NEAR(a.training_info().validation_accuracy, b.training_info().validation_accuracy, 1e-9);
  EXPECT_EQ(a.to_json(), b.to_json());
}

TEST(Mlp, RejectsDegenerateInput) {
  auto schema = binary_schema(2);
  LabeledDataset d{schema, {}, {}};
  for (int i = 0; i < 30; ++i) {
    d.instances.push_back(binary_grid(2)[i % 4]);
    d.labels.push_back(0);
  }
  EXPECT_THROW(train_mlp(d, MlpConfig{}), Error);
  MlpConfig none;
  none.hidden_candidates.clear();
  d.labels[0] = 1;
  EXPECT_THROW(train_mlp(d, none), Error);
}

TEST(Mlp, DivergenceReportsEpoch) {
  auto schema = two_numeric();
  LabeledDataset d{schema, {}, {}};
  for (int i = 0; i < 40; ++i) {
    d.instances.push_back(Instance{{(i % 7) / 7.0, (i % 5) / 5.0}});
    d.labels.push_back(i % 2);
  }
  MlpConfig cfg;
  cfg.hidden_candidates = {4};
  cfg.learning_rate = 1e308;
  try {
    train_mlp(d, cfg);
    FAIL() << "expected divergence";
  } catch (const TrainingDiverged& e) {
    EXPECT_GE(e.epoch(), 1u);
  }
}

TEST(Mlp, JsonRoundTrip) {
  auto schema = binary_schema(3);
  std::mt19937_64 rng(8);
  MlpModel m(schema, random_parameters(rng, 6, 3, 2));
  auto back = mlp_from_json(m.to_json());
  EXPECT_EQ(back.to_json(), m.to_json());
  for (const auto& x : binary_grid(3)) EXPECT_EQ(back.predict(x), m.predict(x));
  EXPECT_THROW(mlp_from_json("{\"format\":\"other\"}"), Error);
}

TEST(Mlp, SchemaMismatchOnPredict) {
  auto schema = binary_schema(3);
  MlpModel m(schema, zero_parameters(6, 2, 2));
  EXPECT_THROW(m.predict(Instance{{0, 1}}), SchemaMismatch);
  EXPECT_THROW(m.predict(Instance{{0, 1, 5}}), SchemaMismatch);
}

TEST(TableOracle, LookupAndMiss) {
  auto schema = binary_schema(2);
  auto t = parse_table_oracle("f0,f1,predicted\n0,0,neg\n0,1,pos\n1,1,neg\n", schema);
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ(t.predict(Instance{{0, 1}}), 1u);
  try {
    t.predict(Instance{{1, 0}});
    FAIL();
  } catch (const UnlistedInstance& e) {
    EXPECT_NE(std::string(e.what()).find("nearest"), std::string::npos);
  }
}

TEST(TableOracle, ConflictingDuplicatesRejected) {
  auto schema = binary_schema(2);
  EXPECT_THROW(parse_table_oracle("f0,f1,predicted\n0,0,neg\n0,0,pos\n", schema), Error);
  EXPECT_NO_THROW(parse_table_oracle("f0,f1,predicted\n0,0,neg\n0,0,neg\n", schema));
  EXPECT_THROW(parse_table_oracle("f1,f0,predicted\n0,0,neg\n", schema), Error);
}

TEST(TableOracle, ImplementsAnd) {
  auto schema = binary_schema(2);
  auto t = parse_table_oracle("f0,f1,predicted\n0,0,neg\n0,1,neg\n1,0,neg\n1,1,pos\n", schema);
  for (const auto& x : binary_grid(2)) EXPECT_EQ(t.predict(x), (x.values[0] == 1 && x.values[1] == 1) ? 1u : 0u);
}
