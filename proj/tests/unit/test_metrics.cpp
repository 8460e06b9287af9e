#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "trepan/error.hpp"
#include "trepan/metrics.hpp"

using namespace trepan;
using namespace trepan::testing;

TEST(Complexity, FrozenValues) {
  EXPECT_NEAR(syntactic_complexity(1, 0, 0.5), 0.1, 1e-12);
  EXPECT_NEAR(syntactic_complexity(4, 8, 0.5), 0.4 + 0.16, 1e-12);
  EXPECT_NEAR(syntactic_complexity(21, 140, 0.5), 2.1 + 2.8, 1e-12);
  EXPECT_NEAR(syntactic_complexity(4, 8, 1.0), 0.8, 1e-12);
  EXPECT_NEAR(syntactic_complexity(4, 8, 0.0), 0.32, 1e-12);
  auto s = binary_schema(2);
  EXPECT_NEAR(syntactic_complexity(full_tree(s, 2), 0.5), 0.56, 1e-12);
  EXPECT_NEAR(syntactic_complexity(DecisionTree(s, {TreeNode{}}), 0.5), 0.1, 1e-12);
}

TEST(Complexity, MonotoneInLeavesAndDepth) {
  for (double a : {0.0, 0.3, 0.5, 1.0}) {
    for (std::size_t n = 1; n < 30; ++n) {
      EXPECT_LE(syntactic_complexity(n, 3 * n, a), syntactic_complexity(n + 1, 3 * n, a));
      EXPECT_LE(syntactic_complexity(n, 3 * n, a), syntactic_complexity(n, 3 * n + 1, a));
    }
  }
}

TEST(SizeCategory, Boundaries) {
  EXPECT_EQ(size_category(0), SizeCategory::Small);
  EXPECT_EQ(size_category(10), SizeCategory::Small);
  EXPECT_EQ(size_category(11), SizeCategory::Medium);
  EXPECT_EQ(size_category(20), SizeCategory::Medium);
  EXPECT_EQ(size_category(21), SizeCategory::Large);
  EXPECT_EQ(size_category(30), SizeCategory::Large);
  EXPECT_EQ(size_category(31), SizeCategory::Oversize);
  EXPECT_EQ(to_string(SizeCategory::Medium), "medium");
  EXPECT_EQ(size_category(full_tree(binary_schema(3), 3)), SizeCategory::Small);
}

TEST(Accuracy, CountsAndErrors) {
  auto s = binary_schema(2);
  auto grid = binary_grid(2);
  auto tree = full_tree(s, 1);  // every leaf says neg
  auto d = dataset_from(s, grid, [](const Instance& x) -> Label { return x.values[0] == 1 && x.values[1] == 1; });
  EXPECT_DOUBLE_EQ(accuracy(tree, d), 0.75);
  LabeledDataset empty{s, {}, {}};
  EXPECT_THROW(accuracy(tree, empty), Error);
  auto other = dataset_from(binary_schema(3), binary_grid(3), [](const Instance&) -> Label { return 0; });
  EXPECT_THROW(accuracy(tree, other), SchemaMismatch);
}

TEST(Fidelity, EqualsAccuracyOnOracleLabels) {
  auto s = binary_schema(3);
  auto grid = binary_grid(3);
  auto oracle = table_from(s, grid, depth3_target);
  auto tree = full_tree(s, 1);
  auto random_labels = dataset_from(s, grid, [](const Instance& x) -> Label { return x.values[2] == 1; });
  auto relabeled = dataset_from(s, grid, depth3_target);
  EXPECT_DOUBLE_EQ(fidelity(tree, oracle, random_labels), accuracy(tree, relabeled));
  EXPECT_DOUBLE_EQ(fidelity(tree, oracle, random_labels), 0.5);
}

TEST(Fidelity, InvariantUnderReordering) {
  auto s = binary_schema(3);
  auto grid = binary_grid(3);
  auto oracle = table_from(s, grid, depth3_target);
  auto tree = full_tree(s, 2);
  auto d = dataset_from(s, grid, depth3_target);
  const double base = fidelity(tree, oracle, d);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    std::vector<std::size_t> idx(d.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    LabeledDataset p{s, {}, {}};
    for (auto i : idx) {
      p.instances.push_back(d.instances[i]);
      p.labels.push_back(d.labels[i]);
    }
    EXPECT_DOUBLE_EQ(fidelity(tree, oracle, p), base);
  }
}

TEST(Report, EvaluateAndFormat) {
  auto s = binary_schema(2);
  auto grid = binary_grid(2);
  auto oracle = table_from(s, grid, [](const Instance& x) -> Label { return x.values[0] == 1; });
  auto d = dataset_from(s, grid, [](const Instance& x) -> Label { return x.values[0] == 1; });
  auto tree = full_tree(s, 2);
  auto r = evaluate(tree, d, &oracle, 0.5);
  EXPECT_DOUBLE_EQ(r.accuracy, 0.5);
  ASSERT_TRUE(r.fidelity);
  EXPECT_DOUBLE_EQ(*r.fidelity, 0.5);
  EXPECT_EQ(r.n_leaves, 4u);
  EXPECT_EQ(r.b_total, 8u);
  EXPECT_NE(r.to_text().find("syntactic_complexity: 0.560000"), std::string::npos);
  EXPECT_NE(evaluate(tree, d, nullptr).to_json().find("\"fidelity\": null"), std::string::npos);
  EXPECT_THROW(evaluate(tree, d, nullptr, 1.5), Error);
}
