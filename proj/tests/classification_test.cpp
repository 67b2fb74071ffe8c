#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "summer/evaluation.hpp"

namespace {

using summer::ClassificationItem;

std::vector<ClassificationItem> aligned_items(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mos(1.0, 5.0);
  std::vector<ClassificationItem> items(n);
  for (auto& it : items) {
    it.mos = mos(rng);
    it.objective = it.mos;
    it.mos_std = 0.6;
    it.vote_count = 25.0;
  }
  return items;
}

TEST(AucMannWhitney, Basics) {
  std::vector<double> pos = {3, 4, 5}, neg = {0, 1, 2};
  EXPECT_EQ(summer::auc_mann_whitney(pos, neg), 1.0);
  EXPECT_EQ(summer::auc_mann_whitney(neg, pos), 0.0);
  std::vector<double> tie = {1}, tie2 = {1};
  EXPECT_EQ(summer::auc_mann_whitney(tie, tie2), 0.5);
  EXPECT_FALSE(summer::auc_mann_whitney({}, neg).has_value());
}

TEST(AucMannWhitney, MatchesTrapezoidalRoc) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<int> size(1, 200), level(0, 20);
    std::vector<double> pos(size(rng)), neg(size(rng));
    for (double& v : pos) v = level(rng) + 2;
    for (double& v : neg) v = level(rng);
    EXPECT_NEAR(*summer::auc_mann_whitney(pos, neg), summer::oracle::trapezoid_auc(pos, neg),
                1e-9);
  }
}

TEST(Classification, PerfectlyAlignedData) {
  auto items = aligned_items(60, 1);
  auto r = summer::classification_analysis(items);
  ASSERT_TRUE(r.auc_better_worse && r.c0 && r.auc_different_similar);
  EXPECT_EQ(*r.auc_better_worse, 1.0);
  EXPECT_EQ(*r.c0, 1.0);
  EXPECT_EQ(*r.auc_different_similar, 1.0);
  EXPECT_EQ(r.different_pairs + r.similar_pairs, 60u * 59u / 2u);
  EXPECT_EQ(r.excluded, 0u);
}

TEST(Classification, ReversedPolarityIsWorstCase) {
  auto items = aligned_items(40, 2);
  for (auto& it : items) it.objective = -it.mos;
  auto r = summer::classification_analysis(items);
  EXPECT_EQ(*r.auc_better_worse, 0.0);
  EXPECT_EQ(*r.c0, 0.0);
}

TEST(Classification, PermutedDataIsChance) {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    auto items = aligned_items(500, seed);
    std::vector<double> objective;
    for (const auto& it : items) objective.push_back(it.objective);
    std::shuffle(objective.begin(), objective.end(), std::mt19937_64(seed * 7));
    for (std::size_t i = 0; i < items.size(); ++i) items[i].objective = objective[i];
    auto r = summer::classification_analysis(items);
    EXPECT_GE(*r.auc_better_worse, 0.45);
    EXPECT_LE(*r.auc_better_worse, 0.55);
    EXPECT_NEAR(*r.auc_different_similar, 0.5, 0.05);
  }
}

TEST(Classification, PairLabelUsesZTest) {
  // se = sqrt(2 * 1 / 4) = 0.707; gap 1.0 -> z = 1.41 (similar); gap 2.0 -> z = 2.83.
  std::vector<ClassificationItem> items = {
      {0.0, 1.0, 1.0, 4.0}, {1.0, 2.0, 1.0, 4.0}, {2.0, 3.0, 1.0, 4.0}};
  auto r = summer::classification_analysis(items);
  EXPECT_EQ(r.similar_pairs, 2u);
  EXPECT_EQ(r.different_pairs, 1u);
}

TEST(Classification, ItemsWithoutVotesAreExcluded) {
  auto items = aligned_items(10, 3);
  items[0].mos_std.reset();
  items[1].vote_count.reset();
  auto r = summer::classification_analysis(items);
  EXPECT_EQ(r.excluded, 2u);
  EXPECT_EQ(r.different_pairs + r.similar_pairs, 8u * 7u / 2u);
}

TEST(Classification, NoDifferentPairsLeavesAucEmpty) {
  std::vector<ClassificationItem> items = {{0.0, 3.0, 1.0, 2.0}, {1.0, 3.1, 1.0, 2.0}};
  auto r = summer::classification_analysis(items);
  EXPECT_EQ(r.different_pairs, 0u);
  EXPECT_FALSE(r.auc_better_worse.has_value());
  EXPECT_FALSE(r.c0.has_value());
  EXPECT_FALSE(r.auc_different_similar.has_value());
}

TEST(Classification, ResultsInUnitRange) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  auto items = aligned_items(80, 4);
  for (auto& it : items) it.objective = it.mos + 2.0 * n(rng);
  auto r = summer::classification_analysis(items);
  for (double v : {*r.auc_better_worse, *r.auc_different_similar, *r.c0}) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  EXPECT_GT(*r.auc_better_worse, 0.5);
}

}  // namespace
