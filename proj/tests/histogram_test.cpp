#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "summer/error.hpp"
#include "summer/evaluation.hpp"

namespace {

using summer::HistogramMetric;
using summer::kAllHistogramMetrics;

std::vector<double> random_histogram(std::mt19937_64& rng, std::size_t bins, bool sparse = false) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> h(bins);
  for (double& v : h) v = sparse && u(rng) < 0.4 ? 0.0 : u(rng);
  if (std::accumulate(h.begin(), h.end(), 0.0) == 0.0) h[0] = 1.0;
  const double total = std::accumulate(h.begin(), h.end(), 0.0);
  for (double& v : h) v /= total;
  return h;
}

TEST(HistogramDistance, SelfDistanceIsZero) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    auto h = random_histogram(rng, 10, trial % 2);
    for (auto m : kAllHistogramMetrics)
      EXPECT_NEAR(summer::histogram_distance(h, h, m), 0.0, 1e-12) << summer::to_string(m);
  }
}

TEST(HistogramDistance, OppositeOneHots) {
  std::vector<double> a(10, 0.0), b(10, 0.0);
  a.front() = 1.0;
  b.back() = 1.0;
  EXPECT_NEAR(summer::histogram_distance(a, b, HistogramMetric::kEmd), 1.0, 1e-12);
  EXPECT_NEAR(summer::histogram_distance(a, b, HistogramMetric::kHi), 1.0, 1e-12);
  EXPECT_NEAR(summer::histogram_distance(a, b, HistogramMetric::kL2), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(summer::histogram_distance(a, b, HistogramMetric::kJs), std::log(2.0), 1e-12);
  // Only the p>0 bin contributes: 1 * ln(1 / eps).
  EXPECT_NEAR(summer::histogram_distance(a, b, HistogramMetric::kKl), -std::log(1e-12), 1e-9);
}

TEST(HistogramDistance, IdentitiesOnRandomPairs) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t bins = 2 + trial % 31;
    auto a = random_histogram(rng, bins, trial % 3 == 0);
    auto b = random_histogram(rng, bins, trial % 5 == 0);
    for (auto m : kAllHistogramMetrics) {
      const double ab = summer::histogram_distance(a, b, m);
      EXPECT_GE(ab, 0.0) << summer::to_string(m);
      if (m != HistogramMetric::kKl)
        EXPECT_NEAR(ab, summer::histogram_distance(b, a, m), 1e-12) << summer::to_string(m);
    }
    EXPECT_LE(summer::histogram_distance(a, b, HistogramMetric::kJs), std::log(2.0) + 1e-12);
    EXPECT_GT(summer::histogram_distance(a, b, HistogramMetric::kKl), 1e-9);
  }
}

TEST(HistogramDistance, EmdMatchesTransportOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_histogram(rng, 32, trial % 2);
    auto b = random_histogram(rng, 32, trial % 3 == 0);
    EXPECT_NEAR(summer::histogram_distance(a, b, HistogramMetric::kEmd),
                summer::oracle::transport_emd(a, b), 1e-9);
  }
}

TEST(HistogramDistance, KnownKl) {
  std::vector<double> p = {0.5, 0.5}, q = {0.25, 0.75};
  const double expected = 0.5 * std::log(2.0) + 0.5 * std::log(0.5 / 0.75);
  EXPECT_NEAR(summer::histogram_distance(p, q, HistogramMetric::kKl), expected, 1e-12);
}

TEST(HistogramDistance, InvalidInputs) {
  std::vector<double> a = {0.5, 0.5}, b = {0.2, 0.3, 0.5}, unnormalized = {0.5, 0.6},
                      negative = {1.5, -0.5};
  EXPECT_THROW(summer::histogram_distance(a, b, HistogramMetric::kL2), summer::ParameterError);
  EXPECT_THROW(summer::histogram_distance(a, unnormalized, HistogramMetric::kEmd),
               summer::ParameterError);
  EXPECT_THROW(summer::histogram_distance(negative, a, HistogramMetric::kHi),
               summer::ParameterError);
}

TEST(HistogramDistance, Names) {
  EXPECT_EQ(summer::to_string(HistogramMetric::kEmd), "emd");
  EXPECT_EQ(summer::to_string(HistogramMetric::kKl), "kl");
  EXPECT_EQ(summer::to_string(HistogramMetric::kJs), "js");
  EXPECT_EQ(summer::to_string(HistogramMetric::kHi), "hi");
  EXPECT_EQ(summer::to_string(HistogramMetric::kL2), "l2");
}

TEST(NormalizedHistogram, UniformBinning) {
  std::vector<double> x = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  auto h = summer::normalized_histogram(x);
  ASSERT_EQ(h.size(), 10u);
  // The maximum falls into the last bin.
  for (std::size_t i = 0; i < 9; ++i) EXPECT_NEAR(h[i], 1.0 / 11.0, 1e-15);
  EXPECT_NEAR(h[9], 2.0 / 11.0, 1e-15);
}

TEST(NormalizedHistogram, ScaleInvariantAndNormalized) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> d;
  std::vector<double> x(500), scaled(500);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = d(rng);
    scaled[i] = 7.0 * x[i] + 100.0;
  }
  auto h = summer::normalized_histogram(x, 16);
  EXPECT_EQ(h, summer::normalized_histogram(scaled, 16));
  EXPECT_NEAR(std::accumulate(h.begin(), h.end(), 0.0), 1.0, 1e-12);
}

TEST(NormalizedHistogram, ConstantGoesToFirstBin) {
  auto h = summer::normalized_histogram(std::vector<double>(5, 3.0));
  EXPECT_EQ(h[0], 1.0);
  EXPECT_EQ(std::accumulate(h.begin() + 1, h.end(), 0.0), 0.0);
}

}  // namespace
