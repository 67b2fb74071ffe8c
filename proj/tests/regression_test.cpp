#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "summer/error.hpp"
#include "summer/evaluation.hpp"

namespace {

using summer::LogisticForm;
using summer::RegressionModel;

double standard_logistic(const std::array<double, 5>& b, double q) {
  return b[0] * (0.5 - 1.0 / (1.0 + std::exp(b[1] * (q - b[2])))) + b[3] * q + b[4];
}

double prediction_rmse(const RegressionModel& m, const std::vector<double>& x,
                       const std::vector<double>& y) {
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sq += std::pow(m.apply(x[i]) - y[i], 2);
  return std::sqrt(sq / static_cast<double>(x.size()));
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / (n - 1);
  return v;
}

TEST(ApplyRegression, StandardAndPrintedForms) {
  RegressionModel m;
  m.beta = {2.0, 1.0, 0.5, 0.25, -1.0};
  m.form = LogisticForm::kStandard;
  EXPECT_DOUBLE_EQ(m.apply(0.5), 0.125 - 1.0);
  m.form = LogisticForm::kAsPrinted;
  // 2 * (1 - 1/(2 + e^0)) + 0.125 - 1
  EXPECT_DOUBLE_EQ(m.apply(0.5), 2.0 * (1.0 - 1.0 / 3.0) + 0.125 - 1.0);
  const std::vector<double> xs = {0.0, 0.5};
  const auto ys = m.apply(xs);
  EXPECT_EQ(ys[1], m.apply(0.5));
}

TEST(ApplyRegression, FiniteForExtremeInput) {
  RegressionModel m;
  m.beta = {3.0, 50.0, 0.0, 0.0, 0.0};
  EXPECT_TRUE(std::isfinite(m.apply(1e6)));
  EXPECT_TRUE(std::isfinite(m.apply(-1e6)));
}

TEST(FitRegression, Identity) {
  auto x = linspace(0.0, 5.0, 40);
  auto m = summer::fit_regression(x, x);
  EXPECT_LE(m.residual_rmse, 1e-8);
  EXPECT_TRUE(m.converged);
}

TEST(FitRegression, Affine) {
  auto x = linspace(-2.0, 3.0, 25);
  std::vector<double> y;
  for (double v : x) y.push_back(2.0 * v + 3.0);
  EXPECT_LE(summer::fit_regression(x, y).residual_rmse, 1e-8);
}

TEST(FitRegression, RecoversKnownCurveNoiseless) {
  const std::array<double, 5> beta = {1.5, 0.8, 0.2, 0.3, 0.1};
  auto x = linspace(-5.0, 5.0, 60);
  std::vector<double> y;
  for (double v : x) y.push_back(standard_logistic(beta, v));
  auto m = summer::fit_regression(x, y);
  EXPECT_LE(prediction_rmse(m, x, y), 1e-6);
}

TEST(FitRegression, NoisyFitWithinNoiseLevel) {
  const std::array<double, 5> beta = {1.5, 0.8, 0.2, 0.3, 0.1};
  const double sigma = 0.05;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    auto x = linspace(-5.0, 5.0, 200);
    std::vector<double> clean, noisy;
    for (double v : x) {
      clean.push_back(standard_logistic(beta, v));
      noisy.push_back(clean.back() + noise(rng));
    }
    auto m = summer::fit_regression(x, noisy);
    EXPECT_LE(prediction_rmse(m, x, noisy), 1.1 * sigma);
    EXPECT_LE(prediction_rmse(m, x, clean), 0.5 * sigma);
  }
}

TEST(FitRegression, PrintedFormFitsItsOwnData) {
  RegressionModel truth;
  truth.beta = {2.0, 1.2, 0.3, 0.1, 0.5};
  truth.form = LogisticForm::kAsPrinted;
  auto x = linspace(-3.0, 3.0, 50);
  auto y = truth.apply(x);
  summer::RegressionOptions opts;
  opts.form = LogisticForm::kAsPrinted;
  auto m = summer::fit_regression(x, y, opts);
  EXPECT_EQ(m.form, LogisticForm::kAsPrinted);
  EXPECT_LE(prediction_rmse(m, x, y), 1e-6);
}

TEST(FitRegression, FormsDifferOnlyByOffsetAndScale) {
  // 1 - 1/(2+e) and 1/2 - 1/(1+e) are different sigmoids; both fit a
  // logistic cloud comparably well.
  std::mt19937_64 rng(9);
  std::normal_distribution<double> noise(0.0, 0.1);
  auto x = linspace(0.0, 10.0, 120);
  std::vector<double> y;
  for (double v : x) y.push_back(5.0 / (1.0 + std::exp(-(v - 5.0))) + noise(rng));
  summer::RegressionOptions printed;
  printed.form = LogisticForm::kAsPrinted;
  EXPECT_LT(summer::fit_regression(x, y).residual_rmse, 0.15);
  EXPECT_LT(summer::fit_regression(x, y, printed).residual_rmse, 0.3);
}

TEST(FitRegression, MonotoneWhenCoefficientsAgree) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    auto x = linspace(0.0, 1.0, 30);
    std::vector<double> y;
    for (double v : x) y.push_back(std::tanh(3.0 * (v - u(rng))) + 0.2 * u(rng));
    auto m = summer::fit_regression(x, y);
    if (m.beta[0] * m.beta[1] < 0.0 || m.beta[3] < 0.0) continue;
    ++checked;
    double prev = -INFINITY;
    for (double q = -2.0; q <= 3.0; q += 0.01) {
      const double v = m.apply(q);
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(FitRegression, InvalidInputs) {
  std::vector<double> five(5, 1.0), six(6, 1.0), seven(7, 1.0);
  EXPECT_THROW(summer::fit_regression(five, five), summer::ParameterError);
  EXPECT_THROW(summer::fit_regression(six, seven), summer::ParameterError);
  std::vector<double> bad = {1, 2, 3, NAN, 5, 6};
  EXPECT_THROW(summer::fit_regression(bad, six), summer::ParameterError);
}

TEST(FitRegression, DegenerateDataDoesNotThrow) {
  std::vector<double> x(10, 1.0), y(10, 2.0);
  RegressionModel m;
  EXPECT_NO_THROW(m = summer::fit_regression(x, y));
  EXPECT_NEAR(m.apply(1.0), 2.0, 1e-6);
}

TEST(FitRegression, IterationCapReportsNonConvergence) {
  const std::array<double, 5> beta = {1.5, 0.8, 0.2, 0.3, 0.1};
  auto x = linspace(-5.0, 5.0, 60);
  std::vector<double> y;
  for (double v : x) y.push_back(standard_logistic(beta, v) + 0.01 * std::sin(13.0 * v));
  summer::RegressionOptions opts;
  opts.max_iterations = 1;
  auto m = summer::fit_regression(x, y, opts);
  EXPECT_FALSE(m.converged);
  EXPECT_LE(m.iterations, 1u);
}

TEST(FitRegression, Deterministic) {
  auto x = linspace(0.0, 4.0, 33);
  std::vector<double> y;
  for (double v : x) y.push_back(std::sqrt(v) + 0.01 * std::cos(7 * v));
  auto a = summer::fit_regression(x, y), b = summer::fit_regression(x, y);
  EXPECT_EQ(a.beta, b.beta);
}

}  // namespace
