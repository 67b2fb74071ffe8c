#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace summer {

// ---------------------------------------------------------------------------
// Nonlinear regression of objective scores onto subjective scores.

enum class LogisticForm {
  // b1 * (1/2 - 1/(1 + exp(b2 (q - b3)))) + b4 q + b5
  kStandard,
  // b1 * (1 - 1/(2 + exp(b2 (q - b3)))) + b4 q + b5, kept for A/B comparison
  kAsPrinted,
};

inline constexpr std::array<double, 5> kInitialBeta = {0.0, 0.1, 0.0, 0.0, 0.0};

struct RegressionModel {
  std::array<double, 5> beta = kInitialBeta;
  LogisticForm form = LogisticForm::kStandard;
  bool converged = false;
  std::size_t iterations = 0;
  double residual_rmse = 0.0;

  double apply(double objective) const;
  std::vector<double> apply(std::span<const double> objective) const;
};

struct RegressionOptions {
  LogisticForm form = LogisticForm::kStandard;
  std::array<double, 5> initial = kInitialBeta;
  std::size_t max_iterations = 5000;
  double relative_tolerance = 1e-10;
};

// Levenberg-Marquardt least squares. Needs >= 6 finite points of equal
// length (ParameterError otherwise). Non-convergence is reported through
// `converged`, never thrown.
RegressionModel fit_regression(std::span<const double> objective,
                               std::span<const double> subjective,
                               const RegressionOptions& options = {});

// ---------------------------------------------------------------------------
// Correlation, accuracy and consistency.

// Average ranks (1-based), ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> x);

// All four throw ParameterError for length mismatch or n < 2; the
// correlations throw UndefinedError when either input has zero variance.
double plcc(std::span<const double> x, std::span<const double> y);
double srcc(std::span<const double> x, std::span<const double> y);
// Kendall tau-b (tie corrected), O(n log n).
double krcc(std::span<const double> x, std::span<const double> y);
double rmse(std::span<const double> x, std::span<const double> y);

// Fraction of items with |pred - mos| > 2 sigma_i. sigma_i is the per-item
// MOS standard deviation when given, else the population standard deviation
// of the residuals.
double outlier_ratio(std::span<const double> pred, std::span<const double> mos,
                     std::optional<std::span<const double>> mos_std = std::nullopt);

struct MetricBundle {
  double plcc = 0.0;
  double srcc = 0.0;
  double krcc = 0.0;
  double rmse = 0.0;
  double outlier_ratio = 0.0;
  std::size_t count = 0;
};

// ---------------------------------------------------------------------------
// Significance of the difference between two correlation coefficients.

struct SignificanceVerdict {
  // -1: method 2 inferior to method 1, 0: equivalent, +1: method 2 superior.
  int value = 0;
  double statistic = 0.0;
  double critical_value = 0.0;
  // Set when an input |r| >= 1 had to be clamped.
  bool clamped = false;
};

inline constexpr double kMaxAbsCorrelation = 0.999999;

// Fisher-z test, two-tailed at 95%. The critical value is 1.96 for n > 30,
// otherwise the Student t quantile with n - 3 degrees of freedom, where n is
// the smaller sample. statistic = (z1 - z2) / se. Requires n1, n2 >= 4.
SignificanceVerdict fisher_z_significance(double r1, std::size_t n1, double r2, std::size_t n2);

double two_tailed_critical_value(std::size_t n);

// ---------------------------------------------------------------------------
// Histogram differences.

enum class HistogramMetric { kEmd, kKl, kJs, kHi, kL2 };

inline constexpr std::array<HistogramMetric, 5> kAllHistogramMetrics = {
    HistogramMetric::kEmd, HistogramMetric::kKl, HistogramMetric::kJs, HistogramMetric::kHi,
    HistogramMetric::kL2};

std::string_view to_string(HistogramMetric m);

// Both histograms must have the same bin count, non-negative bins and sum to
// 1 within 1e-9 (ParameterError otherwise).
double histogram_distance(std::span<const double> h1, std::span<const double> h2,
                          HistogramMetric metric);

inline constexpr std::size_t kHistogramBins = 10;

// Min-max normalizes x onto [0,1] and bins it uniformly; returns frequencies.
// A constant vector puts all its mass in the first bin.
std::vector<double> normalized_histogram(std::span<const double> x,
                                         std::size_t bins = kHistogramBins);

// ---------------------------------------------------------------------------
// ROC analysis and pairwise classification.

// Mann-Whitney AUC: P(positive > negative) + P(tie)/2. Empty when either
// class is empty.
std::optional<double> auc_mann_whitney(std::span<const double> positives,
                                       std::span<const double> negatives);

struct ClassificationItem {
  double objective = 0.0;  // oriented so that higher means better
  double mos = 0.0;        // higher means better
  std::optional<double> mos_std;
  std::optional<double> vote_count;
};

struct ClassificationResult {
  std::optional<double> auc_different_similar;
  std::optional<double> auc_better_worse;
  std::optional<double> c0;
  std::size_t different_pairs = 0;
  std::size_t similar_pairs = 0;
  std::size_t excluded = 0;
};

// Pairs are "different" when a two-sample z-test on MOS rejects at 95%.
// Items without std or vote count are excluded and counted.
ClassificationResult classification_analysis(std::span<const ClassificationItem> items);

}  // namespace summer
