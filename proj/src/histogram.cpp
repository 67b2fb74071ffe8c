#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "summer/error.hpp"
#include "summer/evaluation.hpp"
#include "summer/spectral.hpp"

namespace summer {

namespace {

constexpr double kNormalizationTolerance = 1e-9;

void validate(std::span<const double> h1, std::span<const double> h2) {
  if (h1.size() != h2.size()) {
    throw ParameterError("histogram bin mismatch (" + std::to_string(h1.size()) + " vs " +
                         std::to_string(h2.size()) + ")");
  }
  if (h1.empty()) throw ParameterError("histograms are empty");
  for (auto h : {h1, h2}) {
    double sum = 0.0;
    for (double v : h) {
      if (!(v >= 0.0)) throw ParameterError("histogram has a negative or NaN bin");
      sum += v;
    }
    if (std::fabs(sum - 1.0) > kNormalizationTolerance) {
      throw ParameterError("histogram is not normalized (sum " + std::to_string(sum) + ")");
    }
  }
}

// KL(p || q); empty p bins contribute nothing, q is floored at eps.
double kl_divergence(std::span<const double> p, std::span<const double> q) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) d += p[i] * std::log(p[i] / std::max(q[i], kSpectralEpsilon));
  }
  return d;
}

}  // namespace

std::string_view to_string(HistogramMetric m) {
  switch (m) {
    case HistogramMetric::kEmd: return "emd";
    case HistogramMetric::kKl: return "kl";
    case HistogramMetric::kJs: return "js";
    case HistogramMetric::kHi: return "hi";
    case HistogramMetric::kL2: return "l2";
  }
  return "unknown";
}

double histogram_distance(std::span<const double> h1, std::span<const double> h2,
                          HistogramMetric metric) {
  validate(h1, h2);
  const std::size_t bins = h1.size();
  switch (metric) {
    case HistogramMetric::kEmd: {
      if (bins == 1) return 0.0;
      double cdf1 = 0.0;
      double cdf2 = 0.0;
      double total = 0.0;
      for (std::size_t i = 0; i < bins; ++i) {
        cdf1 += h1[i];
        cdf2 += h2[i];
        total += std::fabs(cdf1 - cdf2);
      }
      return total / static_cast<double>(bins - 1);
    }
    case HistogramMetric::kKl:
      return kl_divergence(h1, h2);
    case HistogramMetric::kJs: {
      std::vector<double> m(bins);
      for (std::size_t i = 0; i < bins; ++i) m[i] = 0.5 * (h1[i] + h2[i]);
      return 0.5 * (kl_divergence(h1, m) + kl_divergence(h2, m));
    }
    case HistogramMetric::kHi: {
      double inter = 0.0;
      for (std::size_t i = 0; i < bins; ++i) inter += std::min(h1[i], h2[i]);
      return std::max(0.0, 1.0 - inter);
    }
    case HistogramMetric::kL2: {
      double ss = 0.0;
      for (std::size_t i = 0; i < bins; ++i) ss += (h1[i] - h2[i]) * (h1[i] - h2[i]);
      return std::sqrt(ss);
    }
  }
  throw ParameterError("unknown histogram metric");
}

std::vector<double> normalized_histogram(std::span<const double> x, std::size_t bins) {
  if (bins == 0) throw ParameterError("histogram needs at least one bin");
  std::vector<double> h(bins, 0.0);
  if (x.empty()) throw ParameterError("histogram of an empty vector");
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  for (double v : x) {
    std::size_t b = 0;
    if (range > 0.0) {
      const double unit = (v - lo) / range;
      b = std::min(static_cast<std::size_t>(unit * static_cast<double>(bins)), bins - 1);
    }
    h[b] += 1.0;
  }
  for (double& v : h) v /= static_cast<double>(x.size());
  return h;
}

}  // namespace summer
