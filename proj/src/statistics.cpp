#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "summer/error.hpp"
#include "summer/evaluation.hpp"

namespace summer {

namespace {

void require_pairable(std::span<const double> x, std::span<const double> y, const char* what) {
  if (x.size() != y.size()) {
    throw ParameterError(std::string(what) + ": length mismatch (" + std::to_string(x.size()) +
                         " vs " + std::to_string(y.size()) + ")");
  }
  if (x.size() < 2) throw ParameterError(std::string(what) + ": needs at least 2 samples");
}

double mean(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// Inversions (strict) in v, counted while merge sorting it.
std::uint64_t count_inversions(std::vector<double>& v) {
  std::vector<double> buf(v.size());
  std::uint64_t swaps = 0;
  for (std::size_t width = 1; width < v.size(); width *= 2) {
    for (std::size_t lo = 0; lo < v.size(); lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, v.size());
      const std::size_t hi = std::min(lo + 2 * width, v.size());
      std::size_t i = lo;
      std::size_t j = mid;
      std::size_t k = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          swaps += mid - i;
          buf[k++] = v[j++];
        } else {
          buf[k++] = v[i++];
        }
      }
      while (i < mid) buf[k++] = v[i++];
      while (j < hi) buf[k++] = v[j++];
    }
    std::swap(v, buf);
  }
  return swaps;
}

// Sum over tie groups of t(t-1)/2 for an already sorted range.
template <typename Eq>
std::uint64_t tied_pairs(std::size_t n, Eq equal) {
  std::uint64_t total = 0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i < n && equal(i - 1, i)) {
      ++run;
    } else {
      total += static_cast<std::uint64_t>(run) * (run - 1) / 2;
      run = 1;
    }
  }
  return total;
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && x[order[j]] == x[order[i]]) ++j;
    // Positions i..j-1 (0-based) share rank mean((i+1)..j).
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double plcc(std::span<const double> x, std::span<const double> y) {
  require_pairable(x, y, "plcc");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedError("correlation undefined: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double srcc(std::span<const double> x, std::span<const double> y) {
  require_pairable(x, y, "srcc");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return plcc(rx, ry);
}

double krcc(std::span<const double> x, std::span<const double> y) {
  require_pairable(x, y, "krcc");
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });
  const std::uint64_t x_ties =
      tied_pairs(n, [&](auto a, auto b) { return x[order[a]] == x[order[b]]; });
  const std::uint64_t joint_ties = tied_pairs(n, [&](auto a, auto b) {
    return x[order[a]] == x[order[b]] && y[order[a]] == y[order[b]];
  });
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
  const std::uint64_t swaps = count_inversions(ys);
  const std::uint64_t y_ties = tied_pairs(n, [&](auto a, auto b) { return ys[a] == ys[b]; });

  const double total = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const double denom_x = total - static_cast<double>(x_ties);
  const double denom_y = total - static_cast<double>(y_ties);
  if (denom_x == 0.0 || denom_y == 0.0) {
    throw UndefinedError("correlation undefined: zero variance");
  }
  const double con_minus_dis = total - static_cast<double>(x_ties) -
                               static_cast<double>(y_ties) + static_cast<double>(joint_ties) -
                               2.0 * static_cast<double>(swaps);
  return std::clamp(con_minus_dis / std::sqrt(denom_x * denom_y), -1.0, 1.0);
}

double rmse(std::span<const double> x, std::span<const double> y) {
  require_pairable(x, y, "rmse");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(sum / static_cast<double>(x.size()));
}

double outlier_ratio(std::span<const double> pred, std::span<const double> mos,
                     std::optional<std::span<const double>> mos_std) {
  if (pred.size() != mos.size() || (mos_std && mos_std->size() != pred.size())) {
    throw ParameterError("outlier_ratio: length mismatch");
  }
  if (pred.empty()) return 0.0;
  const std::size_t n = pred.size();
  double global_sigma = 0.0;
  if (!mos_std) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += pred[i] - mos[i];
    m /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (pred[i] - mos[i] - m) * (pred[i] - mos[i] - m);
    global_sigma = std::sqrt(ss / static_cast<double>(n));
  }
  std::size_t outliers = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sigma = mos_std ? (*mos_std)[i] : global_sigma;
    if (std::fabs(pred[i] - mos[i]) > 2.0 * sigma) ++outliers;
  }
  return static_cast<double>(outliers) / static_cast<double>(n);
}

double two_tailed_critical_value(std::size_t n) {
  if (n > 30) return 1.96;
  const boost::math::students_t dist(static_cast<double>(n - 3));
  return boost::math::quantile(boost::math::complement(dist, 0.025));
}

SignificanceVerdict fisher_z_significance(double r1, std::size_t n1, double r2, std::size_t n2) {
  if (n1 < 4 || n2 < 4) throw ParameterError("fisher_z_significance needs n >= 4");
  SignificanceVerdict v;
  auto clamp_r = [&v](double r) {
    if (std::fabs(r) >= 1.0) {
      v.clamped = true;
      return std::copysign(kMaxAbsCorrelation, r);
    }
    return r;
  };
  const double z1 = std::atanh(clamp_r(r1));
  const double z2 = std::atanh(clamp_r(r2));
  const double se = std::sqrt(1.0 / static_cast<double>(n1 - 3) + 1.0 / static_cast<double>(n2 - 3));
  v.statistic = (z1 - z2) / se;
  v.critical_value = two_tailed_critical_value(std::min(n1, n2));
  if (std::fabs(v.statistic) >= v.critical_value) v.value = v.statistic > 0 ? -1 : 1;
  return v;
}

}  // namespace summer
