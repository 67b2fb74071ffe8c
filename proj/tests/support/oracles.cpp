#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace summer::oracle {

namespace {

constexpr double kEps = 1e-12;

Plane block_mean_half(const Plane& p) {
  const std::size_t oh = (p.height() + 1) / 2;
  const std::size_t ow = (p.width() + 1) / 2;
  Plane out(ow, oh);
  for (std::size_t r = 0; r < oh; ++r) {
    for (std::size_t c = 0; c < ow; ++c) {
      double sum = 0.0;
      int count = 0;
      for (std::size_t dr = 0; dr < 2; ++dr) {
        for (std::size_t dc = 0; dc < 2; ++dc) {
          const std::size_t rr = 2 * r + dr;
          const std::size_t cc = 2 * c + dc;
          if (rr < p.height() && cc < p.width()) {
            sum += p.at(rr, cc);
            ++count;
          }
        }
      }
      out.at(r, c) = sum / count;
    }
  }
  return out;
}

Plane at_scale(Plane p, int scale) {
  for (int i = 0; i < scale; ++i) p = block_mean_half(p);
  return p;
}

}  // namespace

std::vector<std::complex<double>> brute_dft2(const Plane& p) {
  const std::size_t h = p.height();
  const std::size_t w = p.width();
  std::vector<std::complex<double>> out(h * w);
  for (std::size_t u = 0; u < h; ++u) {
    for (std::size_t v = 0; v < w; ++v) {
      std::complex<double> acc = 0.0;
      for (std::size_t m = 0; m < h; ++m) {
        for (std::size_t n = 0; n < w; ++n) {
          // Reduce the phase index exactly before converting to an angle.
          const double phase = static_cast<double>((u * m) % h) / static_cast<double>(h) +
                               static_cast<double>((v * n) % w) / static_cast<double>(w);
          const double angle = -2.0 * std::numbers::pi * phase;
          acc += p.at(m, n) * std::complex<double>(std::cos(angle), std::sin(angle));
        }
      }
      out[u * w + v] = acc;
    }
  }
  return out;
}

double brute_log_magnitude_mean(const Plane& p) {
  const auto f = brute_dft2(p);
  double sum = 0.0;
  for (const auto& z : f) sum += std::log(std::max(std::abs(z), kEps));
  return sum / static_cast<double>(f.size());
}

double spectral_score(const RasterImage& ref, const RasterImage& cmp) {
  double total = 0.0;
  for (std::size_t c = 0; c < 3; ++c) {
    Plane err(ref.width(), ref.height());
    for (std::size_t r = 0; r < ref.height(); ++r) {
      for (std::size_t k = 0; k < ref.width(); ++k) {
        err.at(r, k) = std::fabs(ref.plane(c).at(r, k) - cmp.plane(c).at(r, k));
      }
    }
    for (int scale = 1; scale <= 4; ++scale) total += brute_log_magnitude_mean(at_scale(err, scale));
  }
  return total / 3.0;
}

double frequency_weight(const RasterImage& ref, const RasterImage& cmp) {
  double w = 1.0;
  for (std::size_t c = 0; c < 3; ++c) {
    for (int scale : {3, 4}) {
      const auto fr = brute_dft2(at_scale(ref.plane(c), scale));
      const auto fc = brute_dft2(at_scale(cmp.plane(c), scale));
      double sum = 0.0;
      for (std::size_t i = 0; i < fr.size(); ++i) {
        sum += std::max(std::abs(fr[i]), kEps) / std::max(std::abs(fc[i]), kEps);
      }
      w *= std::fabs(std::log(std::max(sum / static_cast<double>(fr.size()), kEps)));
    }
  }
  return w;
}

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  double tx = 0.0;
  double ty = 0.0;
  double n0 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      s += (dx > 0 ? 1 : dx < 0 ? -1 : 0) * (dy > 0 ? 1 : dy < 0 ? -1 : 0);
      n0 += 1.0;
      if (dx == 0) tx += 1.0;
      if (dy == 0) ty += 1.0;
    }
  }
  return s / std::sqrt((n0 - tx) * (n0 - ty));
}

double transport_emd(std::span<const double> h1, std::span<const double> h2) {
  std::vector<double> supply(h1.begin(), h1.end());
  std::vector<double> demand(h2.begin(), h2.end());
  std::size_t i = 0;
  std::size_t j = 0;
  double cost = 0.0;
  while (i < supply.size() && j < demand.size()) {
    const double moved = std::min(supply[i], demand[j]);
    cost += moved * std::fabs(static_cast<double>(i) - static_cast<double>(j));
    supply[i] -= moved;
    demand[j] -= moved;
    if (supply[i] <= 0.0) ++i;
    if (demand[j] <= 0.0) ++j;
  }
  return cost / static_cast<double>(h1.size() - 1);
}

double trapezoid_auc(std::span<const double> positives, std::span<const double> negatives) {
  std::vector<std::pair<double, int>> all;
  for (double p : positives) all.emplace_back(p, 1);
  for (double n : negatives) all.emplace_back(n, 0);
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  const double np = static_cast<double>(positives.size());
  const double nn = static_cast<double>(negatives.size());
  double tp = 0.0;
  double fp = 0.0;
  double prev_tpr = 0.0;
  double prev_fpr = 0.0;
  double area = 0.0;
  std::size_t i = 0;
  while (i < all.size()) {
    // Consume one threshold (all tied scores) at a time.
    const double threshold = all[i].first;
    while (i < all.size() && all[i].first == threshold) {
      (all[i].second ? tp : fp) += 1.0;
      ++i;
    }
    const double tpr = tp / np;
    const double fpr = fp / nn;
    area += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
    prev_tpr = tpr;
    prev_fpr = fpr;
  }
  return area;
}

}  // namespace summer::oracle
