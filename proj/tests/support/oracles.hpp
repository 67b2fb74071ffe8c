#pragma once

// Independent reference implementations used only by tests. None of these
// call into the library's spectral, pyramid or statistics code.

#include <complex>
#include <span>
#include <vector>

#include "summer/raster.hpp"

namespace summer::oracle {

// Direct double-sum DFT, O((HW)^2).
std::vector<std::complex<double>> brute_dft2(const Plane& p);

double brute_log_magnitude_mean(const Plane& p);

// Straight-line S and w, built from brute_dft2 and a separate block-mean loop.
double spectral_score(const RasterImage& ref, const RasterImage& cmp);
double frequency_weight(const RasterImage& ref, const RasterImage& cmp);

// Kendall tau-b by enumerating all pairs.
double kendall_tau_b(std::span<const double> x, std::span<const double> y);

// Greedy 1-D transport (optimal for ground distance |i - j| / (bins - 1)).
double transport_emd(std::span<const double> h1, std::span<const double> h2);

// Area under the empirical ROC curve by trapezoidal integration.
double trapezoid_auc(std::span<const double> positives, std::span<const double> negatives);

}  // namespace summer::oracle
