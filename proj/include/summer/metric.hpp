#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "summer/raster.hpp"

namespace summer {

// Scale indices used by the spectral score and by the frequency weights.
inline constexpr std::size_t kPyramidLevels = 5;  // scales 0..4
inline constexpr std::size_t kFirstScoreScale = 1;
inline constexpr std::size_t kLastScoreScale = 4;
inline constexpr std::array<std::size_t, 2> kWeightScales = {3, 4};
inline constexpr std::size_t kMinImageSide = 16;
inline constexpr double kMaxQualityScore = 5.0;
inline constexpr double kPsnrCapDb = 100.0;

// Levels 0..n-1 of a plane; level i is ceil(H/2^i) x ceil(W/2^i).
class ScalePyramid {
 public:
  ScalePyramid(Plane base, std::size_t levels = kPyramidLevels);

  std::size_t levels() const { return levels_.size(); }
  const Plane& level(std::size_t i) const { return levels_.at(i); }

 private:
  std::vector<Plane> levels_;
};

// Per-channel, per-scale terms of the score.
struct SpectralSummary {
  // log_magnitude_mean of the absolute error plane, [channel][scale].
  std::array<std::array<double, kPyramidLevels>, 3> log_magnitude_mean{};
  // Frequency weight component, [channel][k] for scale kWeightScales[k].
  std::array<std::array<double, kWeightScales.size()>, 3> weight_component{};
  // Aggregates: S and w.
  double spectral_score = 0.0;
  double weight = 0.0;
};

struct QualityScore {
  double value = kMaxQualityScore;
  SpectralSummary summary;
};

// ref - cmp per pixel. Throws ShapeError naming both sizes on mismatch.
Plane error_map(const Plane& ref, const Plane& cmp);

// 2x2 block mean; trailing odd rows/columns average the partial block.
Plane downsample2(const Plane& p);

// S = (1/3) sum_c sum_{i=1..4} log_magnitude_mean(|E_c| at scale i).
double spectral_score(const RasterImage& ref, const RasterImage& cmp);

// w = prod_{c, i in {3,4}} |ln(max(mean(|F(I_i)| / |F(J_i)|), eps))|, with
// both magnitudes floored at eps.
double frequency_weight(const RasterImage& ref, const RasterImage& cmp);

// Both aggregates plus their per-channel, per-scale terms.
SpectralSummary spectral_summary(const RasterImage& ref, const RasterImage& cmp);

// Combination rules over the per-term table. Kept separate so alternate
// aggregations can be compared without touching the spectral code.
double aggregate_spectral_score(const SpectralSummary& s);
double aggregate_weight(const SpectralSummary& s);

// 5 / cbrt(1 + |w S|).
double quality_from_terms(double weight, double spectral_score);

// The full metric. Equal to exactly 5 for identical inputs.
QualityScore summer_score(const RasterImage& ref, const RasterImage& cmp);

// Single-scale grayscale spectral distortion score (higher = worse).
double baseline_spectral_score(const RasterImage& ref, const RasterImage& cmp);

// 10 log10(1 / MSE) over all three channels; +infinity for identical images.
double psnr(const RasterImage& ref, const RasterImage& cmp);

// psnr() with the perfect-match case capped at kPsnrCapDb, for reports.
double psnr_capped(const RasterImage& ref, const RasterImage& cmp);

// Throws ShapeError unless both images share dimensions.
void require_same_shape(const RasterImage& ref, const RasterImage& cmp);

}  // namespace summer
