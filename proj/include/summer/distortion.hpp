#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "summer/raster.hpp"

namespace summer {

enum class DistortionKind { kGaussianBlur, kAdditiveGaussianNoise, kCorrelatedNoise, kQuantization };

inline constexpr int kMinDistortionLevel = 1;
inline constexpr int kMaxDistortionLevel = 5;

struct DistortionSpec {
  DistortionKind kind = DistortionKind::kAdditiveGaussianNoise;
  int level = 1;
  std::uint64_t seed = 0;  // ignored by deterministic kinds
};

std::string_view to_string(DistortionKind kind);
// Accepts gaussian_blur, additive_gaussian_noise, correlated_noise,
// quantization. Throws ParameterError otherwise.
DistortionKind parse_distortion_kind(std::string_view name);

// Parameter tables, indexed by level - 1.
double blur_sigma(int level);
double noise_sigma(int level);
int quantization_levels(int level);

// Portable Gaussian source: std::mt19937_64 (fully specified by the standard)
// feeding 53-bit uniforms into a Box-Muller transform. Unlike
// std::normal_distribution, the sequence is identical on every platform.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  // Uniform in (0, 1].
  double uniform();
  double standard_normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

// Separable Gaussian blur with a normalized kernel of radius ceil(3 sigma)
// and half-sample symmetric padding (edge sample repeated).
Plane gaussian_blur(const Plane& p, double sigma);

// Deterministic given (img, spec); output clamped to [0,1]. Throws
// ParameterError for a level outside 1..5.
RasterImage apply_distortion(const RasterImage& img, const DistortionSpec& spec);

// Which plane of each pair the spectrum atlas analyses.
enum class AtlasChannel { kGray, kRed, kGreen, kBlue };
AtlasChannel parse_atlas_channel(std::string_view name);

struct SpectrumAtlasEntry {
  int level = 1;
  Plane mean_spectrum;        // averaged log magnitude of |error|, DC centred
  double mean = 0.0;          // mean of mean_spectrum
  double relative_mean = 1.0; // mean / level-1 mean
};

using ImagePair = std::pair<RasterImage, RasterImage>;  // (reference, distorted)

// Error magnitudes are taken in 8-bit code values so the level means stay
// positive and their ratios keep the level ordering.
inline constexpr double kAtlasCodeScale = 255.0;

// Per level: bin-wise mean over pairs of fft_shift(ln max(|F(255 |E|)|, eps)),
// and its mean relative to level 1. Every level present must be non-empty
// with uniform dimensions, and level 1 must be present.
std::vector<SpectrumAtlasEntry> average_error_spectrum(
    const std::map<int, std::vector<ImagePair>>& pairs_by_level,
    AtlasChannel channel = AtlasChannel::kGray);

}  // namespace summer
