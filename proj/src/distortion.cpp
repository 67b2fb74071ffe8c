#include "summer/distortion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "summer/error.hpp"
#include "summer/metric.hpp"
#include "summer/spectral.hpp"

namespace summer {

namespace {

constexpr std::array<double, 5> kBlurSigma = {0.8, 1.6, 2.4, 3.2, 4.0};
constexpr std::array<double, 5> kNoiseSigma = {0.02, 0.04, 0.08, 0.12, 0.16};
constexpr std::array<int, 5> kQuantizationLevels = {64, 32, 16, 8, 4};

std::size_t level_index(int level) {
  if (level < kMinDistortionLevel || level > kMaxDistortionLevel) {
    throw ParameterError("distortion level " + std::to_string(level) + " outside 1..5");
  }
  return static_cast<std::size_t>(level - 1);
}

// Half-sample symmetric reflection into [0, n).
std::size_t reflect(long i, long n) {
  const long period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return static_cast<std::size_t>(i < n ? i : period - 1 - i);
}

Plane convolve_rows(const Plane& p, const std::vector<double>& kernel) {
  const long radius = static_cast<long>(kernel.size() / 2);
  const long w = static_cast<long>(p.width());
  Plane out(p.width(), p.height());
  for (std::size_t r = 0; r < p.height(); ++r) {
    const auto src = p.row(r);
    auto dst = out.row(r);
    for (long c = 0; c < w; ++c) {
      double acc = 0.0;
      for (long k = -radius; k <= radius; ++k) {
        acc += kernel[static_cast<std::size_t>(k + radius)] * src[reflect(c + k, w)];
      }
      dst[static_cast<std::size_t>(c)] = acc;
    }
  }
  return out;
}

Plane convolve_cols(const Plane& p, const std::vector<double>& kernel) {
  const long radius = static_cast<long>(kernel.size() / 2);
  const long h = static_cast<long>(p.height());
  Plane out(p.width(), p.height());
  for (long r = 0; r < h; ++r) {
    auto dst = out.row(static_cast<std::size_t>(r));
    for (long k = -radius; k <= radius; ++k) {
      const double weight = kernel[static_cast<std::size_t>(k + radius)];
      const auto src = p.row(reflect(r + k, h));
      for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += weight * src[c];
    }
  }
  return out;
}

Plane separable(const Plane& p, const std::vector<double>& kernel) {
  return convolve_cols(convolve_rows(p, kernel), kernel);
}

void clamp_unit(Plane& p) {
  for (double& v : p.samples()) v = std::clamp(v, 0.0, 1.0);
}

Plane white_noise(std::size_t w, std::size_t h, double sigma, GaussianSource& rng) {
  Plane n(w, h);
  for (double& v : n.samples()) v = sigma * rng.standard_normal();
  return n;
}

double quantize(double x, int levels) {
  const double l = static_cast<double>(levels);
  const double bin = std::min(std::floor(std::clamp(x, 0.0, 1.0) * l), l - 1.0);
  return (bin + 0.5) / l;
}

}  // namespace

std::string_view to_string(DistortionKind kind) {
  switch (kind) {
    case DistortionKind::kGaussianBlur: return "gaussian_blur";
    case DistortionKind::kAdditiveGaussianNoise: return "additive_gaussian_noise";
    case DistortionKind::kCorrelatedNoise: return "correlated_noise";
    case DistortionKind::kQuantization: return "quantization";
  }
  return "unknown";
}

DistortionKind parse_distortion_kind(std::string_view name) {
  for (auto kind : {DistortionKind::kGaussianBlur, DistortionKind::kAdditiveGaussianNoise,
                    DistortionKind::kCorrelatedNoise, DistortionKind::kQuantization}) {
    if (name == to_string(kind)) return kind;
  }
  throw ParameterError("unknown distortion kind '" + std::string(name) + "'");
}

double blur_sigma(int level) { return kBlurSigma[level_index(level)]; }
double noise_sigma(int level) { return kNoiseSigma[level_index(level)]; }
int quantization_levels(int level) { return kQuantizationLevels[level_index(level)]; }

double GaussianSource::uniform() {
  // 53 random bits; +1 keeps the result away from zero for the logarithm.
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double GaussianSource::standard_normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

Plane gaussian_blur(const Plane& p, double sigma) {
  const std::size_t radius = static_cast<std::size_t>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    const double x = static_cast<double>(i) - static_cast<double>(radius);
    kernel[i] = std::exp(-x * x / (2.0 * sigma * sigma));
    sum += kernel[i];
  }
  for (double& k : kernel) k /= sum;
  return separable(p, kernel);
}

RasterImage apply_distortion(const RasterImage& img, const DistortionSpec& spec) {
  const std::size_t idx = level_index(spec.level);
  std::array<Plane, 3> planes;
  GaussianSource rng(spec.seed);
  for (std::size_t c = 0; c < 3; ++c) {
    const Plane& src = img.plane(c);
    switch (spec.kind) {
      case DistortionKind::kGaussianBlur:
        planes[c] = gaussian_blur(src, kBlurSigma[idx]);
        break;
      case DistortionKind::kAdditiveGaussianNoise: {
        planes[c] = src;
        const Plane noise = white_noise(src.width(), src.height(), kNoiseSigma[idx], rng);
        auto dst = planes[c].samples();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += noise.samples()[i];
        break;
      }
      case DistortionKind::kCorrelatedNoise: {
        // A 3x3 box filter divides white-noise variance by 9; scale by 3 to
        // restore the nominal sigma.
        static const std::vector<double> box = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
        const Plane noise =
            separable(white_noise(src.width(), src.height(), kNoiseSigma[idx], rng), box);
        planes[c] = src;
        auto dst = planes[c].samples();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += 3.0 * noise.samples()[i];
        break;
      }
      case DistortionKind::kQuantization: {
        planes[c] = src;
        for (double& v : planes[c].samples()) v = quantize(v, kQuantizationLevels[idx]);
        break;
      }
    }
    clamp_unit(planes[c]);
  }
  return RasterImage(std::move(planes));
}

AtlasChannel parse_atlas_channel(std::string_view name) {
  if (name == "gray") return AtlasChannel::kGray;
  if (name == "r") return AtlasChannel::kRed;
  if (name == "g") return AtlasChannel::kGreen;
  if (name == "b") return AtlasChannel::kBlue;
  throw ParameterError("unknown atlas channel '" + std::string(name) + "' (gray, r, g, b)");
}

std::vector<SpectrumAtlasEntry> average_error_spectrum(
    const std::map<int, std::vector<ImagePair>>& pairs_by_level, AtlasChannel channel) {
  if (!pairs_by_level.contains(1)) throw ParameterError("spectrum atlas needs level 1 pairs");
  auto select = [channel](const RasterImage& img) {
    switch (channel) {
      case AtlasChannel::kRed: return img.plane(Channel::kRed);
      case AtlasChannel::kGreen: return img.plane(Channel::kGreen);
      case AtlasChannel::kBlue: return img.plane(Channel::kBlue);
      case AtlasChannel::kGray: break;
    }
    return to_grayscale(img);
  };

  std::vector<SpectrumAtlasEntry> entries;
  for (const auto& [level, pairs] : pairs_by_level) {
    if (pairs.empty()) {
      throw ParameterError("spectrum atlas level " + std::to_string(level) + " has no pairs");
    }
    SpectrumAtlasEntry entry;
    entry.level = level;
    for (const auto& [ref, dist] : pairs) {
      if (ref.width() != pairs.front().first.width() ||
          ref.height() != pairs.front().first.height()) {
        throw ParameterError("spectrum atlas level " + std::to_string(level) +
                             " mixes image dimensions");
      }
      Plane err = error_map(select(ref), select(dist));
      for (double& v : err.samples()) v = kAtlasCodeScale * std::fabs(v);
      const Plane spectrum = fft_shift(log_magnitude(dft2(err)));
      if (entry.mean_spectrum.empty()) {
        entry.mean_spectrum = Plane(spectrum.width(), spectrum.height());
      }
      auto acc = entry.mean_spectrum.samples();
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += spectrum.samples()[i];
    }
    const double inv = 1.0 / static_cast<double>(pairs.size());
    double total = 0.0;
    for (double& v : entry.mean_spectrum.samples()) {
      v *= inv;
      total += v;
    }
    entry.mean = total / static_cast<double>(entry.mean_spectrum.size());
    entries.push_back(std::move(entry));
  }
  const double base = entries.front().mean;
  if (base == 0.0) throw ParameterError("level-1 mean spectrum is zero; relative means undefined");
  for (auto& e : entries) e.relative_mean = e.mean / base;
  return entries;
}

}  // namespace summer
