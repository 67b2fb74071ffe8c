#include "summer/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "summer/error.hpp"
#include "summer/spectral.hpp"

namespace summer {

namespace {

std::string dims(std::size_t w, std::size_t h) {
  return std::to_string(w) + "x" + std::to_string(h);
}

void require_scorable(const RasterImage& ref, const RasterImage& cmp) {
  require_same_shape(ref, cmp);
  if (ref.width() < kMinImageSide || ref.height() < kMinImageSide) {
    throw ShapeError("image " + dims(ref.width(), ref.height()) + " is smaller than the " +
                     dims(kMinImageSide, kMinImageSide) + " minimum");
  }
}

Plane absolute(Plane p) {
  for (double& v : p.samples()) v = std::fabs(v);
  return p;
}

// ln of the mean bin-wise ratio |F(ref)| / |F(cmp)|, both floored at eps.
double log_mean_spectral_ratio(const Plane& ref, const Plane& cmp) {
  const ComplexGrid fr = dft2(ref);
  const ComplexGrid fc = dft2(cmp);
  double sum = 0.0;
  for (std::size_t i = 0; i < fr.size(); ++i) {
    const double num = std::max(std::abs(fr.bins()[i]), kSpectralEpsilon);
    const double den = std::max(std::abs(fc.bins()[i]), kSpectralEpsilon);
    sum += num / den;
  }
  const double mean = sum / static_cast<double>(fr.size());
  return std::log(std::max(mean, kSpectralEpsilon));
}

}  // namespace

void require_same_shape(const RasterImage& ref, const RasterImage& cmp) {
  if (ref.width() != cmp.width() || ref.height() != cmp.height()) {
    throw ShapeError("dimension mismatch " + dims(ref.width(), ref.height()) + " vs " +
                     dims(cmp.width(), cmp.height()));
  }
}

ScalePyramid::ScalePyramid(Plane base, std::size_t levels) {
  levels_.reserve(levels);
  levels_.push_back(std::move(base));
  while (levels_.size() < levels) levels_.push_back(downsample2(levels_.back()));
}

Plane error_map(const Plane& ref, const Plane& cmp) {
  if (!ref.same_shape(cmp)) {
    throw ShapeError("dimension mismatch " + dims(ref.width(), ref.height()) + " vs " +
                     dims(cmp.width(), cmp.height()));
  }
  Plane out(ref.width(), ref.height());
  const auto a = ref.samples();
  const auto b = cmp.samples();
  auto dst = out.samples();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = a[i] - b[i];
  return out;
}

Plane downsample2(const Plane& p) {
  const std::size_t w = p.width();
  const std::size_t h = p.height();
  const std::size_t ow = (w + 1) / 2;
  const std::size_t oh = (h + 1) / 2;
  Plane out(ow, oh);
  for (std::size_t r = 0; r < oh; ++r) {
    const std::size_t r0 = 2 * r;
    const std::size_t r1 = std::min(r0 + 1, h - 1);
    const std::size_t rows = r1 - r0 + 1;
    for (std::size_t c = 0; c < ow; ++c) {
      const std::size_t c0 = 2 * c;
      const std::size_t c1 = std::min(c0 + 1, w - 1);
      const std::size_t cols = c1 - c0 + 1;
      double sum = p.at(r0, c0);
      if (cols == 2) sum += p.at(r0, c1);
      if (rows == 2) {
        sum += p.at(r1, c0);
        if (cols == 2) sum += p.at(r1, c1);
      }
      out.at(r, c) = sum / static_cast<double>(rows * cols);
    }
  }
  return out;
}

SpectralSummary spectral_summary(const RasterImage& ref, const RasterImage& cmp) {
  require_scorable(ref, cmp);
  SpectralSummary s;
  for (std::size_t c = 0; c < 3; ++c) {
    const ScalePyramid error(absolute(error_map(ref.plane(c), cmp.plane(c))));
    for (std::size_t i = kFirstScoreScale; i <= kLastScoreScale; ++i) {
      s.log_magnitude_mean[c][i] = log_magnitude_mean(error.level(i));
    }
    const ScalePyramid ref_pyr(ref.plane(c));
    const ScalePyramid cmp_pyr(cmp.plane(c));
    for (std::size_t k = 0; k < kWeightScales.size(); ++k) {
      const std::size_t i = kWeightScales[k];
      s.weight_component[c][k] = log_mean_spectral_ratio(ref_pyr.level(i), cmp_pyr.level(i));
    }
  }
  s.spectral_score = aggregate_spectral_score(s);
  s.weight = aggregate_weight(s);
  return s;
}

double aggregate_spectral_score(const SpectralSummary& s) {
  double total = 0.0;
  for (std::size_t c = 0; c < 3; ++c) {
    double channel = 0.0;
    for (std::size_t i = kFirstScoreScale; i <= kLastScoreScale; ++i) {
      channel += s.log_magnitude_mean[c][i];
    }
    total += channel;
  }
  return total / 3.0;
}

double aggregate_weight(const SpectralSummary& s) {
  double w = 1.0;
  for (const auto& channel : s.weight_component) {
    for (double omega : channel) w *= std::fabs(omega);
  }
  return w;
}

double quality_from_terms(double weight, double spectral_score) {
  return kMaxQualityScore / std::cbrt(1.0 + std::fabs(weight * spectral_score));
}

double spectral_score(const RasterImage& ref, const RasterImage& cmp) {
  require_scorable(ref, cmp);
  SpectralSummary s;
  for (std::size_t c = 0; c < 3; ++c) {
    const ScalePyramid error(absolute(error_map(ref.plane(c), cmp.plane(c))));
    for (std::size_t i = kFirstScoreScale; i <= kLastScoreScale; ++i) {
      s.log_magnitude_mean[c][i] = log_magnitude_mean(error.level(i));
    }
  }
  return aggregate_spectral_score(s);
}

double frequency_weight(const RasterImage& ref, const RasterImage& cmp) {
  require_scorable(ref, cmp);
  SpectralSummary s;
  for (std::size_t c = 0; c < 3; ++c) {
    const ScalePyramid ref_pyr(ref.plane(c));
    const ScalePyramid cmp_pyr(cmp.plane(c));
    for (std::size_t k = 0; k < kWeightScales.size(); ++k) {
      const std::size_t i = kWeightScales[k];
      s.weight_component[c][k] = log_mean_spectral_ratio(ref_pyr.level(i), cmp_pyr.level(i));
    }
  }
  return aggregate_weight(s);
}

QualityScore summer_score(const RasterImage& ref, const RasterImage& cmp) {
  QualityScore q;
  q.summary = spectral_summary(ref, cmp);
  q.value = quality_from_terms(q.summary.weight, q.summary.spectral_score);
  return q;
}

double baseline_spectral_score(const RasterImage& ref, const RasterImage& cmp) {
  require_same_shape(ref, cmp);
  return log_magnitude_mean(absolute(error_map(to_grayscale(ref), to_grayscale(cmp))));
}

double psnr(const RasterImage& ref, const RasterImage& cmp) {
  require_same_shape(ref, cmp);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t c = 0; c < 3; ++c) {
    const auto a = ref.plane(c).samples();
    const auto b = cmp.plane(c).samples();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      sum += d * d;
    }
    count += a.size();
  }
  const double mse = count == 0 ? 0.0 : sum / static_cast<double>(count);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

double psnr_capped(const RasterImage& ref, const RasterImage& cmp) {
  return std::min(psnr(ref, cmp), kPsnrCapDb);
}

}  // namespace summer
