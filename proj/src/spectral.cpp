#include "summer/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "summer/fft.hpp"

namespace summer {

ComplexGrid dft2(const Plane& p) {
  const std::size_t w = p.width();
  const std::size_t h = p.height();
  ComplexGrid out(w, h);
  if (w == 0 || h == 0) return out;

  const auto row_plan = fft_plan(w);
  const auto col_plan = fft_plan(h);
  auto& bins = out.bins();

  std::vector<Complex> in_buf(std::max(w, h));
  std::vector<Complex> out_buf(std::max(w, h));
  for (std::size_t r = 0; r < h; ++r) {
    const auto src = p.row(r);
    std::copy(src.begin(), src.end(), in_buf.begin());
    row_plan->forward({in_buf.data(), w}, {bins.data() + r * w, w});
  }
  for (std::size_t c = 0; c < w; ++c) {
    for (std::size_t r = 0; r < h; ++r) in_buf[r] = bins[r * w + c];
    col_plan->forward({in_buf.data(), h}, {out_buf.data(), h});
    for (std::size_t r = 0; r < h; ++r) bins[r * w + c] = out_buf[r];
  }
  return out;
}

Plane magnitude(const ComplexGrid& g) {
  Plane out(g.width(), g.height());
  auto dst = out.samples();
  const auto& bins = g.bins();
  for (std::size_t i = 0; i < bins.size(); ++i) dst[i] = std::abs(bins[i]);
  return out;
}

Plane log_magnitude(const ComplexGrid& g) {
  Plane out(g.width(), g.height());
  auto dst = out.samples();
  const auto& bins = g.bins();
  for (std::size_t i = 0; i < bins.size(); ++i) {
    dst[i] = std::log(std::max(std::abs(bins[i]), kSpectralEpsilon));
  }
  return out;
}

double log_magnitude_mean(const Plane& p) {
  const ComplexGrid g = dft2(p);
  double sum = 0.0;
  for (const auto& bin : g.bins()) sum += std::log(std::max(std::abs(bin), kSpectralEpsilon));
  return sum / static_cast<double>(g.size());
}

Plane fft_shift(const Plane& g) {
  const std::size_t w = g.width();
  const std::size_t h = g.height();
  Plane out(w, h);
  for (std::size_t r = 0; r < h; ++r) {
    const std::size_t dst_r = (r + h / 2) % h;
    for (std::size_t c = 0; c < w; ++c) {
      out.at(dst_r, (c + w / 2) % w) = g.at(r, c);
    }
  }
  return out;
}

}  // namespace summer
