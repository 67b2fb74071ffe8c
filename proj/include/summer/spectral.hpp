#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "summer/raster.hpp"

namespace summer {

// Magnitude floor applied before any logarithm or division by a spectral bin.
inline constexpr double kSpectralEpsilon = 1e-12;

// Output of dft2: height x width frequency bins, row-major, unnormalized.
class ComplexGrid {
 public:
  ComplexGrid() = default;
  ComplexGrid(std::size_t width, std::size_t height)
      : width_(width), height_(height), data_(width * height) {}

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return data_.size(); }

  std::complex<double>& at(std::size_t u, std::size_t v) { return data_[u * width_ + v]; }
  const std::complex<double>& at(std::size_t u, std::size_t v) const {
    return data_[u * width_ + v];
  }

  std::vector<std::complex<double>>& bins() { return data_; }
  const std::vector<std::complex<double>>& bins() const { return data_; }

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::complex<double>> data_;
};

// F(u,v) = sum_{m,n} x(m,n) exp(-j 2 pi (u m / H + v n / W)), any H, W >= 1.
ComplexGrid dft2(const Plane& p);

// |F(u,v)| per bin.
Plane magnitude(const ComplexGrid& g);

// ln(max(|F(u,v)|, eps)) per bin.
Plane log_magnitude(const ComplexGrid& g);

// Mean over all bins of ln(max(|dft2(p)|, eps)).
double log_magnitude_mean(const Plane& p);

// Quadrant swap placing the DC bin at (floor(H/2), floor(W/2)). Display only.
Plane fft_shift(const Plane& g);

}  // namespace summer
