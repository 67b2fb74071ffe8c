#include "summer/fft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace summer {

namespace {

// Largest prime handled by the generic radix butterfly before switching the
// whole transform to Bluestein.
constexpr std::size_t kMaxDirectRadix = 13;

Complex unit_root(std::size_t k, std::size_t n) {
  // exp(-2 pi i k / n), reduced so the angle stays in [0, 2pi).
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(k % n) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

std::vector<std::size_t> factorize(std::size_t n) {
  std::vector<std::size_t> factors;
  while (n % 4 == 0) {
    factors.push_back(4);
    n /= 4;
  }
  for (std::size_t p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      factors.push_back(p);
      n /= p;
    }
  }
  if (n > 1) factors.push_back(n);
  return factors;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (n_ <= 1) return;
  factors_ = factorize(n_);
  bool direct = true;
  for (std::size_t f : factors_) direct = direct && f <= kMaxDirectRadix;
  if (direct) {
    twiddles_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) twiddles_[k] = unit_root(k, n_);
    return;
  }
  factors_.clear();
  // Bluestein: jk = (j^2 + k^2 - (k-j)^2) / 2. Chirp angles use j^2 mod 2n to
  // keep them exact for large j.
  const std::size_t m = next_pow2(2 * n_ - 1);
  chirp_.resize(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    const std::size_t j2 = (j * j) % (2 * n_);
    chirp_[j] = unit_root(j2, 2 * n_);
  }
  inner_ = std::make_unique<FftPlan>(m);
  std::vector<Complex> filter(m, Complex{});
  filter[0] = std::conj(chirp_[0]);
  for (std::size_t j = 1; j < n_; ++j) {
    filter[j] = std::conj(chirp_[j]);
    filter[m - j] = std::conj(chirp_[j]);
  }
  chirp_filter_spectrum_.resize(m);
  inner_->forward(filter, chirp_filter_spectrum_);
}

void FftPlan::forward(std::span<const Complex> in, std::span<Complex> out) const {
  if (n_ == 0) return;
  if (n_ == 1) {
    out[0] = in[0];
    return;
  }
  if (inner_) {
    bluestein(in, out);
    return;
  }
  mixed_radix(in.data(), 1, out.data(), 1, 0);
}

// Decimation in time. `fstride` is n_ / (length of this sub-transform), the
// step into the top-level twiddle table.
void FftPlan::mixed_radix(const Complex* in, std::size_t in_stride, Complex* out,
                          std::size_t fstride, std::size_t factor_index) const {
  const std::size_t radix = factors_[factor_index];
  const std::size_t m = n_ / (fstride * radix);
  if (m == 1) {
    for (std::size_t q = 0; q < radix; ++q) out[q] = in[q * in_stride];
  } else {
    for (std::size_t q = 0; q < radix; ++q) {
      mixed_radix(in + q * in_stride, in_stride * radix, out + q * m, fstride * radix,
                  factor_index + 1);
    }
  }
  butterfly(out, fstride, radix, m);
}

void FftPlan::butterfly(Complex* out, std::size_t fstride, std::size_t radix,
                        std::size_t m) const {
  const Complex* tw = twiddles_.data();
  if (radix == 2) {
    for (std::size_t k = 0; k < m; ++k) {
      const Complex t = out[k + m] * tw[k * fstride];
      out[k + m] = out[k] - t;
      out[k] += t;
    }
    return;
  }
  if (radix == 4) {
    for (std::size_t k = 0; k < m; ++k) {
      const Complex a0 = out[k];
      const Complex a1 = out[k + m] * tw[k * fstride];
      const Complex a2 = out[k + 2 * m] * tw[2 * k * fstride];
      const Complex a3 = out[k + 3 * m] * tw[3 * k * fstride];
      const Complex s02 = a0 + a2;
      const Complex d02 = a0 - a2;
      const Complex s13 = a1 + a3;
      const Complex d13 = a1 - a3;
      // -i * d13
      const Complex rot{d13.imag(), -d13.real()};
      out[k] = s02 + s13;
      out[k + m] = d02 + rot;
      out[k + 2 * m] = s02 - s13;
      out[k + 3 * m] = d02 - rot;
    }
    return;
  }
  // Generic odd radix: direct DFT of the `radix` twisted inputs.
  const std::size_t n_here = radix * m;
  Complex scratch[kMaxDirectRadix];
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t q = 0; q < radix; ++q) {
      scratch[q] = out[k + q * m] * tw[(q * k * fstride) % n_];
    }
    for (std::size_t r = 0; r < radix; ++r) {
      Complex acc = scratch[0];
      for (std::size_t q = 1; q < radix; ++q) {
        // exp(-2 pi i q r m / n_here) == twiddle[(q r m fstride) mod n_]
        acc += scratch[q] * tw[((q * r) % radix) * m * fstride % n_];
      }
      out[k + r * m] = acc;
    }
  }
  (void)n_here;
}

void FftPlan::bluestein(std::span<const Complex> in, std::span<Complex> out) const {
  const std::size_t m = inner_->size();
  std::vector<Complex> a(m, Complex{});
  for (std::size_t j = 0; j < n_; ++j) a[j] = in[j] * chirp_[j];
  std::vector<Complex> spectrum(m);
  inner_->forward(a, spectrum);
  for (std::size_t k = 0; k < m; ++k) spectrum[k] *= chirp_filter_spectrum_[k];
  // Inverse transform via conjugation: ifft(x) = conj(fft(conj(x))) / m.
  for (auto& v : spectrum) v = std::conj(v);
  inner_->forward(spectrum, a);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n_; ++k) out[k] = std::conj(a[k]) * scale * chirp_[k];
}

std::shared_ptr<const FftPlan> fft_plan(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const FftPlan>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const FftPlan>(n);
  return slot;
}

}  // namespace summer
