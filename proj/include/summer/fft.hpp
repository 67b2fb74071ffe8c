#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace summer {

using Complex = std::complex<double>;

// Forward, unnormalized 1-D DFT of an arbitrary length:
//   X[k] = sum_j x[j] exp(-2 pi i j k / n).
// Lengths whose prime factors are all small use a mixed-radix Cooley-Tukey
// recursion; any other length goes through Bluestein's chirp-z transform.
// A plan is immutable once built, so one instance may serve many threads.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const { return n_; }

  // out.size() == in.size() == size(); in and out must not alias.
  void forward(std::span<const Complex> in, std::span<Complex> out) const;

 private:
  void mixed_radix(const Complex* in, std::size_t in_stride, Complex* out, std::size_t fstride,
                   std::size_t factor_index) const;
  void butterfly(Complex* out, std::size_t fstride, std::size_t radix, std::size_t m) const;
  void bluestein(std::span<const Complex> in, std::span<Complex> out) const;

  std::size_t n_;
  std::vector<std::size_t> factors_;
  std::vector<Complex> twiddles_;
  // Bluestein state.
  std::vector<Complex> chirp_;
  std::vector<Complex> chirp_filter_spectrum_;
  std::unique_ptr<FftPlan> inner_;
};

// Shared, lazily built plan for length n. Safe to call concurrently.
std::shared_ptr<const FftPlan> fft_plan(std::size_t n);

}  // namespace summer
