#ifndef LIGHTSTORE_DETAIL_FFT_HPP
#define LIGHTSTORE_DETAIL_FFT_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

// Iterative radix-2 FFT, power-of-two lengths only (enforced upstream by the
// envelope types, asserted here).
//
// Sign convention: forward() applies X_k = sum_n x_n exp(-2*pi*i*k*n/N), the
// analysis transform for the exp(-i*w*t) convention used throughout; inverse()
// applies the conjugate kernel and the 1/N factor, so inverse(forward(x)) == x.

namespace lightstore::detail {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline void fft_radix2(std::vector<std::complex<double>>& a, bool forward) {
  const std::size_t n = a.size();
  if (!is_power_of_two(n))
    throw std::invalid_argument("fft_radix2: length must be a power of two");
  if (n == 1) return;

  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  const double sign = forward ? -1.0 : 1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * 3.14159265358979323846 / static_cast<double>(len);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> w = std::polar(1.0, ang * static_cast<double>(k));
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }

  if (!forward) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= inv;
  }
}

inline std::vector<std::complex<double>> fft(std::vector<std::complex<double>> a) {
  fft_radix2(a, true);
  return a;
}

inline std::vector<std::complex<double>> ifft(std::vector<std::complex<double>> a) {
  fft_radix2(a, false);
  return a;
}

}  // namespace lightstore::detail

#endif
