#pragma once

#include <vector>

#include "kgasym/common.hpp"

namespace kgasym {

// In-place radix-2 complex FFT. sign = -1 forward, +1 inverse (inverse is
// scaled by 1/N). Grids in this project are powers of two by construction.
inline void fft(std::vector<cplx>& a, int sign) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) throw capability_error("fft size must be a power of two");
  // bit reversal
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * pi / static_cast<double>(len);
    const cplx wl = std::polar(1.0, ang);
    for (std::size_t i = 0; i < n; i += len) {
      cplx w = 1.0;
      for (std::size_t j = 0; j < len / 2; ++j) {
        const cplx u = a[i + j];
        const cplx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (sign > 0)
    for (auto& x : a) x /= static_cast<double>(n);
}

/// Frequencies 2*pi*fftfreq for a periodic grid of n points with spacing dx.
inline std::vector<double> fft_wavenumbers(std::size_t n, double dx) {
  std::vector<double> k(n);
  const double dk = 2.0 * pi / (static_cast<double>(n) * dx);
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = static_cast<long>(i);
    const long half = static_cast<long>(n) / 2;
    k[i] = dk * static_cast<double>(s < half ? s : s - static_cast<long>(n));
  }
  return k;
}

}  // namespace kgasym
