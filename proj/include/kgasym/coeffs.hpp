#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "kgasym/common.hpp"
#include "kgasym/elliptic.hpp"

// Resonant-expansion coefficients L_n(zeta) of the gauge-invariant
// nonlinearity evaluated on a two-wave superposition 1 + zeta e^{-i Theta}:
//
//   2D quadratic: L_n = (1/2pi) int_0^{2pi} |1+z e^{-iT}| (1+z e^{-iT}) e^{-inT} dT
//   1D cubic:     same with |1+z e^{-iT}|^2, which collapses to a 4-term table.
//
// The coupling lambda is factored out everywhere; profiles multiply it back.

namespace kgasym::coeffs {

struct QuadValue {
  double value = 0.0;       // real part (the coefficient)
  double im_residue = 0.0;  // |imag| of the quadrature, diagnostic only
  int nodes = 0;            // node count at convergence
};

namespace detail {

// Periodic trapezoid with node doubling; reuses the previous level's sum.
// F(theta) -> complex integrand (without the 1/2pi).
template <typename F>
QuadValue periodic_quadrature(const F& f, int min_nodes, double tol) {
  constexpr int kMaxNodes = 1 << 20;
  int n = 64;
  while (n < min_nodes) n <<= 1;

  cplx sum = 0.0;
  for (int j = 0; j < n; ++j) sum += f(2.0 * pi * j / n);
  cplx prev = sum / static_cast<double>(n);

  while (n < kMaxNodes) {
    cplx odd = 0.0;
    for (int j = 0; j < n; ++j) odd += f(2.0 * pi * (2 * j + 1) / (2 * n));
    sum += odd;
    n *= 2;
    const cplx cur = sum / static_cast<double>(n);
    if (std::abs(cur - prev) <= tol)
      return {cur.real(), std::abs(cur.imag()), n};
    prev = cur;
  }
  throw accuracy_error("periodic quadrature did not converge within 2^20 nodes");
}

inline cplx two_wave(double zeta, double theta) { return cplx{1.0 + zeta * std::cos(theta), -zeta * std::sin(theta)}; }

}  // namespace detail

/// L_n(zeta) by trapezoidal quadrature with node doubling.
/// dimension = 2 selects the quadratic |.| integrand, 1 the cubic |.|^2 one.
inline QuadValue ln_quadrature(int n, double zeta, int dimension, double tol = 1e-12) {
  if (!(zeta > 0.0)) throw domain_error("ln_quadrature requires zeta > 0");
  if (dimension != 1 && dimension != 2) throw domain_error("dimension must be 1 or 2");
  const auto f = [=](double th) {
    const cplx w = detail::two_wave(zeta, th);
    const double r = std::abs(w);
    const cplx g = (dimension == 2) ? r * w : (r * r) * w;
    return g * std::polar(1.0, -n * th);
  };
  // the DFT at frequency n is meaningless until the grid resolves it
  return detail::periodic_quadrature(f, 4 * (std::abs(n) + 1), tol);
}

/// 1D cubic table: zeta^2, zeta^3+2zeta, 1+2zeta^2, zeta and zero elsewhere.
inline double cubic_coeff(int n, double zeta) {
  if (!(zeta > 0.0)) throw domain_error("cubic_coeff requires zeta > 0");
  switch (n) {
    case -2: return zeta * zeta;
    case -1: return zeta * zeta * zeta + 2.0 * zeta;
    case 0: return 1.0 + 2.0 * zeta * zeta;
    case 1: return zeta;
    default: return 0.0;
  }
}

/// L_0(zeta) in 2D: elliptic closed form away from zeta = 1, quadrature on
/// the band |zeta-1| < 1e-4 where (1-zeta)^2 K(k(zeta)) is a 0*inf product.
inline double l0_closed(double zeta) {
  if (!(zeta > 0.0)) throw domain_error("l0_closed requires zeta > 0");
  if (std::abs(zeta - 1.0) < 1e-4) return ln_quadrature(0, zeta, 2).value;
  const auto k = elliptic::k_of_zeta(zeta);
  const double E = elliptic::ellip_E(k);
  const double K = elliptic::ellip_K(k);
  return (1.0 + zeta) * (7.0 + zeta * zeta) / (3.0 * pi) * E -
         (1.0 + zeta) * (1.0 - zeta) * (1.0 - zeta) / (3.0 * pi) * K;
}

namespace detail {

// d/dzeta and d2/dzeta2 of |w|(w), w = 1 + zeta e^{-i theta}, for the
// quadrature fallback (differentiation under the integral, valid since
// L_0 is C^2).
inline cplx dzeta_integrand(double zeta, double th) {
  const cplx w = two_wave(zeta, th);
  const double r = std::abs(w);
  const cplx e = std::polar(1.0, -th);
  return (zeta + std::cos(th)) / r * w + r * e;
}

inline cplx d2zeta_integrand(double zeta, double th) {
  const cplx w = two_wave(zeta, th);
  const double r = std::abs(w);
  const double s = std::sin(th);
  const cplx e = std::polar(1.0, -th);
  return s * s / (r * r * r) * w + 2.0 * (zeta + std::cos(th)) / r * e;
}

}  // namespace detail

/// First or second derivative of L_0. Closed elliptic forms away from
/// zeta = 1; on the band, quadrature of the differentiated integrand.
/// The fallback's reachable accuracy is limited by the C^2-only regularity:
/// order 1 converges to ~1e-10, order 2 only to ~1e-5 there.
inline double l0_deriv(double zeta, int order) {
  if (!(zeta > 0.0)) throw domain_error("l0_deriv requires zeta > 0");
  if (order != 1 && order != 2) throw domain_error("l0_deriv order must be 1 or 2");
  if (std::abs(zeta - 1.0) < 1e-4) {
    if (order == 1) {
      const auto f = [=](double th) { return detail::dzeta_integrand(zeta, th); };
      return detail::periodic_quadrature(f, 64, 1e-10).value;
    }
    const auto f = [=](double th) { return detail::d2zeta_integrand(zeta, th); };
    return detail::periodic_quadrature(f, 64, 2e-5).value;
  }
  const auto k = elliptic::k_of_zeta(zeta);
  const double E = elliptic::ellip_E(k);
  const double K = elliptic::ellip_K(k);
  if (order == 1)
    return (zeta + 1.0) * (zeta * zeta + 1.0) / (pi * zeta) * E -
           (zeta + 1.0) * (zeta - 1.0) * (zeta - 1.0) / (pi * zeta) * K;
  return (zeta + 1.0) * (2.0 * zeta * zeta - 1.0) / (pi * zeta * zeta) * E -
         (zeta - 1.0) * (2.0 * zeta * zeta + 1.0) / (pi * zeta * zeta) * K;
}

/// Finite-difference probe of |L_0'''| just above zeta = 1. Uses the points
/// 1+h and 1+2h so every evaluation stays on the closed-form branch for
/// h >= 1e-4. Grows like |log h| as h drops: L_0 is C^2 but not C^3.
inline double l0_third_deriv_probe(double h) {
  if (!(h >= 1e-10 && h <= 1e-2)) throw domain_error("probe step outside [1e-10, 1e-2]");
  return std::abs(l0_deriv(1.0 + 2.0 * h, 2) - l0_deriv(1.0 + h, 2)) / h;
}

/// |zeta^{-p} L_{-n}(zeta) - L_{n-1}(1/zeta)| with p = 3 (1D) or 2 (2D).
inline double reflection_residual(int n, double zeta, int dimension) {
  const double p = (dimension == 1) ? 3.0 : 2.0;
  const double lhs = std::pow(zeta, -p) *
                     ((dimension == 1) ? cubic_coeff(-n, zeta) : ln_quadrature(-n, zeta, 2).value);
  const double rhs = (dimension == 1) ? cubic_coeff(n - 1, 1.0 / zeta)
                                      : ln_quadrature(n - 1, 1.0 / zeta, 2).value;
  return std::abs(lhs - rhs);
}

struct DecayFit {
  double slope = std::numeric_limits<double>::quiet_NaN();
  bool underflow = false;  // every coefficient below 1e-14: super-polynomial
  int n_used = 0;
};

/// Least-squares slope of log|L_n(zeta)| against log n over n in [4, n_max].
/// Near -3 at zeta = 1; far steeper once zeta is away from 1.
inline DecayFit decay_fit(double zeta, int n_max, int dimension = 2) {
  if (n_max < 16) throw domain_error("decay_fit requires n_max >= 16");
  std::vector<double> xs, ys;
  for (int n = 4; n <= n_max; ++n) {
    const double v = std::abs(ln_quadrature(n, zeta, dimension).value);
    if (v < 1e-14) continue;
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(v));
  }
  DecayFit fit;
  fit.n_used = static_cast<int>(xs.size());
  if (xs.size() < 2) {
    fit.underflow = true;
    return fit;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double nn = static_cast<double>(xs.size());
  fit.slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  return fit;
}

struct UniformBound {
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;  // max <n>^{3-k} |L_n^{(k)}| for k = 0,1,2
  double max() const { return std::max(m0, std::max(m1, m2)); }
};

/// Max of <n>^{3-k} |L_n^{(k)}(zeta)| over n in [-n_max, n_max] and a
/// geometric zeta grid on [1/rho0, rho0] that keeps distance >= 1e-3 from 1.
/// zeta-derivatives by central differences of the quadrature (first
/// differences at h = 1e-5 max(1,zeta), second at 1e-4 max(1,zeta) to stay
/// above the quadrature noise); n = 0 uses the closed forms.
inline UniformBound uniform_bound_check(double rho0, int n_max, int zeta_samples = 9) {
  if (!(rho0 > 1.0 && rho0 <= 10.0)) throw domain_error("rho0 must lie in (1, 10]");
  std::vector<double> grid;
  for (double z : logspace(1.0 / rho0, rho0, zeta_samples))
    if (std::abs(z - 1.0) >= 1e-3) grid.push_back(z);

  UniformBound ub;
  const auto L = [](int n, double z) { return ln_quadrature(n, z, 2).value; };
  for (double z : grid) {
    for (int n = -n_max; n <= n_max; ++n) {
      const double jn = jbr(static_cast<double>(n));
      ub.m0 = std::max(ub.m0, jn * jn * jn * std::abs(L(n, z)));
      double d1, d2;
      if (n == 0) {
        d1 = l0_deriv(z, 1);
        d2 = l0_deriv(z, 2);
      } else {
        const double h1 = 1e-5 * std::max(1.0, z);
        const double h2 = 1e-4 * std::max(1.0, z);
        d1 = (L(n, z + h1) - L(n, z - h1)) / (2.0 * h1);
        d2 = (L(n, z + h2) - 2.0 * L(n, z) + L(n, z - h2)) / (h2 * h2);
      }
      ub.m1 = std::max(ub.m1, jn * jn * std::abs(d1));
      ub.m2 = std::max(ub.m2, jn * std::abs(d2));
    }
  }
  return ub;
}

/// L_0(zeta) - zeta L_0(1/zeta); zero iff zeta = 1, sign of (zeta - 1).
inline double complexness_discriminant(double zeta) {
  if (!(zeta > 0.0)) throw domain_error("discriminant requires zeta > 0");
  return l0_closed(zeta) - zeta * l0_closed(1.0 / zeta);
}

enum class Method : std::uint8_t { quadrature, closed_form, symbolic };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::quadrature: return "quadrature";
    case Method::closed_form: return "closed_form";
    default: return "symbolic";
  }
}

struct CoeffEntry {
  int n = 0;
  double zeta = 0.0;
  double value = 0.0;
  Method method = Method::quadrature;
  double im_residue = 0.0;
};

struct CoeffTable {
  int dimension = 2;
  int deriv_order = 0;
  std::vector<CoeffEntry> entries;
};

/// Tabulate L_n^{(order)}(zeta) over the requested (n, zeta) rectangle.
/// 1D uses the symbolic table; 2D n=0 the closed forms; everything else
/// quadrature (with central differences in zeta for order > 0).
inline CoeffTable build_coeff_table(int dimension, const std::vector<int>& ns,
                                    const std::vector<double>& zetas, int deriv_order = 0) {
  if (deriv_order < 0 || deriv_order > 2) throw domain_error("derivative order must be 0, 1 or 2");
  CoeffTable table;
  table.dimension = dimension;
  table.deriv_order = deriv_order;
  table.entries.resize(ns.size() * zetas.size());
  parallel_for(table.entries.size(), [&](std::size_t idx) {
    const int n = ns[idx / zetas.size()];
    const double z = zetas[idx % zetas.size()];
    CoeffEntry e;
    e.n = n;
    e.zeta = z;
    if (dimension == 1) {
      e.method = Method::symbolic;
      if (deriv_order == 0) {
        e.value = cubic_coeff(n, z);
      } else {
        // derivatives of the polynomial table
        switch (n) {
          case -2: e.value = (deriv_order == 1) ? 2.0 * z : 2.0; break;
          case -1: e.value = (deriv_order == 1) ? 3.0 * z * z + 2.0 : 6.0 * z; break;
          case 0: e.value = (deriv_order == 1) ? 4.0 * z : 4.0; break;
          case 1: e.value = (deriv_order == 1) ? 1.0 : 0.0; break;
          default: e.value = 0.0;
        }
      }
    } else if (n == 0) {
      e.method = Method::closed_form;
      e.value = (deriv_order == 0) ? l0_closed(z) : l0_deriv(z, deriv_order);
    } else if (deriv_order == 0) {
      const auto q = ln_quadrature(n, z, 2);
      e.value = q.value;
      e.im_residue = q.im_residue;
    } else {
      const double h = (deriv_order == 1 ? 1e-5 : 1e-4) * std::max(1.0, z);
      const auto plus = ln_quadrature(n, z + h, 2);
      const auto minus = ln_quadrature(n, z - h, 2);
      e.im_residue = std::max(plus.im_residue, minus.im_residue);
      if (deriv_order == 1) {
        e.value = (plus.value - minus.value) / (2.0 * h);
      } else {
        const auto mid = ln_quadrature(n, z, 2);
        e.value = (plus.value - 2.0 * mid.value + minus.value) / (h * h);
      }
    }
    table.entries[idx] = e;
  });
  return table;
}

}  // namespace kgasym::coeffs
