#pragma once

#include <utility>

#include "kgasym/common.hpp"

// Complete elliptic integrals K and E via the arithmetic-geometric mean,
// and the modulus map zeta -> 2*sqrt(zeta)/(1+zeta) used by the resonant
// coefficient closed forms.

namespace kgasym::elliptic {

class Modulus {
 public:
  explicit Modulus(double k) : k_(k) {
    if (!(k >= 0.0 && k <= 1.0)) throw domain_error("modulus must lie in [0,1]");
  }
  double value() const { return k_; }

 private:
  double k_;
};

/// Modulus 2*sqrt(zeta)/(1+zeta); lands in (0,1] for zeta > 0 and is
/// invariant under zeta -> 1/zeta.
inline Modulus k_of_zeta(double zeta) {
  if (!(zeta > 0.0)) throw domain_error("k_of_zeta requires zeta > 0");
  double k = 2.0 * std::sqrt(zeta) / (1.0 + zeta);
  if (k > 1.0) k = 1.0;  // rounding guard, exact value is <= 1
  return Modulus(k);
}

/// K(k) = int_0^{pi/2} (1 - k^2 sin^2 t)^{-1/2} dt by AGM iteration.
/// Quadratic convergence; accurate to ~1e-15 relative away from k = 1.
/// k = 1 raises divergence_error (K(1) = +inf), callers must branch.
inline double ellip_K(Modulus k) {
  const double kv = k.value();
  if (kv == 1.0) throw divergence_error("K(1) diverges");
  double a = 1.0;
  double b = std::sqrt((1.0 - kv) * (1.0 + kv));
  for (int it = 0; it < 64; ++it) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    if (std::abs(a - b) <= 1e-13 * a) break;
  }
  return pi / (2.0 * a);
}

/// E(k) = int_0^{pi/2} (1 - k^2 sin^2 t)^{1/2} dt.
/// E(1) = 1 exactly; otherwise AGM with the c_n^2 correction sum.
inline double ellip_E(Modulus k) {
  const double kv = k.value();
  if (kv == 1.0) return 1.0;
  double a = 1.0;
  double b = std::sqrt((1.0 - kv) * (1.0 + kv));
  double sum = 0.5 * kv * kv;
  double pow2 = 0.5;
  for (int it = 0; it < 64; ++it) {
    const double c = 0.5 * (a - b);
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    pow2 *= 2.0;
    sum += pow2 * c * c;
    if (std::abs(c) <= 1e-17) break;
  }
  return pi / (2.0 * a) * (1.0 - sum);
}

/// Two-sided constants for the logarithmic blow-up of K near k = 1:
/// lower*|log(1-k)| <= K(k) <= upper*|log(1-k)| at the given modulus.
/// Valid on 0.9 < k < 1 (the ratio stays inside [0.4, 1.2] there).
inline std::pair<double, double> log_singularity_bracket(Modulus k) {
  const double kv = k.value();
  if (!(kv > 0.9 && kv < 1.0))
    throw domain_error("log_singularity_bracket requires 0.9 < k < 1");
  const double lower = 0.4, upper = 1.2;
  const double ratio = ellip_K(k) / std::abs(std::log(1.0 - kv));
  if (!(ratio >= lower && ratio <= upper))
    throw accuracy_error("K log-bracket violated; AGM evaluation suspect");
  return {lower, upper};
}

}  // namespace kgasym::elliptic
