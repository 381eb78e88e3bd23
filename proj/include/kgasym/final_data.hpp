#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "kgasym/coeffs.hpp"
#include "kgasym/common.hpp"
#include "kgasym/fft.hpp"
#include "kgasym/interp.hpp"

// Final scattering data: the amplitude pair (A1, B1) of the forward and
// backward waves, either as closed-form Gaussian test data or as samples
// on a uniform grid in the rapidity variable z.

namespace kgasym::profiles {

struct GridSpec {
  double min = -8.0, max = 8.0;
  int count = 257;
  double dx() const { return (max - min) / (count - 1); }
  std::vector<double> points() const { return linspace(min, max, count); }
};

struct FinalData {
  int dimension = 1;
  GridSpec grid;
  std::vector<cplx> a1, b1;
  double lambda = 1.0;
  double rho0 = 2.0;
};

// Everything the profile and residual machinery needs from a datum:
// amplitudes and moduli with two z-derivatives, the ratio/phase pair, and
// the log-phase corrections S_A, S_B (also with two derivatives).
class AmplitudeModel {
 public:
  virtual ~AmplitudeModel() = default;
  virtual int dimension() const = 0;
  virtual double coupling() const = 0;
  virtual double rho0() const = 0;
  virtual Cplx2 a1(double z) const = 0;
  virtual Cplx2 b1(double z) const = 0;
  virtual Real2 abs_a1(double z) const = 0;
  virtual Real2 abs_b1(double z) const = 0;
  virtual Real2 phase_a(double z) const = 0;  // S_A
  virtual Real2 phase_b(double z) const = 0;  // S_B
  virtual double zeta_at(double z) const = 0;
  virtual double alpha_at(double z) const = 0;
  // constant amplitude ratio across the support, when the datum has one
  virtual std::optional<double> constant_ratio() const { return std::nullopt; }
  virtual double mu_max() const = 0;
};

namespace detail {

// S_A, S_B with two derivatives from a weight w(z) = <z>^{-1} carrier:
// S = c * carrier(z)/<z> where carrier and its derivatives are supplied.
inline Real2 phase_from_carrier(double c, double z, const Real2& g) {
  const double jz = jbr(z);
  Real2 s;
  s.v = c * g.v / jz;
  s.d1 = c * (g.d1 / jz - z * g.v / (jz * jz * jz));
  s.d2 = c * (g.d2 / jz - 2.0 * z * g.d1 / (jz * jz * jz) +
              (2.0 * z * z - 1.0) * g.v / std::pow(jz, 5));
  return s;
}

inline Cplx2 conj2(const Cplx2& a) { return {std::conj(a.v), std::conj(a.d1), std::conj(a.d2)}; }

inline Cplx2 mul2(const Cplx2& a, const Cplx2& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}

inline Cplx2 mul2(const Real2& a, const Cplx2& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}

}  // namespace detail

// Gaussian bump data A1 = a e^{i phi_a} g, B1 = b e^{i phi_b} g with
// g = exp(-(z-c)^2 / 2w^2); the canonical test family. The amplitude ratio
// zeta = b/a and relative phase alpha are constant on the support.
class GaussianModel final : public AmplitudeModel {
 public:
  GaussianModel(int dimension, double amp_a, double amp_b, double phase_b = 0.5 * pi,
                double lambda = 1.0, double width = 1.0, double center = 0.0,
                double rho_0 = 2.0, double phase_a = 0.0)
      : dim_(dimension),
        a_(amp_a),
        b_(amp_b),
        beta_(phase_b),
        phia_(phase_a),
        lambda_(lambda),
        w_(width),
        c_(center),
        rho0_(rho_0) {
    if (dimension != 1 && dimension != 2) throw domain_error("dimension must be 1 or 2");
    if (dimension == 2 && center != 0.0)
      throw capability_error("2D Gaussian data is radial; center must be 0");
    if (!(amp_a > 0.0)) throw domain_error("amp_a must be positive");
    if (amp_b < 0.0) throw domain_error("amp_b must be nonnegative");
    zeta_ = (b_ > 0.0) ? b_ / a_ : 0.0;
    if (dim_ == 2 && b_ > 0.0) {
      l0_zeta_ = coeffs::l0_closed(zeta_);
      l0_inv_zeta_ = coeffs::l0_closed(1.0 / zeta_);
    }
  }

  int dimension() const override { return dim_; }
  double coupling() const override { return lambda_; }
  double rho0() const override { return rho0_; }

  Real2 gauss(double z) const {
    const double u = (z - c_) / w_;
    const double g = std::exp(-0.5 * u * u);
    return {g, -u / w_ * g, (u * u - 1.0) / (w_ * w_) * g};
  }

  Cplx2 a1(double z) const override {
    const cplx ph = std::polar(a_, phia_);
    const Real2 g = gauss(z);
    return {ph * g.v, ph * g.d1, ph * g.d2};
  }
  Cplx2 b1(double z) const override {
    const cplx ph = std::polar(b_, beta_);
    const Real2 g = gauss(z);
    return {ph * g.v, ph * g.d1, ph * g.d2};
  }
  Real2 abs_a1(double z) const override { return gauss(z) * a_; }
  Real2 abs_b1(double z) const override { return gauss(z) * b_; }

  // Log-phase corrections, with the sign that makes (box+1)u_ap cancel the
  // resonant part of N(u_ap):
  //   1D: S_A = +(l/2)<z>^-1 (|A|^2 + 2|B|^2),  S_B = -(l/2)<z>^-1 (2|A|^2 + |B|^2)
  //   2D: S_A = +(l/2)<z>^-1 L0(zeta)|A|,       S_B = -(l/2)<z>^-1 L0(1/zeta)|B|
  // with the single-wave limits 3/4 factors when one amplitude vanishes.
  Real2 phase_a(double z) const override {
    const Real2 g = gauss(z);
    if (dim_ == 1) {
      const Real2 g2{g.v * g.v, 2.0 * g.v * g.d1, 2.0 * (g.d1 * g.d1 + g.v * g.d2)};
      return detail::phase_from_carrier(0.5 * lambda_ * (a_ * a_ + 2.0 * b_ * b_), z, g2);
    }
    if (b_ == 0.0) return detail::phase_from_carrier(0.5 * lambda_ * a_, z, g);
    return detail::phase_from_carrier(0.5 * lambda_ * l0_zeta_ * a_, z, g);
  }
  Real2 phase_b(double z) const override {
    const Real2 g = gauss(z);
    if (dim_ == 1) {
      const Real2 g2{g.v * g.v, 2.0 * g.v * g.d1, 2.0 * (g.d1 * g.d1 + g.v * g.d2)};
      return detail::phase_from_carrier(-0.5 * lambda_ * (2.0 * a_ * a_ + b_ * b_), z, g2);
    }
    if (b_ == 0.0) return detail::phase_from_carrier(-0.75 * lambda_ * a_, z, g);
    return detail::phase_from_carrier(-0.5 * lambda_ * l0_inv_zeta_ * b_, z, g);
  }

  double zeta_at(double) const override { return (b_ > 0.0) ? zeta_ : 0.0; }
  double alpha_at(double) const override { return phia_ - beta_; }
  std::optional<double> constant_ratio() const override {
    return (b_ > 0.0) ? std::optional<double>(zeta_) : std::nullopt;
  }
  double mu_max() const override {
    // |g| < 1e-14 beyond this point, a hard zero is justified
    return std::abs(c_) + w_ * std::sqrt(2.0 * std::log(1e14));
  }

  double amp_a() const { return a_; }
  double amp_b() const { return b_; }
  double width() const { return w_; }
  double center() const { return c_; }

  FinalData sample(const GridSpec& grid) const {
    FinalData d;
    d.dimension = dim_;
    d.grid = grid;
    d.lambda = lambda_;
    d.rho0 = rho0_;
    for (double z : grid.points()) {
      d.a1.push_back(a1(z).v);
      d.b1.push_back(b1(z).v);
    }
    return d;
  }

 private:
  int dim_;
  double a_, b_, beta_, phia_, lambda_, w_, c_, rho0_;
  double zeta_ = 1.0, l0_zeta_ = 0.0, l0_inv_zeta_ = 0.0;
};

/// Ratio zeta = |B1|/|A1| and relative phase alpha = arg(A1 conj(B1)) on the
/// grid, with nearest-valid-neighbor extension where |A1| (resp. the product)
/// falls below the floor.
inline std::pair<std::vector<double>, std::vector<double>> zeta_and_alpha(
    const std::vector<cplx>& a1, const std::vector<cplx>& b1, double theta_floor) {
  if (a1.size() != b1.size()) throw domain_error("zeta_and_alpha: size mismatch");
  if (!(theta_floor > 0.0)) throw domain_error("theta_floor must be positive");
  const std::size_t n = a1.size();
  std::vector<double> zeta(n, 0.0), alpha(n, 0.0);
  std::vector<bool> valid(n, false);
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(a1[i]) > theta_floor) {
      zeta[i] = std::abs(b1[i]) / std::abs(a1[i]);
      const cplx prod = a1[i] * std::conj(b1[i]);
      alpha[i] = (std::abs(prod) > 0.0) ? std::arg(prod) : 0.0;
      valid[i] = true;
      any = true;
    }
  }
  if (!any) throw degenerate_data_error("A1 vanishes identically; ratio undefined");
  // nearest-valid extension
  int last = -1;
  std::vector<int> nearest(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (valid[i]) last = static_cast<int>(i);
    nearest[i] = last;
  }
  last = -1;
  for (std::size_t i = n; i-- > 0;) {
    if (valid[i]) last = static_cast<int>(i);
    if (nearest[i] < 0 ||
        (last >= 0 && std::abs(static_cast<int>(i) - last) <
                          std::abs(static_cast<int>(i) - nearest[i])))
      nearest[i] = last;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!valid[i]) {
      zeta[i] = zeta[nearest[i]];
      alpha[i] = alpha[nearest[i]];
    }
  }
  return {zeta, alpha};
}

// Sampled datum: splines through the samples, fourth-order finite
// differences for the derivative tables, ratio/phase by nearest-valid
// extension. 2D samples are radial (z >= 0 half of the grid is used).
class SampledModel final : public AmplitudeModel {
 public:
  explicit SampledModel(FinalData data, double theta_floor_rel = 1e-8)
      : data_(std::move(data)) {
    const auto& g = data_.grid;
    if (static_cast<int>(data_.a1.size()) != g.count ||
        static_cast<int>(data_.b1.size()) != g.count)
      throw domain_error("sample arrays do not match the grid");
    double amax = 0.0;
    for (const auto& v : data_.a1) amax = std::max(amax, std::abs(v));
    for (const auto& v : data_.b1) amax = std::max(amax, std::abs(v));
    if (amax == 0.0) throw degenerate_data_error("empty final data");
    floor_ = theta_floor_rel * amax;

    build_complex(data_.a1, sa_);
    build_complex(data_.b1, sb_);
    std::vector<double> absa(g.count), absb(g.count);
    for (int i = 0; i < g.count; ++i) {
      absa[i] = std::abs(data_.a1[i]);
      absb[i] = std::abs(data_.b1[i]);
    }
    build_real(absa, sabs_a_);
    build_real(absb, sabs_b_);

    auto [zeta, alpha] = zeta_and_alpha(data_.a1, data_.b1, floor_);
    zeta_ = zeta;
    alpha_ = alpha;
    zspline_ = CubicSpline(g.min, g.dx(), zeta_);

    // S_A, S_B tables from the pointwise formulas, then splined
    std::vector<double> SA(g.count), SB(g.count);
    const auto pts = g.points();
    for (int i = 0; i < g.count; ++i) {
      const auto [va, vb] = phase_values(pts[i], absa[i], absb[i], zeta_[i]);
      SA[i] = va;
      SB[i] = vb;
    }
    build_real(SA, sSA_);
    build_real(SB, sSB_);
  }

  int dimension() const override { return data_.dimension; }
  double coupling() const override { return data_.lambda; }
  double rho0() const override { return data_.rho0; }
  Cplx2 a1(double z) const override { return eval_c(sa_, z); }
  Cplx2 b1(double z) const override { return eval_c(sb_, z); }
  Real2 abs_a1(double z) const override { return eval_r(sabs_a_, z); }
  Real2 abs_b1(double z) const override { return eval_r(sabs_b_, z); }
  Real2 phase_a(double z) const override { return eval_r(sSA_, z); }
  Real2 phase_b(double z) const override { return eval_r(sSB_, z); }
  double zeta_at(double z) const override { return zspline_(z); }
  double alpha_at(double z) const override {
    const cplx prod = sa_.v(z) * std::conj(sb_.v(z));
    if (std::abs(prod) > floor_ * floor_) return std::arg(prod);
    // fall back to the nearest grid value of the extended table
    const auto& g = data_.grid;
    int i = static_cast<int>(std::lround((z - g.min) / g.dx()));
    i = std::max(0, std::min(g.count - 1, i));
    return alpha_[i];
  }
  double mu_max() const override { return std::max(std::abs(data_.grid.min), data_.grid.max); }

  const FinalData& data() const { return data_; }
  const std::vector<double>& zeta_table() const { return zeta_; }
  const std::vector<double>& alpha_table() const { return alpha_; }
  double amplitude_floor() const { return floor_; }

 private:
  struct SplineR {
    CubicSpline v, d1, d2;
  };
  struct SplineC {
    CubicSplineC v, d1, d2;
  };

  std::pair<double, double> phase_values(double z, double absa, double absb,
                                         double zeta) const {
    const double l = data_.lambda;
    const double jz = jbr(z);
    if (data_.dimension == 1)
      return {0.5 * l / jz * (absa * absa + 2.0 * absb * absb),
              -0.5 * l / jz * (2.0 * absa * absa + absb * absb)};
    if (absa <= floor_ && absb <= floor_) return {0.0, 0.0};
    if (absa <= floor_) return {0.75 * l / jz * absb, -0.5 * l / jz * absb};
    if (absb <= floor_) return {0.5 * l / jz * absa, -0.75 * l / jz * absa};
    return {0.5 * l / jz * coeffs::l0_closed(zeta) * absa,
            -0.5 * l / jz * coeffs::l0_closed(1.0 / zeta) * absb};
  }

  void build_real(const std::vector<double>& y, SplineR& s) const {
    const auto& g = data_.grid;
    s.v = CubicSpline(g.min, g.dx(), y);
    s.d1 = CubicSpline(g.min, g.dx(), fd_derivative(y, g.dx(), 1));
    s.d2 = CubicSpline(g.min, g.dx(), fd_derivative(y, g.dx(), 2));
  }
  void build_complex(const std::vector<cplx>& y, SplineC& s) const {
    const auto& g = data_.grid;
    std::vector<double> re(y.size()), im(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      re[i] = y[i].real();
      im[i] = y[i].imag();
    }
    const auto dre1 = fd_derivative(re, g.dx(), 1), dim1 = fd_derivative(im, g.dx(), 1);
    const auto dre2 = fd_derivative(re, g.dx(), 2), dim2 = fd_derivative(im, g.dx(), 2);
    std::vector<cplx> d1(y.size()), d2(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      d1[i] = {dre1[i], dim1[i]};
      d2[i] = {dre2[i], dim2[i]};
    }
    s.v = CubicSplineC(g.min, g.dx(), y);
    s.d1 = CubicSplineC(g.min, g.dx(), d1);
    s.d2 = CubicSplineC(g.min, g.dx(), d2);
  }
  Real2 eval_r(const SplineR& s, double z) const { return {s.v(z), s.d1(z), s.d2(z)}; }
  Cplx2 eval_c(const SplineC& s, double z) const { return {s.v(z), s.d1(z), s.d2(z)}; }

  FinalData data_;
  double floor_ = 0.0;
  SplineC sa_, sb_;
  SplineR sabs_a_, sabs_b_, sSA_, sSB_;
  CubicSpline zspline_;
  std::vector<double> zeta_, alpha_;
};

/// Amplitudes from the spectra of the Cauchy data:
///   A1(mu) = (e^{-i d pi/4}/2) <mu>^{d/2} (<mu> phi0_hat(mu) + i phi1_hat(mu))
///   B1(mu) = (e^{+i d pi/4}/2) <mu>^{d/2} (<mu> phi0_hat(-mu) - i phi1_hat(-mu))
/// The grid must be symmetric about 0 so that -mu lands on a node.
inline std::pair<std::vector<cplx>, std::vector<cplx>> amplitudes_from_final_data(
    const std::vector<cplx>& phi0_hat, const std::vector<cplx>& phi1_hat,
    const GridSpec& grid, int dimension) {
  if (phi0_hat.size() != phi1_hat.size() ||
      static_cast<int>(phi0_hat.size()) != grid.count)
    throw domain_error("spectra must share the grid");
  if (std::abs(grid.min + grid.max) > 1e-12 * std::max(1.0, std::abs(grid.max)))
    throw domain_error("grid must be symmetric about 0");
  const cplx rot = std::polar(1.0, -dimension * pi / 4.0);
  const auto pts = grid.points();
  const int n = grid.count;
  std::vector<cplx> a1(n), b1(n);
  for (int i = 0; i < n; ++i) {
    const double mu = pts[i];
    const double jm = jbr(mu);
    const double wgt = 0.5 * std::pow(jm, dimension / 2.0);
    const int ineg = n - 1 - i;  // mirror node (grid symmetric)
    a1[i] = rot * wgt * (jm * phi0_hat[i] + cplx(0, 1) * phi1_hat[i]);
    b1[i] = std::conj(rot) * wgt * (jm * phi0_hat[ineg] - cplx(0, 1) * phi1_hat[ineg]);
  }
  return {a1, b1};
}

/// Continuous Fourier transform (unitary convention) of samples on a uniform
/// grid, evaluated on the FFT frequency set and returned sorted by frequency.
inline std::pair<std::vector<double>, std::vector<cplx>> spectrum_of_samples(
    double x0, double dx, std::vector<cplx> f) {
  const std::size_t n = f.size();
  fft(f, -1);
  const auto k = fft_wavenumbers(n, dx);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return k[a] < k[b]; });
  std::vector<double> xi(n);
  std::vector<cplx> out(n);
  const double norm = dx / std::sqrt(2.0 * pi);
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = order[i];
    xi[i] = k[j];
    out[i] = norm * f[j] * std::polar(1.0, -k[j] * x0);
  }
  return {xi, out};
}

struct AssumptionReport {
  bool ratio_ok = false;       // rho0^{-1}|A1| <= |B1| <= rho0|A1| on the support
  double ratio_min = 0.0;      // observed extremes of |B1|/|A1|
  double ratio_max = 0.0;
  bool split_support = false;  // supp A1 and supp B1 disjoint (split assumption)
  double grad_zeta_max = 0.0;  // grid estimates; may legitimately be large
  double hess_zeta_max = 0.0;
  bool derivative_bounded = false;  // advisory only
  double h22_a = 0.0, h22_b = 0.0;  // weighted Sobolev norms of the data
  bool norms_finite = false;
  bool pass() const { return (ratio_ok || split_support) && norms_finite; }
};

/// Checks the amplitude-ratio hypothesis, the ratio-regularity estimates and
/// the weighted Sobolev norms of a sampled datum. Reports, never throws.
inline AssumptionReport validate_assumption(const FinalData& data) {
  AssumptionReport rep;
  const auto& g = data.grid;
  const std::size_t n = data.a1.size();
  double amax = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    amax = std::max({amax, std::abs(data.a1[i]), std::abs(data.b1[i])});
  if (amax == 0.0) return rep;
  const double floor = 1e-10 * amax;

  rep.ratio_min = std::numeric_limits<double>::infinity();
  rep.ratio_max = 0.0;
  bool overlap = false, ratio_ok = true, any = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::abs(data.a1[i]), b = std::abs(data.b1[i]);
    if (a <= floor && b <= floor) continue;
    any = true;
    if (a > floor && b > floor) overlap = true;
    const double r = (a > floor) ? b / a : std::numeric_limits<double>::infinity();
    rep.ratio_min = std::min(rep.ratio_min, r);
    rep.ratio_max = std::max(rep.ratio_max, r);
    if (!(r >= 1.0 / data.rho0 && r <= data.rho0)) ratio_ok = false;
  }
  rep.ratio_ok = any && overlap && ratio_ok;
  rep.split_support = any && !overlap;

  // ratio-regularity estimates from the extended table
  try {
    auto [zeta, alpha] = zeta_and_alpha(data.a1, data.b1, 1e-8 * amax);
    (void)alpha;
    const auto dz = fd_derivative(zeta, g.dx(), 1);
    const auto d2z = fd_derivative(zeta, g.dx(), 2);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = std::abs(data.a1[i]);
      if (a <= 1e-6 * amax) continue;  // only meaningful on the support
      rep.grad_zeta_max = std::max(rep.grad_zeta_max, std::abs(dz[i]));
      rep.hess_zeta_max = std::max(rep.hess_zeta_max, std::abs(d2z[i]));
    }
    rep.derivative_bounded = rep.grad_zeta_max < 1e3 && rep.hess_zeta_max < 1e6;
  } catch (const degenerate_data_error&) {
  }

  // H^{2,2} norms (radial measure in 2D)
  const auto pts = g.points();
  const auto sob = [&](const std::vector<cplx>& f) {
    std::vector<double> re(n), im(n);
    for (std::size_t i = 0; i < n; ++i) {
      re[i] = f[i].real();
      im[i] = f[i].imag();
    }
    double total = 0.0;
    for (int order = 0; order <= 2; ++order) {
      std::vector<double> dre = re, dim = im;
      if (order > 0) {
        dre = fd_derivative(re, g.dx(), order);
        dim = fd_derivative(im, g.dx(), order);
      }
      std::vector<double> integ(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double w = std::pow(jbr(pts[i]), 4.0);  // <z>^{2s}, s = 2
        const double meas = (data.dimension == 2) ? 2.0 * pi * std::abs(pts[i]) : 1.0;
        integ[i] = w * meas * (dre[i] * dre[i] + dim[i] * dim[i]);
      }
      total += std::sqrt(trapezoid(integ, g.dx()));
    }
    return total;
  };
  rep.h22_a = sob(data.a1);
  rep.h22_b = sob(data.b1);
  rep.norms_finite = std::isfinite(rep.h22_a) && std::isfinite(rep.h22_b);
  return rep;
}

}  // namespace kgasym::profiles
