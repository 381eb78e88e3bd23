#pragma once

#include <vector>

#include "kgasym/common.hpp"

namespace kgasym {

// Natural cubic spline on a uniform grid. Used to extend sampled amplitude
// tables off their nodes; values decay to zero at the ends by construction
// of the test data, so the natural boundary is adequate.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(double x0, double dx, std::vector<double> y) : x0_(x0), dx_(dx), y_(std::move(y)) {
    if (y_.size() < 3) throw capability_error("spline needs at least 3 samples");
    solve_tridiagonal();
  }

  double operator()(double x) const {
    const auto [i, t] = locate(x);
    const double h = dx_;
    const double a = y_[i], b = slope(i), c = m_[i] / 2.0, d = (m_[i + 1] - m_[i]) / (6.0 * h);
    return a + t * (b + t * (c + t * d));
  }

 private:
  std::pair<std::size_t, double> locate(double x) const {
    double u = (x - x0_) / dx_;
    auto i = static_cast<long>(std::floor(u));
    i = std::max<long>(0, std::min<long>(static_cast<long>(y_.size()) - 2, i));
    return {static_cast<std::size_t>(i), x - (x0_ + i * dx_)};
  }
  double slope(std::size_t i) const {
    return (y_[i + 1] - y_[i]) / dx_ - dx_ / 6.0 * (2.0 * m_[i] + m_[i + 1]);
  }
  void solve_tridiagonal() {
    const std::size_t n = y_.size();
    std::vector<double> c(n, 0.0), d(n, 0.0);
    m_.assign(n, 0.0);
    // interior equations: m_{i-1}/6 + 2 m_i /3 + m_{i+1}/6 = (y_{i+1}-2y_i+y_{i-1})/h^2
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double rhs = (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]) / (dx_ * dx_);
      const double lower = (i == 1) ? 0.0 : 1.0 / 6.0;
      const double wdenom = 2.0 / 3.0 - lower * c[i - 1];
      c[i] = (i + 2 < n ? 1.0 / 6.0 : 0.0) / wdenom;
      d[i] = (rhs - lower * d[i - 1]) / wdenom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m_[i] = d[i] - c[i] * m_[i + 1];
      if (i == 1) break;
    }
  }

  double x0_ = 0.0, dx_ = 1.0;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at nodes
};

// Complex-valued spline as a pair of real splines.
class CubicSplineC {
 public:
  CubicSplineC() = default;
  CubicSplineC(double x0, double dx, const std::vector<cplx>& y) {
    std::vector<double> re(y.size()), im(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      re[i] = y[i].real();
      im[i] = y[i].imag();
    }
    re_ = CubicSpline(x0, dx, std::move(re));
    im_ = CubicSpline(x0, dx, std::move(im));
  }
  cplx operator()(double x) const { return {re_(x), im_(x)}; }

 private:
  CubicSpline re_, im_;
};

// Fourth-order centered first/second differences on a uniform grid, with
// second-order one-sided fallback near the ends.
inline std::vector<double> fd_derivative(const std::vector<double>& y, double dx, int order) {
  const std::size_t n = y.size();
  if (n < 5) throw capability_error("fd_derivative needs at least 5 samples");
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 2 && i + 2 < n) {
      if (order == 1)
        out[i] = (-y[i + 2] + 8.0 * y[i + 1] - 8.0 * y[i - 1] + y[i - 2]) / (12.0 * dx);
      else
        out[i] = (-y[i + 2] + 16.0 * y[i + 1] - 30.0 * y[i] + 16.0 * y[i - 1] - y[i - 2]) /
                 (12.0 * dx * dx);
    } else {
      const std::size_t j = std::min(std::max<std::size_t>(i, 1), n - 2);
      if (order == 1)
        out[i] = (y[j + 1] - y[j - 1]) / (2.0 * dx);
      else
        out[i] = (y[j + 1] - 2.0 * y[j] + y[j - 1]) / (dx * dx);
    }
  }
  return out;
}

}  // namespace kgasym
