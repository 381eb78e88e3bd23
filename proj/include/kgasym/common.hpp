#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace kgasym {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Japanese bracket <x> = sqrt(1+x^2)
inline double jbr(double x) { return std::sqrt(1.0 + x * x); }

struct domain_error : std::domain_error {
  explicit domain_error(const std::string& m) : std::domain_error(m) {}
};

// K(1) and friends: the value exists only as a limit, caller must branch.
struct divergence_error : std::domain_error {
  explicit divergence_error(const std::string& m) : std::domain_error(m) {}
};

struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& m) : std::runtime_error(m) {}
};

struct accuracy_error : numeric_error {
  explicit accuracy_error(const std::string& m) : numeric_error(m) {}
};

struct instability_error : numeric_error {
  explicit instability_error(const std::string& m) : numeric_error(m) {}
};

struct capability_error : numeric_error {
  explicit capability_error(const std::string& m) : numeric_error(m) {}
};

struct degenerate_data_error : numeric_error {
  explicit degenerate_data_error(const std::string& m) : numeric_error(m) {}
};

// Value together with first and second derivative in one spatial variable.
struct Real2 {
  double v = 0.0, d1 = 0.0, d2 = 0.0;
  Real2 operator+(const Real2& o) const { return {v + o.v, d1 + o.d1, d2 + o.d2}; }
  Real2 operator-(const Real2& o) const { return {v - o.v, d1 - o.d1, d2 - o.d2}; }
  Real2 operator*(double s) const { return {v * s, d1 * s, d2 * s}; }
};

struct Cplx2 {
  cplx v{}, d1{}, d2{};
  Cplx2 operator+(const Cplx2& o) const { return {v + o.v, d1 + o.d1, d2 + o.d2}; }
  Cplx2 operator*(cplx s) const { return {v * s, d1 * s, d2 * s}; }
};

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = (n == 1) ? a : a + (b - a) * i / (n - 1);
  return out;
}

inline std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> out(n);
  const double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < n; ++i) out[i] = std::exp((n == 1) ? la : la + (lb - la) * i / (n - 1));
  return out;
}

inline double trapezoid(const std::vector<double>& f, double dx) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * dx;
}

inline int thread_count() {
  if (const char* env = std::getenv("KGASYM_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

// Chunked parallel loop. Each index writes its own output slot, so results do
// not depend on the thread count; the serial path is the default.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const int nt = std::min<std::size_t>(thread_count(), n ? n : 1);
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += nt) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace kgasym
