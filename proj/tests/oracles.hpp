#pragma once

// Test-only oracles. Deliberately independent of the library's solver
// kernels: straight loops, bisection, finite differences, grid search.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

inline std::vector<double> x_of_y(const std::vector<double>& v,
                                  const std::vector<double>& u, double y) {
  std::vector<double> x(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = v[i] - (u[i] + 1.0) * y;
    const double b = (u[i] - 1.0) * y - v[i];
    x[i] = std::max(a, 0.0) - std::max(b, 0.0);
  }
  return x;
}

inline double cval(const std::vector<double>& x, const std::vector<double>& u) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i]) + u[i] * x[i];
  return s;
}

struct ProjOracle {
  std::vector<double> x;
  double y = 0.0;
  bool active = false;
};

// Bisection on the monotone constraint-value curve down to 1e-12 width.
inline ProjOracle project(const std::vector<double>& v, const std::vector<double>& u,
                          double tau) {
  const auto curve = [&](double y) { return cval(x_of_y(v, u, y), u); };
  if (curve(0.0) <= tau) return {v, 0.0, false};
  double hi = 1.0;
  for (int j = 0; j < 2000 && curve(hi) > tau; ++j) hi *= 2.0;
  double lo = 0.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (curve(mid) > tau) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double y = 0.5 * (lo + hi);
  return {x_of_y(v, u, y), y, true};
}

inline double central_diff(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace oracle
