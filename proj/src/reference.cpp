#include "lcpp/reference.hpp"

#include <algorithm>
#include <cmath>

namespace lcpp::reference {

double constraint_value(std::span<const double> x, std::span<const double> u) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i]) + u[i] * x[i];
  return s;
}

double ell(std::span<const double> v, std::span<const double> u, double y) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = v[i] - (u[i] + 1.0) * y;
    const double b = (u[i] - 1.0) * y - v[i];
    s += (u[i] - 1.0) * std::max(a, 0.0) - (u[i] + 1.0) * std::max(b, 0.0) +
         2.0 * std::max(std::max(a, b), 0.0);
  }
  return s;
}

ProjectionResult project(std::span<const double> v, std::span<const double> u,
                         double tau) {
  if (v.size() != u.size()) throw config_error("reference::project: dimension mismatch");
  if (tau < 0.0) throw infeasible_error("reference::project: tau < 0");

  ProjectionResult res;
  res.x.assign(v.begin(), v.end());
  if (constraint_value(v, u) <= tau + 1e-12 * std::max(1.0, std::abs(tau))) return res;

  struct Hinge {
    double t, w;
  };
  std::vector<Hinge> h;
  h.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double av = std::abs(v[i]);
    const double c = v[i] > 0.0 ? 1.0 + u[i] : 1.0 - u[i];
    if (av > 0.0 && c > 1e-100) h.push_back({av / c, c * c});
  }
  std::sort(h.begin(), h.end(), [](const Hinge& a, const Hinge& b) { return a.t < b.t; });

  const std::size_t m = h.size();
  std::vector<double> s0(m + 1, 0.0), s1(m + 1, 0.0);
  for (std::size_t k = m; k-- > 0;) {
    s0[k] = s0[k + 1] + h[k].w;
    s1[k] = s1[k + 1] + h[k].w * h[k].t;
  }

  // value of the constraint curve at the right end of segment k
  auto ell_at = [&](std::size_t k) { return s1[k + 1] - h[k].t * s0[k + 1]; };

  // first segment whose right end falls at or below tau
  std::size_t lo = 0, hi = m - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (ell_at(mid) <= tau) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  const double y = std::max(0.0, (s1[lo] - tau) / s0[lo]);

  for (std::size_t i = 0; i < v.size(); ++i)
    res.x[i] = std::max(v[i] - (u[i] + 1.0) * y, 0.0) -
               std::max((u[i] - 1.0) * y - v[i], 0.0);
  res.y = y;
  res.active = true;
  return res;
}

double objective_value(const Objective& obj, std::span<const double> x) {
  if (obj.kind == LossKind::Custom) return obj.value_fn(x);
  const Dataset& data = *obj.data;
  double s = 0.0;
  for (std::size_t i = 0; i < data.rows; ++i) {
    const double m = data.row_dot(i, x);
    if (obj.kind == LossKind::Logistic) {
      const double t = data.labels[i] * m;
      s += t >= 0.0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t));
    } else {
      const double r = data.labels[i] - m;
      s += r * r;
    }
  }
  return s / static_cast<double>(data.rows);
}

std::vector<double> objective_grad(const Objective& obj, std::span<const double> x) {
  std::vector<double> out(obj.dimension(), 0.0);
  if (obj.kind == LossKind::Custom) {
    obj.grad_fn(x, out);
    return out;
  }
  const Dataset& data = *obj.data;
  const double inv = 1.0 / static_cast<double>(data.rows);
  for (std::size_t i = 0; i < data.rows; ++i) {
    const double m = data.row_dot(i, x);
    const double c = (obj.kind == LossKind::Logistic
                          ? -data.labels[i] / (1.0 + std::exp(data.labels[i] * m))
                          : 2.0 * (m - data.labels[i])) *
                     inv;
    for (std::size_t k = data.indptr[i]; k < data.indptr[i + 1]; ++k)
      out[data.indices[k]] += c * data.values[k];
  }
  return out;
}

double g_value(const PenaltySpec& pen, std::span<const double> x) {
  double s = 0.0;
  for (double xi : x) s += g_scalar(pen, xi);
  return s;
}

}  // namespace lcpp::reference
