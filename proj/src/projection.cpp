#include "lcpp/projection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "lcpp/parallel.hpp"

namespace lcpp {

namespace {

constexpr double kFeasRelTol = 1e-12;

struct XorShift64 {
  std::uint64_t s;
  std::uint64_t next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  }
};

using Hinge = ProjectionWorkspace::Hinge;

// Restricted to y >= 0, each coordinate contributes a single hinge
//   w * (t - y)  for y < t,   0 afterwards,
// with t = |v_i| / (1 + sgn(v_i) u_i) and w = (1 + sgn(v_i) u_i)^2.
// Coordinates with v_i = 0, and saturated ones with 1 + sgn(v_i) u_i = 0
// (those keep x_i = v_i forever and contribute zero), produce no hinge.
// Since w*t = (1 + sgn(v_i) u_i)|v_i|, the constraint value at y = 0 is the
// sum of w*t over the hinges; it is accumulated here over the same fixed
// blocks in both code paths, so serial and parallel runs agree bitwise.
struct HingeBuild {
  std::size_t count;
  double ell0;
};

HingeBuild build_hinges(std::span<const double> v, std::span<const double> u,
                        std::vector<Hinge>& hinges) {
  const std::size_t d = v.size();
  hinges.resize(d);
  const std::size_t nb = d == 0 ? 1 : (d + detail::kReduceBlock - 1) / detail::kReduceBlock;
  std::vector<double> part(nb, 0.0);

  const auto hinge_of = [&](std::size_t i) -> Hinge {
    const double av = std::abs(v[i]);
    const double c = v[i] > 0.0 ? 1.0 + u[i] : 1.0 - u[i];
    if (av == 0.0 || c <= 1e-100) return {-1.0, 0.0};
    return {av / c, c * c};
  };

  std::size_t m = 0;
#ifdef _OPENMP
  if (parallel_enabled() && d >= detail::kParallelCutoff) {
#pragma omp parallel for schedule(static)
    for (long lb = 0; lb < static_cast<long>(nb); ++lb) {
      const auto b = static_cast<std::size_t>(lb);
      const std::size_t lo = b * detail::kReduceBlock;
      const std::size_t hi = std::min(d, lo + detail::kReduceBlock);
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) {
        const Hinge h = hinge_of(i);
        hinges[i] = h;
        if (h.t >= 0.0) s += h.w * h.t;
      }
      part[b] = s;
    }
    for (std::size_t i = 0; i < d; ++i)
      if (hinges[i].t >= 0.0) hinges[m++] = hinges[i];
    return {m, detail::pairwise_fold(part)};
  }
#endif
  for (std::size_t b = 0; b < nb; ++b) {
    const std::size_t lo = b * detail::kReduceBlock;
    const std::size_t hi = std::min(d, lo + detail::kReduceBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const Hinge h = hinge_of(i);
      if (h.t >= 0.0) {
        hinges[m++] = h;
        s += h.w * h.t;
      }
    }
    part[b] = s;
  }
  return {m, detail::pairwise_fold(part)};
}

// Smallest y >= 0 with F(y) = sum_{t_j > y} w_j (t_j - y) = tau, given
// F(0) > tau > 0. Partition-based segment search: a random pivot splits the
// unresolved hinges; the side fully above or below the root folds into
// running sums, so the expected work is linear in the hinge count. The sum
// and compaction loops are written branch-free; pivot comparisons on random
// data would otherwise dominate at large sizes.
double solve_dual(std::vector<Hinge>& h, std::size_t m, double tau) {
  double s0_acc = 0.0;  // weight of hinges known active at the root
  double s1_acc = 0.0;  // their weighted t sum
  XorShift64 rng{0x9e3779b97f4a7c15ull ^ (static_cast<std::uint64_t>(m) + 1)};
  std::size_t lo = 0, hi = m;
  while (hi > lo) {
    const double p = h[lo + rng.next() % (hi - lo)].t;
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double keep = h[i].t >= p ? 1.0 : 0.0;
      s0 += keep * h[i].w;
      s1 += keep * (h[i].w * h[i].t);
    }
    const double f_at_p = (s1_acc + s1) - p * (s0_acc + s0);
    std::size_t w = lo;
    if (f_at_p <= tau) {
      // root <= p: hinges at or above p stay active there
      s0_acc += s0;
      s1_acc += s1;
      for (std::size_t i = lo; i < hi; ++i) {
        h[w] = h[i];
        w += h[i].t < p ? 1 : 0;
      }
    } else {
      // root > p: hinges at or below p are already spent there
      for (std::size_t i = lo; i < hi; ++i) {
        h[w] = h[i];
        w += h[i].t > p ? 1 : 0;
      }
    }
    hi = w;
  }
  if (s0_acc <= 0.0) return 0.0;  // unreachable for tau in (0, F(0))
  return std::max(0.0, (s1_acc - tau) / s0_acc);
}

void recover(std::span<const double> v, std::span<const double> u, double y,
             std::span<double> x) {
  const std::size_t d = v.size();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) \
    if (parallel_enabled() && d >= detail::kParallelCutoff)
#endif
  for (long li = 0; li < static_cast<long>(d); ++li) {
    const auto i = static_cast<std::size_t>(li);
    x[i] = std::max(v[i] - (u[i] + 1.0) * y, 0.0) -
           std::max((u[i] - 1.0) * y - v[i], 0.0);
  }
}

}  // namespace

double constraint_value(std::span<const double> x, std::span<const double> u) {
  return detail::blocked_sum(x.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += std::abs(x[i]) + u[i] * x[i];
    return s;
  });
}

void project_into(std::span<const double> v, std::span<const double> u, double tau,
                  ProjectionWorkspace& ws, std::span<double> x_out, double& y_out,
                  bool& active_out) {
  if (v.size() != u.size() || x_out.size() != v.size())
    throw config_error("projection: dimension mismatch");
  if (!std::isfinite(tau)) throw config_error("projection: tau must be finite");
  if (tau < 0.0)
    throw infeasible_error("projection: empty feasible set, tau < 0");

  const double feas_tol = kFeasRelTol * std::max(1.0, std::abs(tau));
  const auto built = build_hinges(v, u, ws.hinges);
  if (built.ell0 <= tau + feas_tol) {
    std::copy(v.begin(), v.end(), x_out.begin());
    y_out = 0.0;
    active_out = false;
    return;
  }

  const std::size_t m = built.count;
  double y;
  if (tau == 0.0) {
    // the constraint value decays to zero exactly where the last hinge dies
    y = 0.0;
    for (std::size_t i = 0; i < m; ++i) y = std::max(y, ws.hinges[i].t);
  } else {
    y = solve_dual(ws.hinges, m, tau);
  }
  recover(v, u, y, x_out);
  y_out = y;
  active_out = true;
}

ProjectionResult project(const ProjectionProblem& prob, ProjectionWorkspace& ws) {
  if (prob.v.size() != prob.u.size())
    throw config_error("projection: v and u dimensions differ");
  for (double ui : prob.u)
    if (!(std::abs(ui) <= 1.0 + 1e-9))
      throw config_error("projection: requires |u_i| <= 1");
  ProjectionResult res;
  res.x.resize(prob.v.size());
  project_into(prob.v, prob.u, prob.tau, ws, res.x, res.y, res.active);
  return res;
}

ProjectionResult project(const ProjectionProblem& prob) {
  ProjectionWorkspace ws;
  return project(prob, ws);
}

double ell(const ProjectionProblem& prob, double y) {
  const auto& v = prob.v;
  const auto& u = prob.u;
  if (v.size() != u.size())
    throw config_error("projection: v and u dimensions differ");
  return detail::blocked_sum(v.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double a = v[i] - (u[i] + 1.0) * y;
      const double b = (u[i] - 1.0) * y - v[i];
      s += (u[i] - 1.0) * std::max(a, 0.0) - (u[i] + 1.0) * std::max(b, 0.0) +
           2.0 * std::max(std::max(a, b), 0.0);
    }
    return s;
  });
}

std::vector<double> breakpoints(const ProjectionProblem& prob) {
  const auto& v = prob.v;
  const auto& u = prob.u;
  if (v.size() != u.size())
    throw config_error("projection: v and u dimensions differ");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (u[i] != -1.0) {
      const double c = v[i] / (u[i] + 1.0);
      if (c >= 0.0) out.push_back(c + 0.0);
    }
    if (u[i] != 1.0) {
      const double c = v[i] / (u[i] - 1.0);
      if (c >= 0.0) out.push_back(c + 0.0);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lcpp
