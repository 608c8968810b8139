#include "lcpp/subsolver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <limits>

#include "lcpp/parallel.hpp"

namespace lcpp {

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
  return detail::blocked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double d = a[i] - b[i];
      s += d * d;
    }
    return s;
  });
}

double dot(std::span<const double> a, std::span<const double> b) {
  return detail::blocked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
    return s;
  });
}

double sq_norm(std::span<const double> a) { return dot(a, a); }

struct SubEval {
  const SubproblemSpec& spec;
  std::mt19937_64 rng;

  explicit SubEval(const SubproblemSpec& s, std::uint64_t seed = 0) : spec(s), rng(seed) {}

  double value(std::span<const double> x) const {
    return lcpp::value(*spec.objective, x) +
           0.5 * spec.gamma * sq_dist(x, spec.prox_center);
  }

  void add_prox_term(std::span<const double> x, std::span<double> out) const {
    for (std::size_t i = 0; i < x.size(); ++i)
      out[i] += spec.gamma * (x[i] - spec.prox_center[i]);
  }

  void grad(std::span<const double> x, std::span<double> out) {
    lcpp::grad(*spec.objective, x, out);
    add_prox_term(x, out);
  }

  // minibatch for data-backed losses, noisy callback otherwise, exact
  // gradient as the fallback
  void stoch_grad(std::span<const double> x, std::size_t batch, std::span<double> out) {
    const Objective& obj = *spec.objective;
    if (batch > 0 && obj.data != nullptr) {
      const auto idx = sample_batch(rng, obj.data->rows, batch);
      lcpp::stoch_grad(obj, x, idx, out);
    } else if (obj.noisy_grad_fn) {
      obj.noisy_grad_fn(x, rng, out);
    } else {
      lcpp::grad(obj, x, out);
    }
    add_prox_term(x, out);
  }
};

#ifndef NDEBUG
void assert_feasible(const SubproblemSpec& spec, std::span<const double> x) {
  assert(constraint_value(x, spec.u) <=
         spec.tau + 1e-9 * std::max(1.0, std::abs(spec.tau)));
}
#else
void assert_feasible(const SubproblemSpec&, std::span<const double>) {}
#endif

void check_spec(const SubproblemSpec& spec) {
  if (spec.objective == nullptr) throw config_error("subsolver: missing objective");
  const std::size_t d = spec.objective->dimension();
  if (spec.prox_center.size() != d || spec.u.size() != d)
    throw config_error("subsolver: dimension mismatch");
  if (!(spec.gamma > 0.0)) throw config_error("subsolver: gamma must be positive");
  if (!(spec.tau > 0.0))
    throw config_error("subsolver: tau must be positive (origin strictly feasible)");
  if (!(spec.lambda_eff > 0.0)) throw config_error("subsolver: lambda_eff must be positive");
  const double feas = constraint_value(spec.prox_center, spec.u);
  if (feas > spec.tau + 1e-9 * std::max(1.0, std::abs(spec.tau)))
    throw config_error("subsolver: prox center infeasible for the subproblem");
}

// One projected-gradient step from x with step 1/(L + gamma). Decreases the
// subproblem objective, yields the multiplier estimate, and certifies an
// optimality gap bound through the subgradient it exposes.
struct PolishResult {
  std::vector<double> x;
  double value;
  double step;
  double proj_multiplier;
  double gap_cert;  // upper bound on psi_k(x) - min psi_k, +inf if unavailable
};

PolishResult polish(SubEval& ev, std::span<const double> x_in,
                    std::span<const double> g_in, ProjectionWorkspace& ws) {
  const SubproblemSpec& spec = ev.spec;
  const std::size_t d = x_in.size();
  const double lk = spec.objective->smooth_L + spec.gamma;
  const double musc = spec.gamma - spec.objective->mu;
  const double alpha = 1.0 / std::max(lk, 1e-12);

  std::vector<double> point(d);
  for (std::size_t i = 0; i < d; ++i) point[i] = x_in[i] - alpha * g_in[i];

  PolishResult out;
  out.x.resize(d);
  bool active = false;
  project_into(point, spec.u, spec.tau, ws, out.x, out.proj_multiplier, active);
  out.value = ev.value(out.x);
  out.step = alpha;

  if (musc > 0.0 && spec.objective->nonsmooth_M == 0.0) {
    std::vector<double> gq(d);
    ev.grad(out.x, gq);
    double cert = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double s = (x_in[i] - out.x[i]) / alpha - g_in[i] + gq[i];
      cert += s * s;
    }
    out.gap_cert = cert / (2.0 * musc);
  } else {
    out.gap_cert = std::numeric_limits<double>::infinity();
  }
  return out;
}

SubsolverReport finish(SubEval& ev, std::vector<double> x, double fx,
                       std::span<const double> gx, std::size_t iterations,
                       double rho, double zeta_base, ProjectionWorkspace& ws,
                       bool stamp_cert) {
  const PolishResult pol = polish(ev, x, gx, ws);
  SubsolverReport rep;
  rep.iterations = iterations;
  rep.final_step = pol.step;
  rep.rho = rho;
  ProjectionResult last;
  last.y = pol.proj_multiplier;
  rep.dual_estimate = dual_from_last_step(last, pol.step, ev.spec.lambda_eff);
  if (pol.value <= fx) {
    rep.x = pol.x;
    rep.zeta = stamp_cert ? pol.gap_cert : zeta_base;
  } else {
    // keep the incumbent; the certificate still bounds its gap through the
    // value difference to the polished point
    rep.x = std::move(x);
    rep.zeta = stamp_cert ? std::max(0.0, pol.gap_cert + (fx - pol.value)) : zeta_base;
  }
  return rep;
}

}  // namespace

double dual_from_last_step(const ProjectionResult& last_projection, double step,
                           double lambda_eff) {
  if (!(step > 0.0)) throw config_error("dual_from_last_step: step must be positive");
  return last_projection.y / (step * lambda_eff);
}

int acsa_budget(const Objective& obj, double gamma, int outer_K) {
  double t_const;
  if (obj.mu > 0.0) {
    t_const = 2.0 * std::sqrt(obj.smooth_L / obj.mu + 3.0);
  } else {
    const double beta = obj.smooth_L > 0.0 ? gamma / obj.smooth_L : 1.0;
    t_const = 2.0 * std::sqrt(2.0 * (1.0 + beta) / beta);
  }
  const double t_noise =
      static_cast<double>(outer_K) * (obj.nonsmooth_M + obj.sigma);
  const double t = std::max(t_const, t_noise);
  return std::max(1, static_cast<int>(std::ceil(t)));
}

SubsolverReport solve_bb(const SubproblemSpec& spec, const BbConfig& cfg) {
  check_spec(spec);
  const std::size_t d = spec.prox_center.size();
  SubEval ev(spec);
  ProjectionWorkspace ws;

  std::vector<double> x = spec.prox_center;
  std::vector<double> g(d), trial(d), point(d), g_new(d);
  double fx = ev.value(x);
  ev.grad(x, g);

  const int window = cfg.monotone ? 1 : std::max(1, cfg.memory);
  std::deque<double> hist{fx};
  std::vector<double> inner_psi;

  double alpha = 1.0;
  std::size_t accepted = 0;

  for (int t = 0; t < cfg.max_iters; ++t) {
    const double fref = *std::max_element(hist.begin(), hist.end());
    bool moved = false;
    double ftrial = fx;
    while (alpha >= cfg.step_min) {
      for (std::size_t i = 0; i < d; ++i) point[i] = x[i] - alpha * g[i];
      double yproj = 0.0;
      bool active = false;
      project_into(point, spec.u, spec.tau, ws, trial, yproj, active);
      ftrial = ev.value(trial);
      const double dist2 = sq_dist(trial, x);
      if (ftrial <= fref - 0.5 * cfg.suff_decrease * dist2 / alpha) {
        moved = true;
        break;
      }
      if (dist2 == 0.0) break;  // projection no longer moves; stationary
      alpha *= 0.5;
    }
    if (!moved) break;

    ev.grad(trial, g_new);
    double ss = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double s = trial[i] - x[i];
      ss += s * s;
      sy += s * (g_new[i] - g[i]);
    }
    x.swap(trial);
    g.swap(g_new);
    fx = ftrial;
    ++accepted;
    assert_feasible(spec, x);
    if (cfg.record_inner) inner_psi.push_back(fx);
    hist.push_back(fx);
    while (static_cast<int>(hist.size()) > window) hist.pop_front();

    const double xnorm2 = sq_norm(x);
    if (ss <= cfg.tol * cfg.tol * std::max(xnorm2, 1e-60)) break;

    alpha = sy > 0.0 ? std::clamp(ss / sy, cfg.step_min, cfg.step_max) : cfg.step_max;
  }

  // rho = 0: the claimed budget is the whole certified gap
  auto rep = finish(ev, std::move(x), fx, g, accepted, 0.0, 0.0, ws, /*stamp_cert=*/true);
  rep.inner_psi = std::move(inner_psi);
  return rep;
}

SubsolverReport solve_acsa(const SubproblemSpec& spec, const AcsaConfig& cfg) {
  check_spec(spec);
  const Objective& obj = *spec.objective;
  const double musc = spec.gamma - obj.mu;
  if (!(musc > 0.0))
    throw config_error("solve_acsa: needs gamma > mu for strong convexity");

  int T = cfg.iters;
  if (T == 0) T = acsa_budget(obj, spec.gamma, std::max(cfg.outer_K, 1));
  if (T < 1) throw config_error("solve_acsa: iteration budget must be at least 1");

  const std::size_t d = spec.prox_center.size();
  const double lk = obj.smooth_L + spec.gamma;
  const bool stochastic = (cfg.batch > 0 && obj.data != nullptr) ||
                          static_cast<bool>(obj.noisy_grad_fn);

  SubEval ev(spec, cfg.seed);
  ProjectionWorkspace ws;

  std::vector<double> x = spec.prox_center;
  std::vector<double> xag = spec.prox_center;
  std::vector<double> xmd(d), gbuf(d), point(d);
  std::vector<double> inner_psi;

  for (int t = 1; t <= T; ++t) {
    const double at = 2.0 / (t + 1.0);
    const double gt = 4.0 * lk / (static_cast<double>(t) * (t + 1.0));
    const double denom = gt + (1.0 - at * at) * musc;
    const double c_ag = (1.0 - at) * (musc + gt) / denom;
    const double c_x = at * ((1.0 - at) * musc + gt) / denom;
    for (std::size_t i = 0; i < d; ++i) xmd[i] = c_ag * xag[i] + c_x * x[i];

    if (stochastic) {
      ev.stoch_grad(xmd, cfg.batch, gbuf);
    } else {
      ev.grad(xmd, gbuf);
    }

    const double cq = musc + gt;
    const double w_md = at * musc / cq;
    const double w_x = ((1.0 - at) * musc + gt) / cq;
    for (std::size_t i = 0; i < d; ++i)
      point[i] = w_md * xmd[i] + w_x * x[i] - (at / cq) * gbuf[i];

    double yproj = 0.0;
    bool active = false;
    project_into(point, spec.u, spec.tau, ws, x, yproj, active);
    assert_feasible(spec, x);
    for (std::size_t i = 0; i < d; ++i) xag[i] = at * x[i] + (1.0 - at) * xag[i];
    if (cfg.record_inner) inner_psi.push_back(ev.value(xag));
  }

  const double rho = 4.0 * lk / (static_cast<double>(T) * T);
  const double m2s2 = obj.nonsmooth_M * obj.nonsmooth_M + obj.sigma * obj.sigma;
  const double zeta = stochastic || obj.nonsmooth_M > 0.0
                          ? 8.0 * m2s2 / (musc * static_cast<double>(T))
                          : 0.0;

  const double fag = ev.value(xag);
  ev.grad(xag, gbuf);
  auto rep = finish(ev, std::move(xag), fag, gbuf, static_cast<std::size_t>(T), rho,
                    zeta, ws, /*stamp_cert=*/false);
  rep.inner_psi = std::move(inner_psi);
  return rep;
}

SubsolverReport solve_sgd(const SubproblemSpec& spec, const SgdConfig& cfg) {
  check_spec(spec);
  const Objective& obj = *spec.objective;
  const double musc = spec.gamma - obj.mu;
  if (cfg.iters < 1) throw config_error("solve_sgd: needs at least one iteration");

  const std::size_t d = spec.prox_center.size();
  SubEval ev(spec, cfg.seed);
  ProjectionWorkspace ws;

  std::vector<double> x = spec.prox_center;
  std::vector<double> gbuf(d), point(d);
  std::vector<double> inner_psi;
  double gmax_sq = 0.0;

  for (int t = 1; t <= cfg.iters; ++t) {
    if (cfg.batch == 0) {
      ev.grad(x, gbuf);
    } else {
      ev.stoch_grad(x, cfg.batch, gbuf);
    }
    gmax_sq = std::max(gmax_sq, sq_norm(gbuf));
    const double step = cfg.step_c / (spec.gamma * static_cast<double>(t));
    for (std::size_t i = 0; i < d; ++i) point[i] = x[i] - step * gbuf[i];
    double yproj = 0.0;
    bool active = false;
    project_into(point, spec.u, spec.tau, ws, x, yproj, active);
    assert_feasible(spec, x);
    if (cfg.record_inner) inner_psi.push_back(ev.value(x));
  }

  // classical averaged-SGD budget with the observed gradient bound
  const double T = static_cast<double>(cfg.iters);
  const double zeta = musc > 0.0
                          ? gmax_sq * (1.0 + std::log(T)) / (2.0 * musc * T)
                          : std::numeric_limits<double>::infinity();

  const double fx = ev.value(x);
  ev.grad(x, gbuf);
  auto rep = finish(ev, std::move(x), fx, gbuf, static_cast<std::size_t>(cfg.iters),
                    0.0, zeta, ws, /*stamp_cert=*/false);
  rep.inner_psi = std::move(inner_psi);
  return rep;
}

}  // namespace lcpp
