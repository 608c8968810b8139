#include "lcpp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lcpp/parallel.hpp"

namespace lcpp {

namespace {

void validate_config(const LcppConfig& cfg, const Objective& obj) {
  if (!(cfg.eta0 < cfg.eta))
    throw config_error("lcpp: eta0 must be strictly below eta");
  if (!(cfg.gamma > obj.mu))
    throw config_error("lcpp: gamma must exceed the objective curvature mu");
  if (cfg.outer_iters < 0) throw config_error("lcpp: negative outer iteration count");
  if (cfg.schedule == LevelSchedule::Custom) {
    if (static_cast<int>(cfg.custom_deltas.size()) < cfg.outer_iters)
      throw config_error("lcpp: custom schedule shorter than the outer iteration count");
    double sum = 0.0;
    for (double d : cfg.custom_deltas) {
      if (!(d > 0.0)) throw config_error("lcpp: custom schedule deltas must be positive");
      sum += d;
    }
    const double span = cfg.eta - cfg.eta0;
    if (sum > span * (1.0 + 1e-12))
      throw config_error("lcpp: custom schedule overshoots eta - eta0");
  }
}

std::uint64_t iteration_seed(std::uint64_t base, int k) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(k + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

double level(const LcppConfig& cfg, int k) {
  if (k < 0) throw config_error("level: negative iteration index");
  if (cfg.schedule == LevelSchedule::Theory) {
    if (k == 0) return cfg.eta0;
    const double kk = static_cast<double>(k);
    return (kk / (kk + 1.0)) * cfg.eta + (1.0 / (kk + 1.0)) * cfg.eta0;
  }
  if (k > static_cast<int>(cfg.custom_deltas.size()))
    throw config_error("level: index beyond the custom schedule");
  double eta_k = cfg.eta0;
  for (int t = 0; t < k; ++t) eta_k += cfg.custom_deltas[static_cast<std::size_t>(t)];
  return eta_k;
}

LcppState init_state(const LcppConfig& cfg, const Objective& obj,
                     const PenaltySpec& pen, std::span<const double> x0) {
  validate(pen);
  validate_config(cfg, obj);
  const std::size_t d = obj.dimension();

  LcppState state;
  if (x0.empty()) {
    state.x.assign(d, 0.0);
  } else {
    if (x0.size() != d) throw config_error("lcpp: x0 dimension mismatch");
    state.x.assign(x0.begin(), x0.end());
  }
  for (double v : state.x)
    if (!std::isfinite(v)) throw config_error("lcpp: x0 must be finite");

  state.g_x = g_value(pen, state.x);
  if (!(state.g_x < cfg.eta0))
    throw config_error("lcpp: starting point infeasible, g(x0) = " +
                       std::to_string(state.g_x) + " >= eta0 = " +
                       std::to_string(cfg.eta0));

  state.k = 0;
  state.eta_k = cfg.eta0;
  state.majorant = majorant_data(pen, state.x);
  state.psi_x = value(obj, state.x);
  state.psi_origin =
      x0.empty() ? state.psi_x : value(obj, std::vector<double>(d, 0.0));
  state.start_time = std::chrono::steady_clock::now();
  return state;
}

void step(LcppState& state, const LcppConfig& cfg, const Objective& obj,
          const PenaltySpec& pen) {
  const std::size_t d = state.x.size();
  const int k_next = state.k + 1;
  const double eta_k = level(cfg, k_next);
  const double lam = lambda_eff(pen);

  // normalized subproblem constraint: ||x||_1 + <u, x> <= tau
  SubproblemSpec sp;
  sp.objective = &obj;
  sp.prox_center = state.x;
  sp.gamma = cfg.gamma;
  sp.lambda_eff = lam;
  sp.u.resize(d);
  double gh_dot_x = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    sp.u[i] = std::clamp(-state.majorant.grad_h[i] / lam, -1.0, 1.0);
    gh_dot_x += state.majorant.grad_h[i] * state.x[i];
  }
  sp.tau = (eta_k + state.majorant.h_sum - gh_dot_x) / lam;

  // dual-bound pieces measured at the incoming iterate
  const double slack = slack_sum(pen, state.x);
  const double denom = eta_k - state.g_x + slack;
  double xc_sq = 0.0;
  for (double v : state.x) xc_sq += v * v;
  const double psi0_k = state.psi_origin + 0.5 * cfg.gamma * xc_sq;

  SubsolverReport rep;
  switch (cfg.inner) {
    case InnerSolver::Bb: {
      BbConfig bcfg = cfg.bb;
      bcfg.record_inner = bcfg.record_inner || cfg.inner_trace;
      rep = solve_bb(sp, bcfg);
      break;
    }
    case InnerSolver::Acsa: {
      AcsaConfig acfg = cfg.acsa;
      if (acfg.outer_K <= 0) acfg.outer_K = cfg.outer_iters;
      acfg.seed = iteration_seed(cfg.seed ^ acfg.seed, k_next);
      acfg.record_inner = acfg.record_inner || cfg.inner_trace;
      rep = solve_acsa(sp, acfg);
      break;
    }
    case InnerSolver::Sgd: {
      SgdConfig scfg = cfg.sgd;
      scfg.seed = iteration_seed(cfg.seed ^ scfg.seed, k_next);
      scfg.record_inner = scfg.record_inner || cfg.inner_trace;
      rep = solve_sgd(sp, scfg);
      break;
    }
  }

  const double g_new = g_value(pen, rep.x);
  const double gk_new = majorant_value(pen, state.majorant, state.x, rep.x);
  const double chain_tol = 1e-9 * std::max(1.0, std::abs(eta_k));
  if (g_new > gk_new + chain_tol || gk_new > eta_k + chain_tol)
    throw std::runtime_error("lcpp: feasibility chain violated at iteration " +
                             std::to_string(k_next));

  const double psi_new = value(obj, rep.x);

  TraceRecord rec;
  rec.k = k_next;
  rec.eta_k = eta_k;
  rec.psi = psi_new;
  rec.g = g_new;
  rec.inner_iters = rep.iterations;
  rec.dual_est = rep.dual_estimate;
  rec.zeta = rep.zeta;
  rec.cs_resid = std::abs(rep.dual_estimate * (g_new - cfg.eta));
  if (cfg.diagnostics) {
    const auto gp = grad(obj, rep.x);
    rec.stat_resid = stationarity_residual(gp, pen, rep.x, rep.dual_estimate);
  }
  rec.bound_denominator = denom;
  double diff_sq = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double t = rep.x[i] - state.x[i];
    diff_sq += t * t;
  }
  const double psik_new = psi_new + 0.5 * cfg.gamma * diff_sq;
  const DualBoundInput dbi{psi0_k, psik_new - rep.zeta, eta_k, state.g_x, slack};
  rec.dual_upper = generic_dual_bound(dbi);
  if (cfg.inner_trace) rec.inner_psi = std::move(rep.inner_psi);
  rec.elapsed_s = elapsed_since(state.start_time);

  state.x = std::move(rep.x);
  state.g_x = g_new;
  state.psi_x = psi_new;
  state.eta_k = eta_k;
  state.k = k_next;
  state.majorant = majorant_data(pen, state.x);
  state.trace.push_back(std::move(rec));
}

LcppResult run(const LcppConfig& cfg, const Objective& obj, const PenaltySpec& pen,
               std::span<const double> x0) {
  LcppState state = init_state(cfg, obj, pen, x0);
  const int K = cfg.outer_iters;

  int k_hat = 0;
  if (K >= 1) {
    std::mt19937_64 rng(iteration_seed(cfg.seed, -1));
    std::uniform_int_distribution<int> pick((K + 1) / 2, K);
    k_hat = pick(rng);
  }

  LcppResult res;
  double dual_hat = 0.0, dual_last = 0.0;
  std::vector<double> x_prev = state.x;
  for (int k = 1; k <= K; ++k) {
    step(state, cfg, obj, pen);
    dual_last = state.trace.back().dual_est;
    if (k == k_hat) {
      res.x_hat = state.x;
      res.k_hat = k_hat;
      dual_hat = dual_last;
    }
    if (cfg.outer_tol > 0.0) {
      double diff = 0.0, norm = 0.0;
      for (std::size_t i = 0; i < state.x.size(); ++i) {
        const double t = state.x[i] - x_prev[i];
        diff += t * t;
        norm += state.x[i] * state.x[i];
      }
      const bool settled =
          std::sqrt(diff) <= cfg.outer_tol * std::max(1.0, std::sqrt(norm));
      const bool level_close = cfg.eta - state.eta_k <= cfg.level_tol;
      if (settled && level_close) break;
    }
    x_prev = state.x;
  }

  res.iterations = state.k;
  res.x_last = state.x;
  if (res.x_hat.empty() || state.k < k_hat) {
    // early exit before the drawn index: fall back to the last iterate
    res.x_hat = state.x;
    res.k_hat = state.k;
    dual_hat = dual_last;
  }
  res.kkt_last = kkt_report(obj, pen, res.x_last, dual_last, cfg.eta);
  res.kkt_hat = kkt_report(obj, pen, res.x_hat, dual_hat, cfg.eta);
  if (!state.trace.empty()) {
    res.kkt_last.dual_upper = state.trace.back().dual_upper;
  }
  res.trace = std::move(state.trace);
  return res;
}

}  // namespace lcpp
