#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "lcpp/dual_bounds.hpp"
#include "lcpp/kkt.hpp"
#include "lcpp/penalty.hpp"
#include "lcpp/subsolver.hpp"

namespace lcpp {

enum class InnerSolver { Bb, Acsa, Sgd };
enum class LevelSchedule { Theory, Custom };

struct LcppConfig {
  double eta = 0.0;
  double eta0 = 0.0;
  double gamma = 1e-4;
  int outer_iters = 1000;
  LevelSchedule schedule = LevelSchedule::Theory;
  std::vector<double> custom_deltas;  // used by LevelSchedule::Custom
  InnerSolver inner = InnerSolver::Bb;
  BbConfig bb;
  AcsaConfig acsa;
  SgdConfig sgd;
  std::optional<double> dual_bound_B;
  double outer_tol = 0.0;  // > 0 enables the practical early exit
  double level_tol = 0.0;
  std::uint64_t seed = 0;
  bool diagnostics = true;  // KKT residuals in the trace (one extra gradient per step)
  bool inner_trace = false;  // per-inner-iteration subproblem values in the trace
};

struct TraceRecord {
  int k = 0;
  double eta_k = 0.0;
  double psi = 0.0;
  double g = 0.0;
  std::size_t inner_iters = 0;
  double dual_est = 0.0;
  double stat_resid = 0.0;
  double cs_resid = 0.0;
  double elapsed_s = 0.0;
  double zeta = 0.0;
  double bound_denominator = 0.0;       // eta_k - g(x^{k-1}) + slack_sum(x^{k-1})
  std::optional<double> dual_upper;     // generic dual bound at this iteration
  std::vector<double> inner_psi;        // only when LcppConfig::inner_trace is set
};

struct LcppState {
  int k = 0;
  std::vector<double> x;
  double eta_k = 0.0;
  MajorantData majorant;  // at the current iterate
  double psi_x = 0.0;
  double g_x = 0.0;
  double psi_origin = 0.0;
  std::vector<TraceRecord> trace;
  std::chrono::steady_clock::time_point start_time;
};

// Level after k steps: eta0 at k = 0, then (k/(k+1))eta + (1/(k+1))eta0 for
// the Theory schedule, eta0 plus the partial delta sum for Custom.
double level(const LcppConfig& cfg, int k);

LcppState init_state(const LcppConfig& cfg, const Objective& obj,
                     const PenaltySpec& pen, std::span<const double> x0);

// One outer iteration: raise the level, rebuild the convex upper model of g
// at the current iterate, solve the subproblem, audit the feasibility chain
// and record the trace row.
void step(LcppState& state, const LcppConfig& cfg, const Objective& obj,
          const PenaltySpec& pen);

struct LcppResult {
  std::vector<double> x_last;
  std::vector<double> x_hat;  // randomized pick from the second half of the run
  int k_hat = 0;
  int iterations = 0;
  std::vector<TraceRecord> trace;
  KktReport kkt_last;
  KktReport kkt_hat;
};

// x0 empty means the origin (strictly feasible for every admissible level).
LcppResult run(const LcppConfig& cfg, const Objective& obj, const PenaltySpec& pen,
               std::span<const double> x0 = {});

}  // namespace lcpp
