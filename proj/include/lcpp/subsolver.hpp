#pragma once

#include <cstdint>

#include "lcpp/objective.hpp"
#include "lcpp/projection.hpp"

namespace lcpp {

// Strongly convex subproblem
//   min  psi(x) + (gamma/2)||x - prox_center||^2
//   s.t. ||x||_1 + <u, x> <= tau
// with the constraint in normalized form (the penalty scaled by 1/lambda),
// so the subproblem multiplier is y_normalized / lambda_eff.
struct SubproblemSpec {
  const Objective* objective = nullptr;
  std::vector<double> prox_center;
  double gamma = 0.0;
  std::vector<double> u;
  double tau = 0.0;
  double lambda_eff = 0.0;
};

struct SubsolverReport {
  std::vector<double> x;
  std::size_t iterations = 0;   // solver iterations, excluding the polish step
  double final_step = 0.0;      // step of the projection that produced x
  double dual_estimate = 0.0;   // subproblem multiplier estimate
  double rho = 0.0;             // contraction parameter claimed for this solve
  double zeta = 0.0;            // residual budget claimed for this solve
  std::vector<double> inner_psi;  // per-iteration subproblem values, when recorded
};

// Projected gradient with Barzilai-Borwein steps and a nonmonotone
// sufficient-decrease line search.
struct BbConfig {
  int max_iters = 10;
  double tol = 1e-5;  // stop when ||x_t - x_{t-1}|| <= tol * ||x_t||
  int memory = 5;
  double suff_decrease = 1e-4;
  double step_min = 1e-10;
  double step_max = 1e10;
  bool monotone = false;    // shrink the line-search memory to 1
  bool record_inner = false;
};

struct AcsaConfig {
  int iters = 0;           // explicit T_k; 0 derives the budget from the oracle constants
  int outer_K = 0;         // outer iteration count entering the derived budget
  std::size_t batch = 0;   // minibatch size; 0 = deterministic full gradient
  std::uint64_t seed = 0;
  bool record_inner = false;
};

struct SgdConfig {
  int iters = 1000;
  double step_c = 1.0;  // step_t = step_c / (gamma * t)
  std::size_t batch = 1;  // 0 = full batch (projected gradient descent)
  std::uint64_t seed = 0;
  bool record_inner = false;
};

// Every iterate of every solver is a projection output (or a convex
// combination of them), hence feasible. Each solve ends with one
// full-gradient polish step, which can only decrease the subproblem
// objective; its projection multiplier supplies dual_estimate.
SubsolverReport solve_bb(const SubproblemSpec& spec, const BbConfig& cfg);
SubsolverReport solve_acsa(const SubproblemSpec& spec, const AcsaConfig& cfg);
SubsolverReport solve_sgd(const SubproblemSpec& spec, const SgdConfig& cfg);

// A prox-gradient fixed point with step alpha satisfies
//   y_subproblem = y_projection / (alpha * lambda).
double dual_from_last_step(const ProjectionResult& last_projection, double step,
                           double lambda_eff);

// T_k = max{ 2*sqrt(L/mu + 3), K*(M + sigma) } when mu > 0, with the
// convex-case constant 2*sqrt(2(1+beta)/beta), beta = gamma/L, when mu = 0.
int acsa_budget(const Objective& obj, double gamma, int outer_K);

}  // namespace lcpp
