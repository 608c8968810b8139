#pragma once

#include <optional>
#include <span>

#include "lcpp/penalty.hpp"

namespace lcpp {

struct DualBoundInput {
  double psi0 = 0.0;       // subproblem objective at the origin
  double psik = 0.0;       // subproblem optimum, or a lower proxy for it
  double eta_k = 0.0;      // current level
  double g_prev = 0.0;     // g at the previous iterate
  double slack_sum = 0.0;  // sum_i (lambda - |h'(x_i)|)|x_i| at the previous iterate
};

// (psi0 - psik) / (eta_k - g_prev + slack_sum). Every multiplier of the
// current subproblem lies at or below this value; empty when the denominator
// is not positive.
std::optional<double> generic_dual_bound(const DualBoundInput& in);

// Lower bounds on slack_sum as a function of the residual penalty budget
// gamma_resid = g(x) minus the exhausted saturation multiples.
double z_scad(const PenaltySpec& pen, double gamma_resid);  // domain [0, lam^2(theta+1)/2]
double z_mcp(const PenaltySpec& pen, double gamma_resid);   // domain [0, theta*lam^2/2]

double slack_sum(const PenaltySpec& pen, std::span<const double> x);

struct Eta0Choice {
  double eta0 = 0.0;
  double eta_tilde = 0.0;        // eta modulo the saturation value
  double denom_guarantee = 0.0;  // proven lower bound on the dual-bound denominator
  int beta = 0;                  // whole saturation multiples below eta
};

// Initial levels that keep the dual-bound denominator provably positive for
// every iterate. Throws degenerate_level_error when eta sits exactly on a
// saturation multiple, where no such guarantee exists.
Eta0Choice eta0_auto_scad(const PenaltySpec& pen, double eta);
Eta0Choice eta0_auto_mcp(const PenaltySpec& pen, double eta);

}  // namespace lcpp
