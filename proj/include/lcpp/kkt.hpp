#pragma once

#include <optional>
#include <span>

#include "lcpp/objective.hpp"
#include "lcpp/penalty.hpp"

namespace lcpp {

struct KktReport {
  double feas_gap = 0.0;    // max(0, g(x) - eta)
  double stat_resid = 0.0;  // min-norm element of grad psi + y * subdiff g
  double cs_resid = 0.0;    // |y * (g(x) - eta)|
  double dual = 0.0;        // multiplier the residuals were evaluated at
  std::optional<double> dual_upper;
};

// Distance of 0 to grad psi(x) + y*(lambda*subdiff ||x||_1 - grad h(x)),
// minimized coordinate-wise over the l1 subgradient: sign(x_i) where x_i is
// nonzero, the clamp of the remaining terms to [-y*lambda, y*lambda] at
// x_i = 0.
double stationarity_residual(std::span<const double> grad_psi, const PenaltySpec& pen,
                             std::span<const double> x, double y);
double stationarity_residual(const Objective& obj, const PenaltySpec& pen,
                             std::span<const double> x, double y);

KktReport kkt_report(const Objective& obj, const PenaltySpec& pen,
                     std::span<const double> x, double y, double eta);

}  // namespace lcpp
