#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lcpp/errors.hpp"

namespace lcpp {

enum class PenaltyFamily { Mcp, Scad, Exp, Log, LpFrac, LpNeg };

// Separable sparsity penalty g(x) = lambda*||x||_1 - sum_i h(x_i), with h
// convex and smooth, h(0) = 0, h'(0) = 0 and |h'| <= lambda everywhere.
// Families that fix lambda through their shape parameters (Log, LpFrac,
// LpNeg) derive it internally, so (lambda, h) can never disagree.
struct PenaltySpec {
  PenaltyFamily family = PenaltyFamily::Mcp;
  double theta = 0.0;        // shape: Mcp/Scad/Log/LpFrac (LpFrac exponent is 1/theta)
  double lambda_user = 0.0;  // Mcp/Scad/Exp
  double p = 0.0;            // LpNeg exponent, p < 0
  double eps = 0.0;          // LpFrac smoothing
};

struct PenaltyConstants {
  double lambda_eff = 0.0;
  double lip_h = 0.0;                // Lipschitz constant of h' (sup of |h''|)
  std::optional<double> saturation;  // per-coordinate max of g, when finite
};

void validate(const PenaltySpec& spec);  // throws config_error
PenaltyConstants constants(const PenaltySpec& spec);
double lambda_eff(const PenaltySpec& spec);

double h_value(const PenaltySpec& spec, double x);
double h_grad(const PenaltySpec& spec, double x);

// lambda*|x| - h(x) evaluated piecewise, so saturated coordinates return the
// saturation constant exactly.
double g_scalar(const PenaltySpec& spec, double x);
double g_value(const PenaltySpec& spec, std::span<const double> x);

struct MajorantData {
  std::vector<double> grad_h;  // h' at the anchor, coordinate-wise
  double h_sum = 0.0;          // sum_i h(anchor_i)
};

// Data for the convex upper model
//   g_a(x) = lambda*||x||_1 - h_sum - <grad_h, x - anchor>,
// which touches g at the anchor and dominates it everywhere.
MajorantData majorant_data(const PenaltySpec& spec, std::span<const double> anchor);

// Value of the upper model built at `anchor` evaluated at `x`.
double majorant_value(const PenaltySpec& spec, const MajorantData& m,
                      std::span<const double> anchor, std::span<const double> x);

PenaltyFamily family_from_name(std::string_view name);
std::string_view family_name(PenaltyFamily family);

PenaltySpec make_mcp(double lambda, double theta);
PenaltySpec make_scad(double lambda, double theta);
PenaltySpec make_exp(double lambda);
PenaltySpec make_log(double theta);
PenaltySpec make_lp_frac(double theta, double eps);
PenaltySpec make_lp_neg(double p, double theta);

}  // namespace lcpp
