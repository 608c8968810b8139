#include "lcpp/dual_bounds.hpp"

#include <cmath>

#include "lcpp/parallel.hpp"

namespace lcpp {

std::optional<double> generic_dual_bound(const DualBoundInput& in) {
  const double denom = in.eta_k - in.g_prev + in.slack_sum;
  if (!(denom > 0.0)) return std::nullopt;
  return std::max(0.0, (in.psi0 - in.psik) / denom);
}

double z_scad(const PenaltySpec& pen, double gamma_resid) {
  validate(pen);
  if (pen.family != PenaltyFamily::Scad) throw config_error("z_scad: not a SCAD penalty");
  const double lam = pen.lambda_user;
  const double th = pen.theta;
  const double budget = lam * lam * (th + 1.0) / 2.0;
  if (gamma_resid < -1e-12 || gamma_resid > budget * (1.0 + 1e-12))
    throw config_error("z_scad: gamma outside [0, lambda^2(theta+1)/2]");
  const double g = std::clamp(gamma_resid, 0.0, budget);
  if (g <= lam * lam) return g;
  return (g / lam) * std::sqrt(2.0 / (th - 1.0)) * std::sqrt(budget - g);
}

double z_mcp(const PenaltySpec& pen, double gamma_resid) {
  validate(pen);
  if (pen.family != PenaltyFamily::Mcp) throw config_error("z_mcp: not a MCP penalty");
  const double lam = pen.lambda_user;
  const double th = pen.theta;
  const double budget = th * lam * lam / 2.0;
  if (gamma_resid < -1e-12 || gamma_resid > budget * (1.0 + 1e-12))
    throw config_error("z_mcp: gamma outside [0, theta*lambda^2/2]");
  const double g = std::clamp(gamma_resid, 0.0, budget);
  return g * std::sqrt(std::max(0.0, 1.0 - 2.0 * g / (th * lam * lam)));
}

double slack_sum(const PenaltySpec& pen, std::span<const double> x) {
  validate(pen);
  const double lam = lambda_eff(pen);
  return detail::blocked_sum(x.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
      s += (lam - std::abs(h_grad(pen, x[i]))) * std::abs(x[i]);
    return s;
  });
}

namespace {

struct Decomposition {
  int beta;
  double eta_tilde;
};

Decomposition decompose(double eta, double budget) {
  if (!(eta > 0.0)) throw config_error("eta0 selection: eta must be positive");
  const int beta = static_cast<int>(std::floor(eta / budget));
  const double eta_tilde = eta - beta * budget;
  if (eta_tilde <= 0.0)
    throw degenerate_level_error(
        "eta is an exact multiple of the per-coordinate saturation value; the "
        "explicit dual bound degenerates there");
  return {beta, eta_tilde};
}

}  // namespace

Eta0Choice eta0_auto_scad(const PenaltySpec& pen, double eta) {
  validate(pen);
  if (pen.family != PenaltyFamily::Scad)
    throw config_error("eta0_auto_scad: not a SCAD penalty");
  const double lam = pen.lambda_user;
  const double budget = lam * lam * (pen.theta + 1.0) / 2.0;
  const auto [beta, eta_tilde] = decompose(eta, budget);

  Eta0Choice out;
  out.beta = beta;
  out.eta_tilde = eta_tilde;
  const double z = z_scad(pen, eta_tilde);
  if (eta_tilde <= lam * lam) {
    out.eta0 = beta * budget + eta_tilde / 2.0;
  } else {
    out.eta0 = beta * budget + std::min(lam * lam, z);
  }
  out.denom_guarantee = std::min(lam * lam, z / 2.0);
  return out;
}

// Counterpart of the SCAD rule. With z(t) = t*sqrt(1 - 2t/(theta*lam^2))
// there is no interval where z is the identity, so the residual level is
// chosen as max{z(~eta)/2, ~eta - z(~eta)/2}: the first term covers iterates
// below the last saturation multiple, the second covers the rest because
// t - z(t) is nondecreasing.
Eta0Choice eta0_auto_mcp(const PenaltySpec& pen, double eta) {
  validate(pen);
  if (pen.family != PenaltyFamily::Mcp)
    throw config_error("eta0_auto_mcp: not a MCP penalty");
  const double lam = pen.lambda_user;
  const double budget = pen.theta * lam * lam / 2.0;
  const auto [beta, eta_tilde] = decompose(eta, budget);

  Eta0Choice out;
  out.beta = beta;
  out.eta_tilde = eta_tilde;
  const double z = z_mcp(pen, eta_tilde);
  out.eta0 = beta * budget + std::max(z / 2.0, eta_tilde - z / 2.0);
  out.denom_guarantee = z / 2.0;
  return out;
}

}  // namespace lcpp
