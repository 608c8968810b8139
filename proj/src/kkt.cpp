#include "lcpp/kkt.hpp"

#include <cmath>

#include "lcpp/parallel.hpp"

namespace lcpp {

double stationarity_residual(std::span<const double> grad_psi, const PenaltySpec& pen,
                             std::span<const double> x, double y) {
  if (grad_psi.size() != x.size())
    throw config_error("stationarity_residual: dimension mismatch");
  if (y < 0.0) throw config_error("stationarity_residual: y must be nonnegative");
  validate(pen);
  const double lam = lambda_eff(pen);
  const double sum = detail::blocked_sum(x.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double hg = h_grad(pen, x[i]);
      double r;
      if (x[i] != 0.0) {
        const double sgn = x[i] > 0.0 ? 1.0 : -1.0;
        r = grad_psi[i] + y * (lam * sgn - hg);
      } else {
        const double z = std::abs(grad_psi[i] - y * hg);
        r = std::max(z - y * lam, 0.0);
      }
      s += r * r;
    }
    return s;
  });
  return std::sqrt(sum);
}

double stationarity_residual(const Objective& obj, const PenaltySpec& pen,
                             std::span<const double> x, double y) {
  const auto gp = grad(obj, x);
  return stationarity_residual(gp, pen, x, y);
}

KktReport kkt_report(const Objective& obj, const PenaltySpec& pen,
                     std::span<const double> x, double y, double eta) {
  KktReport rep;
  const double g = g_value(pen, x);
  rep.feas_gap = std::max(0.0, g - eta);
  rep.stat_resid = stationarity_residual(obj, pen, x, y);
  rep.cs_resid = std::abs(y * (g - eta));
  rep.dual = y;
  return rep;
}

}  // namespace lcpp
