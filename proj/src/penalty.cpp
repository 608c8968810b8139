#include "lcpp/penalty.hpp"

#include <cmath>
#include <string>

#include "lcpp/parallel.hpp"

namespace lcpp {

namespace {

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

bool pos_finite(double x) { return std::isfinite(x) && x > 0.0; }

// Piece boundaries use the closed interval of the inner piece; both pieces
// agree there by continuity.
double h_value_impl(const PenaltySpec& spec, double x) {
  const double a = std::abs(x);
  const double th = spec.theta;
  switch (spec.family) {
    case PenaltyFamily::Mcp: {
      const double lam = spec.lambda_user;
      if (a <= th * lam) return x * x / (2.0 * th);
      return lam * a - th * lam * lam / 2.0;
    }
    case PenaltyFamily::Scad: {
      const double lam = spec.lambda_user;
      if (a <= lam) return 0.0;
      if (a <= th * lam) return (a - lam) * (a - lam) / (2.0 * (th - 1.0));
      return lam * a - (th + 1.0) * lam * lam / 2.0;
    }
    case PenaltyFamily::Exp: {
      const double lam = spec.lambda_user;
      return lam * a + std::expm1(-lam * a);
    }
    case PenaltyFamily::Log: {
      const double lam = th / std::log1p(th);
      return lam * a - std::log1p(th * a) / std::log1p(th);
    }
    case PenaltyFamily::LpFrac: {
      const double q = 1.0 / th;
      const double lam = q * std::pow(spec.eps, q - 1.0);
      // shifted by eps^(1/theta) so that h(0) = 0
      return lam * a - (std::pow(a + spec.eps, q) - std::pow(spec.eps, q));
    }
    case PenaltyFamily::LpNeg: {
      const double lam = -spec.p * th;
      return lam * a + std::expm1(spec.p * std::log1p(th * a));
    }
  }
  return 0.0;
}

double h_grad_impl(const PenaltySpec& spec, double x) {
  const double a = std::abs(x);
  const double s = sgn(x);
  const double th = spec.theta;
  switch (spec.family) {
    case PenaltyFamily::Mcp: {
      const double lam = spec.lambda_user;
      if (a <= th * lam) return x / th;
      return s * lam;
    }
    case PenaltyFamily::Scad: {
      const double lam = spec.lambda_user;
      if (a <= lam) return 0.0;
      if (a <= th * lam) return s * (a - lam) / (th - 1.0);
      return s * lam;
    }
    case PenaltyFamily::Exp: {
      const double lam = spec.lambda_user;
      return -s * lam * std::expm1(-lam * a);
    }
    case PenaltyFamily::Log: {
      const double lam = th / std::log1p(th);
      return s * lam * th * a / (1.0 + th * a);
    }
    case PenaltyFamily::LpFrac: {
      const double q = 1.0 / th;
      const double lam = q * std::pow(spec.eps, q - 1.0);
      return s * (lam - q * std::pow(a + spec.eps, q - 1.0));
    }
    case PenaltyFamily::LpNeg: {
      const double lam = -spec.p * th;
      return s * lam * (-std::expm1((spec.p - 1.0) * std::log1p(th * a)));
    }
  }
  return 0.0;
}

double g_scalar_impl(const PenaltySpec& spec, double x) {
  const double a = std::abs(x);
  const double th = spec.theta;
  switch (spec.family) {
    case PenaltyFamily::Mcp: {
      const double lam = spec.lambda_user;
      if (a <= th * lam) return lam * a - x * x / (2.0 * th);
      return lam * lam * th / 2.0;
    }
    case PenaltyFamily::Scad: {
      const double lam = spec.lambda_user;
      if (a <= lam) return lam * a;
      if (a <= th * lam) return lam * a - (a - lam) * (a - lam) / (2.0 * (th - 1.0));
      return lam * lam * (th + 1.0) / 2.0;
    }
    case PenaltyFamily::Exp:
      return -std::expm1(-spec.lambda_user * a);
    case PenaltyFamily::Log:
      return std::log1p(th * a) / std::log1p(th);
    case PenaltyFamily::LpFrac: {
      const double q = 1.0 / th;
      return std::pow(a + spec.eps, q) - std::pow(spec.eps, q);
    }
    case PenaltyFamily::LpNeg:
      return -std::expm1(spec.p * std::log1p(th * a));
  }
  return 0.0;
}

}  // namespace

void validate(const PenaltySpec& spec) {
  switch (spec.family) {
    case PenaltyFamily::Mcp:
      if (!pos_finite(spec.lambda_user) || !pos_finite(spec.theta))
        throw config_error("mcp requires lambda > 0 and theta > 0");
      return;
    case PenaltyFamily::Scad:
      if (!pos_finite(spec.lambda_user) || !(std::isfinite(spec.theta) && spec.theta > 1.0))
        throw config_error("scad requires lambda > 0 and theta > 1");
      return;
    case PenaltyFamily::Exp:
      if (!pos_finite(spec.lambda_user))
        throw config_error("exp requires lambda > 0");
      return;
    case PenaltyFamily::Log:
      if (!pos_finite(spec.theta))
        throw config_error("log requires theta > 0");
      return;
    case PenaltyFamily::LpFrac:
      // exponent 1/theta must lie in (0, 1) for the smooth part to be convex
      if (!(std::isfinite(spec.theta) && spec.theta > 1.0) || !pos_finite(spec.eps))
        throw config_error("lp-frac requires theta > 1 (exponent 1/theta in (0,1)) and eps > 0");
      return;
    case PenaltyFamily::LpNeg:
      if (!(std::isfinite(spec.p) && spec.p < 0.0) || !pos_finite(spec.theta))
        throw config_error("lp-neg requires p < 0 and theta > 0");
      return;
  }
  throw config_error("unknown penalty family");
}

double lambda_eff(const PenaltySpec& spec) {
  switch (spec.family) {
    case PenaltyFamily::Mcp:
    case PenaltyFamily::Scad:
    case PenaltyFamily::Exp:
      return spec.lambda_user;
    case PenaltyFamily::Log:
      return spec.theta / std::log1p(spec.theta);
    case PenaltyFamily::LpFrac: {
      const double q = 1.0 / spec.theta;
      return q * std::pow(spec.eps, q - 1.0);
    }
    case PenaltyFamily::LpNeg:
      return -spec.p * spec.theta;
  }
  return 0.0;
}

PenaltyConstants constants(const PenaltySpec& spec) {
  validate(spec);
  PenaltyConstants c;
  c.lambda_eff = lambda_eff(spec);
  const double lam = c.lambda_eff;
  const double th = spec.theta;
  switch (spec.family) {
    case PenaltyFamily::Mcp:
      c.lip_h = 1.0 / th;
      c.saturation = lam * lam * th / 2.0;
      break;
    case PenaltyFamily::Scad:
      c.lip_h = 1.0 / (th - 1.0);
      c.saturation = lam * lam * (th + 1.0) / 2.0;
      break;
    case PenaltyFamily::Exp:
      // h'' = lam^2 exp(-lam|x|), maximal at the origin
      c.lip_h = lam * lam;
      break;
    case PenaltyFamily::Log:
      // h'' = lam*th/(1+th|x|)^2, maximal at the origin
      c.lip_h = th * th / std::log1p(th);
      break;
    case PenaltyFamily::LpFrac: {
      const double q = 1.0 / th;
      c.lip_h = q * (1.0 - q) * std::pow(spec.eps, q - 2.0);
      break;
    }
    case PenaltyFamily::LpNeg:
      c.lip_h = spec.p * (spec.p - 1.0) * th * th;
      break;
  }
  return c;
}

double h_value(const PenaltySpec& spec, double x) {
  validate(spec);
  return h_value_impl(spec, x);
}

double h_grad(const PenaltySpec& spec, double x) {
  validate(spec);
  return h_grad_impl(spec, x);
}

double g_scalar(const PenaltySpec& spec, double x) {
  validate(spec);
  return g_scalar_impl(spec, x);
}

double g_value(const PenaltySpec& spec, std::span<const double> x) {
  validate(spec);
  return detail::blocked_sum(x.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += g_scalar_impl(spec, x[i]);
    return s;
  });
}

MajorantData majorant_data(const PenaltySpec& spec, std::span<const double> anchor) {
  validate(spec);
  MajorantData m;
  m.grad_h.resize(anchor.size());
  const auto n = anchor.size();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) \
    if (parallel_enabled() && n >= detail::kParallelCutoff)
#endif
  for (long i = 0; i < static_cast<long>(n); ++i)
    m.grad_h[static_cast<std::size_t>(i)] =
        h_grad_impl(spec, anchor[static_cast<std::size_t>(i)]);
  m.h_sum = detail::blocked_sum(n, [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += h_value_impl(spec, anchor[i]);
    return s;
  });
  return m;
}

double majorant_value(const PenaltySpec& spec, const MajorantData& m,
                      std::span<const double> anchor, std::span<const double> x) {
  const double lam = lambda_eff(spec);
  const double s = detail::blocked_sum(x.size(), [&](std::size_t lo, std::size_t hi) {
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
      acc += lam * std::abs(x[i]) - m.grad_h[i] * (x[i] - anchor[i]);
    return acc;
  });
  return s - m.h_sum;
}

PenaltyFamily family_from_name(std::string_view name) {
  if (name == "mcp") return PenaltyFamily::Mcp;
  if (name == "scad") return PenaltyFamily::Scad;
  if (name == "exp") return PenaltyFamily::Exp;
  if (name == "log") return PenaltyFamily::Log;
  if (name == "lp-frac") return PenaltyFamily::LpFrac;
  if (name == "lp-neg") return PenaltyFamily::LpNeg;
  throw config_error("unknown penalty family: " + std::string(name));
}

std::string_view family_name(PenaltyFamily family) {
  switch (family) {
    case PenaltyFamily::Mcp: return "mcp";
    case PenaltyFamily::Scad: return "scad";
    case PenaltyFamily::Exp: return "exp";
    case PenaltyFamily::Log: return "log";
    case PenaltyFamily::LpFrac: return "lp-frac";
    case PenaltyFamily::LpNeg: return "lp-neg";
  }
  return "?";
}

PenaltySpec make_mcp(double lambda, double theta) {
  PenaltySpec s{PenaltyFamily::Mcp, theta, lambda, 0.0, 0.0};
  validate(s);
  return s;
}

PenaltySpec make_scad(double lambda, double theta) {
  PenaltySpec s{PenaltyFamily::Scad, theta, lambda, 0.0, 0.0};
  validate(s);
  return s;
}

PenaltySpec make_exp(double lambda) {
  PenaltySpec s{PenaltyFamily::Exp, 0.0, lambda, 0.0, 0.0};
  validate(s);
  return s;
}

PenaltySpec make_log(double theta) {
  PenaltySpec s{PenaltyFamily::Log, theta, 0.0, 0.0, 0.0};
  validate(s);
  return s;
}

PenaltySpec make_lp_frac(double theta, double eps) {
  PenaltySpec s{PenaltyFamily::LpFrac, theta, 0.0, 1.0 / theta, eps};
  validate(s);
  return s;
}

PenaltySpec make_lp_neg(double p, double theta) {
  PenaltySpec s{PenaltyFamily::LpNeg, theta, 0.0, p, 0.0};
  validate(s);
  return s;
}

}  // namespace lcpp
