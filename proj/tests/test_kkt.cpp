#include <doctest.h>

#include <cmath>
#include <random>

#include "lcpp/data_io.hpp"
#include "lcpp/kkt.hpp"
#include "lcpp/solver.hpp"
#include "oracles.hpp"

using namespace lcpp;

TEST_CASE("stationarity: unconstrained stationary point") {
  const auto pen = make_mcp(3.0, 1.0);
  const std::vector<double> gp{0.0, 0.0};
  const std::vector<double> x{0.5, -0.2};
  CHECK(stationarity_residual(gp, pen, x, 0.0) == 0.0);
}

TEST_CASE("stationarity: interval clamp at zero coordinates") {
  const auto pen = make_mcp(3.0, 1.0);  // lambda = 3
  const std::vector<double> x{0.0};
  CHECK(stationarity_residual(std::vector<double>{2.0}, pen, x, 1.0) == 0.0);
  CHECK(stationarity_residual(std::vector<double>{5.0}, pen, x, 1.0) ==
        doctest::Approx(2.0));
  CHECK(stationarity_residual(std::vector<double>{-5.0}, pen, x, 1.0) ==
        doctest::Approx(2.0));
}

TEST_CASE("stationarity equals a brute-force subgradient search") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> U(-2.0, 2.0), Y(0.0, 3.0);
  const auto pen = make_scad(1.0, 5.0);
  const double lam = lambda_eff(pen);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> x(4), gp(4);
    for (auto& t : x) t = (rng() & 1) ? U(rng) : 0.0;
    for (auto& t : gp) t = U(rng);
    const double y = Y(rng);

    // per-coordinate minimization over the l1 subgradient by fine scan; the
    // scan overshoots the true minimum by at most slope * grid spacing
    const double grid = 2.0 / 4000.0;
    double best_sq = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      double lo = -1.0, hi = 1.0;
      if (x[i] != 0.0) lo = hi = (x[i] > 0.0 ? 1.0 : -1.0);
      double best = 1e300;
      for (int s = 0; s <= 4000; ++s) {
        const double sub = lo + (hi - lo) * s / 4000.0;
        const double r = gp[i] + y * (lam * sub - h_grad(pen, x[i]));
        best = std::min(best, std::abs(r));
        if (lo == hi) break;
      }
      best_sq += best * best;
    }
    const double scan = std::sqrt(best_sq);
    const double prod = stationarity_residual(gp, pen, x, y);
    CHECK(prod <= scan + 1e-9);
    CHECK(scan <= prod + 2.0 * y * lam * grid + 1e-9);
  }
}

TEST_CASE("report: inactive constraint with zero dual") {
  SyntheticSpec spec;
  spec.n = 20;
  spec.d = 4;
  spec.k_true = 2;
  spec.classification = true;
  spec.noise_sigma = 0.2;
  spec.seed = 3;
  const auto data = generate(spec).data;
  const auto obj = make_logistic(data);
  const auto pen = make_mcp(2.0, 0.25);
  const std::vector<double> x{0.1, 0.0, -0.05, 0.0};
  const auto rep = kkt_report(obj, pen, x, 0.0, 10.0);
  CHECK(rep.cs_resid == 0.0);
  CHECK(rep.feas_gap == 0.0);
  CHECK(rep.dual == 0.0);
}

TEST_CASE("report matches an exhaustive 2-D grid oracle") {
  SyntheticSpec spec;
  spec.n = 40;
  spec.d = 2;
  spec.k_true = 2;
  spec.classification = false;
  spec.noise_sigma = 0.05;
  spec.seed = 9;
  const auto gen = generate(spec);
  const auto obj = make_squared(gen.data);
  const auto pen = make_mcp(1.0, 0.5);
  const double eta = 0.3;  // far below g(x_true): the constraint binds

  const double step = 2e-3;
  double best = 1e300;
  double bx = 0.0, by = 0.0;
  for (double a = -1.5; a <= 1.5; a += step) {
    for (double b = -1.5; b <= 1.5; b += step) {
      const std::vector<double> x{a, b};
      if (g_value(pen, x) > eta) continue;
      const double v = value(obj, x);
      if (v < best) {
        best = v;
        bx = a;
        by = b;
      }
    }
  }
  const std::vector<double> xstar{bx, by};
  // multiplier from the stationarity of a nonzero coordinate
  const auto gp = grad(obj, xstar);
  const double lam = lambda_eff(pen);
  double y = 0.0;
  for (int i = 0; i < 2; ++i) {
    if (xstar[i] != 0.0) {
      const double sgn = xstar[i] > 0.0 ? 1.0 : -1.0;
      const double denom = lam * sgn - h_grad(pen, xstar[i]);
      if (std::abs(denom) > 1e-9) y = std::max(y, -gp[i] / denom);
    }
  }
  const auto rep = kkt_report(obj, pen, xstar, y, eta);
  CHECK(rep.feas_gap == 0.0);
  CHECK(rep.stat_resid <= 30.0 * step);  // grid-resolution scale
  CHECK(rep.cs_resid <= 30.0 * step);
}

TEST_CASE("stationarity residual shrinks as the outer budget grows") {
  SyntheticSpec spec;
  spec.n = 60;
  spec.d = 20;
  spec.k_true = 4;
  spec.classification = true;
  spec.noise_sigma = 0.2;
  spec.seed = 13;
  const auto data = generate(spec).data;
  const auto obj = make_logistic(data);
  const auto pen = make_mcp(2.0, 0.25);

  auto mean_sq_resid = [&](int K) {
    LcppConfig cfg;
    cfg.eta = 1.0;
    cfg.eta0 = 0.5;
    cfg.gamma = 1e-4;
    cfg.outer_iters = K;
    cfg.bb.max_iters = 10;
    cfg.bb.tol = 1e-5;
    const auto res = run(cfg, obj, pen);
    double s = 0.0;
    int n = 0;
    for (const auto& r : res.trace) {
      if (r.k >= (K + 1) / 2) {
        s += r.stat_resid * r.stat_resid;
        ++n;
      }
    }
    return s / n;
  };
  // a tenfold budget brings the residual down by roughly one order
  const double ratio = std::sqrt(mean_sq_resid(150) / mean_sq_resid(1500));
  CHECK(ratio >= 3.0);
  CHECK(ratio <= 33.0);
}
