#include <doctest.h>

#include <cmath>
#include <random>

#include "lcpp/penalty.hpp"
#include "oracles.hpp"

using namespace lcpp;

namespace {

std::vector<PenaltySpec> all_families() {
  return {make_mcp(2.0, 0.25),    make_scad(1.0, 5.0), make_exp(1.5),
          make_log(4.0),          make_lp_frac(2.0, 0.1), make_lp_neg(-1.0, 2.0)};
}

// piece boundaries in |x|, per family
std::vector<double> boundaries(const PenaltySpec& s) {
  switch (s.family) {
    case PenaltyFamily::Mcp: return {s.theta * s.lambda_user};
    case PenaltyFamily::Scad: return {s.lambda_user, s.theta * s.lambda_user};
    default: return {};
  }
}

}  // namespace

TEST_CASE("penalty basics at the origin") {
  for (const auto& s : all_families()) {
    CAPTURE(family_name(s.family));
    CHECK(h_value(s, 0.0) == 0.0);
    CHECK(h_grad(s, 0.0) == 0.0);
    CHECK(g_scalar(s, 0.0) == 0.0);
    const std::vector<double> zero(7, 0.0);
    CHECK(g_value(s, zero) == 0.0);
  }
}

TEST_CASE("mcp closed forms") {
  const auto s = make_mcp(2.0, 0.25);
  CHECK(h_value(s, 0.0) == 0.0);
  // breakpoint |x| = theta*lambda = 0.5: both pieces give 0.5
  CHECK(h_value(s, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
  const double inner = 0.5 * 0.5 / (2.0 * 0.25);
  const double outer = 2.0 * 0.5 - 0.25 * 4.0 / 2.0;
  CHECK(inner == doctest::Approx(outer).epsilon(1e-15));

  CHECK(h_grad(s, 0.25) == doctest::Approx(1.0));
  CHECK(h_grad(s, 0.5) == doctest::Approx(2.0));
  CHECK(h_grad(s, 7.3) == doctest::Approx(2.0));
  CHECK(h_grad(s, -7.3) == doctest::Approx(-2.0));

  const std::vector<double> x{0.5, 0.5};
  CHECK(g_value(s, x) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("scad closed forms") {
  const auto s = make_scad(1.0, 5.0);
  CHECK(h_value(s, 0.5) == 0.0);  // inner flat piece
  CHECK(h_grad(s, 0.5) == 0.0);
  CHECK(h_value(s, 2.0) == doctest::Approx(1.0 / 8.0));
  // one saturated coordinate: g = lambda^2 (theta+1)/2 = 3
  std::vector<double> x{5.0, 0.0, 0.0};
  CHECK(g_value(s, x) == 3.0);
  x[0] = 11.7;
  CHECK(g_value(s, x) == 3.0);
}

TEST_CASE("saturation constants are returned exactly") {
  const auto mcp = make_mcp(2.0, 0.25);
  const auto scad = make_scad(1.0, 5.0);
  const auto cm = constants(mcp);
  const auto cs = constants(scad);
  REQUIRE(cm.saturation.has_value());
  REQUIRE(cs.saturation.has_value());
  CHECK(*cm.saturation == 2.0 * 2.0 * 0.25 / 2.0);
  CHECK(*cs.saturation == 1.0 * 1.0 * 6.0 / 2.0);
  for (double t : {1.0, 1.5, 13.0}) {
    const std::vector<double> xm{mcp.theta * mcp.lambda_user * t};
    const std::vector<double> xs{scad.theta * scad.lambda_user * t};
    CHECK(g_value(mcp, xm) == *cm.saturation);
    CHECK(g_value(scad, xs) == *cs.saturation);
  }
}

TEST_CASE("derived constants per family") {
  CHECK(constants(make_mcp(2.0, 0.25)).lip_h == doctest::Approx(4.0));
  CHECK(constants(make_scad(1.0, 5.0)).lip_h == doctest::Approx(0.25));
  CHECK(lambda_eff(make_log(4.0)) == doctest::Approx(4.0 / std::log(5.0)));
  CHECK(lambda_eff(make_lp_frac(2.0, 0.1)) ==
        doctest::Approx(std::pow(0.1, 0.5 - 1.0) / 2.0));
  CHECK(lambda_eff(make_lp_neg(-1.5, 2.0)) == doctest::Approx(3.0));
  CHECK(!constants(make_exp(1.5)).saturation.has_value());
  CHECK(!constants(make_log(4.0)).saturation.has_value());
}

TEST_CASE("gradient bounded by lambda on a dense grid") {
  std::mt19937_64 rng(7);
  for (const auto& s : all_families()) {
    CAPTURE(family_name(s.family));
    const double lam = lambda_eff(s);
    std::vector<double> grid;
    for (int i = -1000; i <= 1000; ++i) grid.push_back(i * 0.013);
    for (double b : boundaries(s)) {
      grid.push_back(b);
      grid.push_back(-b);
      if (s.lambda_user > 0) {
        grid.push_back(s.lambda_user);
        grid.push_back(-s.lambda_user);
      }
    }
    for (double x : grid) CHECK(std::abs(h_grad(s, x)) <= lam + 1e-12);
  }
}

TEST_CASE("h is continuous across piece boundaries") {
  for (const auto& s : all_families()) {
    for (double b : boundaries(s)) {
      for (double sign : {1.0, -1.0}) {
        const double lo = std::nextafter(sign * b, -1e30);
        const double hi = std::nextafter(sign * b, 1e30);
        CHECK(std::abs(h_value(s, lo) - h_value(s, hi)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("h gradient matches central differences away from boundaries") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-4.0, 4.0);
  for (const auto& s : all_families()) {
    CAPTURE(family_name(s.family));
    const auto bs = boundaries(s);
    int done = 0;
    while (done < 60) {
      const double x = U(rng);
      if (std::abs(x) < 0.1) continue;
      bool near = false;
      for (double b : bs) near = near || std::abs(std::abs(x) - b) < 0.05;
      if (near) continue;
      const double h = 1e-6 * std::max(1.0, std::abs(x));
      const double fd =
          oracle::central_diff([&](double t) { return h_value(s, t); }, x, h);
      const double an = h_grad(s, x);
      CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
      ++done;
    }
  }
}

TEST_CASE("h is convex: gradient nondecreasing") {
  for (const auto& s : all_families()) {
    CAPTURE(family_name(s.family));
    double prev = h_grad(s, -30.0);
    for (int i = -2999; i <= 3000; ++i) {
      const double cur = h_grad(s, i * 0.01);
      CHECK(cur >= prev - 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("majorant touches at the anchor and dominates everywhere") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(-5.0, 5.0);
  for (const auto& s : all_families()) {
    CAPTURE(family_name(s.family));
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<double> a(5), x(5);
      for (auto& t : a) t = U(rng);
      for (auto& t : x) t = U(rng);
      const auto m = majorant_data(s, a);
      const double at_anchor = majorant_value(s, m, a, a);
      CHECK(std::abs(at_anchor - g_value(s, a)) <= 1e-12);
      CHECK(majorant_value(s, m, a, x) - g_value(s, x) >= -1e-10);
    }
  }
}

TEST_CASE("majorant at the origin is the plain l1 penalty") {
  const auto s = make_mcp(2.0, 0.25);
  const std::vector<double> zero(4, 0.0);
  const auto m = majorant_data(s, zero);
  CHECK(m.h_sum == 0.0);
  for (double gh : m.grad_h) CHECK(gh == 0.0);
  const std::vector<double> x{1.0, -2.0, 0.5, 0.0};
  CHECK(majorant_value(s, m, zero, x) == doctest::Approx(2.0 * 3.5));
}

TEST_CASE("majorant example: mcp anchored at 0.25") {
  const auto s = make_mcp(2.0, 0.25);
  const std::vector<double> a{0.25};
  const auto m = majorant_data(s, a);
  CHECK(m.grad_h[0] == doctest::Approx(1.0));
  CHECK(m.h_sum == doctest::Approx(0.125));
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(make_mcp(0.0, 0.25), config_error);
  CHECK_THROWS_AS(make_mcp(2.0, -1.0), config_error);
  CHECK_THROWS_AS(make_scad(1.0, 1.0), config_error);
  CHECK_THROWS_AS(make_exp(-2.0), config_error);
  CHECK_THROWS_AS(make_log(0.0), config_error);
  CHECK_THROWS_AS(make_lp_frac(1.0, 0.1), config_error);  // needs exponent < 1
  CHECK_THROWS_AS(make_lp_frac(2.0, 0.0), config_error);
  CHECK_THROWS_AS(make_lp_neg(0.5, 2.0), config_error);
  CHECK_THROWS_AS(h_value(PenaltySpec{PenaltyFamily::Mcp, -1.0, 2.0, 0, 0}, 1.0),
                  config_error);
}

TEST_CASE("family names round-trip") {
  for (auto f : {PenaltyFamily::Mcp, PenaltyFamily::Scad, PenaltyFamily::Exp,
                 PenaltyFamily::Log, PenaltyFamily::LpFrac, PenaltyFamily::LpNeg})
    CHECK(family_from_name(family_name(f)) == f);
  CHECK_THROWS_AS(family_from_name("capped-l1"), config_error);
}
