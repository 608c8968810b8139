#include <doctest.h>

#include <cmath>
#include <random>

#include "lcpp/data_io.hpp"
#include "lcpp/objective.hpp"
#include "lcpp/parallel.hpp"
#include "lcpp/reference.hpp"
#include "oracles.hpp"

using namespace lcpp;

namespace {

Dataset dense_dataset(std::size_t n, std::size_t d, bool classification,
                      std::uint64_t seed) {
  SyntheticSpec spec;
  spec.n = n;
  spec.d = d;
  spec.k_true = std::min<std::size_t>(3, d);
  spec.noise_sigma = classification ? 0.3 : 0.1;
  spec.classification = classification;
  spec.seed = seed;
  return generate(spec).data;
}

}  // namespace

TEST_CASE("logistic value at the origin is log 2") {
  const auto data = dense_dataset(30, 6, true, 1);
  const auto obj = make_logistic(data);
  const std::vector<double> x(6, 0.0);
  CHECK(value(obj, x) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("squared value at the origin is the mean label square") {
  const auto data = dense_dataset(30, 6, false, 2);
  const auto obj = make_squared(data);
  const std::vector<double> x(6, 0.0);
  double expect = 0.0;
  for (double b : data.labels) expect += b * b;
  expect /= static_cast<double>(data.rows);
  CHECK(value(obj, x) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("two-sample logistic hand evaluation") {
  Dataset data;
  data.rows = 2;
  data.features = 2;
  data.indptr = {0, 1, 2};
  data.indices = {0, 1};
  data.values = {1.0, 1.0};
  data.labels = {1.0, -1.0};
  data.classification = true;
  const auto obj = make_logistic(data);
  const std::vector<double> x{1.0, 1.0};
  const double expect =
      0.5 * (std::log1p(std::exp(-1.0)) + std::log1p(std::exp(1.0)));
  CHECK(value(obj, x) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("gradients at the origin have closed forms") {
  const auto data = dense_dataset(25, 5, true, 3);
  const std::vector<double> x(5, 0.0);

  // logistic: -(1/(2n)) A^T b
  const auto obj = make_logistic(data);
  const auto g = grad(obj, x);
  std::vector<double> atb(5, 0.0);
  for (std::size_t i = 0; i < data.rows; ++i)
    for (std::size_t k = data.indptr[i]; k < data.indptr[i + 1]; ++k)
      atb[data.indices[k]] += data.labels[i] * data.values[k];
  for (std::size_t j = 0; j < 5; ++j)
    CHECK(g[j] == doctest::Approx(-atb[j] / (2.0 * data.rows)).epsilon(1e-12));

  // squared: -(2/n) A^T b
  const auto rdata = dense_dataset(25, 5, false, 4);
  const auto robj = make_squared(rdata);
  const auto rg = grad(robj, x);
  std::vector<double> ratb(5, 0.0);
  for (std::size_t i = 0; i < rdata.rows; ++i)
    for (std::size_t k = rdata.indptr[i]; k < rdata.indptr[i + 1]; ++k)
      ratb[rdata.indices[k]] += rdata.labels[i] * rdata.values[k];
  for (std::size_t j = 0; j < 5; ++j)
    CHECK(rg[j] == doctest::Approx(-2.0 * ratb[j] / rdata.rows).epsilon(1e-12));
}

TEST_CASE("gradients match finite differences") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (bool classification : {true, false}) {
    const auto data = dense_dataset(20, 5, classification, 6);
    const auto obj = classification ? make_logistic(data) : make_squared(data);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> x(5);
      for (auto& t : x) t = U(rng);
      const auto g = grad(obj, x);
      for (std::size_t j = 0; j < 5; ++j) {
        const double fd = oracle::central_diff(
            [&](double t) {
              auto xx = x;
              xx[j] = t;
              return value(obj, xx);
            },
            x[j], 1e-6);
        CHECK(std::abs(fd - g[j]) <= 1e-6 * std::max(1.0, std::abs(g[j])));
      }
    }
  }
}

TEST_CASE("stochastic oracle is exactly unbiased over singletons") {
  const auto data = dense_dataset(17, 4, true, 7);
  const auto obj = make_logistic(data);
  std::vector<double> x{0.3, -0.2, 0.8, 0.1};
  const auto g = grad(obj, x);

  std::vector<double> mean(4, 0.0), gi(4);
  for (std::size_t i = 0; i < data.rows; ++i) {
    const std::size_t batch[] = {i};
    stoch_grad(obj, x, batch, gi);
    for (std::size_t j = 0; j < 4; ++j) mean[j] += gi[j];
  }
  for (auto& t : mean) t /= static_cast<double>(data.rows);
  for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(mean[j] - g[j]) <= 1e-12);
}

TEST_CASE("full batch reproduces the exact gradient") {
  const auto data = dense_dataset(40, 6, false, 8);
  const auto obj = make_squared(data);
  std::vector<double> x{0.1, 0.2, -0.4, 0.0, 1.0, -0.3};
  std::vector<std::size_t> batch(data.rows);
  for (std::size_t i = 0; i < data.rows; ++i) batch[i] = i;
  std::vector<double> gb(6);
  stoch_grad(obj, x, batch, gb);
  const auto g = grad(obj, x);
  for (std::size_t j = 0; j < 6; ++j) CHECK(gb[j] == g[j]);
}

TEST_CASE("batch sampling is reproducible for a fixed seed") {
  std::mt19937_64 a(99), b(99);
  CHECK(sample_batch(a, 50, 10) == sample_batch(b, 50, 10));
}

TEST_CASE("convexity witness for the built-in losses") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (bool classification : {true, false}) {
    const auto data = dense_dataset(20, 4, classification, 10);
    const auto obj = classification ? make_logistic(data) : make_squared(data);
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<double> x(4), y(4);
      for (auto& t : x) t = U(rng);
      for (auto& t : y) t = U(rng);
      const auto gy = grad(obj, y);
      double lin = value(obj, y);
      for (std::size_t j = 0; j < 4; ++j) lin += gy[j] * (x[j] - y[j]);
      CHECK(value(obj, x) >= lin - 1e-10);
    }
  }
}

TEST_CASE("logistic oracle survives large inputs") {
  const auto data = dense_dataset(15, 4, true, 11);
  const auto obj = make_logistic(data);
  std::vector<double> x{1e3, -1e3, 1e3, -1e3};
  CHECK(std::isfinite(value(obj, x)));
  for (double gj : grad(obj, x)) CHECK(std::isfinite(gj));
}

TEST_CASE("production kernels agree with the serial reference") {
  for (bool classification : {true, false}) {
    const auto data = dense_dataset(64, 9, classification, 12);
    const auto obj = classification ? make_logistic(data) : make_squared(data);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<double> x(9);
    for (auto& t : x) t = U(rng);
    CHECK(value(obj, x) ==
          doctest::Approx(reference::objective_value(obj, x)).epsilon(1e-12));
    const auto g = grad(obj, x);
    const auto gr = reference::objective_grad(obj, x);
    for (std::size_t j = 0; j < 9; ++j)
      CHECK(g[j] == doctest::Approx(gr[j]).epsilon(1e-12));
  }
}

TEST_CASE("results do not depend on the parallel switch") {
  const auto data = dense_dataset(4096, 20, true, 14);
  const auto obj = make_logistic(data);
  std::vector<double> x(20, 0.05);
  set_parallel(false);
  const double v_serial = value(obj, x);
  const auto g_serial = grad(obj, x);
  set_parallel(true);
  const double v_par = value(obj, x);
  const auto g_par = grad(obj, x);
  CHECK(v_serial == v_par);
  CHECK(g_serial == g_par);
}

TEST_CASE("curvature metadata uses the documented bounds") {
  const auto cdata = dense_dataset(30, 6, true, 20);
  const auto lobj = make_logistic(cdata);
  CHECK(lobj.mu == 0.0);
  CHECK(lobj.smooth_L ==
        doctest::Approx(cdata.frob_sq() / (4.0 * cdata.rows)).epsilon(1e-12));
  const auto rdata = dense_dataset(30, 6, false, 21);
  const auto sobj = make_squared(rdata);
  CHECK(sobj.smooth_L ==
        doctest::Approx(2.0 * rdata.frob_sq() / rdata.rows).epsilon(1e-12));
  CHECK(sobj.nonsmooth_M == 0.0);
}

TEST_CASE("dataset validation rejects malformed inputs") {
  Dataset d;
  d.rows = 2;
  d.features = 2;
  d.indptr = {0, 1, 2};
  d.indices = {0, 1};
  d.values = {1.0, 1.0};
  d.labels = {1.0};  // wrong length
  CHECK_THROWS_AS(d.validate(), config_error);
  d.labels = {1.0, 3.0};
  d.classification = true;
  CHECK_THROWS_AS(d.validate(), config_error);
  d.labels = {1.0, -1.0};
  d.validate();
  d.indices = {0, 7};
  CHECK_THROWS_AS(d.validate(), config_error);
}

TEST_CASE("stoch_grad rejects empty batches and bad indices") {
  const auto data = dense_dataset(10, 3, true, 15);
  const auto obj = make_logistic(data);
  std::vector<double> x(3, 0.0), out(3);
  CHECK_THROWS_AS(stoch_grad(obj, x, {}, out), config_error);
  const std::size_t bad[] = {11};
  CHECK_THROWS_AS(stoch_grad(obj, x, bad, out), config_error);
}
