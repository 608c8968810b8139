#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "lcpp/errors.hpp"

namespace lcpp {

// Row-sparse design matrix with one label per row.
struct Dataset {
  std::size_t rows = 0;
  std::size_t features = 0;
  std::vector<std::size_t> indptr;  // rows + 1 offsets into indices/values
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  std::vector<double> labels;
  bool classification = false;  // labels restricted to {-1, +1}

  void validate() const;
  double row_dot(std::size_t i, std::span<const double> x) const;
  double frob_sq() const;
  double max_row_norm() const;
};

enum class LossKind { Logistic, Squared, Custom };

// First-order oracle with curvature metadata. mu is the lower-curvature
// constant (psi(x) >= psi(y) + <psi'(y), x-y> - mu/2 ||x-y||^2), smooth_L an
// upper bound on the gradient Lipschitz constant, nonsmooth_M the nonsmooth
// slope, sigma a bound on the stochastic gradient noise. The constants of a
// Custom objective are taken on faith from the caller.
struct Objective {
  LossKind kind = LossKind::Custom;
  const Dataset* data = nullptr;
  double mu = 0.0;
  double smooth_L = 0.0;
  double nonsmooth_M = 0.0;
  double sigma = 0.0;
  std::size_t dim = 0;  // used when data is absent

  std::function<double(std::span<const double>)> value_fn;
  std::function<void(std::span<const double>, std::span<double>)> grad_fn;
  // optional noisy oracle for Custom objectives with sigma > 0
  std::function<void(std::span<const double>, std::mt19937_64&, std::span<double>)> noisy_grad_fn;

  std::size_t dimension() const { return data ? data->features : dim; }
};

// The objective keeps a pointer to the dataset; keep it alive and in place
// for the objective's lifetime.
Objective make_logistic(const Dataset& data);
Objective make_squared(const Dataset& data);
Objective make_custom(std::size_t dim,
                      std::function<double(std::span<const double>)> value_fn,
                      std::function<void(std::span<const double>, std::span<double>)> grad_fn,
                      double mu, double smooth_L, double nonsmooth_M = 0.0,
                      double sigma = 0.0);

// Mean loss over all samples. Sample sums run over fixed 2048-row blocks
// combined by a pairwise tree, so the result does not depend on the thread
// count.
double value(const Objective& obj, std::span<const double> x);

void grad(const Objective& obj, std::span<const double> x, std::span<double> out);
std::vector<double> grad(const Objective& obj, std::span<const double> x);

// Mean gradient over an explicit batch of sample indices (duplicates
// allowed). Averaging over all singleton batches reproduces grad exactly.
void stoch_grad(const Objective& obj, std::span<const double> x,
                std::span<const std::size_t> batch, std::span<double> out);

// Uniform sampling with replacement.
std::vector<std::size_t> sample_batch(std::mt19937_64& rng, std::size_t n,
                                      std::size_t batch);

}  // namespace lcpp
