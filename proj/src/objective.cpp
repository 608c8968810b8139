#include "lcpp/objective.hpp"

#include <algorithm>
#include <cmath>

#include "lcpp/parallel.hpp"

namespace lcpp {

namespace {

// accumulation blocks are a function of the data shape only, never of the
// thread count, so gradients are reproducible on any machine configuration
std::size_t grad_block_count(std::size_t n, std::size_t d) {
  std::size_t nb = std::max<std::size_t>(1, n / 1024);
  nb = std::min<std::size_t>(nb, 64);
  const std::size_t mem_cap = std::max<std::size_t>(1, (std::size_t{1} << 23) / std::max<std::size_t>(d, 1));
  return std::max<std::size_t>(1, std::min(nb, mem_cap));
}

double logistic_loss(double b, double m) {
  const double t = b * m;
  if (t >= 0.0) return std::log1p(std::exp(-t));
  return -t + std::log1p(std::exp(t));
}

// d/dm of the per-sample loss
double loss_coef(LossKind kind, double b, double m) {
  if (kind == LossKind::Logistic) return -b / (1.0 + std::exp(b * m));
  return 2.0 * (m - b);  // squared
}

void check_dim(const Objective& obj, std::span<const double> x) {
  if (x.size() != obj.dimension())
    throw config_error("objective: dimension mismatch");
}

// Accumulates the mean of coef_i * a_i over the given sample positions into
// out, using fixed blocks folded pairwise.
template <class RowAt>
void accumulate_rows(const Dataset& data, LossKind kind, std::span<const double> x,
                     std::size_t count, RowAt&& row_at, std::span<double> out) {
  const std::size_t d = data.features;
  const double inv = 1.0 / static_cast<double>(count);
  const std::size_t nb = grad_block_count(count, d);
  const std::size_t block = (count + nb - 1) / nb;

  std::vector<double> buf(nb * d, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel_enabled() && nb > 1)
#endif
  for (long lb = 0; lb < static_cast<long>(nb); ++lb) {
    const auto b = static_cast<std::size_t>(lb);
    double* part = buf.data() + b * d;
    const std::size_t lo = b * block;
    const std::size_t hi = std::min(count, lo + block);
    for (std::size_t pos = lo; pos < hi; ++pos) {
      const std::size_t i = row_at(pos);
      const double m = data.row_dot(i, x);
      const double c = loss_coef(kind, data.labels[i], m) * inv;
      for (std::size_t k = data.indptr[i]; k < data.indptr[i + 1]; ++k)
        part[data.indices[k]] += c * data.values[k];
    }
  }

  // pairwise fold of the block rows
  std::size_t nrows = nb;
  while (nrows > 1) {
    std::size_t w = 0;
    for (std::size_t i = 0; i + 1 < nrows; i += 2, ++w) {
      double* dst = buf.data() + w * d;
      const double* a = buf.data() + i * d;
      const double* b2 = buf.data() + (i + 1) * d;
      for (std::size_t j = 0; j < d; ++j) dst[j] = a[j] + b2[j];
    }
    if (nrows % 2 == 1) {
      double* dst = buf.data() + w * d;
      const double* a = buf.data() + (nrows - 1) * d;
      if (dst != a) std::copy(a, a + d, dst);
      ++w;
    }
    nrows = w;
  }
  std::copy(buf.begin(), buf.begin() + static_cast<long>(d), out.begin());
}

}  // namespace

void Dataset::validate() const {
  if (indptr.size() != rows + 1) throw config_error("dataset: bad indptr length");
  if (labels.size() != rows) throw config_error("dataset: label count != rows");
  if (!indptr.empty() && indptr.back() != values.size())
    throw config_error("dataset: indptr does not span values");
  if (indices.size() != values.size())
    throw config_error("dataset: indices/values length mismatch");
  for (std::size_t i = 0; i < rows; ++i)
    if (indptr[i] > indptr[i + 1]) throw config_error("dataset: indptr not monotone");
  for (auto j : indices)
    if (j >= features) throw config_error("dataset: column index out of range");
  for (double v : values)
    if (!std::isfinite(v)) throw config_error("dataset: non-finite value");
  for (double b : labels) {
    if (!std::isfinite(b)) throw config_error("dataset: non-finite label");
    if (classification && b != 1.0 && b != -1.0)
      throw config_error("dataset: classification labels must be +/-1");
  }
}

double Dataset::row_dot(std::size_t i, std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t k = indptr[i]; k < indptr[i + 1]; ++k) s += values[k] * x[indices[k]];
  return s;
}

double Dataset::frob_sq() const {
  return detail::blocked_sum(values.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t k = lo; k < hi; ++k) s += values[k] * values[k];
    return s;
  });
}

double Dataset::max_row_norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::size_t k = indptr[i]; k < indptr[i + 1]; ++k) s += values[k] * values[k];
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

Objective make_logistic(const Dataset& data) {
  data.validate();
  if (!data.classification)
    throw config_error("logistic loss needs +/-1 labels");
  Objective obj;
  obj.kind = LossKind::Logistic;
  obj.data = &data;
  obj.mu = 0.0;
  obj.smooth_L = data.frob_sq() / (4.0 * static_cast<double>(std::max<std::size_t>(data.rows, 1)));
  obj.nonsmooth_M = 0.0;
  // per-sample gradient norm is at most the row norm; crude but safe
  obj.sigma = 2.0 * data.max_row_norm();
  return obj;
}

Objective make_squared(const Dataset& data) {
  data.validate();
  Objective obj;
  obj.kind = LossKind::Squared;
  obj.data = &data;
  obj.mu = 0.0;
  obj.smooth_L = 2.0 * data.frob_sq() / static_cast<double>(std::max<std::size_t>(data.rows, 1));
  obj.nonsmooth_M = 0.0;
  double bmax = 0.0;
  for (double b : data.labels) bmax = std::max(bmax, std::abs(b));
  // noise bound near the origin; callers with tighter knowledge override it
  obj.sigma = 4.0 * bmax * data.max_row_norm();
  return obj;
}

Objective make_custom(std::size_t dim,
                      std::function<double(std::span<const double>)> value_fn,
                      std::function<void(std::span<const double>, std::span<double>)> grad_fn,
                      double mu, double smooth_L, double nonsmooth_M, double sigma) {
  Objective obj;
  obj.kind = LossKind::Custom;
  obj.dim = dim;
  obj.value_fn = std::move(value_fn);
  obj.grad_fn = std::move(grad_fn);
  obj.mu = mu;
  obj.smooth_L = smooth_L;
  obj.nonsmooth_M = nonsmooth_M;
  obj.sigma = sigma;
  return obj;
}

double value(const Objective& obj, std::span<const double> x) {
  check_dim(obj, x);
  if (obj.kind == LossKind::Custom) return obj.value_fn(x);
  const Dataset& data = *obj.data;
  const double sum = detail::blocked_sum(data.rows, [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double m = data.row_dot(i, x);
      if (obj.kind == LossKind::Logistic) {
        s += logistic_loss(data.labels[i], m);
      } else {
        const double r = data.labels[i] - m;
        s += r * r;
      }
    }
    return s;
  });
  return sum / static_cast<double>(std::max<std::size_t>(data.rows, 1));
}

void grad(const Objective& obj, std::span<const double> x, std::span<double> out) {
  check_dim(obj, x);
  if (out.size() != obj.dimension()) throw config_error("objective: bad gradient size");
  if (obj.kind == LossKind::Custom) {
    obj.grad_fn(x, out);
    return;
  }
  const Dataset& data = *obj.data;
  accumulate_rows(data, obj.kind, x, data.rows,
                  [](std::size_t pos) { return pos; }, out);
}

std::vector<double> grad(const Objective& obj, std::span<const double> x) {
  std::vector<double> out(obj.dimension());
  grad(obj, x, out);
  return out;
}

void stoch_grad(const Objective& obj, std::span<const double> x,
                std::span<const std::size_t> batch, std::span<double> out) {
  check_dim(obj, x);
  if (batch.empty()) throw config_error("stoch_grad: empty batch");
  if (obj.kind == LossKind::Custom)
    throw config_error("stoch_grad: custom objectives use noisy_grad_fn");
  const Dataset& data = *obj.data;
  for (auto i : batch)
    if (i >= data.rows) throw config_error("stoch_grad: batch index out of range");
  accumulate_rows(data, obj.kind, x, batch.size(),
                  [&](std::size_t pos) { return batch[pos]; }, out);
}

std::vector<std::size_t> sample_batch(std::mt19937_64& rng, std::size_t n,
                                      std::size_t batch) {
  if (n == 0) throw config_error("sample_batch: empty dataset");
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> out(batch);
  for (auto& i : out) i = pick(rng);
  return out;
}

}  // namespace lcpp
