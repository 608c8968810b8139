#pragma once

#include <string>

#include "lcpp/objective.hpp"
#include "lcpp/solver.hpp"

namespace lcpp {

// libsvm sparse text: "label idx:val idx:val ..." with 1-based ascending
// indices. The feature count is the largest index seen unless dim_override
// is larger.
Dataset load_libsvm(const std::string& path, std::size_t dim_override = 0);
void save_libsvm(const Dataset& data, const std::string& path);

// dense fallback: one "label,v1,...,vd" row per line
Dataset load_csv(const std::string& path);
void save_csv(const Dataset& data, const std::string& path);

enum class DesignKind { GaussianIID, CorrelatedAR };

struct SyntheticSpec {
  std::size_t n = 100;
  std::size_t d = 50;
  std::size_t k_true = 5;
  double noise_sigma = 0.0;
  DesignKind design = DesignKind::GaussianIID;
  double ar_rho = 0.5;
  bool classification = false;
  std::uint64_t seed = 0;
};

struct SyntheticData {
  Dataset data;
  std::vector<double> x_true;  // exactly k_true nonzero coordinates
};

SyntheticData generate(const SyntheticSpec& spec);

struct Solution {
  std::vector<double> x;
  double dual = 0.0;
};

void save_solution(const std::string& path, std::span<const double> x, double dual = 0.0);
Solution load_solution(const std::string& path);

void save_trace_csv(const std::string& path, std::span<const TraceRecord> trace);
std::vector<TraceRecord> load_trace_csv(const std::string& path);

}  // namespace lcpp
