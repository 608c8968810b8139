#pragma once

#include <span>

#include "lcpp/objective.hpp"
#include "lcpp/penalty.hpp"
#include "lcpp/projection.hpp"

// Plain single-threaded implementations of the hot kernels: straight loops,
// sort plus a binary segment search for the projection. They are the
// comparison baseline for the OpenMP code paths in tests and in the kernel
// benchmark.
namespace lcpp::reference {

double constraint_value(std::span<const double> x, std::span<const double> u);
double ell(std::span<const double> v, std::span<const double> u, double y);
ProjectionResult project(std::span<const double> v, std::span<const double> u, double tau);

double objective_value(const Objective& obj, std::span<const double> x);
std::vector<double> objective_grad(const Objective& obj, std::span<const double> x);

double g_value(const PenaltySpec& pen, std::span<const double> x);

}  // namespace lcpp::reference
