#pragma once

#include <span>
#include <vector>

#include "lcpp/errors.hpp"

namespace lcpp {

// min_x (1/2)||x - v||^2  subject to  ||x||_1 + <u, x> <= tau,  |u_i| <= 1.
struct ProjectionProblem {
  std::vector<double> v;
  std::vector<double> u;
  double tau = 0.0;
};

struct ProjectionResult {
  std::vector<double> x;
  double y = 0.0;       // Lagrange multiplier of the constraint
  bool active = false;  // constraint tight at the solution
};

// Scratch buffers; reuse across calls keeps the hot path allocation-free.
// One workspace per thread when projecting concurrently.
struct ProjectionWorkspace {
  struct Hinge {
    double t;  // dual value at which the coordinate reaches zero
    double w;  // slope weight of its constraint contribution
  };
  std::vector<Hinge> hinges;
};

ProjectionResult project(const ProjectionProblem& prob);
ProjectionResult project(const ProjectionProblem& prob, ProjectionWorkspace& ws);
void project_into(std::span<const double> v, std::span<const double> u, double tau,
                  ProjectionWorkspace& ws, std::span<double> x_out, double& y_out,
                  bool& active_out);

// Constraint value ||x(y)||_1 + <u, x(y)> of the dual-parameterized point
//   x_i(y) = [v_i - (u_i+1)y]_+ - [(u_i-1)y - v_i]_+ ;
// piecewise linear and nonincreasing over y >= 0.
double ell(const ProjectionProblem& prob, double y);

// Nonnegative kink locations of ell, sorted ascending, duplicates allowed.
// Candidates are the zero crossings v_i/(u_i+1) and v_i/(u_i-1) of the
// bracketed terms; the two-argument max term kinks only at those same points
// for y >= 0, so each coordinate contributes at most one positive entry.
std::vector<double> breakpoints(const ProjectionProblem& prob);

// ||x||_1 + <u, x>
double constraint_value(std::span<const double> x, std::span<const double> u);

}  // namespace lcpp
