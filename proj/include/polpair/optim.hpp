#pragma once

#include <Eigen/Dense>
#include <functional>

namespace polpair {

struct NelderMeadOptions {
  int max_iterations = 10000;
  // Converged when the spread of simplex function values drops below
  // tolerance (an absolute bound on the remaining improvement per step).
  double tolerance = 1e-9;
  // Initial displacement used to build the starting simplex, per coordinate.
  double initial_step = 0.1;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Minimizes f with the Nelder-Mead simplex method starting from x0.
NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x0, const NelderMeadOptions& options = {});

struct CompassOptions {
  double initial_step = 0.1;
  double min_step = 1e-7;
  int max_iterations = 20000;
};

// Minimizes f by coordinate-wise pattern search with a shrinking step.
NelderMeadResult compass_search(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x0, const CompassOptions& options = {});

}  // namespace polpair
