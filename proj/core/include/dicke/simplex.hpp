#pragma once

#include <functional>

#include <Eigen/Core>

namespace dicke {

struct SimplexOptions {
  double initial_step = 0.05;   // edge length of the starting simplex
  double x_tol = 1e-10;         // converged when the simplex diameter drops below this
  int max_evaluations = 20000;  // per descent, restarts included
  int max_restarts = 3;
};

struct SimplexResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  double diameter = 0.0;
  bool converged = false;
};

/// Nelder-Mead descent with standard coefficients (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2). A converged descent is restarted from its best
/// vertex with a fresh simplex until two consecutive descents agree, which
/// guards against collapse onto a non-stationary point. Non-finite objective
/// values are treated as +infinity.
SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                          const Eigen::VectorXd& start, const SimplexOptions& options = {});

}  // namespace dicke
