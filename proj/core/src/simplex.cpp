#include "dicke/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace dicke {

namespace {

struct Descent {
  Eigen::VectorXd x;
  double value;
  double diameter;
  bool converged;
};

Descent descend(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& start,
                double step, double x_tol, int& budget) {
  const auto n = start.size();
  const auto eval = [&](const Eigen::VectorXd& x) {
    --budget;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<Eigen::VectorXd> vertex(n + 1, start);
  std::vector<double> value(n + 1);
  for (Eigen::Index i = 0; i < n; ++i) vertex[i + 1][i] += step;
  for (Eigen::Index i = 0; i <= n; ++i) value[i] = eval(vertex[i]);

  std::vector<Eigen::Index> order(n + 1);
  const auto diameter = [&] {
    double d = 0.0;
    for (Eigen::Index i = 1; i <= n; ++i) d = std::max(d, (vertex[order[i]] - vertex[order[0]]).norm());
    return d;
  };

  for (;;) {
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return value[a] < value[b]; });
    const auto best = order.front();
    const auto worst = order.back();
    const auto second = order[n - 1];

    const double d = diameter();
    if (d < x_tol) return {vertex[best], value[best], d, true};
    if (budget <= 0) return {vertex[best], value[best], d, false};

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) centroid += vertex[order[i]];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd reflected = centroid + (centroid - vertex[worst]);
    const double f_r = eval(reflected);
    if (f_r < value[best]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - vertex[worst]);
      const double f_e = eval(expanded);
      if (f_e < f_r) {
        vertex[worst] = expanded;
        value[worst] = f_e;
      } else {
        vertex[worst] = reflected;
        value[worst] = f_r;
      }
      continue;
    }
    if (f_r < value[second]) {
      vertex[worst] = reflected;
      value[worst] = f_r;
      continue;
    }
    if (f_r < value[worst]) {
      const Eigen::VectorXd outside = centroid + 0.5 * (reflected - centroid);
      const double f_o = eval(outside);
      if (f_o <= f_r) {
        vertex[worst] = outside;
        value[worst] = f_o;
        continue;
      }
    } else {
      const Eigen::VectorXd inside = centroid + 0.5 * (vertex[worst] - centroid);
      const double f_i = eval(inside);
      if (f_i < value[worst]) {
        vertex[worst] = inside;
        value[worst] = f_i;
        continue;
      }
    }
    for (Eigen::Index i = 1; i <= n; ++i) {
      const auto k = order[i];
      vertex[k] = vertex[best] + 0.5 * (vertex[k] - vertex[best]);
      value[k] = eval(vertex[k]);
    }
  }
}

}  // namespace

SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                          const Eigen::VectorXd& start, const SimplexOptions& options) {
  int budget = options.max_evaluations;
  Descent run = descend(objective, start, options.initial_step, options.x_tol, budget);
  for (int restart = 0; run.converged && restart < options.max_restarts; ++restart) {
    Descent again = descend(objective, run.x, options.initial_step, options.x_tol, budget);
    const bool same_point = (again.x - run.x).norm() < std::max(1e3 * options.x_tol, 1e-9);
    if (again.converged && again.value < run.value) run = again;
    if (same_point || !again.converged) break;
  }
  return {run.x, run.value, options.max_evaluations - budget, run.diameter, run.converged};
}

}  // namespace dicke
