#include "dicke/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "dicke/errors.hpp"

namespace dicke {

namespace {

double residual_norm(const SparseMatrix& a, const Eigen::VectorXd& x, double value) {
  return (a * x - value * x).norm();
}

std::vector<EigenPair> dense_lowest(const SparseMatrix& a, int k) {
  const Eigen::MatrixXd dense(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success) throw NumericError("dense symmetric eigensolver failed");
  std::vector<EigenPair> out;
  out.reserve(k);
  for (int i = 0; i < k; ++i) {
    EigenPair pair;
    pair.value = solver.eigenvalues()[i];
    pair.vector = solver.eigenvectors().col(i);
    pair.residual = residual_norm(a, pair.vector, pair.value);
    out.push_back(std::move(pair));
  }
  return out;
}

/// Removes the components of w along the columns of basis (first `count`).
void project_out(Eigen::VectorXd& w, const Eigen::MatrixXd& basis, Eigen::Index count) {
  if (count == 0) return;
  const auto block = basis.leftCols(count);
  w.noalias() -= block * (block.transpose() * w);
}

/// Lowest eigenpair of `a` on the orthogonal complement of locked.leftCols(n_locked).
EigenPair lanczos_lowest(const SparseMatrix& a, const Eigen::MatrixXd& locked, Eigen::Index n_locked,
                         double tolerance, double norm_bound, const EigensolverOptions& options,
                         std::mt19937_64& rng) {
  const Eigen::Index n = a.rows();
  const Eigen::Index m_max = std::min<Eigen::Index>(options.krylov_dimension, n - n_locked);

  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Eigen::VectorXd start(n);
  for (Eigen::Index i = 0; i < n; ++i) start[i] = uniform(rng);

  Eigen::MatrixXd q(n, m_max + 1);
  Eigen::VectorXd alpha(m_max);
  Eigen::VectorXd beta(m_max);
  Eigen::VectorXd w(n);
  const double breakdown = 1e-14 * std::max(norm_bound, 1.0);

  EigenPair best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    project_out(start, locked, n_locked);
    project_out(start, locked, n_locked);
    const double start_norm = start.norm();
    if (!(start_norm > 0.0)) throw NumericError("Lanczos start vector vanished after projection");
    q.col(0) = start / start_norm;

    Eigen::Index steps = 0;
    Eigen::VectorXd ritz;
    for (Eigen::Index k = 0; k < m_max; ++k) {
      w.noalias() = a * q.col(k);
      alpha[k] = q.col(k).dot(w);
      w -= alpha[k] * q.col(k);
      if (k > 0) w -= beta[k - 1] * q.col(k - 1);
      // full reorthogonalization, twice is enough
      for (int pass = 0; pass < 2; ++pass) {
        project_out(w, q, k + 1);
        project_out(w, locked, n_locked);
      }
      beta[k] = w.norm();
      steps = k + 1;

      const bool last = steps == m_max || beta[k] < breakdown;
      if (last || steps % 5 == 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
        tri.computeFromTridiagonal(alpha.head(steps), beta.head(steps - 1), Eigen::ComputeEigenvectors);
        ritz = tri.eigenvectors().col(0);
        if (last || beta[k] * std::abs(ritz[steps - 1]) < 0.1 * tolerance) break;
      }
      q.col(k + 1) = w / beta[k];
    }

    Eigen::VectorXd x = q.leftCols(steps) * ritz;
    project_out(x, locked, n_locked);
    x.normalize();
    const double value = x.dot(a * x);
    const double res = residual_norm(a, x, value);
    if (res < best.residual) best = {value, x, res};
    if (res <= tolerance) return best;
    start = x;
  }
  throw NumericError("Lanczos did not reach residual " + std::to_string(tolerance) + " (best " +
                     std::to_string(best.residual) + ")");
}

}  // namespace

std::vector<EigenPair> lowest_symmetric_eigenpairs(const SparseMatrix& matrix, double norm_bound, int k,
                                                   const EigensolverOptions& options) {
  const auto n = static_cast<std::size_t>(matrix.rows());
  if (matrix.rows() != matrix.cols()) throw ContractError("eigensolver needs a square matrix");
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw DomainError("requested " + std::to_string(k) + " eigenpairs of a " + std::to_string(n) + "-dim matrix");

  const double tolerance = options.relative_tolerance * std::max(norm_bound, 1e-300);
  const bool dense = options.method == EigenMethod::dense ||
                     (options.method == EigenMethod::automatic &&
                      (n <= options.dense_threshold || static_cast<std::size_t>(2 * k) >= n));

  std::vector<EigenPair> out;
  if (dense) {
    out = dense_lowest(matrix, k);
  } else {
    std::mt19937_64 rng(options.seed);
    Eigen::MatrixXd locked(matrix.rows(), k);
    for (int i = 0; i < k; ++i) {
      EigenPair pair = lanczos_lowest(matrix, locked, i, tolerance, norm_bound, options, rng);
      locked.col(i) = pair.vector;
      out.push_back(std::move(pair));
    }
    // locking finds the spectrum bottom-up, but a near-degenerate pair may
    // come out swapped
    std::sort(out.begin(), out.end(), [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
  }

  for (const EigenPair& pair : out) {
    if (!(pair.residual <= tolerance))
      throw NumericError("eigenpair residual " + std::to_string(pair.residual) + " exceeds " +
                         std::to_string(tolerance));
  }
  return out;
}

}  // namespace dicke
