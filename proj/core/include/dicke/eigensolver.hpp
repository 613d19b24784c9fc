#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "dicke/hamiltonian.hpp"

namespace dicke {

enum class EigenMethod { automatic, dense, lanczos };

struct EigensolverOptions {
  EigenMethod method = EigenMethod::automatic;
  /// automatic picks the dense solver at or below this dimension
  std::size_t dense_threshold = 300;
  /// residual ||H x - E x|| accepted per pair, relative to norm_bound()
  double relative_tolerance = 1e-10;
  int krylov_dimension = 80;
  int max_restarts = 200;
  std::uint64_t seed = 0x5eedULL;
};

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
};

/// k lowest eigenpairs of a real symmetric matrix, ascending, orthonormal.
/// The iterative path is restarted Lanczos with full reorthogonalization;
/// pairs are found one at a time and locked, so degenerate levels are
/// resolved into an orthonormal basis of their eigenspace.
/// Throws NumericError when the residual contract cannot be met.
std::vector<EigenPair> lowest_symmetric_eigenpairs(const SparseMatrix& matrix, double norm_bound, int k,
                                                   const EigensolverOptions& options = {});

}  // namespace dicke
