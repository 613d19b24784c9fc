#pragma once

#include <cstddef>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "dicke/model.hpp"

namespace dicke {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Dicke Hamiltonian restricted to a ParityBasis, stored sparse with both
/// triangles present. Each row holds at most five entries: the diagonal
/// nu + omega_a m and the couplings to (nu +- 1, m +- 1).
class HamiltonianMatrix {
 public:
  const ParityBasis& basis() const noexcept { return basis_; }
  const ModelParams& params() const noexcept { return params_; }
  const SparseMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dimension() const noexcept { return basis_.size(); }

  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix_); }
  /// Largest absolute row sum; an upper bound on the spectral norm.
  double norm_bound() const noexcept { return norm_bound_; }

 private:
  HamiltonianMatrix(ModelParams params, ParityBasis basis, SparseMatrix matrix, double norm_bound)
      : params_(params), basis_(std::move(basis)), matrix_(std::move(matrix)), norm_bound_(norm_bound) {}
  friend HamiltonianMatrix build_hamiltonian(const ModelParams&, const ParityBasis&);

  ModelParams params_;
  ParityBasis basis_;
  SparseMatrix matrix_;
  double norm_bound_;
};

/// Throws ContractError when the basis was built for a different atom number.
HamiltonianMatrix build_hamiltonian(const ModelParams& params, const ParityBasis& basis);

}  // namespace dicke
