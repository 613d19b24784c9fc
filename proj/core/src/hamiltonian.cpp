#include "dicke/hamiltonian.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "dicke/errors.hpp"

namespace dicke {

HamiltonianMatrix build_hamiltonian(const ModelParams& params, const ParityBasis& basis) {
  if (basis.n_atoms() != params.n_atoms())
    throw ContractError("basis built for N=" + std::to_string(basis.n_atoms()) + " used with N=" +
                        std::to_string(params.n_atoms()));

  const int n = params.n_atoms();
  const double coupling = params.gamma() / std::sqrt(static_cast<double>(n));
  const double jj = static_cast<double>(n) * (n + 2);  // 4 j(j+1)
  const auto dim = static_cast<Eigen::Index>(basis.size());

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(basis.size() * 5);
  for (Eigen::Index row = 0; row < dim; ++row) {
    const BasisState& s = basis[row];
    entries.emplace_back(row, row, s.nu + params.omega_a() * s.m());
    if (coupling == 0.0) continue;
    // (a^dag + a)(J_+ + J_-) links (nu, m) to (nu + 1, m +- 1); the partner
    // with nu - 1 is reached from the other end of the pair.
    for (const int dm : {-2, 2}) {
      const int two_m_partner = s.two_m + dm;
      const auto col = basis.index_of(s.nu + 1, two_m_partner);
      if (!col) continue;
      const int two_m_upper = std::max(s.two_m, two_m_partner);
      const int two_m_lower = std::min(s.two_m, two_m_partner);
      // sqrt(nu+1) sqrt(j(j+1) - m m'), m' = m_lower + 1
      const double value = coupling * std::sqrt(static_cast<double>(s.nu + 1)) * 0.5 *
                           std::sqrt(jj - static_cast<double>(two_m_lower) * two_m_upper);
      const auto c = static_cast<Eigen::Index>(*col);
      entries.emplace_back(row, c, value);
      entries.emplace_back(c, row, value);
    }
  }

  SparseMatrix matrix(dim, dim);
  matrix.setFromTriplets(entries.begin(), entries.end());
  matrix.makeCompressed();

  double norm = 0.0;
  for (Eigen::Index row = 0; row < dim; ++row) {
    double sum = 0.0;
    for (SparseMatrix::InnerIterator it(matrix, row); it; ++it) sum += std::abs(it.value());
    norm = std::max(norm, sum);
  }
  return HamiltonianMatrix(params, basis, std::move(matrix), norm);
}

}  // namespace dicke
