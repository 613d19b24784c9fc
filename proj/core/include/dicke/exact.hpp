#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "dicke/eigensolver.hpp"
#include "dicke/hamiltonian.hpp"
#include "dicke/model.hpp"

namespace dicke {

/// Normalized eigenvector of a parity-block Hamiltonian.
class QuantumState {
 public:
  QuantumState(ParityBasis basis, Eigen::VectorXd amplitudes, double energy, Parity parity);

  const ParityBasis& basis() const noexcept { return basis_; }
  const Eigen::VectorXd& amplitudes() const noexcept { return amplitudes_; }
  double energy() const noexcept { return energy_; }
  Parity parity() const noexcept { return parity_; }

  /// Probability carried by the two highest retained Fock layers.
  double tail_probability() const;

 private:
  ParityBasis basis_;
  Eigen::VectorXd amplitudes_;
  double energy_;
  Parity parity_;
};

/// k lowest eigenstates of h, ascending in energy. In a full-space basis the
/// parity label is taken from the dominant parity weight.
std::vector<QuantumState> lowest_eigenpairs(const HamiltonianMatrix& h, int k,
                                            const EigensolverOptions& options = {});

/// Lowest state of one parity sector at the given truncation.
QuantumState sector_ground_state(const ModelParams& params, int n_max, Parity parity,
                                 const EigensolverOptions& options = {});

struct TruncationOptions {
  int first_rung = 32;
  int max_n_max = 4096;
  EigensolverOptions eigensolver{};
};

/// Smallest n_max on the ladder 32, 64, 128, ... (starting at the first rung
/// >= ceil(q_c^2/2) + 20 from the mean-field minimizer) for which the lowest
/// even and odd energies move by less than tol when n_max doubles and the
/// top-two-layer probability is below tol. Throws ResourceError past 4096.
int select_truncation(const ModelParams& params, double tol, const TruncationOptions& options = {});

struct Observables {
  double n_photons = 0.0;
  double jz = 0.0;
};

/// <a^dag a> and <J_z> of a normalized state.
Observables observables(const QuantumState& state);

struct PhaseCoordinates {
  double q = 0.0;
  double theta = 0.0;
};

/// q_c = -+sqrt(2 <a^dag a>) (sign by azimuth branch), theta_c = arccos(-<J_z>/j).
/// Throws DomainError when |jz| exceeds j by more than 1e-9.
PhaseCoordinates to_phase_coordinates(const Observables& obs, double j, PhiBranch phi_branch = PhiBranch::zero);

/// |<a|b>|^2. Throws ContractError when the states live in different bases.
double fidelity(const QuantumState& a, const QuantumState& b);

struct FidelityScanOptions {
  Sector sector = Sector::even;
  /// 0 selects n_max with select_truncation at the top of the grid
  int n_max = 0;
  double truncation_tol = 1e-9;
  /// ground states closer than this to the next level are flagged
  double degeneracy_gap = 1e-10;
  int jobs = 1;
  EigensolverOptions eigensolver{};
};

struct FidelityScanResult {
  std::vector<double> gamma_grid;
  std::vector<double> fidelity;
  /// 2 (1 - F) / delta_gamma^2
  std::vector<double> susceptibility;
  std::vector<double> energy;
  std::vector<bool> flagged;
  std::size_t argmin = 0;      // grid index of the smallest unflagged F
  double gamma_c = 0.0;        // parabolic refinement through argmin and neighbours
  double delta_gamma = 0.0;
  int n_max = 0;
};

/// F(gamma) = |<psi(gamma)|psi(gamma + delta_gamma)>|^2 over an ascending grid.
/// Requires 0 < delta_gamma <= smallest grid spacing. `model` supplies N and
/// omega_a; its gamma is ignored.
FidelityScanResult fidelity_scan(const ModelParams& model, std::span<const double> gamma_grid, double delta_gamma,
                                 const FidelityScanOptions& options = {});

}  // namespace dicke
