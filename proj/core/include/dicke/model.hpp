#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace dicke {

enum class Parity { even, odd };
enum class Sector { even, odd, full };
/// Azimuth branch of a semiclassical minimum; the two are mirror images q -> -q.
enum class PhiBranch { zero, pi };

std::string_view to_string(Parity parity);
std::string_view to_string(Sector sector);
/// cos(phi) for the branch: +1 or -1.
double branch_sign(PhiBranch branch);
double branch_angle(PhiBranch branch);

/// Physical inputs of the single-mode Dicke Hamiltonian
///   H = a^dag a + omega_a J_z + gamma/sqrt(N) (a^dag + a)(J_+ + J_-)
/// restricted to the symmetric sector j = N/2.
class ModelParams {
 public:
  /// Throws DomainError unless n_atoms >= 1, omega_a > 0 and gamma is finite.
  ModelParams(int n_atoms, double omega_a, double gamma);

  int n_atoms() const noexcept { return n_atoms_; }
  double omega_a() const noexcept { return omega_a_; }
  double gamma() const noexcept { return gamma_; }
  double j() const noexcept { return 0.5 * n_atoms_; }

  ModelParams with_gamma(double gamma) const { return {n_atoms_, omega_a_, gamma}; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  int n_atoms_;
  double omega_a_;
  double gamma_;
};

/// Semiclassical coordinates: field quadratures (q, p) and Bloch angles.
struct PhasePoint {
  double q = 0.0;
  double p = 0.0;
  double theta = 0.0;
  double phi = 0.0;

  friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

/// Heisenberg-Weyl and SU(2) coherent-state labels.
struct CoherentParams {
  std::complex<double> alpha;
  std::complex<double> zeta;
};

/// alpha = (q + i p)/sqrt(2), zeta = exp(-i phi) tan(theta/2).
CoherentParams to_coherent(const PhasePoint& point);
/// Inverse of to_coherent; phi is reported as 0 when zeta = 0.
PhasePoint from_coherent(const CoherentParams& params);

/// Folds theta into [0, pi] (shifting phi by pi when reflected) and phi into
/// [0, 2 pi). (q, p) are untouched.
PhasePoint normalize_phase_point(const PhasePoint& raw);

/// Analytic critical coupling sqrt(omega_a)/2.
double critical_coupling(double omega_a);

/// |nu> (x) |j, m> with m stored as the integer 2m so half-integers are exact.
struct BasisState {
  int nu = 0;
  int two_m = 0;
  Parity lambda_parity = Parity::even;

  double m() const noexcept { return 0.5 * two_m; }
  /// Total excitation number nu + m + j.
  int lambda(int n_atoms) const noexcept { return nu + (two_m + n_atoms) / 2; }

  friend bool operator==(const BasisState&, const BasisState&) = default;
};

Parity lambda_parity(int nu, int two_m, int n_atoms);

/// Fock (x) spin product basis, truncated at n_max photons and restricted to
/// one parity sector (or the full space). States are ordered by (nu, m)
/// ascending. Copies share the immutable state table.
class ParityBasis {
 public:
  const ModelParams& params() const noexcept { return data_->params; }
  int n_atoms() const noexcept { return data_->params.n_atoms(); }
  int n_max() const noexcept { return data_->n_max; }
  Sector sector() const noexcept { return data_->sector; }
  std::size_t size() const noexcept { return data_->states.size(); }
  std::span<const BasisState> states() const noexcept { return data_->states; }
  const BasisState& operator[](std::size_t i) const { return data_->states[i]; }

  /// Row index of (nu, 2m), or nullopt when the state is outside this basis.
  std::optional<std::size_t> index_of(int nu, int two_m) const;

  /// Same N, n_max and sector; gamma and omega_a do not enter the basis.
  bool same_layout(const ParityBasis& other) const noexcept;

 private:
  struct Data {
    ModelParams params;
    int n_max;
    Sector sector;
    std::vector<BasisState> states;
    std::vector<int> lookup;  // (n_max+1) x (N+1), -1 when absent
  };
  explicit ParityBasis(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  friend ParityBasis build_basis(const ModelParams&, int, Sector);

  std::shared_ptr<const Data> data_;
};

ParityBasis build_basis(const ModelParams& params, int n_max, Sector sector);

}  // namespace dicke
