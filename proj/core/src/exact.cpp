#include "dicke/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "dicke/errors.hpp"
#include "dicke/parallel.hpp"
#include "dicke/semiclassical.hpp"

namespace dicke {

QuantumState::QuantumState(ParityBasis basis, Eigen::VectorXd amplitudes, double energy, Parity parity)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)), energy_(energy), parity_(parity) {
  if (static_cast<std::size_t>(amplitudes_.size()) != basis_.size())
    throw ContractError("amplitude vector does not match basis dimension");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > 1e-10) throw ContractError("quantum state is not normalized");
  amplitudes_ /= norm;
}

double QuantumState::tail_probability() const {
  const int top = basis_.n_max();
  double p = 0.0;
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (basis_[i].nu >= top - 1) p += amplitudes_[static_cast<Eigen::Index>(i)] * amplitudes_[static_cast<Eigen::Index>(i)];
  }
  return p;
}

std::vector<QuantumState> lowest_eigenpairs(const HamiltonianMatrix& h, int k, const EigensolverOptions& options) {
  const auto pairs = lowest_symmetric_eigenpairs(h.matrix(), h.norm_bound(), k, options);
  const ParityBasis& basis = h.basis();
  std::vector<QuantumState> out;
  out.reserve(pairs.size());
  for (const EigenPair& pair : pairs) {
    Parity parity = basis.sector() == Sector::odd ? Parity::odd : Parity::even;
    if (basis.sector() == Sector::full) {
      double even_weight = 0.0;
      for (std::size_t i = 0; i < basis.size(); ++i) {
        if (basis[i].lambda_parity == Parity::even) even_weight += pair.vector[static_cast<Eigen::Index>(i)] * pair.vector[static_cast<Eigen::Index>(i)];
      }
      parity = even_weight >= 0.5 ? Parity::even : Parity::odd;
    }
    out.emplace_back(basis, pair.vector, pair.value, parity);
  }
  return out;
}

QuantumState sector_ground_state(const ModelParams& params, int n_max, Parity parity,
                                 const EigensolverOptions& options) {
  const ParityBasis basis = build_basis(params, n_max, parity == Parity::even ? Sector::even : Sector::odd);
  return lowest_eigenpairs(build_hamiltonian(params, basis), 1, options).front();
}

int select_truncation(const ModelParams& params, double tol, const TruncationOptions& options) {
  if (!(tol > 0.0)) throw DomainError("select_truncation requires tol > 0");
  const double q_c = cs_critical_point(params, PhiBranch::zero).point.q;
  const int n_est = static_cast<int>(std::ceil(0.5 * q_c * q_c)) + 20;

  int n_max = options.first_rung;
  while (n_max < n_est) n_max *= 2;
  for (; n_max <= options.max_n_max; n_max *= 2) {
    bool converged = true;
    for (const Parity parity : {Parity::even, Parity::odd}) {
      const QuantumState coarse = sector_ground_state(params, n_max, parity, options.eigensolver);
      if (coarse.tail_probability() >= tol) {
        converged = false;
        break;
      }
      const QuantumState fine = sector_ground_state(params, 2 * n_max, parity, options.eigensolver);
      if (std::abs(fine.energy() - coarse.energy()) >= tol) {
        converged = false;
        break;
      }
    }
    if (converged) return n_max;
  }
  throw ResourceError("Fock truncation ladder exhausted above n_max=" + std::to_string(options.max_n_max));
}

Observables observables(const QuantumState& state) {
  Observables out;
  const ParityBasis& basis = state.basis();
  const Eigen::VectorXd& c = state.amplitudes();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double w = c[static_cast<Eigen::Index>(i)] * c[static_cast<Eigen::Index>(i)];
    out.n_photons += w * basis[i].nu;
    out.jz += w * basis[i].m();
  }
  return out;
}

PhaseCoordinates to_phase_coordinates(const Observables& obs, double j, PhiBranch phi_branch) {
  if (!(j > 0.0)) throw DomainError("to_phase_coordinates requires j > 0");
  if (obs.n_photons < -1e-12) throw DomainError("negative photon number");
  if (std::abs(obs.jz) > j + 1e-9) throw DomainError("|<J_z>| exceeds j");
  const double ratio = std::clamp(-obs.jz / j, -1.0, 1.0);
  PhaseCoordinates out;
  out.q = -branch_sign(phi_branch) * std::sqrt(2.0 * std::max(obs.n_photons, 0.0));
  out.theta = std::acos(ratio);
  return out;
}

double fidelity(const QuantumState& a, const QuantumState& b) {
  if (!a.basis().same_layout(b.basis()))
    throw ContractError("fidelity between states in different bases");
  const double overlap = a.amplitudes().dot(b.amplitudes());
  return std::clamp(overlap * overlap, 0.0, 1.0);
}

namespace {

/// Vertex of the parabola through three points; falls back to x1 when the
/// points are not convex.
double parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double a = (x1 - x0) * (y1 - y2);
  const double b = (x1 - x2) * (y1 - y0);
  const double denom = a - b;
  if (!(std::abs(denom) > 0.0)) return x1;
  const double curvature = (y0 - y1) / (x0 - x1) - (y2 - y1) / (x2 - x1);  // < 0 for a minimum
  if (!(curvature < 0.0)) return x1;
  const double x = x1 - 0.5 * ((x1 - x0) * a - (x1 - x2) * b) / denom;
  return std::clamp(x, x0, x2);
}

}  // namespace

FidelityScanResult fidelity_scan(const ModelParams& model, std::span<const double> gamma_grid, double delta_gamma,
                                 const FidelityScanOptions& options) {
  if (gamma_grid.empty()) throw DomainError("fidelity_scan needs a non-empty grid");
  if (options.sector == Sector::full) throw DomainError("fidelity_scan needs a parity sector");
  if (!(delta_gamma > 0.0)) throw DomainError("delta_gamma must be positive");
  double min_spacing = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < gamma_grid.size(); ++i) {
    const double d = gamma_grid[i] - gamma_grid[i - 1];
    if (!(d > 0.0)) throw DomainError("fidelity_scan grid must be strictly ascending");
    min_spacing = std::min(min_spacing, d);
  }
  if (delta_gamma > min_spacing * (1.0 + 1e-9)) throw DomainError("delta_gamma exceeds the grid spacing");

  FidelityScanResult out;
  out.gamma_grid.assign(gamma_grid.begin(), gamma_grid.end());
  out.delta_gamma = delta_gamma;
  out.n_max = options.n_max > 0
                  ? options.n_max
                  : select_truncation(model.with_gamma(gamma_grid.back() + delta_gamma), options.truncation_tol,
                                      TruncationOptions{.eigensolver = options.eigensolver});

  // every grid point and its shifted partner; partners that coincide with the
  // next grid point are solved once
  std::vector<double> couplings;
  couplings.reserve(2 * gamma_grid.size());
  for (double g : gamma_grid) {
    couplings.push_back(g);
    couplings.push_back(g + delta_gamma);
  }
  std::sort(couplings.begin(), couplings.end());
  const double merge = 1e-12 * std::max(1.0, std::abs(couplings.back()));
  couplings.erase(std::unique(couplings.begin(), couplings.end(),
                              [&](double a, double b) { return std::abs(a - b) <= merge; }),
                  couplings.end());
  const auto lookup = [&](double g) {
    auto it = std::lower_bound(couplings.begin(), couplings.end(), g - merge);
    return static_cast<std::size_t>(it - couplings.begin());
  };

  const ParityBasis basis = build_basis(model, out.n_max, options.sector);
  std::vector<std::optional<QuantumState>> ground(couplings.size());
  std::vector<double> gap(couplings.size(), std::numeric_limits<double>::infinity());
  parallel_for(couplings.size(), options.jobs, [&](std::size_t i) {
    const HamiltonianMatrix h = build_hamiltonian(model.with_gamma(couplings[i]), basis);
    const int k = h.dimension() >= 2 ? 2 : 1;
    auto states = lowest_eigenpairs(h, k, options.eigensolver);
    if (states.size() == 2) gap[i] = states[1].energy() - states[0].energy();
    ground[i].emplace(std::move(states.front()));
  });

  const std::size_t n = gamma_grid.size();
  out.fidelity.resize(n);
  out.susceptibility.resize(n);
  out.energy.resize(n);
  out.flagged.resize(n);
  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = lookup(gamma_grid[i]);
    const std::size_t b = lookup(gamma_grid[i] + delta_gamma);
    out.fidelity[i] = fidelity(*ground[a], *ground[b]);
    out.susceptibility[i] = 2.0 * (1.0 - out.fidelity[i]) / (delta_gamma * delta_gamma);
    out.energy[i] = ground[a]->energy();
    out.flagged[i] = gap[a] < options.degeneracy_gap || gap[b] < options.degeneracy_gap;
    if (!out.flagged[i] && out.fidelity[i] < best) {
      best = out.fidelity[i];
      out.argmin = i;
      found = true;
    }
  }
  if (!found) throw NumericError("every fidelity scan point is degenerate");

  out.gamma_c = gamma_grid[out.argmin];
  const std::size_t i = out.argmin;
  if (i > 0 && i + 1 < n && !out.flagged[i - 1] && !out.flagged[i + 1]) {
    out.gamma_c = parabola_vertex(gamma_grid[i - 1], out.fidelity[i - 1], gamma_grid[i], out.fidelity[i],
                                  gamma_grid[i + 1], out.fidelity[i + 1]);
  }
  return out;
}

}  // namespace dicke
