#include "dicke/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dicke/errors.hpp"

namespace dicke {

std::string_view to_string(Parity parity) { return parity == Parity::even ? "even" : "odd"; }

std::string_view to_string(Sector sector) {
  switch (sector) {
    case Sector::even: return "even";
    case Sector::odd: return "odd";
    case Sector::full: return "full";
  }
  return "?";
}

double branch_sign(PhiBranch branch) { return branch == PhiBranch::zero ? 1.0 : -1.0; }
double branch_angle(PhiBranch branch) { return branch == PhiBranch::zero ? 0.0 : std::numbers::pi; }

ModelParams::ModelParams(int n_atoms, double omega_a, double gamma)
    : n_atoms_(n_atoms), omega_a_(omega_a), gamma_(gamma) {
  if (n_atoms < 1) throw DomainError("n_atoms must be >= 1, got " + std::to_string(n_atoms));
  if (!(omega_a > 0.0) || !std::isfinite(omega_a))
    throw DomainError("omega_a must be positive and finite");
  if (!std::isfinite(gamma)) throw DomainError("gamma must be finite");
}

CoherentParams to_coherent(const PhasePoint& point) {
  const std::complex<double> alpha{point.q / std::numbers::sqrt2, point.p / std::numbers::sqrt2};
  const std::complex<double> zeta = std::polar(std::tan(0.5 * point.theta), -point.phi);
  return {alpha, zeta};
}

PhasePoint from_coherent(const CoherentParams& params) {
  PhasePoint out;
  out.q = std::numbers::sqrt2 * params.alpha.real();
  out.p = std::numbers::sqrt2 * params.alpha.imag();
  const double r = std::abs(params.zeta);
  out.theta = 2.0 * std::atan(r);
  out.phi = r > 0.0 ? -std::arg(params.zeta) : 0.0;
  return normalize_phase_point(out);
}

namespace {

double wrap_two_pi(double x) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(x, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;  // rounding of a tiny negative remainder
  return r == 0.0 ? 0.0 : r;  // no negative zero
}

}  // namespace

PhasePoint normalize_phase_point(const PhasePoint& raw) {
  if (!std::isfinite(raw.q) || !std::isfinite(raw.p) || !std::isfinite(raw.theta) ||
      !std::isfinite(raw.phi))
    throw DomainError("phase point has non-finite coordinates");
  PhasePoint out = raw;
  double theta = wrap_two_pi(raw.theta);
  double phi = raw.phi;
  if (theta > std::numbers::pi) {
    theta = 2.0 * std::numbers::pi - theta;
    phi += std::numbers::pi;
  }
  out.theta = theta;
  out.phi = wrap_two_pi(phi);
  return out;
}

double critical_coupling(double omega_a) {
  if (!(omega_a > 0.0) || !std::isfinite(omega_a))
    throw DomainError("critical_coupling requires omega_a > 0");
  return 0.5 * std::sqrt(omega_a);
}

Parity lambda_parity(int nu, int two_m, int n_atoms) {
  // two_m and n_atoms share parity, so the sum is even
  const int lambda = nu + (two_m + n_atoms) / 2;
  return lambda % 2 == 0 ? Parity::even : Parity::odd;
}

std::optional<std::size_t> ParityBasis::index_of(int nu, int two_m) const {
  const int n = n_atoms();
  if (nu < 0 || nu > data_->n_max || two_m < -n || two_m > n || ((two_m + n) & 1)) return std::nullopt;
  const int slot = data_->lookup[static_cast<std::size_t>(nu) * (n + 1) + (two_m + n) / 2];
  if (slot < 0) return std::nullopt;
  return static_cast<std::size_t>(slot);
}

bool ParityBasis::same_layout(const ParityBasis& other) const noexcept {
  return n_atoms() == other.n_atoms() && n_max() == other.n_max() && sector() == other.sector();
}

ParityBasis build_basis(const ModelParams& params, int n_max, Sector sector) {
  if (n_max < 0) throw DomainError("n_max must be >= 0");
  const int n = params.n_atoms();
  std::vector<BasisState> states;
  std::vector<int> lookup(static_cast<std::size_t>(n_max + 1) * (n + 1), -1);
  states.reserve(lookup.size() / (sector == Sector::full ? 1 : 2) + 1);
  for (int nu = 0; nu <= n_max; ++nu) {
    for (int k = 0; k <= n; ++k) {
      const int two_m = 2 * k - n;
      const Parity parity = lambda_parity(nu, two_m, n);
      const bool keep = sector == Sector::full || (sector == Sector::even) == (parity == Parity::even);
      if (!keep) continue;
      lookup[static_cast<std::size_t>(nu) * (n + 1) + k] = static_cast<int>(states.size());
      states.push_back({nu, two_m, parity});
    }
  }
  auto data = std::make_shared<const ParityBasis::Data>(
      ParityBasis::Data{params, n_max, sector, std::move(states), std::move(lookup)});
  return ParityBasis(std::move(data));
}

}  // namespace dicke
