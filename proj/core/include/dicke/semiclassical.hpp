#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "dicke/model.hpp"
#include "dicke/simplex.hpp"

namespace dicke {

enum class Branch { normal, superradiant };
enum class SurfaceKind { cs, sas_even, sas_odd };

/// Points closer than this to a zero of the parity-projected norm are not
/// evaluated (distance measured in (q, p, theta)).
inline constexpr double kSingularGuardRadius = 1e-6;
/// Minimum |q_after - q_before| for a discontinuity to count as a jump.
inline constexpr double kJumpThreshold = 0.5;

struct CriticalPoint {
  PhasePoint point;
  double energy = 0.0;
  Branch branch = Branch::normal;
  PhiBranch phi_branch = PhiBranch::zero;
};

struct SasMinimum {
  Parity parity = Parity::even;
  PhasePoint point;  // p = 0, phi = 0
  double energy = 0.0;
  int n_atoms = 0;
  double gamma = 0.0;
};

struct JumpResult {
  double gamma_c = 0.0;
  double q_before = 0.0;      // global minimizer just below gamma_c
  double q_after = 0.0;       // global minimizer just above gamma_c
  double theta_before = 0.0;
  double theta_after = 0.0;
  double resolution = 0.0;    // width of the final bracket
};

/// Expectation values in a trial state.
struct TrialExpectations {
  double n_photons = 0.0;
  double jz = 0.0;
};

// ---- coherent-state (mean-field) surface ----------------------------------

/// <H> in the product coherent state:
///   (p^2 + q^2)/2 - j omega_a cos(theta) + 2 sqrt(j) gamma q sin(theta) cos(phi)
double cs_energy(const ModelParams& params, const PhasePoint& point);
TrialExpectations cs_expectations(const ModelParams& params, const PhasePoint& point);

/// Analytic minimizer of cs_energy on the requested azimuth branch.
CriticalPoint cs_critical_point(const ModelParams& params, PhiBranch phi_branch);

/// q_c / sqrt(N) as a function of theta_c on the superradiant branch:
///   -sqrt(omega_a) sin(theta) / sqrt(2 cos(theta)) cos(phi).
/// Independent of gamma and N. Requires theta in [0, pi/2).
double universal_curve(double theta, double omega_a, PhiBranch phi_branch = PhiBranch::zero);

// ---- symmetry-adapted (parity-projected) surfaces --------------------------

/// <H> in the even/odd projection of the product coherent state. Evaluated in
/// terms of the overlap x = exp(-(q^2+p^2)) cos(theta)^N, computed through its
/// logarithm, so the result stays finite for any N. Throws SingularityError
/// within kSingularGuardRadius of a point where the projected norm vanishes.
double sas_energy(const ModelParams& params, const PhasePoint& point, Parity parity);
TrialExpectations sas_expectations(const ModelParams& params, const PhasePoint& point, Parity parity);

/// True when the projected state has (numerically) zero norm near `point`.
bool sas_is_singular(const ModelParams& params, const PhasePoint& point, Parity parity);

struct SasMinimizeOptions {
  /// Extra seed, typically the minimizer at the previous gamma of a ladder.
  std::optional<PhasePoint> warm_start;
  /// When set, the coarse-grid seeds are jittered inside their cells.
  std::optional<std::uint64_t> jitter_seed;
  int grid_size = 8;
  /// Minimize over (q, p, theta, phi) instead of the (q, theta) slice.
  /// Only meant for checking that the slice contains the minimum.
  bool full_phase_space = false;
  SimplexOptions simplex{};
};

/// Global minimum of the SAS surface at p = 0, phi = 0 from a multistart
/// simplex search (origin, CS critical point, warm start, best coarse-grid
/// cell). The reported point is canonical: theta in [0, pi], phi = 0.
SasMinimum sas_minimize(const ModelParams& params, Parity parity, const SasMinimizeOptions& options = {});

/// Single simplex descent from `start`; follows whichever local minimum
/// `start` is attracted to.
SasMinimum sas_local_minimize(const ModelParams& params, Parity parity, const PhasePoint& start,
                              const SimplexOptions& simplex = {});

struct JumpOptions {
  double coarse_step = 0.005;
  std::optional<std::uint64_t> jitter_seed;
};

/// Locates the coupling where the global minimizer of the even surface jumps
/// between two local minima. A coarse gamma ladder brackets the jump; the two
/// branches are then continued from either side and the bracket is bisected
/// on the sign of their energy difference. Returns nullopt when no
/// discontinuity larger than kJumpThreshold exists in [gamma_lo, gamma_hi].
std::optional<JumpResult> sas_jump_gamma(int n_atoms, double omega_a, double gamma_lo, double gamma_hi,
                                         double target_resolution, const JumpOptions& options = {});

// ---- energy-surface grids ---------------------------------------------------

struct AxisRange {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;

  /// lo, lo + step, ... up to hi (inclusive within rounding).
  std::vector<double> points() const;
};

struct SurfaceGrid {
  std::vector<double> q;
  std::vector<double> theta;
  /// Row-major with q as the outer index; nullopt marks excluded points.
  std::vector<std::optional<double>> energy;

  const std::optional<double>& at(std::size_t iq, std::size_t itheta) const {
    return energy[iq * theta.size() + itheta];
  }
};

/// Surface values at p = 0, phi = 0 over a (q, theta) grid.
SurfaceGrid surface_grid(const ModelParams& params, SurfaceKind kind, const AxisRange& q_range,
                         const AxisRange& theta_range);

struct GridIndex {
  std::size_t iq;
  std::size_t itheta;
};

/// Interior grid points strictly lower than all eight neighbours.
std::vector<GridIndex> strict_local_minima(const SurfaceGrid& grid);

}  // namespace dicke
