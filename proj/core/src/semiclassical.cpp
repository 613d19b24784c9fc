#include "dicke/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "dicke/errors.hpp"

namespace dicke {

// ---- coherent-state surface ------------------------------------------------

double cs_energy(const ModelParams& params, const PhasePoint& point) {
  const double j = params.j();
  return 0.5 * (point.p * point.p + point.q * point.q) - j * params.omega_a() * std::cos(point.theta) +
         2.0 * std::sqrt(j) * params.gamma() * point.q * std::sin(point.theta) * std::cos(point.phi);
}

TrialExpectations cs_expectations(const ModelParams& params, const PhasePoint& point) {
  return {0.5 * (point.p * point.p + point.q * point.q), -params.j() * std::cos(point.theta)};
}

CriticalPoint cs_critical_point(const ModelParams& params, PhiBranch phi_branch) {
  const double gamma_c = critical_coupling(params.omega_a());
  const double gamma = params.gamma();
  CriticalPoint out;
  out.phi_branch = phi_branch;
  out.point.phi = branch_angle(phi_branch);
  if (std::abs(gamma) > gamma_c) {
    const double ratio = (gamma_c / gamma) * (gamma_c / gamma);
    out.branch = Branch::superradiant;
    out.point.theta = std::acos(ratio);
    out.point.q = -2.0 * std::sqrt(params.j()) * gamma * std::sqrt(1.0 - ratio * ratio) *
                  branch_sign(phi_branch);
  }
  out.energy = cs_energy(params, out.point);
  return out;
}

double universal_curve(double theta, double omega_a, PhiBranch phi_branch) {
  if (!(omega_a > 0.0)) throw DomainError("universal_curve requires omega_a > 0");
  if (!(theta >= 0.0) || !(std::cos(theta) > 0.0) || theta >= 0.5 * std::numbers::pi)
    throw DomainError("universal_curve requires theta in [0, pi/2), got " + std::to_string(theta));
  return -std::sqrt(omega_a) * std::sin(theta) / std::sqrt(2.0 * std::cos(theta)) * branch_sign(phi_branch);
}

// ---- symmetry-adapted surfaces ---------------------------------------------

namespace {

/// Pieces of the projected expectation values, all expressed through
/// x = exp(-r^2) cos(theta)^N without forming cos^N directly.
struct ProjectedTerms {
  double r2;
  double one_plus;     // 1 + sigma x   (squared-norm factor)
  double one_minus;    // 1 - sigma x
  double atomic;       // (cos(theta) + sigma x / cos(theta)) / (1 + sigma x)
  double x_over_cos;   // x / cos(theta)
};

ProjectedTerms projected_terms(int n_atoms, const PhasePoint& pt, Parity parity) {
  const double sigma = parity == Parity::even ? 1.0 : -1.0;
  const double r2 = pt.q * pt.q + pt.p * pt.p;
  const double c = std::cos(pt.theta);
  ProjectedTerms t{};
  t.r2 = r2;

  if (c == 0.0) {
    // x vanishes; x/cos(theta) = exp(-r^2) cos^(N-1) survives only for N = 1
    t.one_plus = 1.0;
    t.one_minus = 1.0;
    t.x_over_cos = n_atoms == 1 ? std::exp(-r2) : 0.0;
    t.atomic = sigma * t.x_over_cos;
    return t;
  }

  // log|cos theta| without cancellation near theta = 0 or pi
  const double half_s = std::sin(0.5 * pt.theta);
  const double half_c = std::cos(0.5 * pt.theta);
  const double log_abs_c = c > 0.0 ? std::log1p(-2.0 * half_s * half_s) : std::log1p(-2.0 * half_c * half_c);
  const double log_x = -r2 + n_atoms * log_abs_c;
  const double sign_x = (c < 0.0 && (n_atoms % 2 == 1)) ? -1.0 : 1.0;
  const double s = sigma * sign_x;  // sign of sigma x
  const double e = std::exp(log_x);

  t.one_plus = s > 0.0 ? 1.0 + e : -std::expm1(log_x);
  t.one_minus = s > 0.0 ? -std::expm1(log_x) : 1.0 + e;

  // c^2 + sigma x = c^2 (1 + s exp(log_x - 2 log|c|))
  const double log_ratio = log_x - 2.0 * log_abs_c;
  const double c2_plus = c * c * (s > 0.0 ? 1.0 + std::exp(log_ratio) : -std::expm1(log_ratio));
  t.atomic = c2_plus / (c * t.one_plus);
  t.x_over_cos = sign_x * (c > 0.0 ? 1.0 : -1.0) * std::exp(log_x - log_abs_c);
  return t;
}

double projected_energy(const ModelParams& params, const PhasePoint& pt, Parity parity) {
  const double sigma = parity == Parity::even ? 1.0 : -1.0;
  const double j = params.j();
  const ProjectedTerms t = projected_terms(params.n_atoms(), pt, parity);
  const double photon = 0.5 * t.r2 * t.one_minus / t.one_plus;
  const double atomic = -j * params.omega_a() * t.atomic;
  const double s = std::sin(pt.theta);
  const double coupling = 2.0 * std::sqrt(j) * params.gamma() *
                          (sigma * pt.p * s * std::sin(pt.phi) * t.x_over_cos + pt.q * s * std::cos(pt.phi)) /
                          t.one_plus;
  return photon + atomic + coupling;
}

/// Distance in (q, p, theta) from the zeros of the projected norm.
double distance_to_singular_set(int n_atoms, const PhasePoint& pt, Parity parity) {
  const double inf = std::numeric_limits<double>::infinity();
  const double r2 = pt.q * pt.q + pt.p * pt.p;
  // theta is compared on the circle so that negative angles fold correctly
  const double theta = std::abs(std::remainder(pt.theta, 2.0 * std::numbers::pi));
  double d = inf;
  // sigma x = -1 needs r = 0 and cos^N = -sigma
  if (parity == Parity::odd) d = std::sqrt(r2 + theta * theta);
  const bool zero_at_pi = (parity == Parity::odd) == (n_atoms % 2 == 0);
  if (zero_at_pi) {
    const double dpi = std::numbers::pi - theta;
    d = std::min(d, std::sqrt(r2 + dpi * dpi));
  }
  return d;
}

}  // namespace

bool sas_is_singular(const ModelParams& params, const PhasePoint& point, Parity parity) {
  if (distance_to_singular_set(params.n_atoms(), point, parity) < kSingularGuardRadius) return true;
  return !(projected_terms(params.n_atoms(), point, parity).one_plus > 0.0);
}

double sas_energy(const ModelParams& params, const PhasePoint& point, Parity parity) {
  if (sas_is_singular(params, point, parity))
    throw SingularityError("projected coherent state has zero norm near (q=" + std::to_string(point.q) +
                           ", p=" + std::to_string(point.p) + ", theta=" + std::to_string(point.theta) + ")");
  return projected_energy(params, point, parity);
}

TrialExpectations sas_expectations(const ModelParams& params, const PhasePoint& point, Parity parity) {
  if (sas_is_singular(params, point, parity)) throw SingularityError("projected coherent state has zero norm");
  const ProjectedTerms t = projected_terms(params.n_atoms(), point, parity);
  return {0.5 * t.r2 * t.one_minus / t.one_plus, -params.j() * t.atomic};
}

// ---- minimization -------------------------------------------------------------

namespace {

/// Optimizer coordinates: q is scaled by sqrt(N) so both axes are O(1).
double q_scale(const ModelParams& params) { return std::sqrt(static_cast<double>(params.n_atoms())); }

/// theta < 0 or phi = pi is mapped onto the mirror image with phi = 0.
PhasePoint canonical(const PhasePoint& raw) {
  PhasePoint pt = normalize_phase_point(raw);
  if (std::abs(pt.phi - std::numbers::pi) < 1e-12) {
    pt.q = -pt.q;
    pt.p = -pt.p;
    pt.phi = 0.0;
  }
  if (pt.q == 0.0) pt.q = 0.0;  // drop negative zero
  return pt;
}

struct SliceObjective {
  const ModelParams& params;
  Parity parity;
  double scale;
  bool full;

  PhasePoint point(const Eigen::VectorXd& x) const {
    if (full) return {x[0] * scale, x[1] * scale, x[2], x[3]};
    return {x[0] * scale, 0.0, x[1], 0.0};
  }
  Eigen::VectorXd coords(const PhasePoint& pt) const {
    Eigen::VectorXd x(full ? 4 : 2);
    if (full)
      x << pt.q / scale, pt.p / scale, pt.theta, pt.phi;
    else
      x << pt.q / scale, pt.theta;
    return x;
  }
  double operator()(const Eigen::VectorXd& x) const {
    const PhasePoint pt = point(x);
    if (distance_to_singular_set(params.n_atoms(), pt, parity) < kSingularGuardRadius)
      return std::numeric_limits<double>::infinity();
    return projected_energy(params, pt, parity);
  }
};

SasMinimum finish(const ModelParams& params, Parity parity, const PhasePoint& raw) {
  SasMinimum out;
  out.parity = parity;
  out.n_atoms = params.n_atoms();
  out.gamma = params.gamma();
  out.point = canonical(raw);
  out.energy = projected_energy(params, out.point, parity);
  return out;
}

/// A seed inside the guard ball is pushed out along the q = -theta direction.
PhasePoint off_singular(const ModelParams& params, Parity parity, PhasePoint pt) {
  if (distance_to_singular_set(params.n_atoms(), pt, parity) < 1e-3) {
    pt.q -= 0.05;
    pt.theta += 0.05;
  }
  return pt;
}

SimplexResult run_simplex(const SliceObjective& objective, const PhasePoint& start, const SimplexOptions& simplex) {
  SimplexResult result = nelder_mead(objective, objective.coords(start), simplex);
  // retry policy: two more descents with a larger budget from the best vertex
  SimplexOptions retry = simplex;
  retry.max_evaluations *= 4;
  for (int attempt = 0; !result.converged && attempt < 2; ++attempt) {
    retry.initial_step *= 2.0;
    result = nelder_mead(objective, result.x, retry);
  }
  return result;
}

[[noreturn]] void throw_unconverged(const SliceObjective& objective, const SimplexResult& result) {
  const PhasePoint pt = objective.point(result.x);
  throw NumericError("simplex descent did not converge (diameter " + std::to_string(result.diameter) + ")",
                     pt.q, pt.theta, result.value);
}

}  // namespace

SasMinimum sas_local_minimize(const ModelParams& params, Parity parity, const PhasePoint& start,
                              const SimplexOptions& simplex) {
  const SliceObjective objective{params, parity, q_scale(params), false};
  const SimplexResult result = run_simplex(objective, off_singular(params, parity, start), simplex);
  if (!result.converged) throw_unconverged(objective, result);
  return finish(params, parity, objective.point(result.x));
}

SasMinimum sas_minimize(const ModelParams& params, Parity parity, const SasMinimizeOptions& options) {
  const SliceObjective objective{params, parity, q_scale(params), options.full_phase_space};

  std::vector<PhasePoint> seeds;
  seeds.push_back(off_singular(params, parity, PhasePoint{}));
  seeds.push_back(off_singular(params, parity, cs_critical_point(params, PhiBranch::zero).point));
  if (options.warm_start) seeds.push_back(off_singular(params, parity, canonical(*options.warm_start)));

  // coarse grid over q in [-Q, Q], theta in [0, pi]; Q bounds the CS minimizer
  const int n = std::max(options.grid_size, 1);
  const double q_max = 2.0 * std::sqrt(params.j()) * std::abs(params.gamma()) + 1.0;
  std::mt19937_64 rng(options.jitter_seed.value_or(0));
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);
  PhasePoint grid_best;
  double grid_best_value = std::numeric_limits<double>::infinity();
  for (int iq = 0; iq < n; ++iq) {
    for (int it = 0; it < n; ++it) {
      const double dq = options.jitter_seed ? jitter(rng) : 0.0;
      const double dt = options.jitter_seed ? jitter(rng) : 0.0;
      const PhasePoint pt{-q_max + 2.0 * q_max * (iq + 0.5 + dq) / n, 0.0,
                          std::numbers::pi * (it + 0.5 + dt) / n, 0.0};
      const double v = objective(objective.coords(pt));
      if (v < grid_best_value) {
        grid_best_value = v;
        grid_best = pt;
      }
    }
  }
  if (std::isfinite(grid_best_value)) seeds.push_back(grid_best);

  SimplexResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (const PhasePoint& seed : seeds) {
    SimplexResult r = nelder_mead(objective, objective.coords(seed), options.simplex);
    if (r.value < best.value || (!best.converged && r.converged && r.value <= best.value)) best = std::move(r);
  }
  if (!best.converged) best = run_simplex(objective, objective.point(best.x), options.simplex);
  if (!best.converged) throw_unconverged(objective, best);

  SasMinimum out = finish(params, parity, objective.point(best.x));
  if (options.full_phase_space) {
    // keep the full-space answer as found (p, phi are free there)
    out.point = normalize_phase_point(objective.point(best.x));
    out.energy = projected_energy(params, out.point, parity);
  }
  return out;
}

// ---- jump detection --------------------------------------------------------------

std::optional<JumpResult> sas_jump_gamma(int n_atoms, double omega_a, double gamma_lo, double gamma_hi,
                                         double target_resolution, const JumpOptions& options) {
  if (!(gamma_lo < gamma_hi)) throw DomainError("sas_jump_gamma requires gamma_lo < gamma_hi");
  if (!(target_resolution > 0.0)) throw DomainError("sas_jump_gamma requires a positive resolution");
  if (!(options.coarse_step > 0.0)) throw DomainError("coarse_step must be positive");

  const ModelParams base(n_atoms, omega_a, gamma_lo);
  SasMinimizeOptions global;
  global.jitter_seed = options.jitter_seed;

  // coarse ladder with warm starts, stop at the first discontinuity
  const auto steps = std::max<long>(1, std::lround(std::ceil((gamma_hi - gamma_lo) / options.coarse_step)));
  const double h = (gamma_hi - gamma_lo) / static_cast<double>(steps);
  SasMinimum prev = sas_minimize(base, Parity::even, global);
  double g_prev = gamma_lo;
  std::optional<SasMinimum> after;
  double g_after = 0.0;
  for (long k = 1; k <= steps; ++k) {
    const double g = k == steps ? gamma_hi : gamma_lo + h * static_cast<double>(k);
    global.warm_start = prev.point;
    SasMinimum cur = sas_minimize(base.with_gamma(g), Parity::even, global);
    if (std::abs(cur.point.q - prev.point.q) > kJumpThreshold) {
      after = cur;
      g_after = g;
      break;
    }
    prev = cur;
    g_prev = g;
  }
  if (!after) return std::nullopt;

  // branch continuation from each side, bisection on the energy crossing
  double a = g_prev;
  double b = g_after;
  SasMinimum lower = prev;    // branch that is global at a
  SasMinimum upper = *after;  // branch that is global at b
  const auto merged = [](const SasMinimum& x, const SasMinimum& y) {
    return std::abs(x.point.q - y.point.q) < 1e-6 * (1.0 + std::abs(x.point.q)) &&
           std::abs(x.point.theta - y.point.theta) < 1e-6;
  };
  while (b - a > target_resolution) {
    const double m = 0.5 * (a + b);
    const ModelParams pm = base.with_gamma(m);
    const SasMinimum lm = sas_local_minimize(pm, Parity::even, lower.point);
    const SasMinimum um = sas_local_minimize(pm, Parity::even, upper.point);
    if (merged(lm, um)) {
      // one branch has ended before m; the survivor is global there
      const bool survivor_is_lower =
          std::abs(lm.point.q - lower.point.q) <= std::abs(lm.point.q - upper.point.q);
      if (survivor_is_lower) {
        a = m;
        lower = lm;
      } else {
        b = m;
        upper = um;
      }
      continue;
    }
    if (lm.energy < um.energy) {
      a = m;
      lower = lm;
    } else {
      b = m;
      upper = um;
    }
  }

  // linear interpolation of the energy difference inside the final bracket
  double gamma_c = 0.5 * (a + b);
  try {
    const SasMinimum upper_at_a = sas_local_minimize(base.with_gamma(a), Parity::even, upper.point);
    const SasMinimum lower_at_b = sas_local_minimize(base.with_gamma(b), Parity::even, lower.point);
    if (!merged(upper_at_a, lower) && !merged(lower_at_b, upper)) {
      const double da = lower.energy - upper_at_a.energy;  // < 0
      const double db = lower_at_b.energy - upper.energy;  // > 0
      if (da < 0.0 && db > 0.0) gamma_c = a + (b - a) * (-da) / (db - da);
    }
  } catch (const NumericError&) {
    // keep the midpoint
  }

  if (std::abs(upper.point.q - lower.point.q) <= kJumpThreshold) return std::nullopt;
  JumpResult out;
  out.gamma_c = gamma_c;
  out.q_before = lower.point.q;
  out.q_after = upper.point.q;
  out.theta_before = lower.point.theta;
  out.theta_after = upper.point.theta;
  out.resolution = b - a;
  return out;
}

// ---- grids ----------------------------------------------------------------

std::vector<double> AxisRange::points() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step))
    throw DomainError("axis range must be finite");
  if (!(step > 0.0)) throw DomainError("axis step must be positive");
  if (hi < lo) throw DomainError("axis range has hi < lo");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + step * static_cast<double>(i);
  return out;
}

SurfaceGrid surface_grid(const ModelParams& params, SurfaceKind kind, const AxisRange& q_range,
                         const AxisRange& theta_range) {
  SurfaceGrid grid;
  grid.q = q_range.points();
  grid.theta = theta_range.points();
  grid.energy.reserve(grid.q.size() * grid.theta.size());
  for (double q : grid.q) {
    for (double theta : grid.theta) {
      const PhasePoint pt{q, 0.0, theta, 0.0};
      switch (kind) {
        case SurfaceKind::cs: grid.energy.emplace_back(cs_energy(params, pt)); break;
        case SurfaceKind::sas_even:
        case SurfaceKind::sas_odd: {
          const Parity parity = kind == SurfaceKind::sas_even ? Parity::even : Parity::odd;
          if (sas_is_singular(params, pt, parity))
            grid.energy.emplace_back(std::nullopt);
          else
            grid.energy.emplace_back(projected_energy(params, pt, parity));
          break;
        }
      }
    }
  }
  return grid;
}

std::vector<GridIndex> strict_local_minima(const SurfaceGrid& grid) {
  std::vector<GridIndex> out;
  const std::size_t nq = grid.q.size();
  const std::size_t nt = grid.theta.size();
  if (nq < 3 || nt < 3) return out;
  for (std::size_t i = 1; i + 1 < nq; ++i) {
    for (std::size_t k = 1; k + 1 < nt; ++k) {
      const auto& centre = grid.at(i, k);
      if (!centre) continue;
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di) {
        for (int dk = -1; dk <= 1 && is_min; ++dk) {
          if (di == 0 && dk == 0) continue;
          const auto& nb = grid.at(i + di, k + dk);
          if (!nb || !(*centre < *nb)) is_min = false;
        }
      }
      if (is_min) out.push_back({i, k});
    }
  }
  return out;
}

}  // namespace dicke
