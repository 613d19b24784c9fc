// Acceptance suite: one PASS/FAIL line per criterion.
//
//   dicke_acceptance            run every criterion
//   dicke_acceptance --only 5   run one criterion
//
// Exit status is 0 when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>

#include "../oracle.hpp"
#include "dicke/exact.hpp"
#include "dicke/semiclassical.hpp"
#include "dicke/sweep.hpp"

using namespace dicke;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

std::vector<double> grid(double lo, double hi, double step) { return AxisRange{lo, hi, step}.points(); }

// 1 -------------------------------------------------------------------------
Outcome cs_critical_coupling() {
  const double gc = critical_coupling(1.0);
  // the analytic value must also be where the CS minimum leaves the origin
  const auto below = cs_critical_point(ModelParams(20, 1.0, gc * (1 - 1e-9)), PhiBranch::zero);
  const auto above = cs_critical_point(ModelParams(20, 1.0, gc * (1 + 1e-6)), PhiBranch::zero);
  const bool ok = std::abs(gc - 0.5) <= 1e-12 && below.branch == Branch::normal && above.branch == Branch::superradiant;
  return {ok, "gamma_c=" + fmt(gc, 17)};
}

// 2 -------------------------------------------------------------------------
Outcome sas_jump_n20() {
  const auto r = sas_jump_gamma(20, 1.0, 0.4, 0.7, 1e-4);
  if (!r) return {false, "no jump found in [0.4, 0.7]"};
  const bool ok = std::abs(r->gamma_c - 0.553) <= 0.002;
  return {ok, "gamma_c=" + fmt(r->gamma_c) + " q: " + fmt(r->q_before, 4) + " -> " + fmt(r->q_after, 4)};
}

// 3 -------------------------------------------------------------------------
double fidelity_minimum(int n_atoms, double lo, double hi) {
  const auto g = grid(lo, hi, 0.001);
  return fidelity_scan(ModelParams(n_atoms, 1.0, 0.0), g, 0.001, {.truncation_tol = 1e-9}).gamma_c;
}

Outcome exact_fidelity_n20() {
  const auto g = grid(0.45, 0.70, 0.001);
  const auto scan = fidelity_scan(ModelParams(20, 1.0, 0.0), g, 0.001, {.truncation_tol = 1e-9});
  const bool ok = std::abs(scan.gamma_c - 0.567) <= 0.003;
  return {ok, "gamma_c=" + fmt(scan.gamma_c) + " F_min=" + fmt(scan.fidelity[scan.argmin]) +
                  " n_max=" + std::to_string(scan.n_max)};
}

// 4 -------------------------------------------------------------------------
double max_abs_residual(const std::vector<CurveRow>& rows, Method m, double gamma_lo, bool skip_even_window,
                        int& missing) {
  double worst = 0.0;
  for (const CurveRow& r : rows) {
    if (r.method != m || r.gamma < gamma_lo - 1e-12) continue;
    if (r.flag != CurveFlag::ok) {
      ++missing;
      continue;
    }
    if (skip_even_window && *r.theta > 0.3 && *r.theta < 0.6) continue;
    worst = std::max(worst, std::abs(*r.residual));
  }
  return worst;
}

Outcome universal_curve_identity() {
  // (a) CS critical points
  double cs_worst = 0.0;
  for (double g : grid(0.501, 3.0, 0.001)) {
    const auto cp = cs_critical_point(ModelParams(20, 1.0, g), PhiBranch::zero);
    cs_worst = std::max(cs_worst, std::abs(cp.point.q / std::sqrt(20.0) - universal_curve(cp.point.theta, 1.0)));
  }
  const bool a = cs_worst <= 1e-12;

  // (b) SAS minima, both parities, N = 20
  SweepConfig sas;
  sas.n_atoms = {20};
  sas.gamma_lo = 0.0;
  sas.gamma_hi = 2.0;
  sas.gamma_step = 0.01;
  sas.methods = {Method::sas_even, Method::sas_odd};
  const auto sas_rows = universal_curve_dataset(sas);
  int sas_missing = 0;
  const double even_worst = max_abs_residual(sas_rows, Method::sas_even, 0.0, true, sas_missing);
  const double odd_worst = max_abs_residual(sas_rows, Method::sas_odd, 0.0, true, sas_missing);
  const bool b = sas_missing == 0 && even_worst <= 0.02 && odd_worst <= 0.02;

  // (c) exact ground states, N = 20 and N = 60
  SweepConfig exact;
  exact.n_atoms = {20, 60};
  exact.gamma_lo = 0.7;
  exact.gamma_hi = 2.0;
  exact.gamma_step = 0.05;
  exact.methods = {Method::exact_even};
  const auto exact_rows = universal_curve_dataset(exact);
  std::vector<CurveRow> n20;
  std::vector<CurveRow> n60;
  for (const CurveRow& r : exact_rows) (r.n_atoms == 20 ? n20 : n60).push_back(r);
  int exact_missing = 0;
  const double r20 = max_abs_residual(n20, Method::exact_even, 0.7, false, exact_missing);
  const double r60 = max_abs_residual(n60, Method::exact_even, 0.7, false, exact_missing);
  const bool c = exact_missing == 0 && r20 <= 0.05 && r60 < r20;

  return {a && b && c, "(a) cs=" + fmt(cs_worst, 3) + " (b) sas_even=" + fmt(even_worst, 3) +
                           " sas_odd=" + fmt(odd_worst, 3) + " (c) exact N=20 " + fmt(r20, 3) + ", N=60 " +
                           fmt(r60, 3)};
}

// 5 -------------------------------------------------------------------------
struct Triple {
  double energy;
  double q;
  double theta;
};

Outcome surface_regression() {
  const Triple targets[] = {{-10.1963, -0.9649, 0.3033}, {-10.2559, -2.0, 0.6151}};
  std::vector<SasMinimum> minima;
  SasMinimizeOptions options;
  for (double g : grid(0.54, 0.57, 0.0005)) {
    const SasMinimum m = sas_minimize(ModelParams(20, 1.0, g), Parity::even, options);
    options.warm_start = m.point;
    minima.push_back(m);
  }
  bool all = true;
  std::string detail;
  for (const Triple& t : targets) {
    const SasMinimum* best = nullptr;
    double best_dev = std::numeric_limits<double>::infinity();
    for (const SasMinimum& m : minima) {
      const double dev = std::max({std::abs(m.energy - t.energy), std::abs(m.point.q - t.q),
                                   std::abs(m.point.theta - t.theta)});
      if (dev < best_dev) {
        best_dev = dev;
        best = &m;
      }
    }
    const bool ok = best_dev <= 1e-2;
    all = all && ok;
    detail += (detail.empty() ? "" : "; ") + std::string("target (") + fmt(t.energy) + ", " + fmt(t.q) + ", " +
              fmt(t.theta) + ") closest at gamma=" + fmt(best->gamma, 4) + " (" + fmt(best->energy) + ", " +
              fmt(best->point.q) + ", " + fmt(best->point.theta) + ") dev=" + fmt(best_dev, 3) +
              (ok ? "" : " MISS");
  }
  return {all, detail};
}

// 6 -------------------------------------------------------------------------
Outcome variational_ordering() {
  double worst = std::numeric_limits<double>::infinity();
  for (double g : {0.0, 0.25, 0.5, 0.553, 0.6, 1.0, 2.0}) {
    const ModelParams p(20, 1.0, g);
    const int n_max = select_truncation(p, 1e-9);
    const double ex_even = sector_ground_state(p, n_max, Parity::even).energy();
    const double ex_odd = sector_ground_state(p, n_max, Parity::odd).energy();
    const double sas_even = sas_minimize(p, Parity::even).energy;
    const double sas_odd = sas_minimize(p, Parity::odd).energy;
    const double cs = cs_critical_point(p, PhiBranch::zero).energy;
    worst = std::min({worst, sas_even - ex_even, cs - sas_even, sas_odd - ex_odd});
  }
  return {worst >= -1e-9, "smallest slack=" + fmt(worst, 3)};
}

// 7 -------------------------------------------------------------------------
Outcome thermodynamic_limit() {
  // superradiant CS minimum at N = 100, then held at fixed q/sqrt(N) and theta
  const double gamma = 0.5002;
  const auto cp = cs_critical_point(ModelParams(100, 1.0, gamma), PhiBranch::zero);
  const double q_scaled = cp.point.q / 10.0;
  const double theta = cp.point.theta;
  std::vector<double> gaps;
  std::string detail = "gamma=" + fmt(gamma) + " theta=" + fmt(theta, 4) + " q/sqrt(N)=" + fmt(q_scaled, 4);
  for (int n : {100, 1000, 10000}) {
    const ModelParams p(n, 1.0, gamma);
    const PhasePoint x{q_scaled * std::sqrt(static_cast<double>(n)), 0.0, theta, 0.0};
    const double cs = cs_energy(p, x) / n;
    const double gap = std::max(std::abs(sas_energy(p, x, Parity::even) / n - cs),
                                std::abs(sas_energy(p, x, Parity::odd) / n - cs));
    gaps.push_back(gap);
    detail += " N=" + std::to_string(n) + ":" + fmt(gap, 3);
  }
  const bool ok = gaps[0] > gaps[1] && gaps[1] > gaps[2] && gaps[2] < 1e-3;
  return {ok, detail};
}

// 8 -------------------------------------------------------------------------
Outcome oracle_equivalence() {
  const int n_atoms = 4;
  const int n_max = 6;
  const double gamma = 0.9;
  const Eigen::MatrixXd full = oracle::dense_hamiltonian(n_atoms, 1.0, gamma, n_max);
  std::vector<Eigen::Index> order;
  for (int want : {0, 1}) {
    for (int nu = 0; nu <= n_max; ++nu)
      for (int k = 0; k <= n_atoms; ++k)
        if ((nu + k) % 2 == want) order.push_back(nu * (n_atoms + 1) + k);
  }
  const auto n = static_cast<Eigen::Index>(order.size());
  Eigen::MatrixXd permuted(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) permuted(a, b) = full(order[a], order[b]);

  const ModelParams p(n_atoms, 1.0, gamma);
  std::vector<double> sector_values;
  Eigen::Index n_even = 0;
  for (Sector s : {Sector::even, Sector::odd}) {
    const HamiltonianMatrix h = build_hamiltonian(p, build_basis(p, n_max, s));
    if (s == Sector::even) n_even = static_cast<Eigen::Index>(h.dimension());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense());
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) sector_values.push_back(es.eigenvalues()[i]);
  }
  const double off_block = std::max(permuted.topRightCorner(n_even, n - n_even).cwiseAbs().maxCoeff(),
                                    permuted.bottomLeftCorner(n - n_even, n_even).cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(full);
  std::sort(sector_values.begin(), sector_values.end());
  double worst = sector_values.size() == static_cast<std::size_t>(n) ? 0.0 : 1.0;
  for (std::size_t i = 0; i < sector_values.size() && i < static_cast<std::size_t>(n); ++i)
    worst = std::max(worst, std::abs(sector_values[i] - ref.eigenvalues()[static_cast<Eigen::Index>(i)]));
  return {off_block == 0.0 && worst <= 1e-10, "off-block max=" + fmt(off_block, 3) + " eigenvalue diff=" + fmt(worst, 3)};
}

// 9 -------------------------------------------------------------------------
Outcome finite_size_trend() {
  std::vector<double> jump;
  std::vector<double> fid;
  std::string detail;
  for (int n : {20, 40, 60}) {
    const auto r = sas_jump_gamma(n, 1.0, 0.4, 0.7, 1e-4);
    jump.push_back(r ? r->gamma_c : std::numeric_limits<double>::quiet_NaN());
    fid.push_back(fidelity_minimum(n, 0.50, 0.60));
    detail += (detail.empty() ? "" : " ") + std::string("N=") + std::to_string(n) + " jump=" + fmt(jump.back(), 5) +
              " fidelity=" + fmt(fid.back(), 5);
  }
  const auto decreasing_above_half = [](const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!(v[i] > 0.5)) return false;
      if (i > 0 && !(v[i] < v[i - 1])) return false;
    }
    return true;
  };
  return {decreasing_above_half(jump) && decreasing_above_half(fid), detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite"};
  std::vector<int> only;
  app.add_option("--only", only, "criterion numbers to run")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"cs critical coupling", cs_critical_coupling},
      {"sas jump N=20", sas_jump_n20},
      {"exact fidelity minimum N=20", exact_fidelity_n20},
      {"universal curve", universal_curve_identity},
      {"energy surface regression", surface_regression},
      {"variational ordering", variational_ordering},
      {"thermodynamic limit", thermodynamic_limit},
      {"oracle equivalence", oracle_equivalence},
      {"finite-size trend", finite_size_trend},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), number) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s %d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", number, criteria[i].first.c_str(),
                o.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
