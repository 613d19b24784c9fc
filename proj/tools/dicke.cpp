// Command-line front end: one subcommand per computation.
//
// Data goes to --out (a file, or '-' for standard output); summaries go to
// standard error. Relative output paths are resolved against
// $DICKE_OUTPUT_DIR when it is set.
//
// Exit codes: 0 ok, 1 usage, 2 numeric failure (including error markers in a
// sweep), 3 I/O.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dicke/errors.hpp"
#include "dicke/exact.hpp"
#include "dicke/io.hpp"
#include "dicke/semiclassical.hpp"
#include "dicke/sweep.hpp"
#include "dicke/version.hpp"

namespace fs = std::filesystem;
using namespace dicke;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitIo = 3;

struct Globals {
  int jobs = 1;
  bool quiet = false;
  int verbose = 0;
};

Globals globals;

std::ostream& summary() {
  static std::ostringstream sink;
  if (globals.quiet) {
    sink.str({});
    return sink;
  }
  return std::cerr;
}

/// Output channel: standard output for "-", otherwise a file.
class Output {
 public:
  explicit Output(const std::string& target) {
    if (target.empty() || target == "-") return;
    path_ = fs::path(target);
    if (path_->is_relative()) {
      if (const char* dir = std::getenv("DICKE_OUTPUT_DIR"); dir && *dir) path_ = fs::path(dir) / *path_;
    }
    if (path_->has_parent_path()) {
      std::error_code ec;
      fs::create_directories(path_->parent_path(), ec);
    }
    file_ = std::make_unique<std::ofstream>(*path_, std::ios::binary);
    if (!*file_) throw IoError("cannot open " + path_->string() + " for writing");
  }

  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  const std::optional<fs::path>& path() const { return path_; }

  void close() {
    stream().flush();
    if (!stream()) throw IoError("write failed" + (path_ ? ": " + path_->string() : std::string()));
  }

 private:
  std::optional<fs::path> path_;
  std::unique_ptr<std::ofstream> file_;
};

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const std::string& n : names) {
    const auto m = parse_method(n);
    if (!m) throw CLI::ValidationError("--methods", "unknown method '" + n + "'");
    out.push_back(*m);
  }
  return out;
}

// ---- sweep-style options ----------------------------------------------------

struct SweepFlags {
  std::string config_file;
  std::vector<int> n_atoms;
  std::optional<double> omega_a, gamma_lo, gamma_hi, gamma_step, delta_gamma, tol, simplex_tol;
  std::vector<double> gamma_list;
  std::vector<std::string> methods;
  std::optional<int> n_max;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool timing = false;
  std::string resume;
  std::string meta;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "Config file (key = value); flags override it");
    app->add_option("--n-atoms", n_atoms, "Atom numbers N (default 20,60)")->delimiter(',');
    app->add_option("--omega-a", omega_a, "Atomic frequency omega_A (default 1)");
    app->add_option("--gamma-lo", gamma_lo, "First coupling of the grid (default 0)");
    app->add_option("--gamma-hi", gamma_hi, "Last coupling of the grid (default 2)");
    app->add_option("--gamma-step", gamma_step, "Grid step (default 0.01)");
    app->add_option("--gamma-list", gamma_list, "Explicit ascending couplings; replaces lo/hi/step")
        ->delimiter(',');
    app->add_option("--methods", methods,
                    "Subset of cs,sas_even,sas_odd,exact_even,exact_odd (default all)")
        ->delimiter(',');
    app->add_option("--delta-gamma", delta_gamma, "Fidelity shift for the exact methods (default 0.001)");
    app->add_option("--tol", tol, "Fock truncation tolerance (default 1e-9)");
    app->add_option("--simplex-tol", simplex_tol, "SAS simplex diameter tolerance (default 1e-10)");
    app->add_option("--n-max", n_max, "Fixed photon cutoff; 0 selects it per N (default 0)");
    app->add_option("--seed", seed, "Seed for the multistart jitter (default 0)");
    app->add_option("--out", out, "Output CSV path or '-' for stdout (default -)");
    app->add_flag("--timing", timing, "Append wall-clock columns (output no longer reproducible)");
    app->add_option("--resume", resume, "Previous output CSV; error-free rows are reused");
    app->add_option("--meta", meta, "Metadata sidecar path (default <out>.meta for file output)");
  }

  SweepConfig config() const {
    SweepConfig c = config_file.empty() ? SweepConfig{} : read_config(config_file);
    if (!n_atoms.empty()) c.n_atoms = n_atoms;
    if (omega_a) c.omega_a = *omega_a;
    if (gamma_lo) c.gamma_lo = *gamma_lo;
    if (gamma_hi) c.gamma_hi = *gamma_hi;
    if (gamma_step) c.gamma_step = *gamma_step;
    if (!gamma_list.empty()) c.gamma_list = gamma_list;
    if (!methods.empty()) c.methods = parse_methods(methods);
    if (delta_gamma) c.delta_gamma = *delta_gamma;
    if (tol) c.tol = *tol;
    if (simplex_tol) c.simplex_tol = *simplex_tol;
    if (n_max) c.n_max = *n_max;
    if (seed) c.seed = *seed;
    if (out) c.out = *out;
    if (timing) c.timing = true;
    c.jobs = globals.jobs;
    c.validate();
    return c;
  }
};

void write_sidecar(const SweepFlags& flags, const Output& out, const Metadata& meta) {
  if (!flags.meta.empty()) {
    write_metadata(meta, fs::path(flags.meta));
  } else if (out.path()) {
    write_metadata(meta, metadata_path(*out.path()));
  }
}

std::size_t count_errors(const std::vector<SweepRecord>& records) {
  std::size_t n = 0;
  for (const SweepRecord& r : records) {
    for (const auto& m : r.results) n += m && m->error ? 1 : 0;
  }
  return n;
}

int cmd_sweep(const SweepFlags& flags) {
  const SweepConfig config = flags.config();
  const auto completed = flags.resume.empty() ? std::vector<SweepRecord>{} : read_records(fs::path(flags.resume));
  Output out(config.out);
  const SweepResult result = run_sweep(config, completed);
  write_records(result.records, out.stream(), config.timing);
  out.close();
  write_sidecar(flags, out, result.metadata);

  const std::size_t errors = count_errors(result.records);
  summary() << "sweep: " << result.records.size() << " records";
  if (!completed.empty()) {
    for (const auto& [k, v] : result.metadata)
      if (k == "resumed_rows") summary() << " (resumed " << v << " of " << completed.size() << " offered rows)";
  }
  summary() << ", " << errors << " error markers\n";
  if (globals.verbose > 0) {
    for (const auto& [k, v] : result.metadata) summary() << "  " << k << " = " << v << '\n';
  }
  return errors == 0 ? kExitOk : kExitNumeric;
}

int cmd_curve(const SweepFlags& flags) {
  const SweepConfig config = flags.config();
  Output out(config.out);
  const SweepResult result = run_sweep(config);
  const auto rows = universal_curve_dataset(result.records, config.omega_a);
  write_curve(rows, out.stream());
  out.close();
  write_sidecar(flags, out, result.metadata);

  for (Method m : config.methods) {
    double worst = 0.0;
    std::size_t ok = 0, outside = 0;
    for (const CurveRow& r : rows) {
      if (r.method != m) continue;
      if (r.flag == CurveFlag::ok) {
        ++ok;
        worst = std::max(worst, std::abs(*r.residual));
      }
      if (r.flag == CurveFlag::out_of_domain) ++outside;
    }
    summary() << "curve: " << to_string(m) << ": " << ok << " points, max |residual| " << worst << ", " << outside
          << " with theta >= pi/2\n";
  }
  return count_errors(result.records) == 0 ? kExitOk : kExitNumeric;
}

// ---- critical ---------------------------------------------------------------

struct CriticalFlags {
  std::vector<int> n_atoms{20};
  double omega_a = 1.0;
  std::vector<std::string> methods{"cs", "sas", "exact"};
  std::optional<double> jump_lo, jump_hi, fid_lo, fid_hi;
  double resolution = 1e-4;
  double fid_step = 0.001;
  double delta_gamma = 0.001;
  double tol = 1e-9;
  std::string out = "-";
};

int cmd_critical(const CriticalFlags& f) {
  for (const std::string& m : f.methods) {
    if (m != "cs" && m != "sas" && m != "exact")
      throw CLI::ValidationError("--methods", "expected cs, sas or exact, got '" + m + "'");
  }
  const auto wants = [&](const char* m) { return std::find(f.methods.begin(), f.methods.end(), m) != f.methods.end(); };
  const double gc = critical_coupling(f.omega_a);
  const double jump_lo = f.jump_lo.value_or(gc);
  const double jump_hi = f.jump_hi.value_or(1.5 * gc);
  const double fid_lo = f.fid_lo.value_or(0.9 * gc);
  const double fid_hi = f.fid_hi.value_or(1.4 * gc);

  Output out(f.out);
  std::ostream& os = out.stream();
  os << "n_atoms,method,gamma_c,uncertainty,detail\n";
  int status = kExitOk;
  for (int n : f.n_atoms) {
    ModelParams(n, f.omega_a, 0.0);  // validates
    if (wants("cs")) {
      os << n << ",cs," << format_double(gc) << ",0,analytic\n";
      summary() << "N=" << n << " cs     gamma_c = " << gc << " (analytic)\n";
    }
    if (wants("sas")) {
      const auto jump = sas_jump_gamma(n, f.omega_a, jump_lo, jump_hi, f.resolution);
      if (jump) {
        os << n << ",sas," << format_double(jump->gamma_c) << ',' << format_double(jump->resolution)
           << ",jump q " << format_double(jump->q_before) << " -> " << format_double(jump->q_after) << '\n';
        summary() << "N=" << n << " sas    gamma_c = " << jump->gamma_c << " +- " << jump->resolution
              << " (even-surface minimizer jump)\n";
      } else {
        os << n << ",sas,NA,NA,no jump in [" << format_double(jump_lo) << " " << format_double(jump_hi) << "]\n";
        summary() << "N=" << n << " sas    no jump found in [" << jump_lo << ", " << jump_hi << "]\n";
        status = kExitNumeric;
      }
    }
    if (wants("exact")) {
      const auto grid = AxisRange{fid_lo, fid_hi, f.fid_step}.points();
      FidelityScanOptions options;
      options.truncation_tol = f.tol;
      options.jobs = globals.jobs;
      const auto scan = fidelity_scan(ModelParams(n, f.omega_a, 0.0), grid, f.delta_gamma, options);
      os << n << ",exact," << format_double(scan.gamma_c) << ',' << format_double(f.fid_step)
         << ",fidelity minimum n_max " << scan.n_max << '\n';
      summary() << "N=" << n << " exact  gamma_c = " << scan.gamma_c << " +- " << f.fid_step
            << " (ground-state fidelity minimum, n_max " << scan.n_max << ")\n";
    }
  }
  out.close();
  return status;
}

// ---- fidelity ---------------------------------------------------------------

struct FidelityFlags {
  int n_atoms = 20;
  double omega_a = 1.0;
  double gamma_lo = 0.45;
  double gamma_hi = 0.70;
  double gamma_step = 0.001;
  double delta_gamma = 0.001;
  std::string sector = "even";
  int n_max = 0;
  double tol = 1e-9;
  std::string out = "-";
};

int cmd_fidelity(const FidelityFlags& f) {
  FidelityScanOptions options;
  options.sector = f.sector == "odd" ? Sector::odd : Sector::even;
  options.n_max = f.n_max;
  options.truncation_tol = f.tol;
  options.jobs = globals.jobs;
  const auto grid = AxisRange{f.gamma_lo, f.gamma_hi, f.gamma_step}.points();
  Output out(f.out);
  const auto scan = fidelity_scan(ModelParams(f.n_atoms, f.omega_a, 0.0), grid, f.delta_gamma, options);
  write_fidelity(scan, out.stream());
  out.close();
  std::size_t flagged = std::count(scan.flagged.begin(), scan.flagged.end(), true);
  summary() << "fidelity: N=" << f.n_atoms << " n_max=" << scan.n_max << " minimum at gamma="
        << scan.gamma_grid[scan.argmin] << " (F=" << scan.fidelity[scan.argmin] << "), refined gamma_c="
        << scan.gamma_c << ", " << flagged << " degenerate points\n";
  return kExitOk;
}

// ---- surface ----------------------------------------------------------------

struct SurfaceFlags {
  int n_atoms = 20;
  double omega_a = 1.0;
  double gamma = 0.56;
  std::string kind = "sas_even";
  double q_lo = -4.0, q_hi = 1.0, q_step = 0.03;
  double theta_lo = 0.0, theta_hi = 1.2, theta_step = 0.01;
  std::string out = "-";
};

int cmd_surface(const SurfaceFlags& f) {
  const SurfaceKind kind = f.kind == "cs" ? SurfaceKind::cs : f.kind == "sas_odd" ? SurfaceKind::sas_odd
                                                                                   : SurfaceKind::sas_even;
  const ModelParams params(f.n_atoms, f.omega_a, f.gamma);
  Output out(f.out);
  const auto grid = surface_grid(params, kind, {f.q_lo, f.q_hi, f.q_step}, {f.theta_lo, f.theta_hi, f.theta_step});
  write_surface(grid, out.stream());
  out.close();
  const auto minima = strict_local_minima(grid);
  summary() << "surface: " << grid.q.size() << " x " << grid.theta.size() << " points, " << minima.size()
        << " grid local minima\n";
  for (const GridIndex& m : minima) {
    summary() << "  E=" << *grid.at(m.iq, m.itheta) << " q=" << grid.q[m.iq] << " theta=" << grid.theta[m.itheta]
          << '\n';
  }
  return kExitOk;
}

// ---- jump -------------------------------------------------------------------

struct JumpFlags {
  int n_atoms = 20;
  double omega_a = 1.0;
  std::optional<double> gamma_lo, gamma_hi;
  double resolution = 1e-4;
  double coarse_step = 0.005;
  std::optional<std::uint64_t> seed;
  std::string out = "-";
};

int cmd_jump(const JumpFlags& f) {
  const double gc = critical_coupling(f.omega_a);
  JumpOptions options;
  options.coarse_step = f.coarse_step;
  options.jitter_seed = f.seed;
  Output out(f.out);
  const auto jump =
      sas_jump_gamma(f.n_atoms, f.omega_a, f.gamma_lo.value_or(gc), f.gamma_hi.value_or(1.5 * gc), f.resolution, options);
  std::ostream& os = out.stream();
  os << "n_atoms,gamma_c,resolution,q_before,q_after,theta_before,theta_after\n";
  if (jump) {
    os << f.n_atoms << ',' << format_double(jump->gamma_c) << ',' << format_double(jump->resolution) << ','
       << format_double(jump->q_before) << ',' << format_double(jump->q_after) << ','
       << format_double(jump->theta_before) << ',' << format_double(jump->theta_after) << '\n';
    summary() << "jump: N=" << f.n_atoms << " gamma_c=" << jump->gamma_c << " +- " << jump->resolution << ", q "
          << jump->q_before << " -> " << jump->q_after << '\n';
  } else {
    os << f.n_atoms << ",NA,NA,NA,NA,NA,NA\n";
    summary() << "jump: no discontinuity above " << kJumpThreshold << " in the coupling range\n";
  }
  out.close();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-N Dicke model: mean-field, symmetry-adapted and exact ground states"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  app.add_option("-j,--jobs", globals.jobs, "Worker threads (default 1)")->check(CLI::PositiveNumber);
  app.add_flag("-q,--quiet", globals.quiet, "Suppress summaries on stderr");
  app.add_flag("-v,--verbose", globals.verbose, "More detail on stderr (repeatable)");

  CriticalFlags critical;
  auto* c = app.add_subcommand("critical", "Critical coupling by each method");
  c->add_option("--n-atoms", critical.n_atoms, "Atom numbers N (default 20)")->delimiter(',');
  c->add_option("--omega-a", critical.omega_a, "Atomic frequency (default 1)");
  c->add_option("--methods", critical.methods, "Subset of cs,sas,exact (default all)")->delimiter(',');
  c->add_option("--jump-lo", critical.jump_lo, "Lower end of the SAS jump search (default gamma_c)");
  c->add_option("--jump-hi", critical.jump_hi, "Upper end of the SAS jump search (default 1.5 gamma_c)");
  c->add_option("--resolution", critical.resolution, "Target bracket width of the SAS jump (default 1e-4)");
  c->add_option("--fidelity-lo", critical.fid_lo, "First fidelity grid coupling (default 0.9 gamma_c)");
  c->add_option("--fidelity-hi", critical.fid_hi, "Last fidelity grid coupling (default 1.4 gamma_c)");
  c->add_option("--fidelity-step", critical.fid_step, "Fidelity grid step (default 0.001)");
  c->add_option("--delta-gamma", critical.delta_gamma, "Fidelity shift (default 0.001)");
  c->add_option("--tol", critical.tol, "Fock truncation tolerance (default 1e-9)");
  c->add_option("--out", critical.out, "Output CSV path or '-' (default -)");

  SweepFlags sweep;
  auto* s = app.add_subcommand("sweep", "Energies and coordinates of every method over a coupling grid");
  sweep.attach(s);

  SweepFlags curve;
  auto* u = app.add_subcommand("curve", "Distance of each method's minimizer from the universal curve");
  curve.attach(u);

  FidelityFlags fid;
  auto* fi = app.add_subcommand("fidelity", "Exact ground-state fidelity scan");
  fi->add_option("--n-atoms", fid.n_atoms, "Atom number N (default 20)");
  fi->add_option("--omega-a", fid.omega_a, "Atomic frequency (default 1)");
  fi->add_option("--gamma-lo", fid.gamma_lo, "First coupling (default 0.45)");
  fi->add_option("--gamma-hi", fid.gamma_hi, "Last coupling (default 0.70)");
  fi->add_option("--gamma-step", fid.gamma_step, "Grid step (default 0.001)");
  fi->add_option("--delta-gamma", fid.delta_gamma, "Fidelity shift (default 0.001)");
  fi->add_option("--sector", fid.sector, "even or odd (default even)")->check(CLI::IsMember({"even", "odd"}));
  fi->add_option("--n-max", fid.n_max, "Photon cutoff; 0 selects it automatically (default 0)");
  fi->add_option("--tol", fid.tol, "Fock truncation tolerance (default 1e-9)");
  fi->add_option("--out", fid.out, "Output CSV path or '-' (default -)");

  SurfaceFlags surf;
  auto* su = app.add_subcommand("surface", "Energy surface over (q, theta) at p = 0, phi = 0");
  su->add_option("--n-atoms", surf.n_atoms, "Atom number N (default 20)");
  su->add_option("--omega-a", surf.omega_a, "Atomic frequency (default 1)");
  su->add_option("--gamma", surf.gamma, "Coupling (default 0.56)");
  su->add_option("--kind", surf.kind, "cs, sas_even or sas_odd (default sas_even)")
      ->check(CLI::IsMember({"cs", "sas_even", "sas_odd"}));
  su->add_option("--q-lo", surf.q_lo, "Smallest q (default -4)");
  su->add_option("--q-hi", surf.q_hi, "Largest q (default 1)");
  su->add_option("--q-step", surf.q_step, "q step (default 0.03)");
  su->add_option("--theta-lo", surf.theta_lo, "Smallest theta (default 0)");
  su->add_option("--theta-hi", surf.theta_hi, "Largest theta (default 1.2)");
  su->add_option("--theta-step", surf.theta_step, "theta step (default 0.01)");
  su->add_option("--out", surf.out, "Output CSV path or '-' (default -)");

  JumpFlags jump;
  auto* ju = app.add_subcommand("jump", "Coupling where the even-SAS minimizer jumps");
  ju->add_option("--n-atoms", jump.n_atoms, "Atom number N (default 20)");
  ju->add_option("--omega-a", jump.omega_a, "Atomic frequency (default 1)");
  ju->add_option("--gamma-lo", jump.gamma_lo, "Lower end of the search (default gamma_c)");
  ju->add_option("--gamma-hi", jump.gamma_hi, "Upper end of the search (default 1.5 gamma_c)");
  ju->add_option("--resolution", jump.resolution, "Target bracket width (default 1e-4)");
  ju->add_option("--coarse-step", jump.coarse_step, "Step of the bracketing ladder (default 0.005)");
  ju->add_option("--seed", jump.seed, "Seed for the multistart jitter (default none)");
  ju->add_option("--out", jump.out, "Output CSV path or '-' (default -)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*c) return cmd_critical(critical);
    if (*s) return cmd_sweep(sweep);
    if (*u) return cmd_curve(curve);
    if (*fi) return cmd_fidelity(fid);
    if (*su) return cmd_surface(surf);
    if (*ju) return cmd_jump(jump);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const ResourceError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}
