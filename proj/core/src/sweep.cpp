#include "dicke/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <numbers>
#include <string>
#include <tuple>

#include "dicke/errors.hpp"
#include "dicke/exact.hpp"
#include "dicke/io.hpp"
#include "dicke/parallel.hpp"
#include "dicke/semiclassical.hpp"
#include "dicke/version.hpp"

namespace dicke {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::cs: return "cs";
    case Method::sas_even: return "sas_even";
    case Method::sas_odd: return "sas_odd";
    case Method::exact_even: return "exact_even";
    case Method::exact_odd: return "exact_odd";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::string_view to_string(CurveFlag flag) {
  switch (flag) {
    case CurveFlag::ok: return "ok";
    case CurveFlag::out_of_domain: return "out_of_domain";
    case CurveFlag::missing: return "missing";
  }
  return "?";
}

void SweepConfig::validate() const {
  if (n_atoms.empty()) throw DomainError("n_atoms list is empty");
  for (int n : n_atoms) {
    if (n < 1) throw DomainError("n_atoms entries must be >= 1");
  }
  if (!(omega_a > 0.0) || !std::isfinite(omega_a)) throw DomainError("omega_a must be positive");
  if (methods.empty()) throw DomainError("methods list is empty");
  if (!(delta_gamma > 0.0) || !std::isfinite(delta_gamma)) throw DomainError("delta_gamma must be positive");
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  if (!(simplex_tol > 0.0)) throw DomainError("simplex_tol must be positive");
  if (n_max < 0) throw DomainError("n_max must be >= 0");
  if (jobs < 1) throw DomainError("jobs must be >= 1");
  if (gamma_list.empty()) {
    if (!std::isfinite(gamma_lo) || !std::isfinite(gamma_hi)) throw DomainError("gamma range must be finite");
    if (!(gamma_step > 0.0) || !std::isfinite(gamma_step)) throw DomainError("gamma_step must be positive");
    if (gamma_hi < gamma_lo) throw DomainError("gamma grid is empty (gamma_hi < gamma_lo)");
  } else {
    for (std::size_t i = 0; i < gamma_list.size(); ++i) {
      if (!std::isfinite(gamma_list[i])) throw DomainError("gamma_list entries must be finite");
      if (i > 0 && !(gamma_list[i] > gamma_list[i - 1])) throw DomainError("gamma_list must be strictly ascending");
    }
  }
}

std::vector<double> SweepConfig::gammas() const {
  validate();
  if (!gamma_list.empty()) return gamma_list;
  return AxisRange{gamma_lo, gamma_hi, gamma_step}.points();
}

bool SweepConfig::has(Method method) const {
  return std::find(methods.begin(), methods.end(), method) != methods.end();
}

bool SweepRecord::has_error() const {
  return std::any_of(results.begin(), results.end(), [](const auto& r) { return r && r->error; });
}

bool SweepResult::has_errors() const {
  return std::any_of(records.begin(), records.end(), [](const SweepRecord& r) { return r.has_error(); });
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

MethodResult failure(const std::exception& e) {
  MethodResult r;
  r.error = e.what();
  return r;
}

Parity method_parity(Method m) {
  return m == Method::sas_odd || m == Method::exact_odd ? Parity::odd : Parity::even;
}

struct Slot {
  std::size_t n_index;
  std::size_t g_index;
};

class SweepRunner {
 public:
  SweepRunner(const SweepConfig& config, const std::vector<SweepRecord>& completed)
      : config_(config), gammas_(config.gammas()) {
    records_.resize(config_.n_atoms.size() * gammas_.size());
    reused_.assign(records_.size(), false);
    for (std::size_t in = 0; in < config_.n_atoms.size(); ++in) {
      for (std::size_t ig = 0; ig < gammas_.size(); ++ig) {
        SweepRecord& r = at(in, ig);
        r.n_atoms = config_.n_atoms[in];
        r.gamma = gammas_[ig];
      }
    }
    for (const SweepRecord& old : completed) adopt(old);
  }

  SweepResult run() {
    run_cs();
    run_sas();
    run_exact();

    SweepResult out;
    out.records = std::move(records_);
    std::stable_sort(out.records.begin(), out.records.end(), [](const SweepRecord& a, const SweepRecord& b) {
      return a.n_atoms != b.n_atoms ? a.n_atoms < b.n_atoms : a.gamma < b.gamma;
    });
    out.metadata = metadata(out);
    return out;
  }

 private:
  SweepRecord& at(std::size_t in, std::size_t ig) { return records_[in * gammas_.size() + ig]; }
  bool reused(std::size_t in, std::size_t ig) const { return reused_[in * gammas_.size() + ig]; }

  /// Takes over a previously written row when it covers exactly the requested
  /// methods and carries no error.
  void adopt(const SweepRecord& old) {
    if (old.has_error()) return;
    for (Method m : kAllMethods) {
      if (old[m].has_value() != config_.has(m)) return;
    }
    for (std::size_t in = 0; in < config_.n_atoms.size(); ++in) {
      if (config_.n_atoms[in] != old.n_atoms) continue;
      const auto it = std::find(gammas_.begin(), gammas_.end(), old.gamma);
      if (it == gammas_.end()) continue;
      const auto ig = static_cast<std::size_t>(it - gammas_.begin());
      at(in, ig) = old;
      reused_[in * gammas_.size() + ig] = true;
    }
  }

  ModelParams params(std::size_t in, double gamma) const {
    return ModelParams(config_.n_atoms[in], config_.omega_a, gamma);
  }

  std::vector<Slot> pending() const {
    std::vector<Slot> out;
    for (std::size_t in = 0; in < config_.n_atoms.size(); ++in) {
      for (std::size_t ig = 0; ig < gammas_.size(); ++ig) {
        if (!reused(in, ig)) out.push_back({in, ig});
      }
    }
    return out;
  }

  void run_cs() {
    if (!config_.has(Method::cs)) return;
    for (const Slot& s : pending()) {
      const auto start = Clock::now();
      MethodResult r;
      try {
        const ModelParams p = params(s.n_index, gammas_[s.g_index]);
        const CriticalPoint c = cs_critical_point(p, PhiBranch::zero);
        const TrialExpectations e = cs_expectations(p, c.point);
        r.energy = c.energy;
        r.q = c.point.q;
        r.theta = c.point.theta;
        r.n_photons = e.n_photons;
        r.jz = e.jz;
      } catch (const std::exception& e) {
        r = failure(e);
      }
      if (config_.timing) r.wall_seconds = seconds_since(start);
      at(s.n_index, s.g_index)[Method::cs] = std::move(r);
    }
  }

  /// One chain per (N, parity); the chain walks gamma upwards so each point
  /// can seed from its predecessor.
  void run_sas() {
    std::vector<std::pair<std::size_t, Method>> chains;
    for (std::size_t in = 0; in < config_.n_atoms.size(); ++in) {
      for (Method m : {Method::sas_even, Method::sas_odd}) {
        if (config_.has(m)) chains.emplace_back(in, m);
      }
    }
    parallel_for(chains.size(), config_.jobs, [&](std::size_t c) { run_sas_chain(chains[c].first, chains[c].second); });
  }

  void run_sas_chain(std::size_t in, Method method) {
    const Parity parity = method_parity(method);
    std::optional<PhasePoint> previous;
    for (std::size_t ig = 0; ig < gammas_.size(); ++ig) {
      SweepRecord& rec = at(in, ig);
      if (reused(in, ig)) {
        const MethodResult& old = *rec[method];
        if (old.q && old.theta) previous = PhasePoint{*old.q, 0.0, *old.theta, 0.0};
        continue;
      }
      const auto start = Clock::now();
      MethodResult r;
      try {
        const ModelParams p = params(in, gammas_[ig]);
        SasMinimizeOptions options;
        options.warm_start = previous;
        options.jitter_seed = mix(config_.seed ^ mix(static_cast<std::uint64_t>(config_.n_atoms[in])) ^
                                  mix(static_cast<std::uint64_t>(ig) << 1 | (parity == Parity::odd ? 1U : 0U)));
        options.simplex.x_tol = config_.simplex_tol;
        const SasMinimum m = sas_minimize(p, parity, options);
        const TrialExpectations e = sas_expectations(p, m.point, parity);
        r.energy = m.energy;
        r.q = m.point.q;
        r.theta = m.point.theta;
        r.n_photons = e.n_photons;
        r.jz = e.jz;
        previous = m.point;
      } catch (const std::exception& e) {
        r = failure(e);
      }
      if (config_.timing) r.wall_seconds = seconds_since(start);
      rec[method] = std::move(r);
    }
  }

  struct ExactSolve {
    std::size_t n_index;
    Parity parity;
    double gamma;
    std::optional<QuantumState> state;
    std::string error;
    double seconds = 0.0;
  };

  void run_exact() {
    std::vector<Method> methods;
    for (Method m : {Method::exact_even, Method::exact_odd}) {
      if (config_.has(m)) methods.push_back(m);
    }
    if (methods.empty()) return;
    const std::vector<Slot> todo = pending();

    // truncation, once per N, chosen at the largest coupling that is solved
    std::vector<std::size_t> n_needed;
    for (const Slot& s : todo) {
      if (n_needed.empty() || n_needed.back() != s.n_index) n_needed.push_back(s.n_index);
    }
    std::vector<int> n_max(config_.n_atoms.size(), config_.n_max);
    std::vector<std::string> n_max_error(config_.n_atoms.size());
    if (config_.n_max == 0) {
      parallel_for(n_needed.size(), config_.jobs, [&](std::size_t i) {
        const std::size_t in = n_needed[i];
        try {
          n_max[in] = select_truncation(params(in, gammas_.back() + config_.delta_gamma), config_.tol);
        } catch (const std::exception& e) {
          n_max_error[in] = e.what();
        }
      });
    }
    for (std::size_t in = 0; in < config_.n_atoms.size(); ++in) {
      if (n_max[in] > 0) truncation_.emplace_back(config_.n_atoms[in], n_max[in]);
    }

    std::vector<ExactSolve> solves;
    std::map<std::tuple<std::size_t, int, double>, std::size_t> index;
    const auto request = [&](std::size_t in, Parity parity, double gamma) {
      const auto key = std::make_tuple(in, static_cast<int>(parity), gamma);
      if (index.contains(key)) return;
      index[key] = solves.size();
      solves.push_back({in, parity, gamma, std::nullopt, {}, 0.0});
    };
    for (const Slot& s : todo) {
      if (!n_max_error[s.n_index].empty()) continue;
      for (Method m : methods) {
        request(s.n_index, method_parity(m), gammas_[s.g_index]);
        request(s.n_index, method_parity(m), gammas_[s.g_index] + config_.delta_gamma);
      }
    }

    std::map<std::pair<std::size_t, int>, ParityBasis> bases;
    for (const ExactSolve& s : solves) {
      const auto key = std::make_pair(s.n_index, static_cast<int>(s.parity));
      if (!bases.contains(key)) {
        bases.emplace(key, build_basis(params(s.n_index, 0.0), n_max[s.n_index],
                                       s.parity == Parity::even ? Sector::even : Sector::odd));
      }
    }

    parallel_for(solves.size(), config_.jobs, [&](std::size_t i) {
      ExactSolve& s = solves[i];
      const auto start = Clock::now();
      try {
        const ParityBasis& basis = bases.at({s.n_index, static_cast<int>(s.parity)});
        const HamiltonianMatrix h = build_hamiltonian(params(s.n_index, s.gamma), basis);
        s.state.emplace(std::move(lowest_eigenpairs(h, 1).front()));
      } catch (const std::exception& e) {
        s.error = e.what();
      }
      s.seconds = seconds_since(start);
    });

    for (const Slot& s : todo) {
      for (Method m : methods) {
        MethodResult r;
        const std::string& nerr = n_max_error[s.n_index];
        if (!nerr.empty()) {
          r.error = nerr;
          at(s.n_index, s.g_index)[m] = std::move(r);
          continue;
        }
        const double g = gammas_[s.g_index];
        const ExactSolve& here = solves[index.at({s.n_index, static_cast<int>(method_parity(m)), g})];
        const ExactSolve& next =
            solves[index.at({s.n_index, static_cast<int>(method_parity(m)), g + config_.delta_gamma})];
        try {
          if (!here.state) throw NumericError(here.error);
          const Observables obs = observables(*here.state);
          const PhaseCoordinates pc = to_phase_coordinates(obs, 0.5 * config_.n_atoms[s.n_index]);
          r.energy = here.state->energy();
          r.q = pc.q;
          r.theta = pc.theta;
          r.n_photons = obs.n_photons;
          r.jz = obs.jz;
          r.n_max = n_max[s.n_index];
          if (next.state) r.fidelity = fidelity(*here.state, *next.state);
          if (config_.timing) r.wall_seconds = here.seconds;
        } catch (const std::exception& e) {
          r = failure(e);
        }
        at(s.n_index, s.g_index)[m] = std::move(r);
      }
    }
  }

  Metadata metadata(const SweepResult& result) const {
    Metadata meta;
    meta.emplace_back("code_version", kVersion);
    for (auto& [key, value] : config_entries(config_)) meta.emplace_back("config." + key, value);
    meta.emplace_back("seed", std::to_string(config_.seed));
    meta.emplace_back("grid_points", std::to_string(gammas_.size()));
    meta.emplace_back("tolerance.cs", "analytic");
    meta.emplace_back("tolerance.sas_simplex_x_tol", format_double(config_.simplex_tol));
    meta.emplace_back("tolerance.exact_truncation", format_double(config_.tol));
    meta.emplace_back("tolerance.exact_relative_residual", format_double(EigensolverOptions{}.relative_tolerance));
    meta.emplace_back("sas.warm_start", "previous_gamma");
    meta.emplace_back("sas.grid_size", std::to_string(SasMinimizeOptions{}.grid_size));
    meta.emplace_back("sas.singular_guard_radius", format_double(kSingularGuardRadius));
    meta.emplace_back("exact.dense_threshold", std::to_string(EigensolverOptions{}.dense_threshold));
    for (const auto& [n, nm] : truncation_) meta.emplace_back("exact.n_max.N" + std::to_string(n), std::to_string(nm));
    std::size_t reused = std::count(reused_.begin(), reused_.end(), true);
    meta.emplace_back("resumed_rows", std::to_string(reused));
    std::size_t errors = 0;
    for (const SweepRecord& r : result.records) {
      for (const auto& m : r.results) errors += m && m->error ? 1 : 0;
    }
    meta.emplace_back("error_markers", std::to_string(errors));
    return meta;
  }

  const SweepConfig& config_;
  std::vector<double> gammas_;
  std::vector<SweepRecord> records_;
  std::vector<bool> reused_;
  std::vector<std::pair<int, int>> truncation_;
};

}  // namespace

SweepResult run_sweep(const SweepConfig& config, const std::vector<SweepRecord>& completed) {
  config.validate();
  return SweepRunner(config, completed).run();
}

std::vector<CurveRow> universal_curve_dataset(const std::vector<SweepRecord>& records, double omega_a) {
  std::vector<CurveRow> out;
  for (const SweepRecord& rec : records) {
    for (Method m : kAllMethods) {
      const auto& r = rec[m];
      if (!r) continue;
      CurveRow row;
      row.n_atoms = rec.n_atoms;
      row.method = m;
      row.gamma = rec.gamma;
      row.theta = r->theta;
      if (r->q) row.q_scaled = *r->q / std::sqrt(static_cast<double>(rec.n_atoms));
      if (r->error || !r->q || !r->theta) {
        row.flag = CurveFlag::missing;
      } else if (*r->theta >= 0.5 * std::numbers::pi) {
        row.flag = CurveFlag::out_of_domain;
      } else {
        row.flag = CurveFlag::ok;
        row.residual = *row.q_scaled - universal_curve(*r->theta, omega_a);
      }
      out.push_back(row);
    }
  }
  return out;
}

std::vector<CurveRow> universal_curve_dataset(const SweepConfig& config) {
  return universal_curve_dataset(run_sweep(config).records, config.omega_a);
}

}  // namespace dicke
