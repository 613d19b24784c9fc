#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dicke {

enum class Method { cs, sas_even, sas_odd, exact_even, exact_odd };

inline constexpr std::array<Method, 5> kAllMethods{Method::cs, Method::sas_even, Method::sas_odd,
                                                   Method::exact_even, Method::exact_odd};

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);

struct SweepConfig {
  std::vector<int> n_atoms{20, 60};
  double omega_a = 1.0;
  double gamma_lo = 0.0;
  double gamma_hi = 2.0;
  double gamma_step = 0.01;
  /// explicit couplings; when non-empty they replace lo/hi/step
  std::vector<double> gamma_list;
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
  double delta_gamma = 0.001;
  /// Fock truncation tolerance for the exact methods
  double tol = 1e-9;
  /// simplex diameter at which SAS minimization stops
  double simplex_tol = 1e-10;
  /// fixed truncation; 0 selects it per N
  int n_max = 0;
  std::uint64_t seed = 0;
  std::string out = "-";
  int jobs = 1;
  /// append per-method wall-clock columns (makes output non-reproducible)
  bool timing = false;

  /// Throws DomainError when the config cannot describe a sweep.
  void validate() const;
  /// Sorted, validated coupling grid.
  std::vector<double> gammas() const;
  bool has(Method method) const;

  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

/// Outputs of one method at one (N, gamma). Absent quantities stay nullopt
/// and are written as NA.
struct MethodResult {
  std::optional<double> energy;
  std::optional<double> q;
  std::optional<double> theta;
  std::optional<double> n_photons;
  std::optional<double> jz;
  std::optional<double> fidelity;
  std::optional<int> n_max;
  std::optional<double> wall_seconds;
  std::optional<std::string> error;

  friend bool operator==(const MethodResult&, const MethodResult&) = default;
};

struct SweepRecord {
  int n_atoms = 0;
  double gamma = 0.0;
  std::array<std::optional<MethodResult>, kAllMethods.size()> results{};

  std::optional<MethodResult>& operator[](Method m) { return results[static_cast<std::size_t>(m)]; }
  const std::optional<MethodResult>& operator[](Method m) const { return results[static_cast<std::size_t>(m)]; }
  bool has_error() const;

  friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

/// Ordered key=value pairs for the sidecar file.
using Metadata = std::vector<std::pair<std::string, std::string>>;

struct SweepResult {
  std::vector<SweepRecord> records;  // sorted by (N, gamma)
  Metadata metadata;

  bool has_errors() const;
};

/// Runs every requested method at every (N, gamma). SAS minimization walks
/// the gamma ladder in order and warm-starts from the previous minimizer;
/// everything else is distributed over `config.jobs` workers. Failures are
/// recorded per point and method; the sweep always completes.
/// Rows of `completed` without errors are reused instead of recomputed.
SweepResult run_sweep(const SweepConfig& config, const std::vector<SweepRecord>& completed = {});

enum class CurveFlag { ok, out_of_domain, missing };
std::string_view to_string(CurveFlag flag);

struct CurveRow {
  int n_atoms = 0;
  Method method = Method::cs;
  double gamma = 0.0;
  std::optional<double> theta;
  std::optional<double> q_scaled;  // q_c / sqrt(N)
  std::optional<double> residual;  // q_c / sqrt(N) - universal_curve(theta_c)
  CurveFlag flag = CurveFlag::missing;
};

/// One row per (record, method) with the distance of (theta_c, q_c/sqrt(N))
/// from the universal curve. theta_c >= pi/2 is flagged out_of_domain.
std::vector<CurveRow> universal_curve_dataset(const std::vector<SweepRecord>& records, double omega_a);
std::vector<CurveRow> universal_curve_dataset(const SweepConfig& config);

}  // namespace dicke
