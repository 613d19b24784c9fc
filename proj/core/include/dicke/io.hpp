#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dicke/exact.hpp"
#include "dicke/semiclassical.hpp"
#include "dicke/sweep.hpp"

namespace dicke {

/// Marker written for absent values.
inline constexpr std::string_view kNull = "NA";

/// Shortest-safe decimal form with 17 significant digits; parses back to the
/// same double.
std::string format_double(double value);
std::optional<double> parse_double(std::string_view text);

// ---- config files -----------------------------------------------------------
//
// One `key = value` per line. Blank lines and lines starting with '#' are
// ignored. Lists are comma separated. Keys:
//   n_atoms      list of int        (20,60)
//   omega_a      real               (1)
//   gamma_lo     real               (0)
//   gamma_hi     real               (2)
//   gamma_step   real               (0.01)
//   gamma_list   list of real       (empty; overrides lo/hi/step)
//   methods      list of names      (cs,sas_even,sas_odd,exact_even,exact_odd)
//   delta_gamma  real               (0.001)
//   tol          real               (1e-9)
//   simplex_tol  real               (1e-10)
//   n_max        int                (0 = automatic)
//   seed         unsigned int       (0)
//   out          path or '-'        (-)
//   jobs         int                (1)
//   timing       true/false         (false)

/// Throws ParseError naming the source, line and key on malformed input,
/// unknown or repeated keys.
SweepConfig parse_config(std::istream& in, std::string_view source = "<config>");
SweepConfig read_config(const std::filesystem::path& path);

/// Every key in the order above; parse_config(format_config(c)) == c.
std::string format_config(const SweepConfig& config);
void write_config(const SweepConfig& config, const std::filesystem::path& path);
/// (key, value) pairs of format_config.
std::vector<std::pair<std::string, std::string>> config_entries(const SweepConfig& config);

// ---- sweep records ----------------------------------------------------------
//
// Columns: n_atoms, gamma, then for each method in the order
// cs, sas_even, sas_odd, exact_even, exact_odd the ten columns
//   <m>_energy <m>_q <m>_theta <m>_q_scaled <m>_n_photons
//   <m>_n_photons_scaled <m>_jz <m>_fidelity <m>_n_max <m>_error
// where q_scaled = q/sqrt(N) and n_photons_scaled = n_photons/N. With timing
// enabled one <m>_wall_s column per method follows at the end. Methods that
// were not run are NA throughout.

std::vector<std::string> record_columns(bool timing = false);
void write_records(const std::vector<SweepRecord>& records, std::ostream& out, bool timing = false);
void write_records(const std::vector<SweepRecord>& records, const std::filesystem::path& path, bool timing = false);
/// Inverse of write_records. Throws ParseError on a header or field mismatch.
std::vector<SweepRecord> read_records(std::istream& in);
std::vector<SweepRecord> read_records(const std::filesystem::path& path);

void write_metadata(const Metadata& meta, std::ostream& out);
void write_metadata(const Metadata& meta, const std::filesystem::path& path);
/// Sidecar path for an output file: `<out>.meta`.
std::filesystem::path metadata_path(const std::filesystem::path& out);

// ---- other tables -----------------------------------------------------------

/// n_atoms,method,gamma,theta,q_scaled,curve_residual,flag
void write_curve(const std::vector<CurveRow>& rows, std::ostream& out);
/// q,theta,energy (excluded points as NA)
void write_surface(const SurfaceGrid& grid, std::ostream& out);
/// gamma,fidelity,susceptibility,energy,flagged
void write_fidelity(const FidelityScanResult& scan, std::ostream& out);

}  // namespace dicke
