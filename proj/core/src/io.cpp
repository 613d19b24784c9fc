#include "dicke/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "dicke/errors.hpp"

namespace dicke {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view text) {
  Int v{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& format) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += format(items[i]);
  }
  return out;
}

class ConfigParser {
 public:
  ConfigParser(std::string_view source, std::size_t line, std::string_view key)
      : source_(source), line_(line), key_(key) {}

  [[noreturn]] void fail(std::string_view what) const {
    throw ParseError(std::string(source_) + ":" + std::to_string(line_) + ": key '" + std::string(key_) +
                     "': " + std::string(what));
  }

  double real(std::string_view v) const {
    const auto d = parse_double(trim(v));
    if (!d) fail("cannot parse '" + std::string(v) + "' as a real number");
    return *d;
  }

  template <typename Int>
  Int integer(std::string_view v) const {
    const auto i = parse_int<Int>(trim(v));
    if (!i) fail("cannot parse '" + std::string(v) + "' as an integer");
    return *i;
  }

  bool boolean(std::string_view v) const {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail("expected true or false, got '" + std::string(v) + "'");
  }

  template <typename F>
  auto list(std::string_view v, F&& item) const {
    std::vector<decltype(item(v))> out;
    if (trim(v).empty()) return out;
    for (std::string_view part : split(v, ',')) out.push_back(item(trim(part)));
    return out;
  }

 private:
  std::string_view source_;
  std::size_t line_;
  std::string_view key_;
};

}  // namespace

SweepConfig parse_config(std::istream& in, std::string_view source) {
  SweepConfig c;
  std::set<std::string> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": expected 'key = value', got '" +
                       std::string(line) + "'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const ConfigParser p(source, line_no, key);
    if (!seen.insert(std::string(key)).second) p.fail("repeated key");

    if (key == "n_atoms") {
      c.n_atoms = p.list(value, [&](std::string_view s) { return p.integer<int>(s); });
    } else if (key == "omega_a") {
      c.omega_a = p.real(value);
    } else if (key == "gamma_lo") {
      c.gamma_lo = p.real(value);
    } else if (key == "gamma_hi") {
      c.gamma_hi = p.real(value);
    } else if (key == "gamma_step") {
      c.gamma_step = p.real(value);
    } else if (key == "gamma_list") {
      c.gamma_list = p.list(value, [&](std::string_view s) { return p.real(s); });
    } else if (key == "methods") {
      c.methods = p.list(value, [&](std::string_view s) {
        const auto m = parse_method(s);
        if (!m) p.fail("unknown method '" + std::string(s) + "'");
        return *m;
      });
    } else if (key == "delta_gamma") {
      c.delta_gamma = p.real(value);
    } else if (key == "tol") {
      c.tol = p.real(value);
    } else if (key == "simplex_tol") {
      c.simplex_tol = p.real(value);
    } else if (key == "n_max") {
      c.n_max = p.integer<int>(value);
    } else if (key == "seed") {
      c.seed = p.integer<std::uint64_t>(value);
    } else if (key == "out") {
      c.out = std::string(value);
    } else if (key == "jobs") {
      c.jobs = p.integer<int>(value);
    } else if (key == "timing") {
      c.timing = p.boolean(value);
    } else {
      throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": unknown key '" + std::string(key) +
                       "'");
    }
  }
  return c;
}

SweepConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  return parse_config(in, path.string());
}

std::vector<std::pair<std::string, std::string>> config_entries(const SweepConfig& c) {
  const auto num = [](double d) { return format_double(d); };
  return {
      {"n_atoms", join(c.n_atoms, [](int n) { return std::to_string(n); })},
      {"omega_a", num(c.omega_a)},
      {"gamma_lo", num(c.gamma_lo)},
      {"gamma_hi", num(c.gamma_hi)},
      {"gamma_step", num(c.gamma_step)},
      {"gamma_list", join(c.gamma_list, num)},
      {"methods", join(c.methods, [](Method m) { return std::string(to_string(m)); })},
      {"delta_gamma", num(c.delta_gamma)},
      {"tol", num(c.tol)},
      {"simplex_tol", num(c.simplex_tol)},
      {"n_max", std::to_string(c.n_max)},
      {"seed", std::to_string(c.seed)},
      {"out", c.out},
      {"jobs", std::to_string(c.jobs)},
      {"timing", c.timing ? "true" : "false"},
  };
}

std::string format_config(const SweepConfig& config) {
  std::string out;
  for (const auto& [key, value] : config_entries(config)) out += key + " = " + value + "\n";
  return out;
}

void write_config(const SweepConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config file " + path.string());
  out << format_config(config);
  if (!out) throw IoError("write failed: " + path.string());
}

// ---- records ----------------------------------------------------------------

namespace {

constexpr std::string_view kFields[] = {"energy",    "q",         "theta",    "q_scaled", "n_photons",
                                        "n_photons_scaled", "jz", "fidelity", "n_max",    "error"};
constexpr std::size_t kFieldCount = std::size(kFields);

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(kNull); }

std::string sanitize(std::string text) {
  for (char& ch : text) {
    if (ch == ',' || ch == '"') ch = ';';
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  if (text.empty() || text == kNull) text = "error";
  return text;
}

}  // namespace

std::vector<std::string> record_columns(bool timing) {
  std::vector<std::string> cols{"n_atoms", "gamma"};
  for (Method m : kAllMethods) {
    for (std::string_view f : kFields) cols.push_back(std::string(to_string(m)) + "_" + std::string(f));
  }
  if (timing) {
    for (Method m : kAllMethods) cols.push_back(std::string(to_string(m)) + "_wall_s");
  }
  return cols;
}

void write_records(const std::vector<SweepRecord>& records, std::ostream& out, bool timing) {
  out << join(record_columns(timing), [](const std::string& s) { return s; }) << '\n';
  for (const SweepRecord& rec : records) {
    const double n = rec.n_atoms;
    std::string line = std::to_string(rec.n_atoms) + "," + format_double(rec.gamma);
    for (Method m : kAllMethods) {
      const auto& r = rec[m];
      if (!r) {
        for (std::size_t i = 0; i < kFieldCount; ++i) line += "," + std::string(kNull);
        continue;
      }
      const auto scaled = [](const std::optional<double>& v, double by) {
        return v ? std::optional<double>(*v / by) : std::nullopt;
      };
      line += "," + cell(r->energy);
      line += "," + cell(r->q);
      line += "," + cell(r->theta);
      line += "," + cell(scaled(r->q, std::sqrt(n)));
      line += "," + cell(r->n_photons);
      line += "," + cell(scaled(r->n_photons, n));
      line += "," + cell(r->jz);
      line += "," + cell(r->fidelity);
      line += "," + (r->n_max ? std::to_string(*r->n_max) : std::string(kNull));
      line += "," + (r->error ? sanitize(*r->error) : std::string(kNull));
    }
    if (timing) {
      for (Method m : kAllMethods) {
        const auto& r = rec[m];
        line += "," + cell(r ? r->wall_seconds : std::nullopt);
      }
    }
    out << line << '\n';
  }
  if (!out) throw IoError("write failed");
}

void write_records(const std::vector<SweepRecord>& records, const std::filesystem::path& path, bool timing) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_records(records, out, timing);
}

std::vector<SweepRecord> read_records(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ParseError("record file is empty");
  bool timing = false;
  const auto join_cols = [](bool t) { return join(record_columns(t), [](const std::string& s) { return s; }); };
  if (header == join_cols(true)) {
    timing = true;
  } else if (header != join_cols(false)) {
    throw ParseError("line 1: header does not match the record schema");
  }
  const std::vector<std::string> cols = record_columns(timing);

  std::vector<SweepRecord> out;
  std::string raw;
  std::size_t line_no = 1;
  while (std::getline(in, raw)) {
    ++line_no;
    if (raw.empty()) continue;
    const auto fields = split(raw, ',');
    const auto fail = [&](std::size_t col, std::string_view what) -> void {
      throw ParseError("line " + std::to_string(line_no) + ": field '" + cols.at(col) + "': " + std::string(what));
    };
    if (fields.size() != cols.size())
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(cols.size()) +
                       " fields, got " + std::to_string(fields.size()));

    const auto real = [&](std::size_t col) -> std::optional<double> {
      if (fields[col] == kNull) return std::nullopt;
      const auto d = parse_double(fields[col]);
      if (!d) fail(col, "not a number");
      return d;
    };

    SweepRecord rec;
    const auto n = parse_int<int>(fields[0]);
    if (!n) fail(0, "not an integer");
    rec.n_atoms = *n;
    const auto g = real(1);
    if (!g) fail(1, "missing");
    rec.gamma = *g;

    for (std::size_t mi = 0; mi < kAllMethods.size(); ++mi) {
      const std::size_t base = 2 + mi * kFieldCount;
      bool any = false;
      for (std::size_t f = 0; f < kFieldCount; ++f) any = any || fields[base + f] != kNull;
      if (!any) continue;
      MethodResult r;
      r.energy = real(base + 0);
      r.q = real(base + 1);
      r.theta = real(base + 2);
      r.n_photons = real(base + 4);
      r.jz = real(base + 6);
      r.fidelity = real(base + 7);
      if (fields[base + 8] != kNull) {
        const auto nm = parse_int<int>(fields[base + 8]);
        if (!nm) fail(base + 8, "not an integer");
        r.n_max = nm;
      }
      if (fields[base + 9] != kNull) r.error = std::string(fields[base + 9]);
      if (timing) r.wall_seconds = real(2 + kAllMethods.size() * kFieldCount + mi);
      rec.results[mi] = std::move(r);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<SweepRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_records(in);
}

void write_metadata(const Metadata& meta, std::ostream& out) {
  for (const auto& [key, value] : meta) out << key << '=' << value << '\n';
  if (!out) throw IoError("write failed");
}

void write_metadata(const Metadata& meta, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_metadata(meta, out);
}

std::filesystem::path metadata_path(const std::filesystem::path& out) {
  std::filesystem::path p = out;
  p += ".meta";
  return p;
}

void write_curve(const std::vector<CurveRow>& rows, std::ostream& out) {
  out << "n_atoms,method,gamma,theta,q_scaled,curve_residual,flag\n";
  for (const CurveRow& r : rows) {
    out << r.n_atoms << ',' << to_string(r.method) << ',' << format_double(r.gamma) << ',' << cell(r.theta) << ','
        << cell(r.q_scaled) << ',' << cell(r.residual) << ',' << to_string(r.flag) << '\n';
  }
  if (!out) throw IoError("write failed");
}

void write_surface(const SurfaceGrid& grid, std::ostream& out) {
  out << "q,theta,energy\n";
  for (std::size_t iq = 0; iq < grid.q.size(); ++iq) {
    for (std::size_t it = 0; it < grid.theta.size(); ++it) {
      out << format_double(grid.q[iq]) << ',' << format_double(grid.theta[it]) << ',' << cell(grid.at(iq, it))
          << '\n';
    }
  }
  if (!out) throw IoError("write failed");
}

void write_fidelity(const FidelityScanResult& scan, std::ostream& out) {
  out << "gamma,fidelity,susceptibility,energy,flagged\n";
  for (std::size_t i = 0; i < scan.gamma_grid.size(); ++i) {
    out << format_double(scan.gamma_grid[i]) << ',' << format_double(scan.fidelity[i]) << ','
        << format_double(scan.susceptibility[i]) << ',' << format_double(scan.energy[i]) << ','
        << (scan.flagged[i] ? "true" : "false") << '\n';
  }
  if (!out) throw IoError("write failed");
}

}  // namespace dicke
