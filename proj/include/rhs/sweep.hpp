#pragma once

// (p2, p3) grid sweeps, threshold scans and their CSV form.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rhs/errors.hpp"
#include "rhs/gmn.hpp"
#include "rhs/hypergraph.hpp"
#include "rhs/measures.hpp"
#include "rhs/parallel.hpp"
#include "rhs/presets.hpp"
#include "rhs/randomization.hpp"

#ifndef RHS_VERSION
#define RHS_VERSION "unknown"
#endif

namespace rhs {

inline constexpr const char* kVersion = RHS_VERSION;

// Shortest text that reads back to the same double.
inline std::string format_shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// 17 significant digits, the CSV value format.
inline std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(std::string_view s, std::string_view what) {
  const std::string t = trim(s);
  double v = 0.0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw ConfigError("invalid number '" + t + "' in " + std::string(what));
  return v;
}

inline int parse_int(std::string_view s, std::string_view what) {
  const std::string t = trim(s);
  int v = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw ConfigError("invalid integer '" + t + "' in " + std::string(what));
  return v;
}

inline std::vector<int> parse_int_list(std::string_view s, std::string_view what) {
  std::vector<int> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(parse_int(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start), what));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

// Inclusive grid start, start + step, ..., <= stop. A single number is a
// one-point grid; start > stop gives an empty grid.
struct Range {
  double start = 0.0;
  double stop = 1.0;
  double step = 0.01;

  static Range single(double v) { return {v, v, 1.0}; }

  void validate(std::string_view name) const {
    for (double v : {start, stop})
      if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " range must lie within [0, 1]");
    if (!(step > 0.0)) throw ConfigError(std::string(name) + " step must be positive");
  }

  std::vector<double> values() const {
    std::vector<double> out;
    if (start > stop) return out;
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) out.push_back(std::min(stop, start + static_cast<double>(i) * step));
    return out;
  }

  std::string to_string() const {
    return format_shortest(start) + ":" + format_shortest(stop) + ":" + format_shortest(step);
  }
};

inline Range parse_range(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    parts.push_back(text.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() == 1) return Range::single(detail::parse_double(parts[0], "range"));
  if (parts.size() != 3) throw ConfigError("range must be 'start:stop:step' or a single value");
  return {detail::parse_double(parts[0], "range"), detail::parse_double(parts[1], "range"),
          detail::parse_double(parts[2], "range")};
}

enum class MeasureKind { negativity, concurrence, gmn };

inline const char* to_string(MeasureKind k) {
  switch (k) {
    case MeasureKind::negativity: return "negativity";
    case MeasureKind::concurrence: return "concurrence";
    case MeasureKind::gmn: return "gmn";
  }
  return "?";
}

inline MeasureKind parse_measure(std::string_view s) {
  if (s == "negativity") return MeasureKind::negativity;
  if (s == "concurrence") return MeasureKind::concurrence;
  if (s == "gmn") return MeasureKind::gmn;
  throw ConfigError("unknown measure '" + std::string(s) + "'");
}

// "1,2|3,4" or just "1,2"; when both sides are given they must partition 1..n.
inline Bipartition parse_bipartition(std::string_view text, int n) {
  const auto bar = text.find('|');
  const auto left = detail::parse_int_list(text.substr(0, bar), "bipartition");
  if (bar != std::string_view::npos) {
    std::vector<int> all = left;
    const auto right = detail::parse_int_list(text.substr(bar + 1), "bipartition");
    all.insert(all.end(), right.begin(), right.end());
    std::sort(all.begin(), all.end());
    std::vector<int> expect(static_cast<std::size_t>(std::max(n, 0)));
    std::iota(expect.begin(), expect.end(), 1);
    if (all != expect) throw ConfigError("bipartition sides must partition 1.." + std::to_string(n));
  }
  try {
    return Bipartition(n, left);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("bipartition: ") + e.what());
  }
}

inline QubitPair parse_pair(std::string_view text) {
  const auto v = detail::parse_int_list(text, "pair");
  if (v.size() != 2) throw ConfigError("pair must be two qubit indices 'i,j'");
  return {v[0], v[1]};
}

struct MeasureSpec {
  MeasureKind kind = MeasureKind::negativity;
  std::optional<Bipartition> bipartition;  // negativity
  std::optional<QubitPair> pair;           // concurrence

  std::string context_string() const {
    if (kind == MeasureKind::negativity && bipartition) return bipartition->to_string();
    if (kind == MeasureKind::concurrence && pair)
      return "(" + std::to_string(pair->first) + "," + std::to_string(pair->second) + ")";
    return "all bipartitions";
  }

  void validate(int n) const {
    switch (kind) {
      case MeasureKind::negativity:
        if (!bipartition) throw ConfigError("negativity needs --bipartition");
        if (bipartition->qubit_count() != n) throw ConfigError("bipartition does not match the hypergraph size");
        break;
      case MeasureKind::concurrence:
        if (!pair) throw ConfigError("concurrence needs --pair");
        if (pair->first == pair->second || pair->first < 1 || pair->second < 1 || pair->first > n || pair->second > n)
          throw ConfigError("pair must name two distinct qubits of the hypergraph");
        break;
      case MeasureKind::gmn:
        if (n < 2 || n > kMaxGmnQubits) throw ConfigError("gmn supports 2 to 4 qubits");
        break;
    }
  }
};

struct PointValue {
  double value = 0.0;
  std::optional<SdpStatus> status;  // gmn only
};

inline PointValue evaluate(const MeasureSpec& spec, const DensityMatrix& rho, double gmn_tol = kGmnTolerance) {
  switch (spec.kind) {
    case MeasureKind::negativity: return {negativity(rho, *spec.bipartition), std::nullopt};
    case MeasureKind::concurrence: return {reduced_concurrence(rho, spec.pair->first, spec.pair->second), std::nullopt};
    case MeasureKind::gmn: {
      const GmnResult r = gmn_detailed(rho, gmn_tol);
      return {r.value, r.status};
    }
  }
  return {};
}

// Context shown in the figures for a preset, used when none is given.
inline MeasureSpec default_spec(MeasureKind kind, const Preset& preset) {
  MeasureSpec spec{kind, std::nullopt, std::nullopt};
  if (kind == MeasureKind::negativity) spec.bipartition = preset.negativity_context;
  if (kind == MeasureKind::concurrence) spec.pair = preset.concurrence_pair;
  return spec;
}

struct SweepConfig {
  std::string source;  // preset name or file path, echoed in the metadata
  Hypergraph graph{1, {}};
  MeasureSpec measure;
  Range p2{0.0, 1.0, 0.01};
  Range p3{0.0, 1.0, 0.01};
  double tol_zero = kDefaultZeroTolerance;
  double gmn_tol = kGmnTolerance;
  unsigned threads = 0;

  void validate() const {
    for (int k : graph.cardinalities())
      if (k != 2 && k != 3) throw ConfigError("sweeps only control p2 and p3; hyperedge of cardinality " + std::to_string(k));
    p2.validate("p2");
    p3.validate("p3");
    if (!(tol_zero >= 0.0)) throw ConfigError("tol-zero must be nonnegative");
    measure.validate(graph.vertex_count());
  }
};

inline RandomnessParams grid_params(double p2, double p3) { return RandomnessParams{{2, p2}, {3, p3}}; }

struct SweepRecord {
  double p2 = 0.0;
  double p3 = 0.0;
  double value = 0.0;
  std::string status;  // empty unless gmn
};

struct SweepResult {
  std::vector<std::pair<std::string, std::string>> metadata;
  bool has_status = false;
  std::vector<SweepRecord> records;
};

inline std::vector<std::pair<std::string, std::string>> sweep_metadata(const SweepConfig& cfg) {
  return {{"hypergraph", cfg.source},
          {"vertices", std::to_string(cfg.graph.vertex_count())},
          {"edges", edge_list_string(cfg.graph)},
          {"measure", to_string(cfg.measure.kind)},
          {"context", cfg.measure.context_string()},
          {"p2", cfg.p2.to_string()},
          {"p3", cfg.p3.to_string()},
          {"tol_zero", format_shortest(cfg.tol_zero)},
          {"version", kVersion}};
}

// Row-major with p2 outer. Values at or below tol_zero are written as 0; a
// gmn point whose solver stops short keeps its lower bound and a status flag.
inline SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepResult res;
  res.metadata = sweep_metadata(cfg);
  res.has_status = cfg.measure.kind == MeasureKind::gmn;
  const auto p2s = cfg.p2.values();
  const auto p3s = cfg.p3.values();
  res.records.resize(p2s.size() * p3s.size());
  parallel_for(res.records.size(), cfg.threads, [&](std::size_t i) {
    SweepRecord& r = res.records[i];
    r.p2 = p2s[i / p3s.size()];
    r.p3 = p3s[i % p3s.size()];
    const PointValue v = evaluate(cfg.measure, randomize(cfg.graph, grid_params(r.p2, r.p3)), cfg.gmn_tol);
    r.value = v.value <= cfg.tol_zero ? 0.0 : v.value;
    if (v.status) r.status = to_string(*v.status);
  });
  return res;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string emit_csv(const SweepResult& res, const std::string& timestamp = utc_timestamp()) {
  std::string out;
  for (const auto& [k, v] : res.metadata) out += "# " + k + ": " + v + "\n";
  out += "# timestamp: " + timestamp + "\n";
  out += res.has_status ? "p2,p3,value,status\n" : "p2,p3,value\n";
  for (const auto& r : res.records) {
    out += format_value(r.p2) + "," + format_value(r.p3) + "," + format_value(r.value);
    if (res.has_status) out += "," + r.status;
    out += "\n";
  }
  return out;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw Error("write to '" + path + "' failed");
}

inline SweepResult parse_csv(std::string_view text) {
  SweepResult res;
  bool header_seen = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon != std::string::npos) {
        std::string key = detail::trim(std::string_view(line).substr(1, colon - 1));
        if (key != "timestamp") res.metadata.emplace_back(key, detail::trim(std::string_view(line).substr(colon + 1)));
      }
      continue;
    }
    if (!header_seen) {
      if (line == "p2,p3,value,status")
        res.has_status = true;
      else if (line != "p2,p3,value")
        throw ParseError(line_no, 1, "unexpected CSV header");
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != (res.has_status ? 4u : 3u)) {
      if (!(res.has_status && cells.size() == 3 && line.back() == ',')) throw ParseError(line_no, 1, "wrong number of CSV fields");
      cells.emplace_back();
    }
    SweepRecord r;
    try {
      r.p2 = detail::parse_double(cells[0], "csv");
      r.p3 = detail::parse_double(cells[1], "csv");
      r.value = cells[2] == "nan" ? std::numeric_limits<double>::quiet_NaN() : detail::parse_double(cells[2], "csv");
    } catch (const ConfigError& e) {
      throw ParseError(line_no, 1, e.what());
    }
    if (res.has_status) r.status = cells[3];
    res.records.push_back(std::move(r));
  }
  if (!header_seen) throw ParseError(line_no + 1, 1, "missing CSV header");
  return res;
}

// gnuplot script drawing the CSV as a (p2, p3) heat map.
inline std::string gnuplot_script(const std::string& csv_path, const SweepResult& res) {
  std::string measure = "value";
  for (const auto& [k, v] : res.metadata)
    if (k == "measure") measure = v;
  std::ostringstream os;
  os << "set datafile separator ','\n"
     << "set datafile commentschars '#'\n"
     << "set key autotitle columnhead\n"
     << "set xlabel 'p2'\nset ylabel 'p3'\n"
     << "set title '" << measure << "'\n"
     << "set view map\nset pm3d map interpolate 0,0\n"
     << "set dgrid3d 101,101\n"
     << "splot '" << csv_path << "' using 1:2:3 with pm3d notitle\n";
  return os.str();
}

// Preset name or path to a hypergraph file.
inline Hypergraph resolve_hypergraph(const std::string& source) {
  if (is_preset_name(source)) return find_preset(source).graph;
  std::ifstream f(source, std::ios::binary);
  if (!f) throw ConfigError("'" + source + "' is neither a preset nor a readable file");
  std::ostringstream text;
  text << f.rdbuf();
  return parse_hypergraph(text.str());
}

enum class SweepAxis { p2, p3 };

struct ThresholdConfig {
  std::string source;
  Hypergraph graph{1, {}};
  MeasureSpec measure;
  SweepAxis axis = SweepAxis::p2;
  double fixed = 1.0;  // value of the other axis
  ThresholdOptions options{};
  double gmn_tol = kGmnTolerance;
};

// A gmn point that does not reach optimality is a fatal numerical error here,
// since a lower bound cannot decide "zero".
inline ThresholdReport run_thresholds(const ThresholdConfig& cfg) {
  for (int k : cfg.graph.cardinalities())
    if (k != 2 && k != 3) throw ConfigError("thresholds only control p2 and p3; hyperedge of cardinality " + std::to_string(k));
  if (!(cfg.fixed >= 0.0 && cfg.fixed <= 1.0)) throw ConfigError("fixed probability outside [0, 1]");
  cfg.measure.validate(cfg.graph.vertex_count());
  const int swept = cfg.axis == SweepAxis::p2 ? 2 : 3;
  RandomnessParams fixed;
  fixed.set(swept == 2 ? 3 : 2, cfg.fixed);
  fixed.set(swept, 0.0);
  return find_thresholds(
      cfg.graph, fixed, swept,
      [&cfg](const DensityMatrix& rho) {
        const PointValue v = evaluate(cfg.measure, rho, cfg.gmn_tol);
        if (v.status && *v.status != SdpStatus::optimal)
          throw NumericalError(std::string("gmn solver stopped with status ") + to_string(*v.status));
        return v.value;
      },
      cfg.options);
}

}  // namespace rhs
