#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "rhs/rhs.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 1, kNumerical = 2 };

struct CommonOptions {
  std::string hypergraph;
  std::string measure;
  std::string bipartition;
  std::string pair;
  std::string p2;
  std::string p3;
  double tol_zero = rhs::kDefaultZeroTolerance;
  std::string out;
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    rhs::write_text_file(path, text);
  }
}

// Explicit context flags win; otherwise a preset supplies its default one.
rhs::MeasureSpec build_spec(const CommonOptions& o, const rhs::Hypergraph& g) {
  const auto kind = rhs::parse_measure(o.measure);
  rhs::MeasureSpec spec{kind, std::nullopt, std::nullopt};
  if (rhs::is_preset_name(o.hypergraph)) spec = rhs::default_spec(kind, rhs::find_preset(o.hypergraph));
  if (!o.bipartition.empty()) {
    if (kind != rhs::MeasureKind::negativity) throw rhs::ConfigError("--bipartition only applies to negativity");
    spec.bipartition = rhs::parse_bipartition(o.bipartition, g.vertex_count());
  }
  if (!o.pair.empty()) {
    if (kind != rhs::MeasureKind::concurrence) throw rhs::ConfigError("--pair only applies to concurrence");
    spec.pair = rhs::parse_pair(o.pair);
  }
  return spec;
}

int run_sweep_cmd(const CommonOptions& o, unsigned threads, const std::string& plot) {
  rhs::SweepConfig cfg;
  cfg.source = o.hypergraph;
  cfg.graph = rhs::resolve_hypergraph(o.hypergraph);
  cfg.measure = build_spec(o, cfg.graph);
  const std::string default_range = cfg.measure.kind == rhs::MeasureKind::gmn ? "0:1:0.05" : "0:1:0.01";
  cfg.p2 = rhs::parse_range(o.p2.empty() ? default_range : o.p2);
  cfg.p3 = rhs::parse_range(o.p3.empty() ? default_range : o.p3);
  cfg.tol_zero = o.tol_zero;
  cfg.threads = threads;
  cfg.validate();
  const rhs::SweepResult res = rhs::run_sweep(cfg);
  write_output(o.out, rhs::emit_csv(res));
  if (!plot.empty()) rhs::write_text_file(plot, rhs::gnuplot_script(o.out.empty() ? "sweep.csv" : o.out, res));
  int bad = 0;
  for (const auto& r : res.records)
    if (!r.status.empty() && r.status != "optimal") ++bad;
  if (bad) std::cerr << bad << " grid point(s) report a gmn lower bound only (see status column)\n";
  return kOk;
}

int run_threshold_cmd(const CommonOptions& o, const std::string& axis) {
  rhs::ThresholdConfig cfg;
  cfg.source = o.hypergraph;
  cfg.graph = rhs::resolve_hypergraph(o.hypergraph);
  cfg.measure = build_spec(o, cfg.graph);
  if (axis == "p2") {
    cfg.axis = rhs::SweepAxis::p2;
    if (!o.p2.empty()) throw rhs::ConfigError("--p2 is the swept axis; give the fixed value with --p3");
    cfg.fixed = o.p3.empty() ? 1.0 : rhs::parse_range(o.p3).start;
    if (!o.p3.empty() && rhs::parse_range(o.p3).values().size() != 1) throw rhs::ConfigError("--p3 must be a single value here");
  } else if (axis == "p3") {
    cfg.axis = rhs::SweepAxis::p3;
    if (!o.p3.empty()) throw rhs::ConfigError("--p3 is the swept axis; give the fixed value with --p2");
    cfg.fixed = o.p2.empty() ? 1.0 : rhs::parse_range(o.p2).start;
    if (!o.p2.empty() && rhs::parse_range(o.p2).values().size() != 1) throw rhs::ConfigError("--p2 must be a single value here");
  } else {
    throw rhs::ConfigError("--sweep must be p2 or p3");
  }
  cfg.options.zero_tolerance = o.tol_zero;
  const rhs::ThresholdReport rep = rhs::run_thresholds(cfg);

  std::string text;
  for (const auto& [k, v] : std::initializer_list<std::pair<std::string, std::string>>{
           {"hypergraph", cfg.source},
           {"edges", rhs::edge_list_string(cfg.graph)},
           {"measure", rhs::to_string(cfg.measure.kind)},
           {"context", cfg.measure.context_string()},
           {"path", rep.path_description()},
           {"tol_zero", rhs::format_shortest(o.tol_zero)},
           {"version", rhs::kVersion},
           {"timestamp", rhs::utc_timestamp()}})
    text += "# " + k + ": " + v + "\n";
  text += "kind,p\n";
  for (double p : rep.esd_points) text += "esd," + rhs::format_value(p) + "\n";
  for (double p : rep.esb_points) text += "esb," + rhs::format_value(p) + "\n";
  write_output(o.out, text);
  return kOk;
}

int run_gmn_cmd(const CommonOptions& o, double tol) {
  const rhs::Hypergraph g = rhs::resolve_hypergraph(o.hypergraph);
  for (int k : g.cardinalities())
    if (k != 2 && k != 3) throw rhs::ConfigError("only p2 and p3 can be set; hyperedge of cardinality " + std::to_string(k));
  if (g.vertex_count() < 2 || g.vertex_count() > rhs::kMaxGmnQubits) throw rhs::ConfigError("gmn supports 2 to 4 qubits");
  auto single = [](const std::string& s, const char* name) {
    if (s.empty()) return 1.0;
    const auto r = rhs::parse_range(s);
    r.validate(name);
    if (r.values().size() != 1) throw rhs::ConfigError(std::string("--") + name + " must be a single value here");
    return r.start;
  };
  const double p2 = single(o.p2, "p2");
  const double p3 = single(o.p3, "p3");
  if (!(tol >= 1e-9)) throw rhs::ConfigError("--tol must be at least 1e-9");

  const rhs::WitnessProblem prob(rhs::randomize(g, rhs::grid_params(p2, p3)));
  const rhs::SdpSolution sol = rhs::solve_witness_sdp(prob, tol);
  const rhs::Certification cert = rhs::certify_solution(sol, prob);
  double value = -sol.objective;
  if (value < 0.0 && value >= -rhs::kGmnClamp) value = 0.0;

  std::string text;
  text += "# hypergraph: " + o.hypergraph + "\n";
  text += "# edges: " + rhs::edge_list_string(g) + "\n";
  text += "# p2: " + rhs::format_shortest(p2) + "\n# p3: " + rhs::format_shortest(p3) + "\n";
  text += "# version: " + std::string(rhs::kVersion) + "\n";
  text += "gmn," + rhs::format_value(value) + "\n";
  text += "upper_bound," + rhs::format_value(sol.dual_bound) + "\n";
  text += "duality_gap," + rhs::format_value(sol.duality_gap) + "\n";
  text += "iterations," + std::to_string(sol.iterations) + "\n";
  text += std::string("status,") + rhs::to_string(sol.status) + "\n";
  text += std::string("certified,") + (cert.valid ? "yes" : "no") + "\n";
  write_output(o.out, text);
  for (const auto& f : cert.failures) std::cerr << "certificate: " << f << '\n';
  return sol.status == rhs::SdpStatus::optimal && cert.valid ? kOk : kNumerical;
}

int run_identify_cmd(const std::string& out, bool three_only, unsigned threads) {
  rhs::IdentifyOptions opt;
  opt.include_four_vertex = !three_only;
  opt.threads = threads;
  const rhs::PresetReport rep = rhs::identify_presets(opt);
  write_output(out, rhs::format_preset_report(rep));
  for (const auto& row : rep.rows) {
    if (!row.selected) continue;
    if (!rhs::is_preset_name(row.row.preset)) continue;
    if (rhs::find_preset(row.row.preset).graph != row.selected->graph)
      std::cerr << "note: " << row.row.preset << " selection differs from the shipped preset\n";
  }
  return kOk;
}

int run_show_cmd(const std::string& name) {
  const rhs::Preset& p = rhs::find_preset(name);
  std::cout << "# " << p.name << " " << p.label << '\n'
            << "# negativity context: " << p.negativity_context.to_string() << '\n'
            << "# concurrence pair: (" << p.concurrence_pair.first << "," << p.concurrence_pair.second << ")\n"
            << "# maximally mixed marginals: " << (rhs::has_maximally_mixed_marginals(p.graph) ? "yes" : "no") << '\n'
            << rhs::serialize(p.graph);
  return kOk;
}

void add_common(CLI::App* cmd, CommonOptions& o, bool with_range_help) {
  cmd->add_option("--hypergraph", o.hypergraph, "preset name (H3_1..H4_4) or hypergraph file")->required();
  cmd->add_option("--bipartition", o.bipartition, "negativity split, e.g. \"1,2|3,4\"");
  cmd->add_option("--pair", o.pair, "concurrence qubit pair, e.g. \"1,3\"");
  cmd->add_option("--p2", o.p2, with_range_help ? "p2 grid start:stop:step" : "p2 value");
  cmd->add_option("--p3", o.p3, with_range_help ? "p3 grid start:stop:step" : "p3 value");
  cmd->add_option("--tol-zero", o.tol_zero, "values at or below this count as zero")->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", o.out, "output path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized hypergraph states: entanglement sweeps, thresholds and GMN"};
  app.set_version_flag("--version", std::string(rhs::kVersion));
  app.require_subcommand(1);

  CommonOptions sweep_opt, thr_opt, gmn_opt;
  sweep_opt.measure = "negativity";
  thr_opt.measure = "concurrence";
  gmn_opt.measure = "gmn";
  unsigned threads = 0;
  std::string plot, axis = "p2", id_out;
  double gmn_tol = rhs::kGmnTolerance;
  bool three_only = false;
  std::string show_name;

  auto* sweep = app.add_subcommand("sweep", "evaluate a measure on a (p2, p3) grid and write CSV");
  add_common(sweep, sweep_opt, true);
  sweep->add_option("--measure", sweep_opt.measure, "negativity | concurrence | gmn")
      ->check(CLI::IsMember({"negativity", "concurrence", "gmn"}));
  sweep->add_option("--threads", threads, "worker threads (0 = all cores)");
  sweep->add_option("--plot", plot, "also write a gnuplot script here");

  auto* thr = app.add_subcommand("threshold", "locate sudden death / birth along p2 or p3");
  add_common(thr, thr_opt, false);
  thr->add_option("--measure", thr_opt.measure, "negativity | concurrence | gmn")
      ->check(CLI::IsMember({"negativity", "concurrence", "gmn"}));
  thr->add_option("--sweep", axis, "swept axis: p2 or p3 (the other is fixed, default 1)")
      ->check(CLI::IsMember({"p2", "p3"}));

  auto* gmn = app.add_subcommand("gmn", "solve the witness SDP at one (p2, p3) point");
  add_common(gmn, gmn_opt, false);
  gmn->add_option("--tol", gmn_tol, "duality gap target (>= 1e-9)");

  auto* ident = app.add_subcommand("identify-presets", "search 3- and 4-vertex hypergraphs for the reference thresholds");
  ident->add_option("--out", id_out, "markdown report path (default stdout)");
  ident->add_flag("--three-only", three_only, "skip the 4-vertex space");
  ident->add_option("--threads", threads, "worker threads (0 = all cores)");

  auto* show = app.add_subcommand("show", "print a preset hypergraph");
  show->add_option("preset", show_name, "preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (*sweep) return run_sweep_cmd(sweep_opt, threads, plot);
    if (*thr) return run_threshold_cmd(thr_opt, axis);
    if (*gmn) return run_gmn_cmd(gmn_opt, gmn_tol);
    if (*ident) return run_identify_cmd(id_out, three_only, threads);
    if (*show) return run_show_cmd(show_name);
  } catch (const rhs::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const rhs::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kConfig;
  } catch (const rhs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kConfig;
}
