#pragma once

// The eight 3- and 4-vertex hypergraphs used throughout the experiments, and
// the search that pins their edge sets down from reference sudden
// death / birth thresholds.
//
// The hypergraphs are only known from drawings, so the catalog below is the
// output of identify_presets(): for each row of the threshold table,
// every labeled hypergraph on 3 or 4 vertices (with at least one 3-edge) is
// scored, and among the matches the one whose thresholds round to the
// reference values, then with the fewest edges, then with the smallest
// canonical edge list, is shipped. H4_1 and H4_2 share a row and are
// forced into different isomorphism classes.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rhs/hypergraph.hpp"
#include "rhs/measures.hpp"
#include "rhs/parallel.hpp"
#include "rhs/randomization.hpp"
#include "rhs/state.hpp"

namespace rhs {

using QubitPair = std::pair<int, int>;

struct Preset {
  std::string name;   // "H3_2"
  std::string label;  // "H_3^(2)"
  Hypergraph graph;
  Bipartition negativity_context;  // bipartition shown in the negativity figure
  QubitPair concurrence_pair;      // pair shown in the concurrence figure
};

inline const std::vector<Preset>& preset_catalog() {
  static const std::vector<Preset> catalog = [] {
    auto mk = [](std::string name, std::string label, int n, std::vector<Edge> edges, std::vector<int> part,
                 QubitPair pair) {
      return Preset{std::move(name), std::move(label), Hypergraph(n, std::move(edges)), Bipartition(n, std::move(part)),
                    pair};
    };
    return std::vector<Preset>{
        mk("H3_1", "H_3^(1)", 3, {{1, 2, 3}}, {3}, {1, 3}),
        mk("H3_2", "H_3^(2)", 3, {{1, 2}, {1, 2, 3}}, {3}, {1, 3}),
        mk("H3_3", "H_3^(3)", 3, {{1, 2}, {2, 3}, {1, 2, 3}}, {3}, {1, 3}),
        mk("H3_4", "H_3^(4)", 3, {{1, 2}, {1, 3}, {2, 3}, {1, 2, 3}}, {3}, {1, 3}),
        mk("H4_1", "H_4^(1)", 4, {{1, 2}, {1, 3}, {1, 4}, {2, 3, 4}}, {2}, {3, 4}),
        mk("H4_2", "H_4^(2)", 4, {{1, 2}, {1, 3}, {1, 4}, {3, 4}, {2, 3, 4}}, {2}, {3, 4}),
        mk("H4_3", "H_4^(3)", 4, {{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}}, {1, 2}, {1, 3}),
        mk("H4_4", "H_4^(4)", 4, {{1, 2}, {3, 4}, {1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}}, {1, 2}, {1, 3}),
    };
  }();
  return catalog;
}

// Accepts "H3_2", "h3_2", "H3(2)" and "H_3^(2)".
inline const Preset& find_preset(std::string_view name) {
  std::string key;
  for (char c : name)
    if (c != '_' && c != '^' && c != '(' && c != ')') key += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (const auto& p : preset_catalog()) {
    std::string pk;
    for (char c : p.name)
      if (c != '_') pk += c;
    if (pk == key) return p;
  }
  throw InvalidArgument("unknown preset '" + std::string(name) + "'");
}

inline bool is_preset_name(std::string_view name) {
  try {
    (void)find_preset(name);
    return true;
  } catch (const InvalidArgument&) {
    return false;
  }
}

// True when every single-qubit marginal of |H> is 1/2 within `tol`.
inline bool has_maximally_mixed_marginals(const Hypergraph& h, double tol = 1e-10) {
  const DensityMatrix rho = DensityMatrix::pure(hypergraph_state(h));
  const ComplexMatrix half = ComplexMatrix::Identity(2, 2) / 2.0;
  for (int q = 1; q <= h.vertex_count(); ++q)
    if (max_abs_entry(partial_trace(rho, {q}).matrix() - half) > tol) return false;
  return true;
}

// Sudden death / birth points of the pair concurrence along p2 at p3 = 1.
inline ThresholdReport concurrence_signature(const Hypergraph& h, QubitPair pair, const ThresholdOptions& opt = {}) {
  return find_thresholds(
      h, RandomnessParams{{3, 1.0}}, 2,
      [pair](const DensityMatrix& rho) { return reduced_concurrence(rho, pair.first, pair.second); }, opt);
}

// Smallest edge list over all vertex relabelings; equal keys <=> isomorphic.
inline std::string isomorphism_key(const Hypergraph& h) {
  const int n = h.vertex_count();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  std::optional<std::vector<Edge>> best;
  do {
    std::vector<Edge> edges;
    for (const auto& e : h.edges()) {
      Edge m;
      for (int v : e) m.push_back(perm[static_cast<std::size_t>(v - 1)]);
      edges.push_back(std::move(m));
    }
    Hypergraph relabeled(n, std::move(edges));
    if (!best || std::lexicographical_compare(relabeled.edges().begin(), relabeled.edges().end(), best->begin(),
                                              best->end(), edge_less))
      best = relabeled.edges();
  } while (std::next_permutation(perm.begin(), perm.end()));
  return edge_list_string(Hypergraph(n, *best));
}

struct TableRow {
  std::string preset;
  int n_vertices;
  QubitPair pair;
  std::optional<double> esd;
  std::optional<double> esb;
  bool uniform;       // 3-uniform (true) or mixing 2- and 3-edges (false)
  bool require_mixed_marginals;
};

// Reference p2 thresholds (three decimals) at p3 = 1, with the concurrence pair of each figure.
inline const std::vector<TableRow>& threshold_table() {
  static const std::vector<TableRow> rows{
      {"H3_1", 3, {1, 3}, std::nullopt, std::nullopt, true, false},
      {"H3_2", 3, {1, 3}, 0.500, 0.500, false, false},
      {"H3_3", 3, {1, 3}, 0.239, 0.761, false, false},
      {"H3_4", 3, {1, 3}, 0.315, 0.707, false, false},
      {"H4_1", 4, {3, 4}, 0.397, std::nullopt, false, true},
      {"H4_2", 4, {3, 4}, 0.397, std::nullopt, false, true},
      {"H4_3", 4, {1, 3}, std::nullopt, std::nullopt, true, true},
      {"H4_4", 4, {1, 3}, 0.288, std::nullopt, false, false},
  };
  return rows;
}

inline constexpr double kSignatureTolerance = 0.005;
// Half a unit in the third decimal plus the bisection bracket: the signature
// rounds to the reference value.
inline constexpr double kRoundingTolerance = 0.0006;

inline bool signature_matches(const ThresholdReport& r, const TableRow& row, double tol = kSignatureTolerance) {
  auto matches = [tol](const std::vector<double>& found, const std::optional<double>& want) {
    if (!want) return found.empty();
    return found.size() == 1 && std::abs(found.front() - *want) <= tol;
  };
  return matches(r.esd_points, row.esd) && matches(r.esb_points, row.esb);
}

struct Candidate {
  Hypergraph graph;
  std::string iso_key;
  bool mixed_marginals = false;
  bool rounds_to_reference = false;
  ThresholdReport signature;  // for the row's pair
};

struct RowMatch {
  TableRow row;
  std::vector<Candidate> candidates;  // every labeled hypergraph matching the row
  std::optional<Candidate> selected;
  std::size_t distinct_classes = 0;
};

struct PresetReport {
  std::vector<RowMatch> rows;
  std::size_t searched_three = 0;
  std::size_t searched_four = 0;
};

struct IdentifyOptions {
  bool include_four_vertex = true;
  unsigned threads = 0;
  ThresholdOptions thresholds{};
};

// All labeled hypergraphs on n vertices with edges of cardinality 2 or 3 and
// at least one 3-edge, in a fixed order.
inline std::vector<Hypergraph> candidate_space(int n) {
  std::vector<Edge> pairs, triples;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) {
      pairs.push_back({a, b});
      for (int c = b + 1; c <= n; ++c) triples.push_back({a, b, c});
    }
  std::vector<Hypergraph> out;
  for (std::uint32_t t = 1; t < (1u << triples.size()); ++t)
    for (std::uint32_t p = 0; p < (1u << pairs.size()); ++p) {
      std::vector<Edge> edges;
      for (std::size_t i = 0; i < pairs.size(); ++i)
        if (p & (1u << i)) edges.push_back(pairs[i]);
      for (std::size_t i = 0; i < triples.size(); ++i)
        if (t & (1u << i)) edges.push_back(triples[i]);
      out.emplace_back(n, std::move(edges));
    }
  return out;
}

inline bool candidate_less(const Hypergraph& a, const Hypergraph& b) {
  if (a.edge_count() != b.edge_count()) return a.edge_count() < b.edge_count();
  return std::lexicographical_compare(a.edges().begin(), a.edges().end(), b.edges().begin(), b.edges().end(), edge_less);
}

// Exact three-decimal agreement first, then fewest edges, then canonical order.
inline bool selection_less(const Candidate& a, const Candidate& b) {
  if (a.rounds_to_reference != b.rounds_to_reference) return a.rounds_to_reference;
  return candidate_less(a.graph, b.graph);
}

inline PresetReport identify_presets(const IdentifyOptions& opt = {}) {
  PresetReport report;
  const auto& table = threshold_table();

  // Pairs needed per vertex count.
  auto pairs_for = [&table](int n) {
    std::vector<QubitPair> pairs;
    for (const auto& row : table)
      if (row.n_vertices == n && std::find(pairs.begin(), pairs.end(), row.pair) == pairs.end()) pairs.push_back(row.pair);
    return pairs;
  };

  struct Scored {
    Hypergraph graph;
    bool mixed = false;
    std::vector<ThresholdReport> signatures;  // aligned with pairs_for(n)
  };

  std::vector<std::pair<int, std::vector<Scored>>> spaces;
  for (int n : {3, 4}) {
    if (n == 4 && !opt.include_four_vertex) continue;
    const auto space = candidate_space(n);
    const auto pairs = pairs_for(n);
    std::vector<Scored> scored(space.size());
    parallel_for(space.size(), opt.threads, [&](std::size_t i) {
      Scored s{space[i], has_maximally_mixed_marginals(space[i]), {}};
      for (const auto& pr : pairs) s.signatures.push_back(concurrence_signature(space[i], pr, opt.thresholds));
      scored[i] = std::move(s);
    });
    (n == 3 ? report.searched_three : report.searched_four) = space.size();
    spaces.emplace_back(n, std::move(scored));
  }

  std::vector<std::string> taken_classes;
  for (const auto& row : table) {
    RowMatch match{row, {}, std::nullopt, 0};
    for (const auto& [n, scored] : spaces) {
      if (n != row.n_vertices) continue;
      const auto pairs = pairs_for(n);
      const auto pair_idx = static_cast<std::size_t>(std::find(pairs.begin(), pairs.end(), row.pair) - pairs.begin());
      for (const auto& s : scored) {
        const bool uniform = is_k_uniform(s.graph, 3);
        const bool mixed_cards = s.graph.count_with_cardinality(2) > 0;
        if (row.uniform ? !uniform : !mixed_cards) continue;
        if (row.require_mixed_marginals && !s.mixed) continue;
        if (!signature_matches(s.signatures[pair_idx], row)) continue;
        match.candidates.push_back({s.graph, isomorphism_key(s.graph), s.mixed,
                                    signature_matches(s.signatures[pair_idx], row, kRoundingTolerance),
                                    s.signatures[pair_idx]});
      }
    }
    std::vector<std::string> classes;
    for (const auto& c : match.candidates)
      if (std::find(classes.begin(), classes.end(), c.iso_key) == classes.end()) classes.push_back(c.iso_key);
    match.distinct_classes = classes.size();

    // Rows sharing a signature must land in different isomorphism classes.
    for (const auto& c : match.candidates) {
      if (std::find(taken_classes.begin(), taken_classes.end(), c.iso_key) != taken_classes.end()) continue;
      if (!match.selected || selection_less(c, *match.selected)) match.selected = c;
    }
    if (match.selected) taken_classes.push_back(match.selected->iso_key);
    report.rows.push_back(std::move(match));
  }
  return report;
}

// Markdown rendering of a PresetReport.
inline std::string format_preset_report(const PresetReport& report) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(4);
  auto opt_str = [](const std::optional<double>& v) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(3);
    if (v) s << *v; else s << "--";
    return s.str();
  };
  auto pts = [](const std::vector<double>& v) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(4);
    if (v.empty()) return std::string("--");
    for (std::size_t i = 0; i < v.size(); ++i) s << (i ? " " : "") << v[i];
    return s.str();
  };
  os << "# Preset identification report\n\n";
  os << "Searched " << report.searched_three << " labeled 3-vertex and " << report.searched_four
     << " labeled 4-vertex hypergraphs (edges of cardinality 2 and 3, at least one 3-edge).\n";
  os << "Signature: concurrence of the listed pair along p2 at p3 = 1, grid 0.01, bisection to 1e-4, "
        "zero tolerance 1e-9; match tolerance +-0.005; `rounds` marks agreement to three decimals.\n\n";
  for (const auto& m : report.rows) {
    os << "## " << m.row.preset << " (pair " << m.row.pair.first << "," << m.row.pair.second << "; target ESD "
       << opt_str(m.row.esd) << ", ESB " << opt_str(m.row.esb) << (m.row.uniform ? "; 3-uniform" : "; mixed 2/3-edges")
       << (m.row.require_mixed_marginals ? "; maximally mixed marginals" : "") << ")\n\n";
    os << m.candidates.size() << " labeled candidates in " << m.distinct_classes << " isomorphism class(es)"
       << (m.distinct_classes > 1 ? " -- ambiguous, selection rule applied" : "") << ".\n\n";
    if (m.selected)
      os << "Selected: `" << edge_list_string(m.selected->graph) << "`\n\n";
    else
      os << "Selected: none\n\n";
    os << "| edges | class | ESD | ESB | mixed marginals | rounds |\n|---|---|---|---|---|---|\n";
    for (const auto& c : m.candidates)
      os << "| `" << edge_list_string(c.graph) << "` | `" << c.iso_key << "` | " << pts(c.signature.esd_points) << " | "
         << pts(c.signature.esb_points) << " | " << (c.mixed_marginals ? "yes" : "no") << " | "
         << (c.rounds_to_reference ? "yes" : "no") << " |\n";
    os << '\n';
  }
  return os.str();
}

}  // namespace rhs
