#pragma once

// Hypergraphs on qubit vertices: representation, text format, spanning
// subhypergraph enumeration and bipartitions of the vertex set.

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rhs/errors.hpp"

namespace rhs {

inline constexpr int kMaxQubits = 10;
inline constexpr std::size_t kMaxEdges = 20;

// A hyperedge: sorted, distinct, 1-based vertex indices.
using Edge = std::vector<int>;

// Bitmask of an edge / qubit subset: vertex v maps to bit (v - 1).
inline std::uint32_t vertex_mask(const std::vector<int>& vertices) {
  std::uint32_t m = 0;
  for (int v : vertices) m |= std::uint32_t{1} << (v - 1);
  return m;
}

// Canonical edge order: by cardinality, then lexicographic vertex list.
inline bool edge_less(const Edge& a, const Edge& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

class Hypergraph {
 public:
  Hypergraph() : n_(1) {}

  // Validates and canonicalizes. Vertex lists inside each edge may be given
  // in any order.
  explicit Hypergraph(int n_vertices, std::vector<Edge> edges = {}) : n_(n_vertices) {
    if (n_ < 1) throw InvalidArgument("hypergraph needs at least one vertex");
    if (n_ > 31) throw CapacityError("hypergraph vertex count above 31");
    for (auto& e : edges) {
      std::sort(e.begin(), e.end());
      if (e.size() < 2) throw InvalidArgument("hyperedge of cardinality < 2");
      if (std::adjacent_find(e.begin(), e.end()) != e.end())
        throw InvalidArgument("hyperedge repeats a vertex");
      if (e.front() < 1 || e.back() > n_) throw InvalidArgument("vertex index out of range");
    }
    std::sort(edges.begin(), edges.end(), edge_less);
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
      throw InvalidArgument("duplicate hyperedge");
    edges_ = std::move(edges);
  }

  int vertex_count() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  // Distinct edge cardinalities, ascending.
  std::vector<int> cardinalities() const {
    std::vector<int> ks;
    for (const auto& e : edges_) {
      int k = static_cast<int>(e.size());
      if (ks.empty() || ks.back() != k) ks.push_back(k);
    }
    return ks;
  }

  std::size_t count_with_cardinality(int k) const {
    return static_cast<std::size_t>(std::count_if(
        edges_.begin(), edges_.end(), [k](const Edge& e) { return static_cast<int>(e.size()) == k; }));
  }

  bool contains(const Edge& e) const { return std::binary_search(edges_.begin(), edges_.end(), e, edge_less); }

  friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

 private:
  int n_;
  std::vector<Edge> edges_;
};

inline bool is_k_uniform(const Hypergraph& h, int k) {
  if (k < 2) throw InvalidArgument("uniformity is defined for k >= 2");
  return std::all_of(h.edges().begin(), h.edges().end(),
                     [k](const Edge& e) { return static_cast<int>(e.size()) == k; });
}

// All 2^|E| spanning subhypergraphs. Subset i keeps edge j iff bit j of i is
// set, edges indexed in canonical order; subsets are listed with i ascending.
inline std::vector<Hypergraph> spanning_subhypergraphs(const Hypergraph& h) {
  const auto& edges = h.edges();
  if (edges.size() > kMaxEdges) throw CapacityError("more than 20 hyperedges");
  const std::uint32_t count = std::uint32_t{1} << edges.size();
  std::vector<Hypergraph> out;
  out.reserve(count);
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    std::vector<Edge> kept;
    for (std::size_t j = 0; j < edges.size(); ++j)
      if (mask & (std::uint32_t{1} << j)) kept.push_back(edges[j]);
    out.emplace_back(h.vertex_count(), std::move(kept));
  }
  return out;
}

// Text format: '#' starts a comment, blank lines are skipped, the first
// remaining line is `n <count>`, every further line is `e <v1> <v2> ...`.
inline Hypergraph parse_hypergraph(std::string_view text) {
  struct Token {
    std::string_view text;
    int column;
  };

  int n = -1;
  std::vector<Edge> edges;
  std::vector<int> edge_lines;

  auto parse_int = [](const Token& t, int line) {
    int value = 0;
    if (t.text.empty() || t.text.size() > 9) throw ParseError(line, t.column, "expected an integer");
    for (char c : t.text) {
      if (c < '0' || c > '9') throw ParseError(line, t.column, "expected an integer, got '" + std::string(t.text) + "'");
      value = value * 10 + (c - '0');
    }
    return value;
  };

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<Token> tokens;
    for (std::size_t i = 0; i < line.size();) {
      if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
      tokens.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
      i = j;
    }
    if (tokens.empty()) continue;

    if (n < 0) {
      if (tokens[0].text != "n") throw ParseError(line_no, tokens[0].column, "expected 'n <vertex count>'");
      if (tokens.size() != 2) throw ParseError(line_no, tokens[0].column, "'n' takes exactly one integer");
      n = parse_int(tokens[1], line_no);
      if (n < 1) throw ParseError(line_no, tokens[1].column, "vertex count must be positive");
      if (n > 31) throw ParseError(line_no, tokens[1].column, "vertex count above 31");
      continue;
    }

    if (tokens[0].text != "e") throw ParseError(line_no, tokens[0].column, "expected 'e <v1> <v2> ...'");
    Edge e;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      int v = parse_int(tokens[t], line_no);
      if (v < 1 || v > n) throw ParseError(line_no, tokens[t].column, "vertex index out of range");
      if (std::find(e.begin(), e.end(), v) != e.end())
        throw ParseError(line_no, tokens[t].column, "vertex repeated within hyperedge");
      e.push_back(v);
    }
    if (e.size() < 2) throw ParseError(line_no, tokens[0].column, "hyperedge of cardinality < 2");
    std::sort(e.begin(), e.end());
    for (std::size_t k = 0; k < edges.size(); ++k)
      if (edges[k] == e) throw ParseError(line_no, tokens[0].column, "duplicate hyperedge (first on line " + std::to_string(edge_lines[k]) + ")");
    edges.push_back(std::move(e));
    edge_lines.push_back(line_no);
  }
  if (n < 0) throw ParseError(line_no, 1, "missing 'n <vertex count>' line");
  return Hypergraph(n, std::move(edges));
}

// Canonical text form; parse_hypergraph(serialize(h)) == h.
inline std::string serialize(const Hypergraph& h) {
  std::ostringstream os;
  os << "n " << h.vertex_count() << '\n';
  for (const auto& e : h.edges()) {
    os << 'e';
    for (int v : e) os << ' ' << v;
    os << '\n';
  }
  return os.str();
}

// Compact one-line form, e.g. "{1,2};{1,2,3}".
inline std::string edge_list_string(const Hypergraph& h) {
  std::string s;
  for (std::size_t i = 0; i < h.edges().size(); ++i) {
    if (i) s += ';';
    s += '{';
    for (std::size_t j = 0; j < h.edges()[i].size(); ++j) {
      if (j) s += ',';
      s += std::to_string(h.edges()[i][j]);
    }
    s += '}';
  }
  return s.empty() ? "{}" : s;
}

// A split {m}|{complement} of qubits 1..n, stored in canonical form: the part
// is the smaller side, and on a tie the side that contains qubit 1.
class Bipartition {
 public:
  Bipartition(int n_qubits, std::vector<int> part) : n_(n_qubits) {
    if (n_ < 2) throw InvalidArgument("bipartition needs at least two qubits");
    std::sort(part.begin(), part.end());
    part.erase(std::unique(part.begin(), part.end()), part.end());
    if (part.empty() || static_cast<int>(part.size()) >= n_)
      throw InvalidArgument("bipartition part must be a nonempty proper subset");
    if (part.front() < 1 || part.back() > n_) throw InvalidArgument("bipartition qubit out of range");
    part_ = std::move(part);
    auto other = complement();
    if (other.size() < part_.size() || (other.size() == part_.size() && other.front() == 1)) part_ = std::move(other);
  }

  int qubit_count() const noexcept { return n_; }
  const std::vector<int>& part() const noexcept { return part_; }

  std::vector<int> complement() const {
    std::vector<int> c;
    for (int q = 1; q <= n_; ++q)
      if (!std::binary_search(part_.begin(), part_.end(), q)) c.push_back(q);
    return c;
  }

  std::uint32_t mask() const { return vertex_mask(part_); }

  // "{3}|{1,2}" style.
  std::string to_string() const {
    auto side = [](const std::vector<int>& s) {
      std::string out = "{";
      for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
      return out + "}";
    };
    return side(part_) + "|" + side(complement());
  }

  friend bool operator==(const Bipartition&, const Bipartition&) = default;

 private:
  int n_;
  std::vector<int> part_;
};

// All 2^(n-1) - 1 nontrivial bipartitions, ordered by part size, then
// lexicographically.
inline std::vector<Bipartition> bipartitions(int n) {
  if (n < 2) throw InvalidArgument("bipartitions need n >= 2");
  if (n > kMaxQubits) throw CapacityError("too many qubits for bipartition enumeration");
  std::vector<Bipartition> out;
  // Enumerate every subset with qubit n excluded, canonicalize, then sort.
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << (n - 1)); ++mask) {
    std::vector<int> part;
    for (int q = 1; q < n; ++q)
      if (mask & (std::uint32_t{1} << (q - 1))) part.push_back(q);
    out.emplace_back(n, std::move(part));
  }
  std::sort(out.begin(), out.end(), [](const Bipartition& a, const Bipartition& b) {
    return edge_less(a.part(), b.part());
  });
  return out;
}

}  // namespace rhs
