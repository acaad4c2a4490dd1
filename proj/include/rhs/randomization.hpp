#pragma once

// Randomized hypergraph states: every gate C_e succeeds with probability
// p_{|e|} and is skipped otherwise.

#include <map>
#include <string>
#include <vector>

#include "rhs/hypergraph.hpp"
#include "rhs/state.hpp"

namespace rhs {

// Gate-success probability per hyperedge cardinality.
class RandomnessParams {
 public:
  RandomnessParams() = default;
  RandomnessParams(std::initializer_list<std::pair<const int, double>> init) {
    for (const auto& [k, p] : init) set(k, p);
  }

  void set(int cardinality, double p) {
    if (cardinality < 2) throw InvalidArgument("cardinality must be >= 2");
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("probability outside [0, 1]");
    p_[cardinality] = p;
  }

  bool has(int cardinality) const { return p_.count(cardinality) != 0; }

  double at(int cardinality) const {
    auto it = p_.find(cardinality);
    if (it == p_.end()) throw InvalidArgument("no probability for cardinality " + std::to_string(cardinality));
    return it->second;
  }

  void require_covers(const Hypergraph& h) const {
    for (int k : h.cardinalities()) (void)at(k);
  }

  const std::map<int, double>& values() const noexcept { return p_; }

  // Same probability for every listed cardinality.
  static RandomnessParams uniform(const std::vector<int>& cardinalities, double p) {
    RandomnessParams out;
    for (int k : cardinalities) out.set(k, p);
    return out;
  }

 private:
  std::map<int, double> p_;
};

// p * C_e rho C_e + (1 - p) * rho.
inline DensityMatrix apply_noisy_gate(const DensityMatrix& rho, const Edge& edge, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("probability outside [0, 1]");
  const auto diag = ce_diagonal(rho.qubit_count(), edge);
  ComplexMatrix out = rho.matrix();
  for (Eigen::Index c = 0; c < out.cols(); ++c)
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      const double sign = diag[static_cast<std::size_t>(r)] * diag[static_cast<std::size_t>(c)];
      if (sign < 0) out(r, c) *= (1.0 - 2.0 * p);
    }
  return DensityMatrix(rho.qubit_count(), std::move(out));
}

// Production path: fold the noisy gate over every edge, starting at |+><+|.
inline DensityMatrix randomize(const Hypergraph& h, const RandomnessParams& params) {
  params.require_covers(h);
  DensityMatrix rho = DensityMatrix::pure(plus_state(h.vertex_count()));
  for (const auto& e : h.edges()) rho = apply_noisy_gate(rho, e, params.at(static_cast<int>(e.size())));
  return rho;
}

struct MixtureTerm {
  Hypergraph subgraph;
  double weight;
};

// Weight of each spanning subhypergraph F: prod over edges of p_{|e|} if e is
// kept in F, (1 - p_{|e|}) otherwise. Same order as spanning_subhypergraphs.
inline std::vector<MixtureTerm> mixture_terms(const Hypergraph& h, const RandomnessParams& params) {
  params.require_covers(h);
  const auto& edges = h.edges();
  std::vector<MixtureTerm> terms;
  auto subs = spanning_subhypergraphs(h);
  terms.reserve(subs.size());
  for (std::size_t mask = 0; mask < subs.size(); ++mask) {
    double w = 1.0;
    for (std::size_t j = 0; j < edges.size(); ++j) {
      const double p = params.at(static_cast<int>(edges[j].size()));
      w *= (mask & (std::size_t{1} << j)) ? p : 1.0 - p;
    }
    terms.push_back({std::move(subs[mask]), w});
  }
  return terms;
}

// Reference path: explicit sum of w_F |F><F| over all 2^|E| subhypergraphs.
inline DensityMatrix randomize_mixture(const Hypergraph& h, const RandomnessParams& params) {
  check_qubit_count(h.vertex_count());
  const Eigen::Index d = Eigen::Index{1} << h.vertex_count();
  ComplexMatrix acc = ComplexMatrix::Zero(d, d);
  for (const auto& term : mixture_terms(h, params)) {
    const ComplexVector psi = hypergraph_state(term.subgraph).amplitudes();
    acc.noalias() += term.weight * (psi * psi.adjoint());
  }
  return DensityMatrix(h.vertex_count(), std::move(acc));
}

}  // namespace rhs
