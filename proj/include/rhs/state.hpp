#pragma once

// Pure and mixed n-qubit states.
//
// Basis convention: basis index b stores qubit q (1-based) in bit (n - q), so
// qubit 1 is the most significant bit. |011> is index 3 with qubit 1 in |0>.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "rhs/hypergraph.hpp"
#include "rhs/linalg.hpp"

namespace rhs {

inline constexpr double kStateTolerance = 1e-12;

// Basis-index mask for a set of 1-based qubits.
inline std::uint32_t basis_mask(int n_qubits, const std::vector<int>& qubits) {
  std::uint32_t m = 0;
  for (int q : qubits) m |= std::uint32_t{1} << (n_qubits - q);
  return m;
}

inline void check_qubit_count(int n) {
  if (n < 1) throw InvalidArgument("qubit count must be positive");
  if (n > kMaxQubits) throw CapacityError("at most 10 qubits are supported");
}

inline void check_qubit_subset(int n, const std::vector<int>& qubits) {
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (qubits[i] < 1 || qubits[i] > n) throw InvalidArgument("qubit index out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (qubits[j] == qubits[i]) throw InvalidArgument("qubit listed twice");
  }
}

class StateVector {
 public:
  StateVector(int n_qubits, ComplexVector amplitudes) : n_(n_qubits), amp_(std::move(amplitudes)) {
    check_qubit_count(n_);
    if (amp_.size() != (Eigen::Index{1} << n_)) throw InvalidArgument("amplitude vector length is not 2^n");
    if (std::abs(amp_.norm() - 1.0) > kStateTolerance) throw InvalidArgument("state vector is not normalized");
  }

  int qubit_count() const noexcept { return n_; }
  Eigen::Index dimension() const noexcept { return amp_.size(); }
  const ComplexVector& amplitudes() const noexcept { return amp_; }

 private:
  friend StateVector apply_ce(const StateVector&, const Edge&);
  struct Unchecked {};
  StateVector(Unchecked, int n, ComplexVector a) : n_(n), amp_(std::move(a)) {}

  int n_;
  ComplexVector amp_;
};

class DensityMatrix {
 public:
  // Checks shape, Hermiticity and unit trace. Positivity is checked by
  // is_physical(), which costs an eigendecomposition.
  DensityMatrix(int n_qubits, ComplexMatrix entries) : n_(n_qubits), rho_(std::move(entries)) {
    check_qubit_count(n_);
    const Eigen::Index d = Eigen::Index{1} << n_;
    if (rho_.rows() != d || rho_.cols() != d) throw InvalidArgument("density matrix is not 2^n x 2^n");
    if (!is_hermitian(rho_, kHermitianTolerance)) throw InvalidArgument("density matrix is not Hermitian");
    if (std::abs(rho_.trace() - Complex(1.0)) > kHermitianTolerance) throw InvalidArgument("density matrix trace is not 1");
  }

  static DensityMatrix pure(const StateVector& psi) {
    return DensityMatrix(psi.qubit_count(), psi.amplitudes() * psi.amplitudes().adjoint());
  }

  int qubit_count() const noexcept { return n_; }
  Eigen::Index dimension() const noexcept { return rho_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return rho_; }

  double purity() const { return (rho_ * rho_).trace().real(); }

  bool is_real(double tol = 1e-14) const { return max_abs_entry(rho_.imag()) <= tol; }

  bool is_physical(double min_eigenvalue = -1e-10) const {
    return hermitian_eigenvalues(rho_).minCoeff() >= min_eigenvalue;
  }

 private:
  int n_;
  ComplexMatrix rho_;
};

inline StateVector plus_state(int n) {
  check_qubit_count(n);
  const Eigen::Index d = Eigen::Index{1} << n;
  return StateVector(n, ComplexVector::Constant(d, Complex(std::pow(2.0, -0.5 * n), 0.0)));
}

// Sign (+1 / -1) of the C_e diagonal at each basis index.
inline std::vector<double> ce_diagonal(int n, const Edge& edge) {
  if (edge.empty()) throw InvalidArgument("C_e needs a nonempty edge");
  check_qubit_subset(n, edge);
  const std::uint32_t m = basis_mask(n, edge);
  std::vector<double> diag(std::size_t{1} << n);
  for (std::uint32_t b = 0; b < diag.size(); ++b) diag[b] = (b & m) == m ? -1.0 : 1.0;
  return diag;
}

// C_e = 1 - 2|1..1><1..1| on the qubits of `edge`.
inline StateVector apply_ce(const StateVector& s, const Edge& edge) {
  const auto diag = ce_diagonal(s.qubit_count(), edge);
  ComplexVector a = s.amplitudes();
  for (Eigen::Index b = 0; b < a.size(); ++b) a(b) *= diag[static_cast<std::size_t>(b)];
  return StateVector(StateVector::Unchecked{}, s.qubit_count(), std::move(a));
}

inline StateVector hypergraph_state(const Hypergraph& h) {
  StateVector s = plus_state(h.vertex_count());
  for (const auto& e : h.edges()) s = apply_ce(s, e);
  return s;
}

// Reduced state on `keep` (any order; the result orders qubits ascending).
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep) {
  const int n = rho.qubit_count();
  if (keep.empty()) throw InvalidArgument("partial trace needs at least one kept qubit");
  check_qubit_subset(n, keep);
  std::sort(keep.begin(), keep.end());
  std::vector<int> traced;
  for (int q = 1; q <= n; ++q)
    if (!std::binary_search(keep.begin(), keep.end(), q)) traced.push_back(q);

  // Full-register index contributed by each reduced / environment index.
  auto scatter = [n](const std::vector<int>& qubits) {
    const std::size_t k = qubits.size();
    std::vector<std::uint32_t> idx(std::size_t{1} << k, 0);
    for (std::uint32_t r = 0; r < idx.size(); ++r)
      for (std::size_t j = 0; j < k; ++j)
        if (r & (std::uint32_t{1} << (k - 1 - j))) idx[r] |= std::uint32_t{1} << (n - qubits[j]);
    return idx;
  };
  const auto kept_idx = scatter(keep);
  const auto env_idx = scatter(traced);

  const auto& m = rho.matrix();
  const auto dk = static_cast<Eigen::Index>(kept_idx.size());
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i)
    for (Eigen::Index j = 0; j < dk; ++j) {
      Complex acc = 0.0;
      for (std::uint32_t t : env_idx) acc += m(kept_idx[i] | t, kept_idx[j] | t);
      out(i, j) = acc;
    }
  return DensityMatrix(static_cast<int>(keep.size()), detail::hermitian_part(out));
}

// Partial transpose with respect to the qubits in `part`.
inline ComplexMatrix partial_transpose(const DensityMatrix& rho, const std::vector<int>& part) {
  const int n = rho.qubit_count();
  check_qubit_subset(n, part);
  if (part.empty() || static_cast<int>(part.size()) == n)
    throw InvalidArgument("partial transpose needs a nonempty proper qubit subset");
  return partial_transpose_bits(rho.matrix(), n, vertex_mask(part));
}

}  // namespace rhs
