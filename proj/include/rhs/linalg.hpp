#pragma once

// Dense Hermitian helpers shared by the state, measure and SDP code.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>

#include <Eigen/Dense>

#include "rhs/errors.hpp"

namespace rhs {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr Eigen::Index kMaxEigenDimension = 1024;

template <typename Derived>
double max_abs_entry(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = kHermitianTolerance) {
  if (m.rows() != m.cols()) return false;
  return max_abs_entry(m - m.adjoint()) <= tol;
}

namespace detail {

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("matrix is not square");
  if (m.rows() > kMaxEigenDimension) throw CapacityError("matrix dimension above 1024");
  if (!is_hermitian(m)) throw InvalidArgument("matrix is not Hermitian within 1e-10");
}

// Symmetrized copy; removes the rounding-level anti-Hermitian part.
template <typename Derived>
typename Derived::PlainObject hermitian_part(const Eigen::MatrixBase<Derived>& m) {
  return (m + m.adjoint()) / 2.0;
}

}  // namespace detail

// Eigenvalues of a Hermitian (or real symmetric) matrix, descending.
template <typename Derived>
RealVector hermitian_eigenvalues(const Eigen::MatrixBase<Derived>& m) {
  detail::require_hermitian(m);
  if (m.rows() == 0) return RealVector();
  Eigen::SelfAdjointEigenSolver<typename Derived::PlainObject> es(detail::hermitian_part(m), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
  return es.eigenvalues().reverse();
}

// Sum of absolute eigenvalues.
template <typename Derived>
double trace_norm(const Eigen::MatrixBase<Derived>& m) {
  return hermitian_eigenvalues(m).cwiseAbs().sum();
}

// Sum of |negative eigenvalues|, i.e. the weight of the negative part.
template <typename Derived>
double negative_part_weight(const Eigen::MatrixBase<Derived>& m) {
  RealVector ev = hermitian_eigenvalues(m);
  return -ev.cwiseMin(0.0).sum();
}

// f applied to the spectrum of a Hermitian matrix.
template <typename Derived, typename F>
typename Derived::PlainObject spectral_map(const Eigen::MatrixBase<Derived>& m, F f) {
  using Plain = typename Derived::PlainObject;
  Eigen::SelfAdjointEigenSolver<Plain> es(detail::hermitian_part(m));
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
  RealVector mapped = es.eigenvalues().unaryExpr(f);
  Plain out = es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().adjoint();
  return detail::hermitian_part(out);
}

// Partial transpose on an n-qubit operator: for every qubit whose bit is set
// in `qubit_bits` (bit q-1 <-> qubit q), swap that tensor factor's row and
// column indices. Qubit 1 is the most significant bit of a basis index.
template <typename Derived>
typename Derived::PlainObject partial_transpose_bits(const Eigen::MatrixBase<Derived>& m, int n_qubits,
                                                     std::uint32_t qubit_bits) {
  // Translate vertex bits into basis-index bits.
  std::uint32_t index_mask = 0;
  for (int q = 1; q <= n_qubits; ++q)
    if (qubit_bits & (std::uint32_t{1} << (q - 1))) index_mask |= std::uint32_t{1} << (n_qubits - q);
  const Eigen::Index dim = m.rows();
  typename Derived::PlainObject out(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      const auto ur = static_cast<std::uint32_t>(r), uc = static_cast<std::uint32_t>(c);
      const std::uint32_t r2 = (ur & ~index_mask) | (uc & index_mask);
      const std::uint32_t c2 = (uc & ~index_mask) | (ur & index_mask);
      out(r, c) = m(r2, c2);
    }
  }
  return out;
}

}  // namespace rhs
