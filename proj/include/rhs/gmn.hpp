#pragma once

// Genuine multipartite negativity
//
//     GMN(rho) = -min tr(rho W)
//     s.t. for every bipartition m:  W = P_m + Q_m^{T_m},  0 <= P_m <= 1,  0 <= Q_m <= 1.
//
// The Lagrangian dual is
//
//     min  sum_m [ neg(X_m) + neg(X_m^{T_m}) ]   s.t.  sum_m X_m = rho,
//
// where neg() is the weight of the negative spectrum. Any feasible witness
// gives a lower bound on GMN and any decomposition of rho an upper bound; the
// solver reports both so the result is checkable without trusting it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rhs/hypergraph.hpp"
#include "rhs/linalg.hpp"
#include "rhs/sdp.hpp"
#include "rhs/state.hpp"

namespace rhs {

inline constexpr int kMaxGmnQubits = 4;
inline constexpr double kCertificateTolerance = 1e-8;
inline constexpr double kGmnTolerance = 1e-7;
inline constexpr double kGmnClamp = 1e-7;

struct WitnessProblem {
  DensityMatrix rho;
  std::vector<Bipartition> partitions;

  explicit WitnessProblem(DensityMatrix state) : rho(std::move(state)), partitions(make_partitions(rho.qubit_count())) {}

 private:
  static std::vector<Bipartition> make_partitions(int n) {
    if (n < 2) throw InvalidArgument("GMN needs at least two qubits");
    if (n > kMaxGmnQubits) throw CapacityError("GMN is supported for at most 4 qubits");
    return bipartitions(n);
  }
};

enum class SdpStatus { optimal, max_iterations, infeasible_numerics };

inline const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal:
      return "optimal";
    case SdpStatus::max_iterations:
      return "max_iterations";
    case SdpStatus::infeasible_numerics:
      return "infeasible_numerics";
  }
  return "unknown";
}

struct SdpSolution {
  double objective = 0.0;  // tr(rho W)
  ComplexMatrix witness;
  std::vector<ComplexMatrix> p;  // one per partition, same order
  std::vector<ComplexMatrix> q;
  // Dual certificate: X_m summing to rho, and the GMN upper bound it proves.
  std::vector<ComplexMatrix> decomposition;
  double dual_bound = std::numeric_limits<double>::infinity();
  double duality_gap = std::numeric_limits<double>::infinity();
  SdpStatus status = SdpStatus::infeasible_numerics;
  int iterations = 0;
};

struct SolverOptions {
  int max_iterations = 200;
  double step_fraction = 0.95;
};

// Upper bound on GMN proven by a decomposition sum_m X_m = rho.
inline double decomposition_bound(const std::vector<ComplexMatrix>& x, const WitnessProblem& prob) {
  const int n = prob.rho.qubit_count();
  double total = 0.0;
  for (std::size_t m = 0; m < x.size(); ++m)
    total += negative_part_weight(x[m]) +
             negative_part_weight(partial_transpose_bits(x[m], n, prob.partitions[m].mask()));
  return total;
}

namespace detail {

// Real basis of the Hermitian d x d matrices: symmetric units (a <= b) and,
// when complex, antisymmetric units i(E_ab - E_ba) (a < b).
struct HermitianUnit {
  bool imaginary;
  int a;
  int b;
};

inline std::vector<HermitianUnit> hermitian_basis(int d, bool complex) {
  std::vector<HermitianUnit> basis;
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) basis.push_back({false, a, b});
  if (complex)
    for (int a = 0; a < d; ++a)
      for (int b = a + 1; b < d; ++b) basis.push_back({true, a, b});
  return basis;
}

// Entries of `sign * unit` in the working representation: the matrix itself
// when real, the embedding [[Re, -Im], [Im, Re]] when complex.
inline void unit_entries(const HermitianUnit& u, double sign, int d, bool complex, std::vector<sdp::Entry>& out) {
  const int a = u.a, b = u.b;
  if (!u.imaginary) {
    auto put = [&](int off) {
      out.push_back({off + a, off + b, sign});
      if (a != b) out.push_back({off + b, off + a, sign});
    };
    put(0);
    if (complex) put(d);
    return;
  }
  out.push_back({a, d + b, -sign});
  out.push_back({b, d + a, sign});
  out.push_back({d + a, b, sign});
  out.push_back({d + b, a, -sign});
}

// The unit's partial transpose is again a unit on the permuted index pair.
inline HermitianUnit transpose_unit(const HermitianUnit& u, std::uint32_t index_mask) {
  const auto ua = static_cast<std::uint32_t>(u.a), ub = static_cast<std::uint32_t>(u.b);
  const auto a2 = static_cast<int>((ua & ~index_mask) | (ub & index_mask));
  const auto b2 = static_cast<int>((ub & ~index_mask) | (ua & index_mask));
  return {u.imaginary, a2, b2};
}

inline std::uint32_t index_mask_for(int n, std::uint32_t qubit_bits) {
  std::uint32_t m = 0;
  for (int q = 1; q <= n; ++q)
    if (qubit_bits & (std::uint32_t{1} << (q - 1))) m |= std::uint32_t{1} << (n - q);
  return m;
}

// tr(rho * unit).
inline double unit_trace(const HermitianUnit& u, const ComplexMatrix& rho) {
  if (!u.imaginary) return u.a == u.b ? rho(u.a, u.a).real() : 2.0 * rho(u.a, u.b).real();
  return 2.0 * rho(u.a, u.b).imag();
}

inline void add_unit(ComplexMatrix& m, const HermitianUnit& u, double coeff) {
  if (!u.imaginary) {
    m(u.a, u.b) += coeff;
    if (u.a != u.b) m(u.b, u.a) += coeff;
  } else {
    m(u.a, u.b) += Complex(0.0, coeff);
    m(u.b, u.a) -= Complex(0.0, coeff);
  }
}

// Hermitian K with tr(embed(H) Z) = tr(H K) for all Hermitian H.
inline ComplexMatrix from_working(const RealMatrix& z, int d, bool complex) {
  if (!complex) return z.cast<Complex>();
  ComplexMatrix k(d, d);
  const RealMatrix re = z.topLeftCorner(d, d) + z.bottomRightCorner(d, d);
  const RealMatrix im = z.bottomLeftCorner(d, d) - z.topRightCorner(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) k(r, c) = Complex(re(r, c), im(r, c));
  return rhs::detail::hermitian_part(k);
}

class WitnessSdp {
 public:
  explicit WitnessSdp(const WitnessProblem& prob)
      : prob_(prob),
        n_(prob.rho.qubit_count()),
        d_(1 << n_),
        complex_(!prob.rho.is_real()),
        basis_(hermitian_basis(d_, complex_)),
        nb_(static_cast<int>(basis_.size())),
        sdp_(nb_ * (1 + static_cast<int>(prob.partitions.size()))) {
    const int work = complex_ ? 2 * d_ : d_;
    const RealMatrix zero = RealMatrix::Zero(work, work);
    const RealMatrix eye = RealMatrix::Identity(work, work);
    const ComplexMatrix& rho = prob.rho.matrix();

    for (int i = 0; i < nb_; ++i) sdp_.objective()(i) = -unit_trace(basis_[static_cast<std::size_t>(i)], rho);

    for (std::size_t m = 0; m < prob.partitions.size(); ++m) {
      const std::uint32_t mask = index_mask_for(n_, prob.partitions[m].mask());
      const int q0 = q_offset(m);
      const int b_q = sdp_.add_block(zero);   // Q_m
      const int b_iq = sdp_.add_block(eye);   // 1 - Q_m
      const int b_p = sdp_.add_block(zero);   // W - Q_m^T = P_m
      const int b_ip = sdp_.add_block(eye);   // 1 - P_m
      for (int i = 0; i < nb_; ++i) {
        const auto& u = basis_[static_cast<std::size_t>(i)];
        const auto ut = transpose_unit(u, mask);
        sdp_.add_term(b_q, q0 + i, entries(u, -1.0));
        sdp_.add_term(b_iq, q0 + i, entries(u, 1.0));
        sdp_.add_term(b_p, i, entries(u, -1.0));
        sdp_.add_term(b_ip, i, entries(u, 1.0));
        sdp_.add_term(b_p, q0 + i, entries(ut, 1.0));
        sdp_.add_term(b_ip, q0 + i, entries(ut, -1.0));
      }
    }
  }

  SdpSolution solve(double tol, const SolverOptions& options) const {
    // W = 1/2, Q_m = 1/4: every block is 1/4 or 3/4 times identity.
    RealVector y0 = RealVector::Zero(sdp_.num_vars());
    for (int i = 0; i < nb_; ++i) {
      const auto& u = basis_[static_cast<std::size_t>(i)];
      if (!u.imaginary && u.a == u.b) {
        y0(i) = 0.5;
        for (std::size_t m = 0; m < prob_.partitions.size(); ++m) y0(q_offset(m) + i) = 0.25;
      }
    }

    SdpSolution best;
    double best_upper = std::numeric_limits<double>::infinity();
    std::vector<ComplexMatrix> best_decomposition;

    auto monitor = [&](const sdp::Iterate& it) {
      SdpSolution cand = primal_point(it.y);
      if (best.witness.size() == 0 || cand.objective < best.objective) {
        cand.iterations = it.iteration;
        best = std::move(cand);
      }
      auto x = decomposition(it.x);
      const double upper = decomposition_bound(x, prob_);
      if (upper < best_upper) {
        best_upper = upper;
        best_decomposition = std::move(x);
      }
      return best_upper + best.objective <= tol;
    };

    sdp::Options opt;
    opt.max_iterations = options.max_iterations;
    opt.step_fraction = options.step_fraction;
    opt.tolerance = 0.0;
    const sdp::Result res = sdp::solve(sdp_, std::move(y0), opt, monitor);

    best.decomposition = std::move(best_decomposition);
    best.dual_bound = best_upper;
    best.duality_gap = best_upper + best.objective;
    best.iterations = res.iterations;
    if (best.duality_gap <= tol)
      best.status = SdpStatus::optimal;
    else if (res.status == sdp::Status::max_iterations)
      best.status = SdpStatus::max_iterations;
    else
      best.status = SdpStatus::infeasible_numerics;
    return best;
  }

 private:
  int q_offset(std::size_t m) const { return nb_ * (1 + static_cast<int>(m)); }

  std::vector<sdp::Entry> entries(const HermitianUnit& u, double sign) const {
    std::vector<sdp::Entry> out;
    unit_entries(u, sign, d_, complex_, out);
    return out;
  }

  ComplexMatrix hermitian_from(const RealVector& y, int offset) const {
    ComplexMatrix m = ComplexMatrix::Zero(d_, d_);
    for (int i = 0; i < nb_; ++i) add_unit(m, basis_[static_cast<std::size_t>(i)], y(offset + i));
    return m;
  }

  SdpSolution primal_point(const RealVector& y) const {
    SdpSolution s;
    s.witness = hermitian_from(y, 0);
    for (std::size_t m = 0; m < prob_.partitions.size(); ++m) {
      ComplexMatrix q = hermitian_from(y, q_offset(m));
      s.p.push_back(s.witness - partial_transpose_bits(q, n_, prob_.partitions[m].mask()));
      s.q.push_back(std::move(q));
    }
    s.objective = (prob_.rho.matrix() * s.witness).trace().real();
    return s;
  }

  // Multipliers of the W - Q^T >= 0 and 1 - W + Q^T >= 0 blocks give X_m;
  // the last one absorbs the residual so that sum_m X_m = rho exactly.
  std::vector<ComplexMatrix> decomposition(const std::vector<RealMatrix>& x) const {
    const std::size_t parts = prob_.partitions.size();
    std::vector<ComplexMatrix> out;
    ComplexMatrix rest = prob_.rho.matrix();
    for (std::size_t m = 0; m < parts; ++m) {
      if (m + 1 == parts) {
        out.push_back(rhs::detail::hermitian_part(rest));
        break;
      }
      ComplexMatrix k = from_working(x[4 * m + 2] - x[4 * m + 3], d_, complex_);
      rest -= k;
      out.push_back(std::move(k));
    }
    return out;
  }

  const WitnessProblem& prob_;
  int n_;
  int d_;
  bool complex_;
  std::vector<HermitianUnit> basis_;
  int nb_;
  sdp::BlockProblem sdp_;
};

}  // namespace detail

// Minimizes tr(rho W) over fully decomposable witnesses until the certified
// duality gap is at most `tol`. On failure the best certified point found is
// returned with a non-optimal status.
inline SdpSolution solve_witness_sdp(const WitnessProblem& prob, double tol = kGmnTolerance,
                                     const SolverOptions& options = {}) {
  if (!(tol >= 1e-9)) throw InvalidArgument("SDP tolerance must be at least 1e-9");
  return detail::WitnessSdp(prob).solve(tol, options);
}

struct Certification {
  bool valid = false;
  double box_violation = 0.0;        // worst eigenvalue outside [0, 1] over all P_m, Q_m
  double equality_residual = 0.0;    // worst max-entry |W - P_m - Q_m^T|
  double objective_mismatch = 0.0;   // |tr(rho W) - objective|
  bool has_dual = false;
  double decomposition_residual = 0.0;  // max-entry |sum_m X_m - rho|
  double dual_bound_mismatch = 0.0;
  std::vector<std::string> failures;
};

// Re-checks a solution from scratch; does not trust any solver bookkeeping.
inline Certification certify_solution(const SdpSolution& sol, const WitnessProblem& prob) {
  Certification c;
  const int n = prob.rho.qubit_count();
  const Eigen::Index d = prob.rho.dimension();
  const std::size_t parts = prob.partitions.size();
  auto fail = [&c](std::string what) { c.failures.push_back(std::move(what)); };

  if (sol.witness.rows() != d || sol.witness.cols() != d || sol.p.size() != parts || sol.q.size() != parts) {
    fail("solution shape does not match problem");
    return c;
  }
  if (!is_hermitian(sol.witness, kCertificateTolerance)) fail("witness is not Hermitian");

  for (std::size_t m = 0; m < parts; ++m) {
    const std::string tag = prob.partitions[m].to_string();
    for (const ComplexMatrix* mat : {&sol.p[m], &sol.q[m]}) {
      const char* name = mat == &sol.p[m] ? "P" : "Q";
      if (mat->rows() != d || !is_hermitian(*mat, kCertificateTolerance)) {
        fail(std::string(name) + " for " + tag + " is not a Hermitian d x d matrix");
        c.box_violation = std::numeric_limits<double>::infinity();
        continue;
      }
      const RealVector ev = hermitian_eigenvalues(rhs::detail::hermitian_part(*mat));
      const double viol = std::max({0.0, -ev.minCoeff(), ev.maxCoeff() - 1.0});
      c.box_violation = std::max(c.box_violation, viol);
      if (viol > kCertificateTolerance) fail(std::string(name) + " for " + tag + " leaves [0, 1]");
    }
    const ComplexMatrix resid = sol.witness - sol.p[m] - partial_transpose_bits(sol.q[m], n, prob.partitions[m].mask());
    const double r = max_abs_entry(resid);
    c.equality_residual = std::max(c.equality_residual, r);
    if (r > kCertificateTolerance) fail("W != P + Q^T for " + tag);
  }

  c.objective_mismatch = std::abs((prob.rho.matrix() * sol.witness).trace().real() - sol.objective);
  if (c.objective_mismatch > kCertificateTolerance) fail("objective does not match tr(rho W)");

  if (!sol.decomposition.empty()) {
    c.has_dual = true;
    if (sol.decomposition.size() != parts) {
      fail("dual decomposition has wrong length");
    } else {
      ComplexMatrix sum = ComplexMatrix::Zero(d, d);
      for (const auto& x : sol.decomposition) sum += x;
      c.decomposition_residual = max_abs_entry(sum - prob.rho.matrix());
      if (c.decomposition_residual > kCertificateTolerance) fail("dual decomposition does not sum to rho");
      c.dual_bound_mismatch = std::abs(decomposition_bound(sol.decomposition, prob) - sol.dual_bound);
      if (c.dual_bound_mismatch > kCertificateTolerance) fail("dual bound does not match decomposition");
      if (sol.dual_bound < -sol.objective - kCertificateTolerance) fail("dual bound below primal bound");
    }
  }
  c.valid = c.failures.empty();
  return c;
}

struct GmnResult {
  double value = 0.0;        // certified lower bound, clamped at 0
  double upper_bound = 0.0;  // certified upper bound
  SdpStatus status = SdpStatus::infeasible_numerics;
  double duality_gap = 0.0;
  int iterations = 0;
};

inline GmnResult gmn_detailed(const DensityMatrix& rho, double tol = kGmnTolerance, const SolverOptions& options = {}) {
  const WitnessProblem prob(rho);
  const SdpSolution sol = solve_witness_sdp(prob, tol, options);
  GmnResult r;
  r.value = -sol.objective;
  if (r.value < 0.0 && r.value >= -kGmnClamp) r.value = 0.0;
  r.upper_bound = sol.dual_bound;
  r.status = sol.status;
  r.duality_gap = sol.duality_gap;
  r.iterations = sol.iterations;
  return r;
}

// Throws NumericalError when the solver does not certify optimality.
inline double gmn(const DensityMatrix& rho) {
  const GmnResult r = gmn_detailed(rho);
  if (r.status != SdpStatus::optimal)
    throw NumericalError(std::string("GMN solver did not converge: ") + to_string(r.status) +
                         ", gap " + std::to_string(r.duality_gap));
  return r.value;
}

}  // namespace rhs
