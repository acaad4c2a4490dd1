#pragma once

// Small dense block-diagonal semidefinite programs in inequality form
//
//     maximize    b'y
//     subject to  S_j = C_j - sum_i y_i A_ij  >= 0     for every block j
//
// with the conjugate problem
//
//     minimize    sum_j tr(C_j X_j)
//     subject to  sum_j tr(A_ij X_j) = b_i,  X_j >= 0.
//
// Solved by an infeasible primal-dual path-following method (HKM search
// direction, Mehrotra predictor-corrector). The y iterates stay strictly
// feasible, so every iterate's S_j is a valid certificate on its own.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "rhs/errors.hpp"
#include "rhs/linalg.hpp"

namespace rhs::sdp {

// One nonzero of a symmetric constraint matrix. Off-diagonal entries are
// listed in both triangles.
struct Entry {
  int row;
  int col;
  double value;
};

class BlockProblem {
 public:
  explicit BlockProblem(int num_vars) : b_(RealVector::Zero(num_vars)) {}

  int num_vars() const noexcept { return static_cast<int>(b_.size()); }
  int num_blocks() const noexcept { return static_cast<int>(blocks_.size()); }

  RealVector& objective() noexcept { return b_; }
  const RealVector& objective() const noexcept { return b_; }

  int add_block(RealMatrix constant) {
    if (constant.rows() != constant.cols()) throw InvalidArgument("block constant must be square");
    blocks_.push_back(Block{std::move(constant), {}});
    return num_blocks() - 1;
  }

  // A_ij for variable `var` in block `block`; a variable appears at most once
  // per block.
  void add_term(int block, int var, std::vector<Entry> entries) {
    if (var < 0 || var >= num_vars()) throw InvalidArgument("variable index out of range");
    auto& blk = blocks_.at(static_cast<std::size_t>(block));
    for (const auto& t : blk.terms)
      if (t.var == var) throw InvalidArgument("variable already present in block");
    const auto dim = static_cast<int>(blk.constant.rows());
    for (const auto& e : entries)
      if (e.row < 0 || e.col < 0 || e.row >= dim || e.col >= dim) throw InvalidArgument("entry outside block");
    blk.terms.push_back(Term{var, std::move(entries)});
  }

  Eigen::Index block_dim(int j) const { return blocks_[static_cast<std::size_t>(j)].constant.rows(); }

  // S_j = C_j - sum_i y_i A_ij.
  RealMatrix slack(int j, const RealVector& y) const {
    const auto& blk = blocks_[static_cast<std::size_t>(j)];
    RealMatrix s = blk.constant;
    for (const auto& t : blk.terms)
      for (const auto& e : t.entries) s(e.row, e.col) -= y(t.var) * e.value;
    return s;
  }

  // sum_i dy_i A_ij.
  RealMatrix combine(int j, const RealVector& dy) const {
    const auto& blk = blocks_[static_cast<std::size_t>(j)];
    RealMatrix s = RealMatrix::Zero(blk.constant.rows(), blk.constant.cols());
    for (const auto& t : blk.terms)
      for (const auto& e : t.entries) s(e.row, e.col) += dy(t.var) * e.value;
    return s;
  }

  // Adds (tr(A_ij M_j))_i over all blocks to `out`, scaled by `scale`.
  void accumulate_traces(const std::vector<RealMatrix>& m, double scale, RealVector& out) const {
    for (std::size_t j = 0; j < blocks_.size(); ++j)
      for (const auto& t : blocks_[j].terms) {
        double acc = 0.0;
        for (const auto& e : t.entries) acc += e.value * m[j](e.row, e.col);
        out(t.var) += scale * acc;
      }
  }

  double constant_inner(const std::vector<RealMatrix>& x) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < blocks_.size(); ++j) acc += blocks_[j].constant.cwiseProduct(x[j]).sum();
    return acc;
  }

  // H_ik = sum_j tr(A_ij X_j A_kj S_j^{-1}).
  RealMatrix schur_complement(const std::vector<RealMatrix>& x, const std::vector<RealMatrix>& s_inv) const {
    RealMatrix h = RealMatrix::Zero(num_vars(), num_vars());
    for (std::size_t j = 0; j < blocks_.size(); ++j) {
      const auto& terms = blocks_[j].terms;
      const RealMatrix& xj = x[j];
      const RealMatrix& sj = s_inv[j];
      for (std::size_t p = 0; p < terms.size(); ++p) {
        for (std::size_t q = p; q < terms.size(); ++q) {
          double acc = 0.0;
          for (const auto& a : terms[p].entries)
            for (const auto& c : terms[q].entries) acc += a.value * c.value * xj(a.col, c.row) * sj(c.col, a.row);
          h(terms[p].var, terms[q].var) += acc;
          if (p != q) h(terms[q].var, terms[p].var) += acc;
        }
      }
    }
    return h;
  }

 private:
  struct Term {
    int var;
    std::vector<Entry> entries;
  };
  struct Block {
    RealMatrix constant;
    std::vector<Term> terms;
  };

  RealVector b_;
  std::vector<Block> blocks_;
};

struct Options {
  int max_iterations = 200;
  double step_fraction = 0.95;
  // Internal stop: relative gap and relative primal infeasibility both below.
  double tolerance = 1e-11;
  double initial_primal_scale = 1.0;
};

enum class Status { converged, max_iterations, stalled };

struct Iterate {
  RealVector y;
  std::vector<RealMatrix> x;
  std::vector<RealMatrix> s;
  int iteration = 0;
  double primal_objective = 0.0;  // sum_j tr(C_j X_j)
  double dual_objective = 0.0;    // b'y
  double primal_infeasibility = 0.0;
};

struct Result {
  Status status = Status::stalled;
  Iterate last;
  int iterations = 0;
};

namespace detail {

// Largest alpha with M + alpha * dM >= 0, given the Cholesky factor of M.
inline double max_step(const Eigen::LLT<RealMatrix>& chol, const RealMatrix& dm) {
  const auto l = chol.matrixL();
  RealMatrix tmp = l.solve(dm);
  RealMatrix scaled = l.solve(tmp.transpose());
  scaled = (scaled + scaled.transpose()) / 2.0;
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(scaled, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  return lo >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lo;
}

}  // namespace detail

// `monitor(const Iterate&)` is called once per iteration before the step and
// returns true to stop. `y0` must be strictly feasible.
template <typename Monitor>
Result solve(const BlockProblem& prob, RealVector y0, const Options& opt, Monitor&& monitor) {
  const int nb = prob.num_blocks();
  const int m = prob.num_vars();
  if (y0.size() != m) throw InvalidArgument("initial point has wrong size");

  double total_dim = 0.0;
  for (int j = 0; j < nb; ++j) total_dim += static_cast<double>(prob.block_dim(j));

  Result result;
  Iterate it;
  it.y = std::move(y0);
  it.x.resize(static_cast<std::size_t>(nb));
  it.s.resize(static_cast<std::size_t>(nb));
  for (int j = 0; j < nb; ++j)
    it.x[static_cast<std::size_t>(j)] =
        opt.initial_primal_scale * RealMatrix::Identity(prob.block_dim(j), prob.block_dim(j));

  std::vector<Eigen::LLT<RealMatrix>> s_chol(static_cast<std::size_t>(nb));
  std::vector<RealMatrix> s_inv(static_cast<std::size_t>(nb));
  const double b_norm = prob.objective().norm();

  for (int iter = 0;; ++iter) {
    it.iteration = iter;
    for (int j = 0; j < nb; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      it.s[uj] = prob.slack(j, it.y);
      s_chol[uj].compute(it.s[uj]);
      if (s_chol[uj].info() != Eigen::Success) {
        result.status = Status::stalled;
        result.last = std::move(it);
        result.iterations = iter;
        return result;
      }
      s_inv[uj] = s_chol[uj].solve(RealMatrix::Identity(it.s[uj].rows(), it.s[uj].cols()));
    }

    RealVector rp = prob.objective();
    prob.accumulate_traces(it.x, -1.0, rp);
    it.primal_objective = prob.constant_inner(it.x);
    it.dual_objective = prob.objective().dot(it.y);
    it.primal_infeasibility = rp.norm() / (1.0 + b_norm);
    double complementarity = 0.0;
    for (int j = 0; j < nb; ++j)
      complementarity += it.x[static_cast<std::size_t>(j)].cwiseProduct(it.s[static_cast<std::size_t>(j)]).sum();
    const double mu = complementarity / total_dim;

    result.iterations = iter;
    if (monitor(static_cast<const Iterate&>(it))) {
      result.status = Status::converged;
      break;
    }
    const double rel_gap =
        std::abs(it.primal_objective - it.dual_objective) / (1.0 + std::abs(it.primal_objective) + std::abs(it.dual_objective));
    if (rel_gap <= opt.tolerance && it.primal_infeasibility <= opt.tolerance) {
      result.status = Status::converged;
      break;
    }
    if (iter >= opt.max_iterations) {
      result.status = Status::max_iterations;
      break;
    }

    // H is positive definite in exact arithmetic but loses definiteness to
    // rounding near the optimum. A diagonal shift only perturbs the search
    // direction; y stays exactly feasible.
    RealMatrix h = prob.schur_complement(it.x, s_inv);
    Eigen::LLT<RealMatrix> h_chol(h);
    const double h_scale = std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
    for (double shift = 1e-14; h_chol.info() != Eigen::Success && shift <= 1e-6; shift *= 100.0) {
      RealMatrix shifted = h;
      shifted.diagonal().array() += shift * h_scale;
      h_chol.compute(shifted);
    }
    if (h_chol.info() != Eigen::Success) {
      result.status = Status::stalled;
      break;
    }

    std::vector<RealMatrix> dx(static_cast<std::size_t>(nb)), ds(static_cast<std::size_t>(nb));
    RealVector dy;
    // G_j is the target for dX_j + X_j dS_j S_j^{-1}.
    auto direction = [&](const std::vector<RealMatrix>& g) {
      RealVector rhs = rp;
      prob.accumulate_traces(g, -1.0, rhs);
      dy = h_chol.solve(rhs);
      for (int j = 0; j < nb; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        ds[uj] = -prob.combine(j, dy);
        RealMatrix d = g[uj] - it.x[uj] * ds[uj] * s_inv[uj];
        dx[uj] = (d + d.transpose()) / 2.0;
      }
    };
    auto step_lengths = [&](double& ap, double& ad) {
      ap = std::numeric_limits<double>::infinity();
      ad = ap;
      for (int j = 0; j < nb; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        Eigen::LLT<RealMatrix> xc(it.x[uj]);
        ap = std::min(ap, xc.info() == Eigen::Success ? detail::max_step(xc, dx[uj]) : 0.0);
        ad = std::min(ad, detail::max_step(s_chol[uj], ds[uj]));
      }
      ap = std::min(1.0, opt.step_fraction * ap);
      ad = std::min(1.0, opt.step_fraction * ad);
    };

    // Predictor (affine scaling).
    std::vector<RealMatrix> g(static_cast<std::size_t>(nb));
    for (int j = 0; j < nb; ++j) g[static_cast<std::size_t>(j)] = -it.x[static_cast<std::size_t>(j)];
    direction(g);
    double ap = 0.0, ad = 0.0;
    step_lengths(ap, ad);
    double mu_aff = 0.0;
    for (int j = 0; j < nb; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      mu_aff += (it.x[uj] + ap * dx[uj]).cwiseProduct(it.s[uj] + ad * ds[uj]).sum();
    }
    mu_aff /= total_dim;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    // Corrector.
    for (int j = 0; j < nb; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      g[uj] = sigma * mu * s_inv[uj] - it.x[uj] - dx[uj] * ds[uj] * s_inv[uj];
    }
    direction(g);
    step_lengths(ap, ad);
    if (ap < 1e-12 && ad < 1e-12) {
      result.status = Status::stalled;
      break;
    }
    it.y += ad * dy;
    for (int j = 0; j < nb; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      it.x[uj] += ap * dx[uj];
      it.x[uj] = (it.x[uj] + it.x[uj].transpose()) / 2.0;
    }
  }
  result.last = std::move(it);
  return result;
}

inline Result solve(const BlockProblem& prob, RealVector y0, const Options& opt = {}) {
  return solve(prob, std::move(y0), opt, [](const Iterate&) { return false; });
}

}  // namespace rhs::sdp
