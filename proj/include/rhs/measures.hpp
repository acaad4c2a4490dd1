#pragma once

// Bipartite entanglement quantifiers and sudden death / birth detection.

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "rhs/hypergraph.hpp"
#include "rhs/randomization.hpp"
#include "rhs/state.hpp"

namespace rhs {

inline constexpr double kNegativityClamp = 1e-10;
inline constexpr double kDefaultZeroTolerance = 1e-9;

// (||rho^{T_A}||_1 - 1) / 2 for the split `b`.
inline double negativity(const DensityMatrix& rho, const Bipartition& b) {
  if (b.qubit_count() != rho.qubit_count()) throw InvalidArgument("bipartition does not match qubit count");
  const double value = (trace_norm(partial_transpose(rho, b.part())) - 1.0) / 2.0;
  if (value < -kNegativityClamp) throw NumericalError("negative negativity beyond rounding");
  return std::max(value, 0.0);
}

namespace detail {

inline ComplexMatrix sigma_y_sigma_y() {
  ComplexMatrix yy = ComplexMatrix::Zero(4, 4);
  // sigma_y (x) sigma_y in the |00>,|01>,|10>,|11> basis.
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  return yy;
}

}  // namespace detail

// Wootters concurrence max(0, l1 - l2 - l3 - l4), with l_i the square roots
// of the eigenvalues of rho * rho_tilde in decreasing order.
inline double concurrence(const DensityMatrix& rho) {
  if (rho.qubit_count() != 2) throw InvalidArgument("concurrence needs a two-qubit state");
  const ComplexMatrix yy = detail::sigma_y_sigma_y();
  const ComplexMatrix tilde = yy * rho.matrix().conjugate() * yy;
  // rho * tilde is similar to sqrt(rho) tilde sqrt(rho), which is Hermitian PSD.
  const ComplexMatrix root = spectral_map(rho.matrix(), [](double x) { return std::sqrt(std::max(x, 0.0)); });
  const ComplexMatrix h = detail::hermitian_part(ComplexMatrix(root * tilde * root));
  RealVector ev = hermitian_eigenvalues(h);
  std::array<double, 4> l{};
  for (int i = 0; i < 4; ++i) l[static_cast<std::size_t>(i)] = std::sqrt(std::max(ev(i), 0.0));
  const double c = l[0] - l[1] - l[2] - l[3];
  return std::clamp(c, 0.0, 1.0);
}

inline double reduced_concurrence(const DensityMatrix& rho, int i, int j) {
  if (i == j) throw InvalidArgument("concurrence needs two distinct qubits");
  if (i < 1 || j < 1 || i > rho.qubit_count() || j > rho.qubit_count())
    throw InvalidArgument("qubit index out of range");
  return concurrence(partial_trace(rho, {i, j}));
}

struct ThresholdOptions {
  double grid_step = 0.01;
  double bracket_width = 1e-4;
  double zero_tolerance = kDefaultZeroTolerance;
};

// Parameter values where the measure enters zero (sudden death) or leaves it
// (sudden birth), scanning the swept probability upward from 0 to 1.
struct ThresholdReport {
  int swept_cardinality = 2;
  RandomnessParams fixed;
  std::vector<double> esd_points;
  std::vector<double> esb_points;

  std::string path_description() const {
    std::ostringstream os;
    os << "p" << swept_cardinality << " in [0,1]";
    for (const auto& [k, p] : fixed.values())
      if (k != swept_cardinality) os << ", p" << k << "=" << p;
    return os.str();
  }
};

// `measure` maps a DensityMatrix to a nonnegative real. Assumes the measure
// changes zero status at most once inside each grid cell.
template <typename Measure>
ThresholdReport find_thresholds(const Hypergraph& h, const RandomnessParams& fixed, int sweep_cardinality,
                                Measure&& measure, const ThresholdOptions& opt = {}) {
  if (!(opt.grid_step > 0.0) || !(opt.bracket_width > 0.0)) throw InvalidArgument("threshold grid step must be positive");
  ThresholdReport report;
  report.swept_cardinality = sweep_cardinality;
  report.fixed = fixed;

  auto is_zero = [&](double p) {
    RandomnessParams params = fixed;
    params.set(sweep_cardinality, p);
    return measure(randomize(h, params)) <= opt.zero_tolerance;
  };

  const int cells = std::max(1, static_cast<int>(std::llround(1.0 / opt.grid_step)));
  double prev_p = 0.0;
  bool prev_zero = is_zero(0.0);
  for (int i = 1; i <= cells; ++i) {
    const double p = static_cast<double>(i) / cells;
    const bool zero = is_zero(p);
    if (zero != prev_zero) {
      double lo = prev_p, hi = p;
      while (hi - lo > opt.bracket_width) {
        const double mid = 0.5 * (lo + hi);
        if (is_zero(mid) == prev_zero)
          lo = mid;
        else
          hi = mid;
      }
      (zero ? report.esd_points : report.esb_points).push_back(0.5 * (lo + hi));
    }
    prev_p = p;
    prev_zero = zero;
  }
  return report;
}

}  // namespace rhs
