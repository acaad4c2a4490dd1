#include <cstdio>

#include "rhs/rhs.hpp"

int main() {
  const rhs::Hypergraph h = rhs::parse_hypergraph("n 3\ne 1 2\ne 1 2 3\n");

  for (double p2 : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const rhs::DensityMatrix rho = rhs::randomize(h, {{2, p2}, {3, 1.0}});
    const double n = rhs::negativity(rho, rhs::Bipartition(3, {3}));
    const double c = rhs::reduced_concurrence(rho, 1, 3);
    const double g = rhs::gmn(rho);
    std::printf("p2=%.2f  negativity=%.6f  concurrence=%.6f  gmn=%.6f\n", p2, n, c, g);
  }

  const auto rep = rhs::find_thresholds(h, {{3, 1.0}}, 2, [](const rhs::DensityMatrix& rho) {
    return rhs::reduced_concurrence(rho, 1, 3);
  });
  for (double p : rep.esd_points) std::printf("sudden death at p2=%.4f\n", p);
  for (double p : rep.esb_points) std::printf("sudden birth at p2=%.4f\n", p);
}
