#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "rhs/randomization.hpp"

using rhs::ComplexMatrix;
using rhs::DensityMatrix;
using rhs::Hypergraph;
using rhs::RandomnessParams;

namespace {

const Hypergraph kH32(3, {{1, 2}, {1, 2, 3}});

RandomnessParams random_params(const Hypergraph& h, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RandomnessParams p;
  for (int k : h.cardinalities()) p.set(k, u(rng));
  return p;
}

}  // namespace

TEST(RandomnessParams, Validation) {
  RandomnessParams p{{2, 0.3}};
  EXPECT_TRUE(p.has(2));
  EXPECT_FALSE(p.has(3));
  EXPECT_DOUBLE_EQ(p.at(2), 0.3);
  EXPECT_THROW(p.at(3), rhs::InvalidArgument);
  EXPECT_THROW(p.set(2, 1.5), rhs::InvalidArgument);
  EXPECT_THROW(p.set(2, -0.1), rhs::InvalidArgument);
  EXPECT_THROW(p.set(1, 0.5), rhs::InvalidArgument);
  EXPECT_THROW(rhs::randomize(kH32, p), rhs::InvalidArgument);
  EXPECT_EQ(RandomnessParams::uniform({2, 3}, 0.25).values().size(), 2u);
}

TEST(NoisyGate, Endpoints) {
  const DensityMatrix plus = DensityMatrix::pure(rhs::plus_state(2));
  EXPECT_LT(rhs::max_abs_entry(rhs::apply_noisy_gate(plus, {1, 2}, 0.0).matrix() - plus.matrix()), 1e-15);
  const DensityMatrix graph = DensityMatrix::pure(rhs::apply_ce(rhs::plus_state(2), {1, 2}));
  EXPECT_LT(rhs::max_abs_entry(rhs::apply_noisy_gate(plus, {1, 2}, 1.0).matrix() - graph.matrix()), 1e-15);
  const ComplexMatrix half = (plus.matrix() + graph.matrix()) / 2.0;
  EXPECT_LT(rhs::max_abs_entry(rhs::apply_noisy_gate(plus, {1, 2}, 0.5).matrix() - half), 1e-15);
  EXPECT_THROW(rhs::apply_noisy_gate(plus, {1, 2}, 2.0), rhs::InvalidArgument);
}

TEST(Randomize, AllOnesIsPureHypergraphState) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Hypergraph h = oracle::random_hypergraph(4, 6, rng);
    const DensityMatrix rho = rhs::randomize(h, RandomnessParams::uniform({2, 3, 4}, 1.0));
    const DensityMatrix pure = DensityMatrix::pure(rhs::hypergraph_state(h));
    EXPECT_NEAR(rho.purity(), 1.0, 1e-12);
    EXPECT_LT(rhs::max_abs_entry(rho.matrix() - pure.matrix()), 1e-14);
    const DensityMatrix zero = rhs::randomize(h, RandomnessParams::uniform({2, 3, 4}, 0.0));
    EXPECT_LT(rhs::max_abs_entry(zero.matrix() - ComplexMatrix::Constant(16, 16, 1.0 / 16)), 1e-15);
  }
}

TEST(Randomize, TwoEdgeMixtureWeights) {
  const double p2 = 0.3, p3 = 0.8;
  const auto terms = rhs::mixture_terms(kH32, {{2, p2}, {3, p3}});
  ASSERT_EQ(terms.size(), 4u);
  EXPECT_NEAR(terms[0].weight, (1 - p2) * (1 - p3), 1e-15);
  EXPECT_NEAR(terms[1].weight, p2 * (1 - p3), 1e-15);
  EXPECT_NEAR(terms[2].weight, (1 - p2) * p3, 1e-15);
  EXPECT_NEAR(terms[3].weight, p2 * p3, 1e-15);

  const auto quarter = rhs::mixture_terms(kH32, {{2, 0.5}, {3, 0.5}});
  for (const auto& t : quarter) EXPECT_NEAR(t.weight, 0.25, 1e-15);

  const DensityMatrix rho = rhs::randomize(kH32, {{2, p2}, {3, p3}});
  EXPECT_LT(rhs::max_abs_entry(rho.matrix() - oracle::randomized_state(3, kH32.edges(), p2, p3)), 1e-14);
}

TEST(Randomize, MixtureSmallCases) {
  const auto empty = rhs::mixture_terms(Hypergraph(3), {});
  ASSERT_EQ(empty.size(), 1u);
  EXPECT_DOUBLE_EQ(empty[0].weight, 1.0);
  const auto single = rhs::mixture_terms(Hypergraph(2, {{1, 2}}), {{2, 0.2}});
  ASSERT_EQ(single.size(), 2u);
  EXPECT_NEAR(single[0].weight, 0.8, 1e-15);
  EXPECT_NEAR(single[1].weight, 0.2, 1e-15);
}

TEST(Randomize, ChannelEqualsMixture) {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const Hypergraph h = oracle::random_hypergraph(n, 6, rng);
    const RandomnessParams p = random_params(h, rng);
    const DensityMatrix a = rhs::randomize(h, p);
    const DensityMatrix b = rhs::randomize_mixture(h, p);
    EXPECT_LT(rhs::max_abs_entry(a.matrix() - b.matrix()), 1e-12) << rhs::edge_list_string(h);

    double total = 0.0;
    for (const auto& t : rhs::mixture_terms(h, p)) {
      EXPECT_GE(t.weight, 0.0);
      total += t.weight;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_TRUE(a.is_physical());
  }
}

TEST(Randomize, RankIsDimensionOfSpannedStates) {
  // Distinct subhypergraph states need not be linearly independent: for
  // {1,2},{1,2,3} the four states span only three dimensions.
  const auto mixed = rhs::hermitian_eigenvalues(rhs::randomize(kH32, {{2, 0.3}, {3, 0.6}}).matrix());
  EXPECT_GT(mixed(2), 1e-3);
  EXPECT_LT(std::abs(mixed(3)), 1e-12);

  std::mt19937 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const Hypergraph h = oracle::random_hypergraph(4, 4, rng);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    RandomnessParams p;
    for (int k : h.cardinalities()) p.set(k, u(rng));
    const auto ev = rhs::hermitian_eigenvalues(rhs::randomize(h, p).matrix());
    int rank = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) rank += ev(i) > 1e-10 ? 1 : 0;

    const auto subs = rhs::spanning_subhypergraphs(h);
    Eigen::MatrixXd vectors(16, static_cast<Eigen::Index>(subs.size()));
    for (std::size_t i = 0; i < subs.size(); ++i)
      vectors.col(static_cast<Eigen::Index>(i)) = oracle::hypergraph_state(4, subs[i].edges()).real();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(vectors);
    EXPECT_EQ(rank, lu.rank()) << rhs::edge_list_string(h);
    EXPECT_LE(rank, 1 << h.edge_count());
  }
}
