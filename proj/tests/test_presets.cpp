#include <gtest/gtest.h>

#include "rhs/presets.hpp"

using rhs::Hypergraph;

TEST(Presets, CatalogNamesAndLookup) {
  const auto& cat = rhs::preset_catalog();
  ASSERT_EQ(cat.size(), 8u);
  for (const char* name : {"H3_1", "H3_2", "H3_3", "H3_4", "H4_1", "H4_2", "H4_3", "H4_4"})
    EXPECT_EQ(rhs::find_preset(name).name, name);
  EXPECT_EQ(rhs::find_preset("h3_2").name, "H3_2");
  EXPECT_EQ(rhs::find_preset("H3(2)").name, "H3_2");
  EXPECT_EQ(rhs::find_preset("H_4^(3)").name, "H4_3");
  EXPECT_THROW(rhs::find_preset("H5_1"), rhs::InvalidArgument);
  EXPECT_FALSE(rhs::is_preset_name("samples/h3_2.hg"));
}

TEST(Presets, FixedEdgeSets) {
  EXPECT_EQ(rhs::find_preset("H3_1").graph, Hypergraph(3, {{1, 2, 3}}));
  EXPECT_EQ(rhs::find_preset("H3_2").graph, Hypergraph(3, {{1, 2}, {1, 2, 3}}));
  EXPECT_EQ(rhs::find_preset("H4_3").graph, Hypergraph(4, {{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}}));
}

TEST(Presets, UniformityAndMarginals) {
  EXPECT_TRUE(rhs::is_k_uniform(rhs::find_preset("H3_1").graph, 3));
  EXPECT_TRUE(rhs::is_k_uniform(rhs::find_preset("H4_3").graph, 3));
  for (const char* name : {"H3_2", "H3_3", "H3_4", "H4_1", "H4_2", "H4_4"}) {
    const auto& g = rhs::find_preset(name).graph;
    EXPECT_GT(g.count_with_cardinality(2), 0u) << name;
    EXPECT_GT(g.count_with_cardinality(3), 0u) << name;
  }
  for (const char* name : {"H4_1", "H4_2", "H4_3"}) {
    const auto& g = rhs::find_preset(name).graph;
    const auto rho = rhs::DensityMatrix::pure(rhs::hypergraph_state(g));
    for (int q = 1; q <= 4; ++q)
      EXPECT_LT(rhs::max_abs_entry(rhs::partial_trace(rho, {q}).matrix() - rhs::ComplexMatrix::Identity(2, 2) / 2.0), 1e-10)
          << name << " qubit " << q;
  }
  EXPECT_NE(rhs::isomorphism_key(rhs::find_preset("H4_1").graph), rhs::isomorphism_key(rhs::find_preset("H4_2").graph));
}

TEST(Presets, SignaturesMatchReferenceRows) {
  for (const auto& row : rhs::threshold_table()) {
    const auto& p = rhs::find_preset(row.preset);
    EXPECT_EQ(p.concurrence_pair, row.pair);
    const auto sig = rhs::concurrence_signature(p.graph, row.pair);
    EXPECT_TRUE(rhs::signature_matches(sig, row, rhs::kRoundingTolerance)) << row.preset;
  }
}

TEST(Presets, IsomorphismKeyIgnoresLabels) {
  const Hypergraph a(4, {{1, 2}, {2, 3}, {2, 4}, {1, 3, 4}});
  const Hypergraph b(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3, 4}});
  const Hypergraph c(4, {{1, 2}, {3, 4}, {1, 2, 3}});
  EXPECT_EQ(rhs::isomorphism_key(a), rhs::isomorphism_key(b));
  EXPECT_NE(rhs::isomorphism_key(a), rhs::isomorphism_key(c));
  EXPECT_EQ(rhs::isomorphism_key(b), "{1,2};{1,3};{1,4};{2,3,4}");
}

TEST(Presets, CandidateSpaceSizes) {
  EXPECT_EQ(rhs::candidate_space(3).size(), 8u);     // one triple, 2^3 pair subsets
  EXPECT_EQ(rhs::candidate_space(4).size(), 960u);   // 15 triple subsets x 2^6
}

TEST(IdentifyPresets, ThreeVertexRowsFromSignaturesAlone) {
  rhs::IdentifyOptions opt;
  opt.include_four_vertex = false;
  const auto rep = rhs::identify_presets(opt);
  EXPECT_EQ(rep.searched_three, 8u);
  EXPECT_EQ(rep.searched_four, 0u);
  for (const auto& m : rep.rows) {
    if (m.row.n_vertices != 3) {
      EXPECT_TRUE(m.candidates.empty());
      continue;
    }
    ASSERT_TRUE(m.selected.has_value()) << m.row.preset;
    EXPECT_EQ(m.distinct_classes, 1u) << m.row.preset;
    EXPECT_EQ(m.selected->graph, rhs::find_preset(m.row.preset).graph) << m.row.preset;
  }
}

TEST(IdentifyPresets, FullSearchReproducesCatalog) {
  const auto rep = rhs::identify_presets();
  EXPECT_EQ(rep.searched_four, 960u);
  for (const auto& m : rep.rows) {
    ASSERT_TRUE(m.selected.has_value()) << m.row.preset;
    EXPECT_EQ(m.selected->graph, rhs::find_preset(m.row.preset).graph) << m.row.preset;
    for (const auto& c : m.candidates) {
      EXPECT_TRUE(rhs::signature_matches(c.signature, m.row));
      if (m.row.require_mixed_marginals) EXPECT_TRUE(c.mixed_marginals);
    }
  }
  const std::string md = rhs::format_preset_report(rep);
  EXPECT_NE(md.find("## H4_1"), std::string::npos);
  EXPECT_NE(md.find("ambiguous"), std::string::npos);
  EXPECT_NE(md.find("Selected: `{1,2};{3,4};{1,2,3};{1,2,4};{1,3,4};{2,3,4}`"), std::string::npos);
}
