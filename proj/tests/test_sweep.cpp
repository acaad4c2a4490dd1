#include <gtest/gtest.h>

#include <regex>

#include "oracles.hpp"
#include "rhs/sweep.hpp"

using rhs::Bipartition;
using rhs::DensityMatrix;
using rhs::Hypergraph;
using rhs::MeasureKind;
using rhs::MeasureSpec;
using rhs::Range;
using rhs::SweepConfig;

namespace {

const Hypergraph kH31(3, {{1, 2, 3}});
const Hypergraph kH32(3, {{1, 2}, {1, 2, 3}});

SweepConfig negativity_config(const Hypergraph& g, Range p2, Range p3) {
  SweepConfig cfg;
  cfg.source = "test";
  cfg.graph = g;
  cfg.measure = {MeasureKind::negativity, Bipartition(g.vertex_count(), {g.vertex_count()}), std::nullopt};
  cfg.p2 = p2;
  cfg.p3 = p3;
  cfg.threads = 2;
  return cfg;
}

}  // namespace

TEST(Range, ParseAndValues) {
  const Range r = rhs::parse_range("0:1:0.25");
  EXPECT_EQ(r.values(), (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
  EXPECT_EQ(rhs::parse_range("0:1:0.01").values().size(), 101u);
  EXPECT_EQ(rhs::parse_range("0:1:0.05").values().size(), 21u);
  EXPECT_EQ(rhs::parse_range("0.3").values(), (std::vector<double>{0.3}));
  EXPECT_TRUE(rhs::parse_range("0.6:0.4:0.1").values().empty());
  EXPECT_EQ(rhs::parse_range("0:1:0.3").values().back(), 0.8999999999999999);
  EXPECT_THROW(rhs::parse_range("0:1"), rhs::ConfigError);
  EXPECT_THROW(rhs::parse_range("a:1:0.1"), rhs::ConfigError);
  EXPECT_THROW(rhs::parse_range("0:2:0.1").validate("p2"), rhs::ConfigError);
  EXPECT_THROW(rhs::parse_range("0:1:0").validate("p2"), rhs::ConfigError);
  EXPECT_EQ(r.to_string(), "0:1:0.25");
}

TEST(Context, Parsing) {
  EXPECT_EQ(rhs::parse_bipartition("1,2|3,4", 4), Bipartition(4, {1, 2}));
  EXPECT_EQ(rhs::parse_bipartition("3", 3), Bipartition(3, {3}));
  EXPECT_EQ(rhs::parse_bipartition("1,2|3", 3), Bipartition(3, {3}));
  EXPECT_THROW(rhs::parse_bipartition("1|2", 3), rhs::ConfigError);
  EXPECT_THROW(rhs::parse_bipartition("1,2,3", 3), rhs::ConfigError);
  EXPECT_THROW(rhs::parse_bipartition("1,x", 3), rhs::ConfigError);
  EXPECT_EQ(rhs::parse_pair("1,3"), (rhs::QubitPair{1, 3}));
  EXPECT_THROW(rhs::parse_pair("1,2,3"), rhs::ConfigError);
  EXPECT_EQ(rhs::parse_measure("gmn"), MeasureKind::gmn);
  EXPECT_THROW(rhs::parse_measure("entropy"), rhs::ConfigError);
}

TEST(SweepConfig, Validation) {
  SweepConfig cfg = negativity_config(kH32, {0, 1, 0.5}, {0, 1, 0.5});
  EXPECT_NO_THROW(cfg.validate());
  cfg.measure.bipartition = Bipartition(4, {1});
  EXPECT_THROW(cfg.validate(), rhs::ConfigError);
  cfg.measure = {MeasureKind::concurrence, std::nullopt, rhs::QubitPair{1, 4}};
  EXPECT_THROW(cfg.validate(), rhs::ConfigError);
  cfg.measure.pair = rhs::QubitPair{1, 3};
  EXPECT_NO_THROW(cfg.validate());
  cfg.measure = {MeasureKind::negativity, std::nullopt, std::nullopt};
  EXPECT_THROW(cfg.validate(), rhs::ConfigError);

  SweepConfig big = negativity_config(Hypergraph(4, {{1, 2, 3, 4}}), {0, 1, 0.5}, {0, 1, 0.5});
  EXPECT_THROW(big.validate(), rhs::ConfigError);
  SweepConfig wide = negativity_config(Hypergraph(5, {{1, 2}}), {0, 1, 0.5}, {0, 1, 0.5});
  wide.measure = {MeasureKind::gmn, std::nullopt, std::nullopt};
  EXPECT_THROW(wide.validate(), rhs::ConfigError);
}

TEST(RunSweep, RowMajorWithP2Outer) {
  const auto res = rhs::run_sweep(negativity_config(kH32, {0, 1, 0.5}, {0, 1, 0.25}));
  ASSERT_EQ(res.records.size(), 15u);
  EXPECT_EQ(res.records[0].p2, 0.0);
  EXPECT_EQ(res.records[1].p3, 0.25);
  EXPECT_EQ(res.records[5].p2, 0.5);
  EXPECT_EQ(res.records[5].p3, 0.0);
  for (const auto& r : res.records) EXPECT_GE(r.value, 0.0);
  EXPECT_FALSE(res.has_status);
}

TEST(RunSweep, EndpointsMatchBruteForce) {
  const auto res = rhs::run_sweep(negativity_config(kH32, {0, 1, 1}, Range::single(1.0)));
  ASSERT_EQ(res.records.size(), 2u);
  const Bipartition cut(3, {3});
  for (const auto& r : res.records) {
    const DensityMatrix ref(3, oracle::randomized_state(3, kH32.edges(), r.p2, r.p3));
    const double expect = (oracle::trace_norm(oracle::partial_transpose(ref.matrix(), 3, cut.part())) - 1.0) / 2.0;
    EXPECT_NEAR(r.value, expect, 1e-10) << r.p2;
  }
}

TEST(RunSweep, CornersEqualKnownStates) {
  const auto& g = rhs::find_preset("H3_3").graph;
  SweepConfig cfg = negativity_config(g, {0, 1, 1}, {0, 1, 1});
  const auto res = rhs::run_sweep(cfg);
  ASSERT_EQ(res.records.size(), 4u);
  auto only = [&](int k) {
    std::vector<rhs::Edge> e;
    for (const auto& edge : g.edges())
      if (static_cast<int>(edge.size()) == k) e.push_back(edge);
    return Hypergraph(3, e);
  };
  const std::vector<Hypergraph> corners{Hypergraph(3), only(3), only(2), g};
  for (std::size_t i = 0; i < 4; ++i) {
    const double direct = rhs::negativity(DensityMatrix::pure(rhs::hypergraph_state(corners[i])), Bipartition(3, {3}));
    EXPECT_NEAR(res.records[i].value, direct <= cfg.tol_zero ? 0.0 : direct, 1e-12) << i;
  }
  EXPECT_EQ(res.records[0].value, 0.0);
}

TEST(RunSweep, ZeroAtOriginForEveryMeasure) {
  for (auto kind : {MeasureKind::negativity, MeasureKind::concurrence, MeasureKind::gmn}) {
    SweepConfig cfg = negativity_config(kH32, Range::single(0.0), Range::single(0.0));
    cfg.measure = rhs::default_spec(kind, rhs::find_preset("H3_2"));
    const auto res = rhs::run_sweep(cfg);
    ASSERT_EQ(res.records.size(), 1u);
    EXPECT_EQ(res.records[0].value, 0.0) << rhs::to_string(kind);
  }
}

TEST(RunSweep, P2IsVacuousWithoutPairEdges) {
  const auto res = rhs::run_sweep(negativity_config(kH31, {0, 1, 0.1}, Range::single(0.7)));
  ASSERT_EQ(res.records.size(), 11u);
  for (const auto& r : res.records) EXPECT_EQ(r.value, res.records[0].value);
  EXPECT_GT(res.records[0].value, 0.0);
}

TEST(RunSweep, GmnStatusColumn) {
  SweepConfig cfg = negativity_config(kH32, {0.5, 0.9, 0.4}, Range::single(1.0));
  cfg.measure = {MeasureKind::gmn, std::nullopt, std::nullopt};
  const auto res = rhs::run_sweep(cfg);
  EXPECT_TRUE(res.has_status);
  ASSERT_EQ(res.records.size(), 2u);
  EXPECT_EQ(res.records[0].value, 0.0);
  EXPECT_GT(res.records[1].value, 1e-3);
  for (const auto& r : res.records) EXPECT_EQ(r.status, "optimal");
  const std::string csv = rhs::emit_csv(res, "T");
  EXPECT_NE(csv.find("p2,p3,value,status\n"), std::string::npos);
  EXPECT_NE(csv.find(",optimal\n"), std::string::npos);
}

TEST(Csv, EmptyGridIsHeaderOnly) {
  const auto res = rhs::run_sweep(negativity_config(kH32, {0.6, 0.4, 0.1}, {0, 1, 0.5}));
  EXPECT_TRUE(res.records.empty());
  const std::string csv = rhs::emit_csv(res, "T");
  EXPECT_EQ(csv.substr(csv.size() - std::string("p2,p3,value\n").size()), "p2,p3,value\n");
}

TEST(Csv, Layout) {
  const auto res = rhs::run_sweep(negativity_config(kH32, {0, 1, 0.5}, Range::single(1.0)));
  const std::string csv = rhs::emit_csv(res, "2026-01-01T00:00:00Z");
  std::vector<std::string> lines;
  std::stringstream ss(csv);
  for (std::string l; std::getline(ss, l);) lines.push_back(l);
  std::size_t meta = 0;
  while (meta < lines.size() && lines[meta][0] == '#') ++meta;
  EXPECT_GE(meta, 3u);
  ASSERT_EQ(lines.size(), meta + 1 + 3);
  EXPECT_EQ(lines[meta], "p2,p3,value");
  EXPECT_NE(csv.find("# version: "), std::string::npos);
  EXPECT_NE(csv.find("# timestamp: 2026-01-01T00:00:00Z\n"), std::string::npos);
  EXPECT_NE(csv.find("# context: {3}|{1,2}\n"), std::string::npos);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  const std::regex row(R"(^[0-9.e+-]+,[0-9.e+-]+,[0-9.e+-]+$)");
  for (std::size_t i = meta + 1; i < lines.size(); ++i) EXPECT_TRUE(std::regex_match(lines[i], row)) << lines[i];
}

TEST(Csv, RoundTripIsExact) {
  const auto res = rhs::run_sweep(negativity_config(kH32, {0, 1, 0.1}, {0, 1, 0.3}));
  const auto back = rhs::parse_csv(rhs::emit_csv(res));
  ASSERT_EQ(back.records.size(), res.records.size());
  for (std::size_t i = 0; i < res.records.size(); ++i) {
    EXPECT_EQ(back.records[i].p2, res.records[i].p2);
    EXPECT_EQ(back.records[i].p3, res.records[i].p3);
    EXPECT_EQ(back.records[i].value, res.records[i].value);
  }
  EXPECT_EQ(back.metadata, res.metadata);
}

TEST(Csv, DeterministicModuloTimestamp) {
  const SweepConfig cfg = negativity_config(kH32, {0, 1, 0.1}, {0, 1, 0.1});
  SweepConfig serial = cfg;
  serial.threads = 1;
  EXPECT_EQ(rhs::emit_csv(rhs::run_sweep(cfg), "T"), rhs::emit_csv(rhs::run_sweep(serial), "T"));
}

TEST(Csv, ParseErrors) {
  EXPECT_THROW(rhs::parse_csv("# only\n"), rhs::ParseError);
  EXPECT_THROW(rhs::parse_csv("a,b\n"), rhs::ParseError);
  EXPECT_THROW(rhs::parse_csv("p2,p3,value\n0,1\n"), rhs::ParseError);
  EXPECT_THROW(rhs::parse_csv("p2,p3,value\n0,1,x\n"), rhs::ParseError);
}

TEST(Gnuplot, ScriptReferencesCsv) {
  const auto res = rhs::run_sweep(negativity_config(kH32, Range::single(1.0), Range::single(1.0)));
  const std::string script = rhs::gnuplot_script("out.csv", res);
  EXPECT_NE(script.find("'out.csv'"), std::string::npos);
  EXPECT_NE(script.find("set datafile separator ','"), std::string::npos);
}

TEST(Thresholds, ConfigDriven) {
  rhs::ThresholdConfig cfg;
  cfg.graph = kH32;
  cfg.measure = {MeasureKind::concurrence, std::nullopt, rhs::QubitPair{1, 3}};
  const auto rep = rhs::run_thresholds(cfg);
  ASSERT_EQ(rep.esd_points.size(), 1u);
  EXPECT_NEAR(rep.esd_points[0], 0.5, 0.005);

  cfg.axis = rhs::SweepAxis::p3;
  cfg.fixed = 0.5;
  const auto along_p3 = rhs::run_thresholds(cfg);
  EXPECT_TRUE(along_p3.esb_points.empty());
  cfg.fixed = 1.5;
  EXPECT_THROW(rhs::run_thresholds(cfg), rhs::ConfigError);
}

TEST(ResolveHypergraph, PresetOrFile) {
  EXPECT_EQ(rhs::resolve_hypergraph("H3_2"), kH32);
  EXPECT_THROW(rhs::resolve_hypergraph("/nonexistent/file.hg"), rhs::ConfigError);
}
