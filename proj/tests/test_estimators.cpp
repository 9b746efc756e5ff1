// Copyright 2026 The sublinear-tsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>

#include "sltsp/estimators.hpp"
#include "sltsp/exact.hpp"
#include "sltsp/generators.hpp"
#include "stats_util.hpp"

namespace sltsp {
namespace {

SimpleGraph family(const std::string& name, std::size_t n, std::uint64_t seed = 0) {
  return generate({{"name", name}, {"n", n}}, seed).graph;
}

SimpleGraph connected_gnp(std::size_t n, double p, std::uint64_t seed) {
  return generate({{"name", "connected_gnp"}, {"n", n}, {"p", p}}, seed).graph;
}

EstimatorConfig small_config(std::uint64_t seed, std::uint32_t k = 4, std::uint64_t r = 200) {
  EstimatorConfig cfg;
  cfg.k = k;
  cfg.seed = seed;
  cfg.r_override = r;
  cfg.aux_r_override = 400;
  return cfg;
}

TEST(EstimatorConfig, Validation) {
  EstimatorConfig cfg;
  cfg.k = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.k = 2;
  cfg.epsilon = 1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.epsilon = 0.1;
  cfg.r_override = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_EQ(default_path_cover_samples(256, 20), static_cast<std::uint64_t>(std::ceil(192.0 * 400 * std::log(256.0))));
  EXPECT_EQ(default_bridge_samples(100, 0.5), static_cast<std::uint64_t>(std::ceil(256.0 * 16 * std::log(100.0))));
}

TEST(PathCoverEstimate, EdgelessClampsToZero) {
  TspInstance inst(SimpleGraph(20), MetricKind::kOneTwo);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto rep = estimate_path_cover(inst, small_config(seed));
    EXPECT_EQ(rep.components.at("X"), 0.0);
    EXPECT_EQ(rep.value, 0.0);
    EXPECT_LT(rep.components.at("rho_unclamped"), 0.0);
  }
  EXPECT_THROW(estimate_path_cover(TspInstance(SimpleGraph(1), MetricKind::kOneTwo), small_config(0)),
               std::invalid_argument);
}

TEST(PathCoverEstimate, ComponentsReproduceTheValue) {
  auto g = family("planted_ham_path", 40, 3);
  for (bool clamp : {true, false}) {
    TspInstance inst(g, MetricKind::kOneTwo);
    auto cfg = small_config(11);
    cfg.clamp = clamp;
    auto rep = estimate_path_cover(inst, cfg);
    const double k = rep.components.at("K"), r = rep.components.at("r"), x = rep.components.at("X");
    EXPECT_EQ(r, 200.0);
    EXPECT_DOUBLE_EQ(rep.components.at("f"), cfg.port_scale * x / r);
    const double rho = k / (2 * (k + 2)) * (rep.components.at("f") * 40 - 40 / (4 * k));
    EXPECT_DOUBLE_EQ(rep.components.at("rho_unclamped"), rho);
    EXPECT_DOUBLE_EQ(rep.value, clamp ? std::clamp(rho, 0.0, 39.0) : rho);
    EXPECT_EQ(rep.samples, 200u);
    EXPECT_EQ(rep.queries.total, inst.ledger().total());
    EXPECT_EQ(rep.queries.phase(phase::kTrail), rep.queries.total);
  }
}

TEST(PathCoverEstimate, DeterministicPerSeed) {
  auto g = connected_gnp(30, 0.1, 2);
  TspInstance a(g, MetricKind::kOneTwo), b(g, MetricKind::kOneTwo);
  auto ra = estimate_path_cover(a, small_config(5));
  auto rb = estimate_path_cover(b, small_config(5));
  EXPECT_EQ(to_json(ra).dump(), to_json(rb).dump());
  auto rc = estimate_path_cover(b, small_config(6));
  EXPECT_NE(to_json(ra).dump(), to_json(rc).dump());
}

// Mean estimates sit inside the sandwich for families with known rho.
TEST(PathCoverEstimate, MeanLiesInsideTheSandwich) {
  const std::vector<std::pair<std::string, double>> cases{
      {"planted_ham_path", 39.0}, {"disjoint_edges", 20.0}, {"cycle", 39.0}};
  for (const auto& [name, rho] : cases) {
    auto g = family(name, 40, 1);
    std::vector<double> values;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      TspInstance inst(g, MetricKind::kOneTwo);
      auto cfg = small_config(seed, 4, 300);
      cfg.clamp = false;
      values.push_back(estimate_path_cover(inst, cfg).value);
    }
    auto m = testing::moments(values);
    EXPECT_LE(m.mean, rho + 3 * m.se) << name;
    EXPECT_GE(m.mean, (0.5 - 0.25) * rho - 40.0 / 4 - 3 * m.se) << name;
  }
}

TEST(Tsp12Estimate, EdgelessGivesTwoN) {
  TspInstance inst(SimpleGraph(10), MetricKind::kOneTwo);
  auto rep = estimate_tsp12(inst, small_config(1));
  EXPECT_EQ(rep.value, 20.0);
  EXPECT_EQ(exact_tsp(inst), 20u);
  EXPECT_EQ(rep.components.at("rho_tilde"), 0.0);
  EXPECT_THROW(estimate_tsp12(TspInstance(connected_gnp(5, 0.5, 1), MetricKind::kGraphic), small_config(1)),
               std::invalid_argument);
}

TEST(Tsp12Estimate, CompleteGraphRatio) {
  auto g = generate({{"name", "gnp"}, {"n", 12}, {"p", 1.0}}, 0).graph;
  std::size_t within = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    TspInstance inst(g, MetricKind::kOneTwo);
    auto cfg = small_config(seed, 20, 400);
    auto rep = estimate_tsp12(inst, cfg);
    EXPECT_DOUBLE_EQ(rep.value, 24.0 - rep.components.at("rho_tilde"));
    EXPECT_GE(rep.value + 1.0, 12.0);
    if (rep.value <= (1.5 + cfg.epsilon) * 12.0) ++within;
  }
  EXPECT_GE(within, 95u);
}

TEST(BadVertex, Examples) {
  auto star = family("star", 6);
  TspInstance s(star, MetricKind::kGraphic);
  EXPECT_TRUE(is_bad_vertex(s, 3));
  EXPECT_FALSE(is_bad_vertex(s, 0));
  TspInstance p(family("path", 3), MetricKind::kGraphic);
  EXPECT_TRUE(is_bad_vertex(p, 1));
  TspInstance c(family("cycle", 7), MetricKind::kGraphic);
  for (Vertex v = 0; v < 7; ++v) EXPECT_FALSE(is_bad_vertex(c, v));
  EXPECT_THROW(is_bad_vertex(TspInstance(star, MetricKind::kOneTwo), 0), std::invalid_argument);
}

TEST(BadVertex, AgreesWithArticulationPoints) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = connected_gnp(40, 0.04, seed);
    TspInstance inst(g, MetricKind::kGraphic);
    auto cuts = exact_cut_vertices(g);
    for (Vertex v = 0; v < 40; ++v) {
      const bool expect = g.degree(v) == 1 || (g.degree(v) == 2 && std::binary_search(cuts.begin(), cuts.end(), v));
      ASSERT_EQ(is_bad_vertex(inst, v), expect) << "seed " << seed << " v " << v;
    }
  }
}

TEST(BadVertexEstimate, Examples) {
  EstimatorConfig cfg;
  cfg.epsilon = 0.1;
  TspInstance cyc(family("cycle", 50), MetricKind::kGraphic);
  auto rc = estimate_bad_vertices(cyc, cfg);
  EXPECT_GE(rc.value, 0.0);
  EXPECT_LE(rc.value, 0.1 * 50);
  TspInstance path(family("path", 50), MetricKind::kGraphic);
  auto rp = estimate_bad_vertices(path, cfg);
  EXPECT_GE(rp.value, 50.0);
  EXPECT_LE(rp.value, 50.0 * 1.1);
  EXPECT_DOUBLE_EQ(rp.value, 50.0 * rp.components.at("mean") + 0.1 * 50 / 2);
}

TEST(BadVertexEstimate, SandwichOnRandomGraphs) {
  auto g = connected_gnp(200, 0.012, 4);
  const double beta = static_cast<double>(exact_bad_vertex_count(g));
  ASSERT_GT(beta, 0.0);
  std::size_t ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    TspInstance inst(g, MetricKind::kGraphic);
    EstimatorConfig cfg;
    cfg.epsilon = 0.1;
    cfg.seed = seed;
    auto rep = estimate_bad_vertices(inst, cfg);
    if (rep.value >= beta && rep.value <= beta + 0.1 * 200) ++ok;
  }
  EXPECT_GE(ok, 95u);
}

TEST(BridgeTest, Examples) {
  TspInstance p(family("path", 3), MetricKind::kGraphic);
  auto f = test_bridges_at(p, 1, 8);
  EXPECT_EQ(f.neighbors, (std::vector<Vertex>{0, 2}));
  EXPECT_EQ(f.is_bridge, (std::vector<bool>{true, true}));
  TspInstance t(family("cycle", 3), MetricKind::kGraphic);
  for (Vertex u = 0; u < 3; ++u) EXPECT_EQ(test_bridges_at(t, u, 8).is_bridge, (std::vector<bool>{false, false}));
  TspInstance star(family("star", 10), MetricKind::kGraphic);
  EXPECT_THROW(test_bridges_at(star, 0, 8), std::invalid_argument);
}

TEST(BridgeTest, AgreesWithTarjan) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto g = connected_gnp(30 + seed * 3, 2.5 / static_cast<double>(30 + seed * 3), seed);
    TspInstance inst(g, MetricKind::kGraphic);
    auto bridges = exact_bridges(g);
    for (Vertex u = 0; u < g.vertex_count(); ++u) {
      if (g.degree(u) > 8) continue;
      auto f = test_bridges_at(inst, u, 8);
      for (std::size_t j = 0; j < f.neighbors.size(); ++j) {
        auto e = std::make_pair(std::min(u, f.neighbors[j]), std::max(u, f.neighbors[j]));
        ASSERT_EQ(f.is_bridge[j], std::binary_search(bridges.begin(), bridges.end(), e))
            << "seed " << seed << " u " << u;
      }
    }
  }
}

TEST(BridgeTest, CostIsLinearPerIncidentEdge) {
  auto g = connected_gnp(60, 0.05, 1);
  TspInstance inst(g, MetricKind::kGraphic);
  Vertex u = 0;
  while (g.degree(u) < 2) ++u;
  auto before = inst.ledger().snapshot();
  test_bridges_at(inst, u, 8);
  auto used = inst.ledger().snapshot().since(before);
  EXPECT_EQ(used.phase(phase::kDegreeProbe), 59u);
  EXPECT_LE(used.phase(phase::kBridgeTest), g.degree(u) * 60u);
}

TEST(BridgeEstimate, TreeAndTwoEdgeConnected) {
  std::size_t ok = 0;
  auto tree = family("tree", 60, 2);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    TspInstance inst(tree, MetricKind::kGraphic);
    auto cfg = small_config(seed);
    cfg.epsilon = 0.25;
    auto rep = estimate_bridges(inst, cfg);
    if (rep.value >= 59.0 && rep.value <= 59.0 + 0.25 * 60) ++ok;
  }
  EXPECT_GE(ok, 95u);
  TspInstance cyc(family("cycle", 40), MetricKind::kGraphic);
  auto cfg = small_config(3);
  cfg.epsilon = 0.25;
  auto rep = estimate_bridges(cyc, cfg);
  EXPECT_EQ(rep.components.at("mean"), 0.0);
  EXPECT_GE(rep.value, 0.0);
  EXPECT_LE(rep.value, 0.25 * 40);
}

TEST(GraphicEstimates, ComponentAudit) {
  auto g = connected_gnp(30, 0.08, 6);
  TspInstance inst(g, MetricKind::kGraphic);
  auto cfg = small_config(2);
  auto v1 = estimate_graphic_tsp_v1(inst, cfg);
  EXPECT_DOUBLE_EQ(v1.value, 60.0 - (v1.components.at("rho_tilde") - 2 * v1.components.at("beta_tilde")) / 5.0);
  auto v2 = estimate_graphic_tsp_v2(inst, cfg);
  EXPECT_DOUBLE_EQ(v2.value, 60.0 - (v2.components.at("rho_tilde") - v2.components.at("bridges_tilde")) / 3.0);
  ExactMatching exact;
  auto sq = estimate_graphic_tsp_subquadratic(inst, cfg, exact);
  EXPECT_DOUBLE_EQ(sq.value, 60.0 - (sq.components.at("mu_tilde") - sq.components.at("bridges_tilde")) / 3.0);
  EXPECT_EQ(sq.components.at("mu_tilde"), static_cast<double>(exact_max_matching(g).size));
  EXPECT_THROW(estimate_graphic_tsp_v1(TspInstance(g, MetricKind::kOneTwo), cfg), std::invalid_argument);
}

TEST(GraphicEstimates, PathGraphAudit) {
  TspInstance inst(family("path", 20), MetricKind::kGraphic);
  auto rep = estimate_graphic_tsp_v1(inst, small_config(4));
  EXPECT_GE(rep.components.at("beta_tilde"), 20.0);
  EXPECT_DOUBLE_EQ(rep.value, 40.0 - (rep.components.at("rho_tilde") - 2 * rep.components.at("beta_tilde")) / 5.0);
}

TEST(GraphicEstimates, AdversarialMatcherShiftsByAtMostEpsNOverThree) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto g = connected_gnp(10, 0.3, seed);
    TspInstance a(g, MetricKind::kGraphic), b(g, MetricKind::kGraphic);
    auto cfg = small_config(seed);
    ExactMatching exact;
    LowerEdgeMatching low;
    auto re = estimate_graphic_tsp_subquadratic(a, cfg, exact);
    auto rl = estimate_graphic_tsp_subquadratic(b, cfg, low);
    EXPECT_NEAR(rl.value - re.value, cfg.epsilon * 10 / 3.0, 1e-9);
    EXPECT_GE(rl.value, static_cast<double>(exact_tsp(a)));
  }
}

TEST(EstimateReport, JsonFieldNames) {
  TspInstance inst(family("cycle", 12), MetricKind::kGraphic);
  auto j = to_json(estimate_graphic_tsp_v2(inst, small_config(1)));
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"algorithm", "n", "seed", "value", "components", "queries", "samples",
                                            "wall_ms"}));
  EXPECT_EQ(j["algorithm"], "graphic_v2");
  EXPECT_TRUE(j["queries"].contains("total"));
  EXPECT_EQ(j["wall_ms"], 0.0);
}

TEST(Estimators, DeterministicAcrossRuns) {
  auto g = connected_gnp(24, 0.12, 9);
  auto run = [&] {
    TspInstance inst(g, MetricKind::kGraphic);
    ExactMatching exact;
    auto cfg = small_config(77);
    std::string out;
    out += to_json(estimate_graphic_tsp_v1(inst, cfg)).dump();
    out += to_json(estimate_graphic_tsp_v2(inst, cfg)).dump();
    out += to_json(estimate_graphic_tsp_subquadratic(inst, cfg, exact)).dump();
    out += to_json(estimate_bridges(inst, cfg)).dump();
    return out;
  };
  EXPECT_EQ(run(), run());
}

}  // namespace
}  // namespace sltsp
