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

#include <queue>
#include <sstream>
#include <thread>

#include "sltsp/generators.hpp"
#include "sltsp/graph.hpp"
#include "sltsp/metric.hpp"

namespace sltsp {
namespace {

SimpleGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
  return generate({{"name", "gnp"}, {"n", n}, {"p", p}}, seed).graph;
}

// Independent BFS used as the distance reference.
std::vector<std::uint32_t> bfs(const SimpleGraph& g, Vertex s) {
  std::vector<std::uint32_t> d(g.vertex_count(), UINT32_MAX);
  std::queue<Vertex> q;
  d[s] = 0;
  q.push(s);
  while (!q.empty()) {
    Vertex v = q.front();
    q.pop();
    for (Vertex w : g.neighbors(v)) {
      if (d[w] == UINT32_MAX) {
        d[w] = d[v] + 1;
        q.push(w);
      }
    }
  }
  return d;
}

TEST(SimpleGraph, RejectsSelfLoopsAndDuplicates) {
  SimpleGraph g(3);
  g.add_edge(0, 1);
  EXPECT_THROW(g.add_edge(1, 0), GraphError);
  EXPECT_THROW(g.add_edge(2, 2), GraphError);
  EXPECT_THROW(g.add_edge(0, 3), GraphError);
  EXPECT_EQ(g.edge_count(), 1u);
}

TEST(SimpleGraph, AdjacencyMatchesEdgeSet) {
  auto g = random_graph(40, 0.2, 7);
  std::size_t degree_sum = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    degree_sum += g.degree(v);
    for (Vertex w : g.neighbors(v)) {
      EXPECT_TRUE(g.has_edge(v, w));
      const auto& back = g.neighbors(w);
      EXPECT_NE(std::find(back.begin(), back.end(), v), back.end());
    }
  }
  EXPECT_EQ(degree_sum, 2 * g.edge_count());
  for (auto [u, v] : g.edges()) {
    EXPECT_LT(u, v);
    EXPECT_EQ(g.neighbors(u)[g.slot_of(u, v)], v);
  }
}

TEST(EdgeList, RoundTrips) {
  auto g = random_graph(25, 0.3, 3);
  std::stringstream ss;
  write_edge_list(ss, g);
  EXPECT_EQ(read_edge_list(ss), g);
}

TEST(EdgeList, ErrorsNameTheLine) {
  auto expect_line = [](const std::string& text, const std::string& needle) {
    std::istringstream in(text);
    try {
      read_edge_list(in);
      FAIL() << "accepted: " << text;
    } catch (const GraphError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  expect_line("3 2\n0 1\n1 1\n", "line 3");
  expect_line("3 2\n0 1\n0 1\n", "line 3");
  expect_line("3 1\n0 x\n", "line 2");
  expect_line("3 2\n0 1\n", "2");
  expect_line("3 1\n0 7\n", "line 2");
}

TEST(Distance, IdentityIsZeroAndCharged) {
  TspInstance inst(SimpleGraph(3), MetricKind::kOneTwo);
  EXPECT_EQ(inst.distance(1, 1), 0u);
  EXPECT_EQ(inst.ledger().total(), 1u);
}

TEST(Distance, OneTwoSingleEdge) {
  SimpleGraph g(4);
  g.add_edge(1, 2);
  TspInstance inst(g, MetricKind::kOneTwo);
  EXPECT_EQ(inst.distance(1, 2), 1u);
  EXPECT_EQ(inst.distance(1, 3), 2u);
  EXPECT_EQ(inst.ledger().total(), 2u);
}

TEST(Distance, GraphicPath) {
  auto g = generate({{"name", "path"}, {"n", 3}}, 0).graph;
  TspInstance inst(g, MetricKind::kGraphic);
  EXPECT_EQ(inst.distance(0, 2), 2u);
}

TEST(Distance, GraphicRequiresConnectivity) {
  SimpleGraph g(3);
  g.add_edge(0, 1);
  EXPECT_THROW(TspInstance(g, MetricKind::kGraphic), GraphError);
}

TEST(WeightOneAdjacency, Examples) {
  auto tri = generate({{"name", "cycle"}, {"n", 3}}, 0).graph;
  TspInstance t(tri, MetricKind::kOneTwo);
  EXPECT_TRUE(t.weight_one_adjacency(0, 1));
  TspInstance empty(SimpleGraph(5), MetricKind::kOneTwo);
  for (Vertex a = 0; a < 5; ++a) {
    for (Vertex b = 0; b < 5; ++b) {
      if (a != b) {
        EXPECT_FALSE(empty.weight_one_adjacency(a, b));
      }
    }
  }
  auto c4 = generate({{"name", "cycle"}, {"n", 4}}, 0).graph;
  TspInstance sq(c4, MetricKind::kGraphic);
  EXPECT_FALSE(sq.weight_one_adjacency(0, 2));
  EXPECT_EQ(sq.ledger().total(), 1u);
}

TEST(WeightOneAdjacency, AgreesWithEdgeSetExhaustively) {
  auto g = random_graph(200, 0.05, 11);
  TspInstance inst(g, MetricKind::kOneTwo);
  for (Vertex a = 0; a < 200; ++a) {
    for (Vertex b = 0; b < 200; ++b) {
      if (a != b) {
        ASSERT_EQ(inst.weight_one_adjacency(a, b), g.has_edge(a, b));
      }
    }
  }
  EXPECT_EQ(inst.ledger().total(), 200u * 199u);
}

TEST(ScanNeighbors, CostsExactlyNMinusOne) {
  SimpleGraph g(6);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  g.add_edge(0, 3);
  TspInstance inst(g, MetricKind::kOneTwo);
  EXPECT_TRUE(inst.scan_neighbors(5).empty());
  EXPECT_EQ(inst.ledger().total(), 5u);
  EXPECT_EQ(inst.scan_neighbors(0), (std::vector<Vertex>{1, 2, 3}));
  EXPECT_EQ(inst.ledger().total(), 10u);
}

TEST(ScanNeighbors, MatchesGroundTruth) {
  auto g = random_graph(20, 0.3, 5);
  TspInstance inst(g, MetricKind::kOneTwo);
  for (Vertex v = 0; v < 20; ++v) EXPECT_EQ(inst.scan_neighbors(v), g.neighbors(v));
}

TEST(Distance, GraphicIsSymmetricMetricAndMatchesBfs) {
  auto g = generate({{"name", "connected_gnp"}, {"n", 30}, {"p", 0.08}}, 9).graph;
  TspInstance inst(g, MetricKind::kGraphic);
  std::vector<std::vector<std::uint32_t>> ref;
  for (Vertex s = 0; s < 30; ++s) ref.push_back(bfs(g, s));
  for (Vertex a = 0; a < 30; ++a) {
    for (Vertex b = 0; b < 30; ++b) {
      ASSERT_EQ(inst.peek(a, b), ref[a][b]);
      ASSERT_EQ(inst.peek(a, b), inst.peek(b, a));
      for (Vertex c = 0; c < 30; ++c) ASSERT_LE(inst.peek(a, c), inst.peek(a, b) + inst.peek(b, c));
    }
  }
}

TEST(Ledger, TotalEqualsSumOfPhasesAndIsMonotone) {
  TspInstance inst(random_graph(10, 0.5, 1), MetricKind::kOneTwo);
  auto& ledger = inst.ledger();
  std::uint64_t last = 0;
  {
    PhaseScope a(ledger, phase::kTrail);
    for (Vertex v = 1; v < 10; ++v) {
      inst.distance(0, v);
      EXPECT_GE(ledger.total(), last);
      last = ledger.total();
    }
    PhaseScope b(ledger, phase::kDegreeProbe);
    inst.scan_neighbors(3);
  }
  inst.distance(1, 2);
  auto s = ledger.snapshot();
  std::uint64_t sum = 0;
  for (const auto& [label, count] : s.phases) sum += count;
  EXPECT_EQ(sum, s.total);
  EXPECT_EQ(s.phase(phase::kTrail), 9u);
  EXPECT_EQ(s.phase(phase::kDegreeProbe), 9u);
  EXPECT_EQ(s.phase(phase::kUnscoped), 1u);
  EXPECT_EQ(ledger.current_phase(), phase::kUnscoped);
}

TEST(Ledger, ConcurrentChargesAreNotLost) {
  TspInstance inst(random_graph(50, 0.1, 2), MetricKind::kOneTwo);
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&] {
      for (int i = 0; i < 10000; ++i) inst.distance(static_cast<Vertex>(i % 50), 0);
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(inst.ledger().total(), 40000u);
}

}  // namespace
}  // namespace sltsp
