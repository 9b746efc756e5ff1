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

#include <algorithm>
#include <map>
#include <sstream>

#include "sltsp/exact.hpp"
#include "sltsp/generators.hpp"
#include "sltsp/port_greedy.hpp"

namespace sltsp {
namespace {

using Edge = std::pair<Vertex, Vertex>;

SimpleGraph triangle() { return SimpleGraph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}); }

bool is_acyclic(const PortCoverSolution& s) { return decompose(s).cycles.empty(); }

TEST(PortGreedy, EdgelessGivesEmptySolution) {
  EXPECT_EQ(run_alg1(SimpleGraph(5), {}).size(), 0u);
  EXPECT_EQ(run_alg1(SimpleGraph(0), {}).size(), 0u);
  EXPECT_EQ(run_alg1(SimpleGraph(1), {}).size(), 0u);
}

TEST(PortGreedy, TriangleTrace) {
  // a=0, b=1, c=2; order ab, bc, ca.
  auto sol = run_alg1(triangle(), {{0, 1}, {1, 2}, {2, 0}});
  ASSERT_EQ(sol.size(), 2u);
  EXPECT_EQ(sol.chosen()[0], EdgeCopy::make(0, 1, CopyKind::kZeroZero));
  EXPECT_EQ(sol.chosen()[1], EdgeCopy::make(1, 2, CopyKind::kOneZero));
  EXPECT_EQ(sol.occupant(1, 1)->other(1), 2u);
  EXPECT_TRUE(is_acyclic(sol));
}

TEST(PortGreedy, FourCycleAllOrders) {
  auto g = generate({{"name", "cycle"}, {"n", 4}}, 0).graph;
  std::vector<Edge> order = g.edges();
  std::sort(order.begin(), order.end());
  // Two disjoint edges first take all four 0-ports, which leaves no rule
  // for the remaining two edges. Every other order reaches 3.
  int count = 0, short_orders = 0;
  do {
    auto sol = run_alg1(g, order);
    const bool disjoint_first = order[0].first != order[1].first && order[0].first != order[1].second &&
                                order[0].second != order[1].first && order[0].second != order[1].second;
    EXPECT_EQ(sol.size(), disjoint_first ? 2u : 3u);
    EXPECT_TRUE(is_acyclic(sol));
    short_orders += disjoint_first;
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  EXPECT_EQ(count, 24);
  EXPECT_EQ(short_orders, 8);
}

TEST(PortGreedy, RejectsNonPermutations) {
  auto g = triangle();
  EXPECT_THROW(run_alg1(g, {{0, 1}, {1, 2}}), std::invalid_argument);
  EXPECT_THROW(run_alg1(g, {{0, 1}, {1, 2}, {1, 0}}), std::invalid_argument);
  EXPECT_NO_THROW(run_alg1(g, {{1, 0}, {2, 1}, {0, 2}}));
}

TEST(PortGreedy, ExhaustiveOrdersOnSmallRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 3 + seed % 8;
    auto g = generate({{"name", "gnp"}, {"n", n}, {"p", 0.4}}, seed).graph;
    if (g.edge_count() > 7) continue;
    const std::size_t rho = exact_max_path_cover(g);
    std::vector<Edge> order = g.edges();
    std::sort(order.begin(), order.end());
    do {
      auto sol = run_alg1(g, order);
      ASSERT_TRUE(is_acyclic(sol));
      for (Vertex v = 0; v < n; ++v) ASSERT_LE(sol.degree(v), 2u);
      ASSERT_GE(2 * sol.size(), rho);
    } while (std::next_permutation(order.begin(), order.end()));
  }
}

TEST(PortGreedy, SampledOrdersOnLargerGraphs) {
  gen_detail::Rng rng(42);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto g = generate({{"name", "gnp"}, {"n", 10}, {"p", 0.35}}, seed).graph;
    const std::size_t rho = exact_max_path_cover(g);
    for (int t = 0; t < 50; ++t) {
      auto order = g.edges();
      rng.shuffle(order);
      auto sol = run_alg1(g, order);
      ASSERT_TRUE(is_acyclic(sol));
      ASSERT_GE(2 * sol.size(), rho);
    }
  }
}

TEST(Conflicts, Examples) {
  auto a = EdgeCopy::make(0, 1, CopyKind::kZeroZero, 0);
  auto b = EdgeCopy::make(0, 1, CopyKind::kZeroZero, 1);
  EXPECT_TRUE(is_conflicting(a, b));
  // (a,b) and (b,c) both on b^0.
  EXPECT_TRUE(is_conflicting(EdgeCopy::make(0, 1, CopyKind::kZeroZero), EdgeCopy::make(1, 2, CopyKind::kZeroZero)));
  // (a,b) on b^1, (b,c) on b^0.
  EXPECT_FALSE(is_conflicting(EdgeCopy::make(0, 1, CopyKind::kZeroOne), EdgeCopy::make(1, 2, CopyKind::kZeroOne)));
  // The two mixed copies of one edge share no port but still conflict.
  EXPECT_TRUE(is_conflicting(EdgeCopy::make(0, 1, CopyKind::kZeroOne), EdgeCopy::make(0, 1, CopyKind::kOneZero)));
  EXPECT_FALSE(is_conflicting(EdgeCopy::make(0, 1, CopyKind::kZeroZero), EdgeCopy::make(2, 3, CopyKind::kZeroZero)));
}

TEST(Conflicts, MatchesPortDefinitionExhaustively) {
  auto g = generate({{"name", "gnp"}, {"n", 6}, {"p", 0.6}}, 3).graph;
  auto copies = all_copies(g, 3);
  EXPECT_EQ(copies.size(), 5 * g.edge_count());
  for (const auto& a : copies) {
    for (const auto& b : copies) {
      if (a == b) continue;
      bool shared = false;
      for (NodeId x : {a.u, a.v}) {
        if (b.has_endpoint(x) && a.side_at(x) == b.side_at(x)) shared = true;
      }
      ASSERT_EQ(is_conflicting(a, b), a.same_edge(b) || shared);
      ASSERT_EQ(is_conflicting(a, b), is_conflicting(b, a));
    }
  }
}

TEST(CopyGreedy, RejectsZeroK) { EXPECT_THROW(run_alg2_reference(triangle(), 0, 1), std::invalid_argument); }

TEST(CopyGreedy, SingleEdgeTakesExactlyTheMinimumCopy) {
  auto g = SimpleGraph::from_edges(2, {{0, 1}});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto sol = run_alg2_reference(g, 4, seed);
    ASSERT_EQ(sol.size(), 1u);
    auto copies = all_copies(g, 4);
    auto best = *std::min_element(copies.begin(), copies.end(), [&](const EdgeCopy& a, const EdgeCopy& b) {
      return Ranked{a, eager_rank(seed, a)} < Ranked{b, eager_rank(seed, b)};
    });
    EXPECT_EQ(sol.chosen()[0], best);
  }
}

TEST(CopyGreedy, FourCycleOfMixedCopies) {
  // a=0, b=1, c=2, d=3 with (a0 b1), (b0 c1), (c0 d1), (d0 a1) ranked lowest.
  auto g = generate({{"name", "cycle"}, {"n", 4}}, 0).graph;
  std::map<EdgeCopy, double> low = {
      {EdgeCopy::make(0, 1, CopyKind::kZeroOne), 0.01},
      {EdgeCopy::make(1, 2, CopyKind::kZeroOne), 0.02},
      {EdgeCopy::make(2, 3, CopyKind::kZeroOne), 0.03},
      {EdgeCopy::make(0, 3, CopyKind::kOneZero), 0.04},  // d^0 a^1 in canonical orientation
  };
  auto sol = run_alg2_reference(g, 2, [&](const EdgeCopy& c) {
    auto it = low.find(c);
    return it != low.end() ? it->second : 0.5 + 0.4 * eager_rank(9, c);
  });
  EXPECT_EQ(sol.size(), 4u);
  auto d = decompose(sol);
  EXPECT_EQ(d.cycles.size(), 1u);
  EXPECT_TRUE(d.paths.empty());
  EXPECT_EQ(d.path_cover_size(), 3u);
}

TEST(CopyGreedy, TriangleWithZeroZeroCopiesFirst) {
  auto g = triangle();
  auto sol = run_alg2_reference(g, 3, [](const EdgeCopy& c) {
    return c.kind == CopyKind::kZeroZero ? 0.1 * (c.u + c.v) + 0.01 * c.index : 0.9;
  });
  EXPECT_EQ(sol.size(), 2u);
  auto d = decompose(sol);
  EXPECT_TRUE(d.cycles.empty());
  EXPECT_EQ(d.paths.size(), 1u);
}

TEST(CopyGreedy, StructuralObservationsAndFixedPoint) {
  const std::uint32_t k = 3;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto g = generate({{"name", "gnp"}, {"n", 12}, {"p", 0.3}}, seed).graph;
    auto sol = run_alg2_reference(g, k, seed);
    for (const auto& c : sol.chosen()) {
      ASSERT_TRUE(c.kind == CopyKind::kZeroZero || c.kind == CopyKind::kZeroOne || c.kind == CopyKind::kOneZero);
    }
    std::map<std::pair<Vertex, Vertex>, EdgeCopy> by_edge;
    for (const auto& c : sol.chosen()) by_edge.emplace(std::make_pair(Vertex(c.u), Vertex(c.v)), c);
    auto kind_of = [&](Vertex a, Vertex b) { return by_edge.at({std::min(a, b), std::max(a, b)}).kind; };
    auto d = decompose(sol);
    for (const auto& cyc : d.cycles) {
      for (std::size_t i = 0; i < cyc.size(); ++i) {
        ASSERT_NE(kind_of(cyc[i], cyc[(i + 1) % cyc.size()]), CopyKind::kZeroZero) << "seed " << seed;
      }
    }
    for (const auto& path : d.paths) {
      int zz = 0;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) zz += kind_of(path[i], path[i + 1]) == CopyKind::kZeroZero;
      ASSERT_LE(zz, 1) << "seed " << seed;
    }
    // Fixed point: chosen iff no lower-ranked conflicting copy is chosen.
    std::set<EdgeCopy> chosen(sol.chosen().begin(), sol.chosen().end());
    auto copies = all_copies(g, k);
    for (const auto& c : copies) {
      bool blocked = false;
      for (const auto& o : chosen) {
        if (o != c && is_conflicting(c, o) && Ranked{o, eager_rank(seed, o)} < Ranked{c, eager_rank(seed, c)}) {
          blocked = true;
        }
      }
      ASSERT_EQ(chosen.count(c) == 1, !blocked) << "seed " << seed;
    }
  }
}

TEST(Decompose, EmptyAndDegreeViolation) {
  auto d = decompose(PortCoverSolution(4));
  EXPECT_TRUE(d.paths.empty());
  EXPECT_TRUE(d.cycles.empty());
  EXPECT_THROW(decompose(4, {{0, 1}, {0, 2}, {0, 3}}), InvariantViolation);
}

TEST(Decompose, PathsAndCycles) {
  auto d = decompose(7, {{0, 1}, {1, 2}, {3, 4}, {4, 5}, {5, 3}});
  ASSERT_EQ(d.paths.size(), 1u);
  ASSERT_EQ(d.cycles.size(), 1u);
  EXPECT_EQ(d.paths[0].size(), 3u);
  EXPECT_EQ(d.cycles[0].size(), 3u);
  EXPECT_EQ(d.path_cover_size(), 4u);
}

TEST(Solution, RejectsConflictingCopies) {
  PortCoverSolution s(3);
  s.add(EdgeCopy::make(0, 1, CopyKind::kZeroZero));
  EXPECT_THROW(s.add(EdgeCopy::make(1, 2, CopyKind::kZeroZero)), InvariantViolation);
  EXPECT_THROW(s.add(EdgeCopy::make(0, 1, CopyKind::kOneZero)), InvariantViolation);
  EXPECT_NO_THROW(s.add(EdgeCopy::make(1, 2, CopyKind::kOneZero)));
}

TEST(Solution, SidecarRoundTrip) {
  auto g = generate({{"name", "gnp"}, {"n", 15}, {"p", 0.3}}, 4).graph;
  auto sol = run_alg2_reference(g, 5, 77);
  std::stringstream ss;
  sol.write_sidecar(ss);
  auto back = read_sidecar(ss, 15);
  // The sidecar names the port pair, not which zero-zero layer held it.
  ASSERT_EQ(back.size(), sol.size());
  for (std::size_t i = 0; i < sol.size(); ++i) {
    EXPECT_TRUE(back.chosen()[i].same_edge(sol.chosen()[i]));
    EXPECT_EQ(back.chosen()[i].kind, sol.chosen()[i].kind);
  }
  std::istringstream bad("0 1 11\n");
  EXPECT_THROW(read_sidecar(bad, 3), GraphError);
}

}  // namespace
}  // namespace sltsp
