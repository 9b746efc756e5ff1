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

// Full-information reference versions of the port greedy algorithms.

#pragma once

#include <algorithm>
#include <array>
#include <concepts>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sltsp/edge_copy.hpp"
#include "sltsp/graph.hpp"

namespace sltsp {

class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Set of chosen edge copies together with the resulting port occupancy.
class PortCoverSolution {
 public:
  explicit PortCoverSolution(std::size_t n = 0) : ports_(n) {}

  std::size_t vertex_count() const { return ports_.size(); }
  std::size_t size() const { return chosen_.size(); }
  const std::vector<EdgeCopy>& chosen() const { return chosen_; }

  bool is_free(Vertex v, int side) const { return !ports_.at(v)[side].has_value(); }
  const std::optional<EdgeCopy>& occupant(Vertex v, int side) const { return ports_.at(v)[side]; }

  std::size_t degree(Vertex v) const {
    return (ports_.at(v)[0] ? 1 : 0) + (ports_.at(v)[1] ? 1 : 0);
  }

  /// Adds a copy; throws if it conflicts with one already chosen.
  void add(const EdgeCopy& c) {
    for (NodeId x : {c.u, c.v}) {
      if (x >= ports_.size()) throw std::out_of_range("copy endpoint out of range");
      if (ports_[x][c.side_at(x)]) throw InvariantViolation("port already occupied");
    }
    if (edge_set_.count({c.u, c.v})) throw InvariantViolation("edge chosen twice");
    for (NodeId x : {c.u, c.v}) ports_[x][c.side_at(x)] = c;
    edge_set_.insert({c.u, c.v});
    chosen_.push_back(c);
  }

  std::vector<std::pair<Vertex, Vertex>> edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(chosen_.size());
    for (const auto& c : chosen_) out.emplace_back(static_cast<Vertex>(c.u), static_cast<Vertex>(c.v));
    return out;
  }

  /// One line per chosen copy: "u v kind".
  void write_sidecar(std::ostream& out) const {
    for (const auto& c : chosen_) out << c.u << ' ' << c.v << ' ' << to_string(c.kind) << '\n';
  }

 private:
  std::vector<std::array<std::optional<EdgeCopy>, 2>> ports_;
  std::set<std::pair<NodeId, NodeId>> edge_set_;
  std::vector<EdgeCopy> chosen_;
};

inline PortCoverSolution read_sidecar(std::istream& in, std::size_t n) {
  PortCoverSolution sol(n);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    NodeId u = 0, v = 0;
    std::string kind;
    if (!(ss >> u >> v >> kind)) {
      throw GraphError("line " + std::to_string(line_no) + ": expected \"u v kind\"");
    }
    try {
      sol.add(EdgeCopy::make(u, v, copy_kind_from_string(kind)));
    } catch (const std::exception& e) {
      throw GraphError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return sol;
}

/// Three-rule port greedy over an explicit edge order. Each edge is taken in
/// its canonical orientation u < v and tried as (u^0, v^0), then (u^0, v^1),
/// then (u^1, v^0).
inline PortCoverSolution run_alg1(const SimpleGraph& g,
                                  const std::vector<std::pair<Vertex, Vertex>>& order) {
  if (order.size() != g.edge_count()) {
    throw std::invalid_argument("edge order is not a permutation of the edge set");
  }
  std::set<std::pair<Vertex, Vertex>> seen;
  for (auto [a, b] : order) {
    auto e = std::minmax(a, b);
    if (!g.has_edge(e.first, e.second) || !seen.insert({e.first, e.second}).second) {
      throw std::invalid_argument("edge order is not a permutation of the edge set");
    }
  }

  PortCoverSolution sol(g.vertex_count());
  for (auto [a, b] : order) {
    Vertex u = std::min(a, b), v = std::max(a, b);
    if (sol.is_free(u, 0) && sol.is_free(v, 0)) {
      sol.add(EdgeCopy::make(u, v, CopyKind::kZeroZero));
    } else if (sol.is_free(u, 0) && sol.is_free(v, 1)) {
      sol.add(EdgeCopy::make(u, v, CopyKind::kZeroOne));
    } else if (sol.is_free(u, 1) && sol.is_free(v, 0)) {
      sol.add(EdgeCopy::make(u, v, CopyKind::kOneZero));
    }
  }
  return sol;
}

/// All (K + 2) m copies of g's edges.
inline std::vector<EdgeCopy> all_copies(const SimpleGraph& g, std::uint32_t k) {
  std::vector<EdgeCopy> out;
  out.reserve(g.edge_count() * (k + 2));
  for (auto [u, v] : g.edges()) {
    for (std::uint32_t layer = 0; layer < k + 2; ++layer) out.push_back(EdgeCopy::from_layer(u, v, layer, k));
  }
  return out;
}

/// Greedy maximal independent set of the copy conflict relation, scanned in
/// increasing rank with ties broken by copy id. `rank_of` maps a copy to its
/// rank.
template <class RankFn>
  requires std::invocable<RankFn&, const EdgeCopy&>
PortCoverSolution run_alg2_reference(const SimpleGraph& g, std::uint32_t k, RankFn&& rank_of) {
  if (k < 1) throw std::invalid_argument("K must be at least 1");
  std::vector<Ranked> ranked;
  for (const auto& c : all_copies(g, k)) ranked.push_back(Ranked{c, rank_of(c)});
  std::sort(ranked.begin(), ranked.end());

  PortCoverSolution sol(g.vertex_count());
  std::set<std::pair<NodeId, NodeId>> taken;
  for (const auto& r : ranked) {
    const auto& c = r.copy;
    auto u = static_cast<Vertex>(c.u), v = static_cast<Vertex>(c.v);
    if (taken.count({c.u, c.v})) continue;
    if (!sol.is_free(u, c.side_at(c.u)) || !sol.is_free(v, c.side_at(c.v))) continue;
    sol.add(c);
    taken.insert({c.u, c.v});
  }
  return sol;
}

/// Copy greedy under the keyed-hash permutation for `seed`.
inline PortCoverSolution run_alg2_reference(const SimpleGraph& g, std::uint32_t k, std::uint64_t seed) {
  return run_alg2_reference(g, k, [seed](const EdgeCopy& c) { return eager_rank(seed, c); });
}

struct Decomposition {
  std::vector<std::vector<Vertex>> paths;   // vertex sequences, at least one edge each
  std::vector<std::vector<Vertex>> cycles;  // vertex sequences, closing edge implied

  /// Size of the path cover left after cutting one edge per cycle.
  std::size_t path_cover_size() const {
    std::size_t total = 0;
    for (const auto& p : paths) total += p.size() - 1;
    for (const auto& c : cycles) total += c.size() - 1;
    return total;
  }
};

/// Splits a max-degree-2 edge set into maximal paths and cycles.
inline Decomposition decompose(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges) {
  std::vector<std::vector<Vertex>> adj(n);
  for (auto [u, v] : edges) {
    adj.at(u).push_back(v);
    adj.at(v).push_back(u);
  }
  for (Vertex v = 0; v < n; ++v) {
    if (adj[v].size() > 2) {
      throw InvariantViolation("vertex " + std::to_string(v) + " has degree " +
                               std::to_string(adj[v].size()) + " in a port cover");
    }
  }

  Decomposition out;
  std::vector<char> seen(n, 0);
  auto walk = [&](Vertex start) {
    std::vector<Vertex> seq{start};
    seen[start] = 1;
    Vertex prev = start, cur = start;
    bool first = true;
    while (true) {
      Vertex next = cur;
      bool found = false;
      for (Vertex w : adj[cur]) {
        if (!seen[w] && (first || w != prev)) {
          next = w;
          found = true;
          break;
        }
      }
      if (!found) break;
      seen[next] = 1;
      seq.push_back(next);
      prev = cur;
      cur = next;
      first = false;
    }
    return seq;
  };

  for (Vertex v = 0; v < n; ++v) {
    if (!seen[v] && adj[v].size() == 1) out.paths.push_back(walk(v));
  }
  for (Vertex v = 0; v < n; ++v) {
    if (!seen[v] && adj[v].size() == 2) out.cycles.push_back(walk(v));
  }
  return out;
}

inline Decomposition decompose(const PortCoverSolution& sol) {
  return decompose(sol.vertex_count(), sol.edges());
}

}  // namespace sltsp
