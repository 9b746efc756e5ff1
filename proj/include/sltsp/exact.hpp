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

// Exact baselines for small instances. Nothing here touches a query ledger.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sltsp/graph.hpp"
#include "sltsp/metric.hpp"

namespace sltsp {

class SizeGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

namespace exact_detail {

// Union-find with an undo log, for backtracking searches.
class RollbackDsu {
 public:
  explicit RollbackDsu(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    log_.push_back(b);
    return true;
  }
  void undo() {
    std::size_t b = log_.back();
    log_.pop_back();
    std::size_t a = parent_[b];
    size_[a] -= size_[b];
    parent_[b] = b;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::vector<std::size_t> log_;
};

}  // namespace exact_detail

/// Maximum path cover by edge-subset search over `order` (a permutation of
/// edge indices), pruning on degree and acyclicity.
inline std::size_t path_cover_edge_search(const SimpleGraph& g, const std::vector<std::size_t>& order) {
  const auto& edges = g.edges();
  const std::size_t n = g.vertex_count();
  if (n <= 1 || edges.empty()) return 0;
  std::vector<int> deg(n, 0);
  exact_detail::RollbackDsu dsu(n);
  std::size_t best = 0;
  const std::size_t cap = n - 1;

  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t taken) {
    best = std::max(best, taken);
    if (best == cap) return;
    if (pos == order.size()) return;
    if (taken + (order.size() - pos) <= best) return;
    auto [u, v] = edges[order[pos]];
    if (deg[u] < 2 && deg[v] < 2 && dsu.find(u) != dsu.find(v)) {
      ++deg[u];
      ++deg[v];
      dsu.unite(u, v);
      rec(pos + 1, taken + 1);
      dsu.undo();
      --deg[u];
      --deg[v];
      if (best == cap) return;
    }
    rec(pos + 1, taken);
  };
  rec(0, 0);
  return best;
}

/// Maximum path cover as n minus the minimum number of vertex-disjoint
/// paths covering all vertices, by Hamiltonian-path bitmask DP.
inline std::size_t path_cover_subset_dp(const SimpleGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n > 16) throw SizeGuardError("subset DP path cover limited to n <= 16");
  if (n <= 1) return 0;
  const std::size_t full = std::size_t{1} << n;
  std::vector<std::uint32_t> adj(n, 0);
  for (auto [u, v] : g.edges()) {
    adj[u] |= 1u << v;
    adj[v] |= 1u << u;
  }
  // ends[mask]: set of vertices at which some Hamiltonian path of G[mask] ends.
  std::vector<std::uint32_t> ends(full, 0);
  for (std::size_t v = 0; v < n; ++v) ends[std::size_t{1} << v] = 1u << v;
  for (std::size_t mask = 1; mask < full; ++mask) {
    std::uint32_t e = ends[mask];
    if (e == 0) continue;
    for (std::size_t v = 0; v < n; ++v) {
      if (!(e >> v & 1u)) continue;
      std::uint32_t ext = adj[v] & ~static_cast<std::uint32_t>(mask);
      while (ext) {
        unsigned w = static_cast<unsigned>(__builtin_ctz(ext));
        ext &= ext - 1;
        ends[mask | (std::size_t{1} << w)] |= 1u << w;
      }
    }
  }
  std::vector<std::uint8_t> cover(full, 0);
  for (std::size_t mask = 1; mask < full; ++mask) {
    const std::size_t low = mask & (~mask + 1);
    const std::size_t rest = mask ^ low;
    std::uint8_t best = static_cast<std::uint8_t>(n + 1);
    // Submasks of mask containing its lowest bit.
    for (std::size_t sub = rest;; sub = (sub - 1) & rest) {
      const std::size_t part = sub | low;
      if (ends[part] != 0) best = std::min<std::uint8_t>(best, static_cast<std::uint8_t>(1 + cover[mask ^ part]));
      if (sub == 0) break;
    }
    cover[mask] = best;
  }
  return n - cover[full - 1];
}

namespace exact_detail {

// Dinic max flow on a small dense-ish network.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t n) : graph_(n) {}
  std::size_t add_edge(std::size_t a, std::size_t b, int cap) {
    graph_[a].push_back({b, graph_[b].size(), cap});
    graph_[b].push_back({a, graph_[a].size() - 1, 0});
    return graph_[a].size() - 1;
  }
  int flow_on(std::size_t a, std::size_t idx) const {
    const auto& e = graph_[a][idx];
    return graph_[e.to][e.rev].cap;
  }
  int run(std::size_t s, std::size_t t) {
    int total = 0;
    while (bfs(s, t)) {
      it_.assign(graph_.size(), 0);
      while (int f = dfs(s, t, std::numeric_limits<int>::max())) total += f;
    }
    return total;
  }

 private:
  struct Arc {
    std::size_t to;
    std::size_t rev;
    int cap;
  };
  bool bfs(std::size_t s, std::size_t t) {
    level_.assign(graph_.size(), -1);
    std::queue<std::size_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      auto x = q.front();
      q.pop();
      for (const auto& e : graph_[x]) {
        if (e.cap > 0 && level_[e.to] < 0) {
          level_[e.to] = level_[x] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[t] >= 0;
  }
  int dfs(std::size_t x, std::size_t t, int f) {
    if (x == t) return f;
    for (auto& i = it_[x]; i < graph_[x].size(); ++i) {
      auto& e = graph_[x][i];
      if (e.cap > 0 && level_[e.to] == level_[x] + 1) {
        int d = dfs(e.to, t, std::min(f, e.cap));
        if (d > 0) {
          e.cap -= d;
          graph_[e.to][e.rev].cap += d;
          return d;
        }
      }
    }
    return 0;
  }
  std::vector<std::vector<Arc>> graph_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
};

}  // namespace exact_detail

/// Two-coloring of g, or nullopt if g has an odd cycle.
inline std::optional<std::vector<int>> bipartition(const SimpleGraph& g) {
  std::vector<int> side(g.vertex_count(), -1);
  for (Vertex s = 0; s < g.vertex_count(); ++s) {
    if (side[s] >= 0) continue;
    side[s] = 0;
    std::vector<Vertex> queue{s};
    for (std::size_t h = 0; h < queue.size(); ++h) {
      Vertex x = queue[h];
      for (Vertex y : g.neighbors(x)) {
        if (side[y] < 0) {
          side[y] = 1 - side[x];
          queue.push_back(y);
        } else if (side[y] == side[x]) {
          return std::nullopt;
        }
      }
    }
  }
  return side;
}

/// Maximum path cover of a bipartite graph: maximum simple 2-matching by
/// flow, with branch and bound that forbids one edge of any cycle found.
inline std::size_t path_cover_bipartite_bnb(const SimpleGraph& g, std::uint64_t node_limit = 2'000'000) {
  auto sides = bipartition(g);
  if (!sides) throw std::invalid_argument("graph is not bipartite");
  const std::size_t n = g.vertex_count();
  const auto& edges = g.edges();
  std::size_t best = 0;
  std::uint64_t nodes = 0;

  std::function<void(std::vector<char>&)> rec = [&](std::vector<char>& forbidden) {
    if (++nodes > node_limit) throw SizeGuardError("path cover branch and bound exceeded its node limit");
    const std::size_t s = n, t = n + 1;
    exact_detail::MaxFlow mf(n + 2);
    std::vector<std::pair<std::size_t, std::size_t>> arc_of(edges.size(), {0, 0});
    for (Vertex v = 0; v < n; ++v) {
      if ((*sides)[v] == 0) mf.add_edge(s, v, 2); else mf.add_edge(v, t, 2);
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (forbidden[i]) continue;
      auto [a, b] = edges[i];
      if ((*sides)[a] != 0) std::swap(a, b);
      arc_of[i] = {a, mf.add_edge(a, b, 1)};
    }
    const auto value = static_cast<std::size_t>(mf.run(s, t));
    if (value <= best) return;
    // Extract chosen edges and look for a cycle.
    std::vector<std::vector<std::pair<Vertex, std::size_t>>> adj(n);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (forbidden[i] || mf.flow_on(arc_of[i].first, arc_of[i].second) == 0) continue;
      adj[edges[i].first].push_back({edges[i].second, i});
      adj[edges[i].second].push_back({edges[i].first, i});
    }
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> cycle;
    for (Vertex v = 0; v < n && cycle.empty(); ++v) {
      if (seen[v] || adj[v].empty()) continue;
      // Walk the component; it is a cycle iff every vertex has degree 2.
      std::vector<Vertex> comp{v};
      seen[v] = 1;
      bool all_two = true;
      for (std::size_t h = 0; h < comp.size(); ++h) {
        if (adj[comp[h]].size() != 2) all_two = false;
        for (auto [w, ei] : adj[comp[h]]) {
          if (!seen[w]) {
            seen[w] = 1;
            comp.push_back(w);
          }
        }
      }
      if (all_two) {
        for (Vertex x : comp) {
          for (auto [w, ei] : adj[x]) {
            if (x < w) cycle.push_back(ei);
          }
        }
      }
    }
    if (cycle.empty()) {
      best = value;
      return;
    }
    for (std::size_t ei : cycle) {
      forbidden[ei] = 1;
      rec(forbidden);
      forbidden[ei] = 0;
      if (best >= value) return;
    }
  };
  std::vector<char> forbidden(edges.size(), 0);
  rec(forbidden);
  return best;
}

/// Maximum number of edges in a collection of vertex-disjoint paths.
inline std::size_t exact_max_path_cover(const SimpleGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n <= 16) return path_cover_subset_dp(g);
  if (g.edge_count() <= 24) {
    std::vector<std::size_t> order(g.edge_count());
    std::iota(order.begin(), order.end(), 0);
    return path_cover_edge_search(g, order);
  }
  if (bipartition(g)) return path_cover_bipartite_bnb(g);
  throw SizeGuardError("exact path cover needs n <= 16, m <= 24, or a bipartite graph");
}

/// Pairwise distance table recomputed from the instance's hidden graph,
/// independent of the instance's own distance code.
inline std::vector<std::vector<std::uint32_t>> distance_table(const SimpleGraph& g, MetricKind kind) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<std::uint32_t>> d(n, std::vector<std::uint32_t>(n, 0));
  if (kind == MetricKind::kOneTwo) {
    for (Vertex a = 0; a < n; ++a) {
      for (Vertex b = 0; b < n; ++b) d[a][b] = a == b ? 0 : (g.has_edge(a, b) ? 1 : 2);
    }
    return d;
  }
  // Floyd-Warshall keeps this independent of the BFS rows in TspInstance.
  const std::uint32_t inf = std::numeric_limits<std::uint32_t>::max() / 4;
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = 0; b < n; ++b) d[a][b] = a == b ? 0 : inf;
  }
  for (auto [a, b] : g.edges()) d[a][b] = d[b][a] = 1;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) d[a][b] = std::min(d[a][b], d[a][k] + d[k][b]);
    }
  }
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = 0; b < n; ++b) {
      if (d[a][b] >= inf) throw GraphError("graphic metric on a disconnected graph");
    }
  }
  return d;
}

/// Optimal tour cost by Held-Karp over a distance table.
inline std::uint64_t held_karp(const std::vector<std::vector<std::uint32_t>>& d) {
  const std::size_t n = d.size();
  if (n > 15) throw SizeGuardError("Held-Karp limited to n <= 15");
  if (n <= 1) return 0;
  if (n == 2) return std::uint64_t{d[0][1]} + d[1][0];
  // Vertex 0 is the fixed start; masks range over vertices 1..n-1.
  const std::size_t m = n - 1;
  const std::size_t full = std::size_t{1} << m;
  const std::uint64_t inf = std::numeric_limits<std::uint64_t>::max() / 4;
  std::vector<std::uint64_t> dp(full * m, inf);
  for (std::size_t j = 0; j < m; ++j) dp[(std::size_t{1} << j) * m + j] = d[0][j + 1];
  for (std::size_t mask = 1; mask < full; ++mask) {
    for (std::size_t j = 0; j < m; ++j) {
      const std::uint64_t cur = dp[mask * m + j];
      if (cur >= inf || !(mask >> j & 1u)) continue;
      for (std::size_t k = 0; k < m; ++k) {
        if (mask >> k & 1u) continue;
        auto& slot = dp[(mask | (std::size_t{1} << k)) * m + k];
        slot = std::min(slot, cur + d[j + 1][k + 1]);
      }
    }
  }
  std::uint64_t best = inf;
  for (std::size_t j = 0; j < m; ++j) best = std::min(best, dp[(full - 1) * m + j] + d[j + 1][0]);
  return best;
}

inline std::uint64_t exact_tsp(const TspInstance& inst) {
  if (inst.vertex_count() > 15) throw SizeGuardError("exact TSP limited to n <= 15");
  return held_karp(distance_table(inst.ground_truth(), inst.kind()));
}

struct BridgeCut {
  std::vector<std::pair<Vertex, Vertex>> bridges;  // (min, max), sorted
  std::vector<Vertex> cut_vertices;                // sorted
};

/// Bridges and articulation points by iterative low-link.
inline BridgeCut exact_bridges_and_cuts(const SimpleGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<char> is_cut(n, 0);
  BridgeCut out;
  int timer = 0;
  struct Item {
    Vertex v;
    Vertex parent;
    std::size_t next;
    int children;
  };
  for (Vertex root = 0; root < n; ++root) {
    if (disc[root] >= 0) continue;
    std::vector<Item> stack{{root, root, 0, 0}};
    disc[root] = low[root] = timer++;
    while (!stack.empty()) {
      Item& it = stack.back();
      const auto& adj = g.neighbors(it.v);
      if (it.next < adj.size()) {
        Vertex w = adj[it.next++];
        if (disc[w] < 0) {
          ++it.children;
          disc[w] = low[w] = timer++;
          stack.push_back({w, it.v, 0, 0});
        } else if (!(w == it.parent && it.v != root)) {
          low[it.v] = std::min(low[it.v], disc[w]);
        }
        continue;
      }
      Item done = it;
      stack.pop_back();
      if (stack.empty()) {
        if (done.children >= 2) is_cut[done.v] = 1;
        continue;
      }
      Vertex p = stack.back().v;
      low[p] = std::min(low[p], low[done.v]);
      if (low[done.v] > disc[p]) out.bridges.emplace_back(std::min(p, done.v), std::max(p, done.v));
      if (p != root && low[done.v] >= disc[p]) is_cut[p] = 1;
    }
  }
  std::sort(out.bridges.begin(), out.bridges.end());
  for (Vertex v = 0; v < n; ++v) {
    if (is_cut[v]) out.cut_vertices.push_back(v);
  }
  return out;
}

inline std::vector<std::pair<Vertex, Vertex>> exact_bridges(const SimpleGraph& g) {
  return exact_bridges_and_cuts(g).bridges;
}

inline std::vector<Vertex> exact_cut_vertices(const SimpleGraph& g) {
  return exact_bridges_and_cuts(g).cut_vertices;
}

/// Number of degree-1 vertices plus degree-2 cut vertices.
inline std::size_t exact_bad_vertex_count(const SimpleGraph& g) {
  auto cuts = exact_cut_vertices(g);
  std::size_t count = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (g.degree(v) == 1) ++count;
    else if (g.degree(v) == 2 && std::binary_search(cuts.begin(), cuts.end(), v)) ++count;
  }
  return count;
}

struct MatchingResult {
  std::size_t size = 0;
  std::vector<int> mate;  // -1 if unmatched
};

/// Maximum matching in a general graph (Edmonds' blossom algorithm).
inline MatchingResult exact_max_matching(const SimpleGraph& g, std::size_t max_n = 5000) {
  const std::size_t n = g.vertex_count();
  if (n > max_n) throw SizeGuardError("blossom matching limited to n <= " + std::to_string(max_n));
  std::vector<int> match(n, -1), parent(n), base(n);
  std::vector<char> used(n), blossom(n);

  auto lca = [&](int a, int b) {
    std::vector<char> seen(n, 0);
    while (true) {
      a = base[a];
      seen[a] = 1;
      if (match[a] == -1) break;
      a = parent[match[a]];
    }
    while (true) {
      b = base[b];
      if (seen[b]) return b;
      b = parent[match[b]];
    }
  };
  auto mark_path = [&](int v, int b, int child) {
    while (base[v] != b) {
      blossom[base[v]] = blossom[base[match[v]]] = 1;
      parent[v] = child;
      child = match[v];
      v = parent[match[v]];
    }
  };
  auto find_path = [&](int root) -> int {
    std::fill(used.begin(), used.end(), 0);
    std::fill(parent.begin(), parent.end(), -1);
    std::iota(base.begin(), base.end(), 0);
    used[root] = 1;
    std::vector<int> q{root};
    for (std::size_t h = 0; h < q.size(); ++h) {
      int v = q[h];
      for (Vertex wv : g.neighbors(static_cast<Vertex>(v))) {
        int to = static_cast<int>(wv);
        if (base[v] == base[to] || match[v] == to) continue;
        if (to == root || (match[to] != -1 && parent[match[to]] != -1)) {
          int cur = lca(v, to);
          std::fill(blossom.begin(), blossom.end(), 0);
          mark_path(v, cur, to);
          mark_path(to, cur, v);
          for (std::size_t i = 0; i < n; ++i) {
            if (blossom[base[i]]) {
              base[i] = cur;
              if (!used[i]) {
                used[i] = 1;
                q.push_back(static_cast<int>(i));
              }
            }
          }
        } else if (parent[to] == -1) {
          parent[to] = v;
          if (match[to] == -1) return to;
          used[match[to]] = 1;
          q.push_back(match[to]);
        }
      }
    }
    return -1;
  };

  // Greedy warm start.
  for (auto [u, v] : g.edges()) {
    if (match[u] == -1 && match[v] == -1) {
      match[u] = static_cast<int>(v);
      match[v] = static_cast<int>(u);
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (match[v] != -1) continue;
    int end = find_path(static_cast<int>(v));
    while (end != -1) {
      int pv = parent[end], ppv = match[pv];
      match[end] = pv;
      match[pv] = end;
      end = ppv;
    }
  }
  MatchingResult res;
  res.mate = match;
  for (std::size_t v = 0; v < n; ++v) {
    if (match[v] > static_cast<int>(v)) ++res.size;
  }
  return res;
}

struct BipartiteMatching {
  std::size_t size = 0;
  std::vector<int> mate;
  std::vector<Vertex> cover;  // minimum vertex cover, sorted
};

/// Maximum matching plus a minimum vertex cover of a bipartite graph with
/// the given sides (alternating-path search, then the Konig construction).
inline BipartiteMatching exact_bipartite_matching(const SimpleGraph& g, const std::vector<int>& side) {
  const std::size_t n = g.vertex_count();
  if (side.size() != n) throw std::invalid_argument("side vector has wrong length");
  for (auto [u, v] : g.edges()) {
    if (side[u] == side[v]) throw std::invalid_argument("sides are not a valid bipartition");
  }
  std::vector<int> mate(n, -1);
  std::vector<char> visited;
  std::function<bool(Vertex)> augment = [&](Vertex x) {
    for (Vertex y : g.neighbors(x)) {
      if (visited[y]) continue;
      visited[y] = 1;
      if (mate[y] == -1 || augment(static_cast<Vertex>(mate[y]))) {
        mate[y] = static_cast<int>(x);
        mate[x] = static_cast<int>(y);
        return true;
      }
    }
    return false;
  };
  BipartiteMatching res;
  for (Vertex x = 0; x < n; ++x) {
    if (side[x] != 0 || mate[x] != -1) continue;
    visited.assign(n, 0);
    if (augment(x)) ++res.size;
  }
  // Konig: Z = vertices reachable from free left vertices by alternating paths.
  std::vector<char> z(n, 0);
  std::vector<Vertex> queue;
  for (Vertex x = 0; x < n; ++x) {
    if (side[x] == 0 && mate[x] == -1) {
      z[x] = 1;
      queue.push_back(x);
    }
  }
  for (std::size_t h = 0; h < queue.size(); ++h) {
    Vertex x = queue[h];
    if (side[x] == 0) {
      for (Vertex y : g.neighbors(x)) {
        if (!z[y] && mate[x] != static_cast<int>(y)) {
          z[y] = 1;
          queue.push_back(y);
        }
      }
    } else if (mate[x] != -1 && !z[mate[x]]) {
      z[mate[x]] = 1;
      queue.push_back(static_cast<Vertex>(mate[x]));
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    if ((side[v] == 0 && !z[v]) || (side[v] == 1 && z[v])) res.cover.push_back(v);
  }
  res.mate = std::move(mate);
  return res;
}

/// maximize (c0 + cx x + cy y) / max(2 - x, 1 + y) over 0 <= x, y <= 1.
struct RatioProgram {
  double c0 = 0.0;
  double cx = 0.0;
  double cy = 0.0;

  double value(double x, double y) const { return (c0 + cx * x + cy * y) / std::max(2.0 - x, 1.0 + y); }
};

/// Worst-case programs behind the graphic estimators, with x = rho/n and y
/// the normalized correction term. Numerators are the estimates under the
/// lower sandwich ends; the denominator is the larger tour lower bound.
inline RatioProgram graphic_v1_program() { return {2.0, -1.0 / 10.0, 2.0 / 5.0}; }
inline RatioProgram graphic_v2_program() { return {2.0, -1.0 / 6.0, 1.0 / 3.0}; }
inline RatioProgram graphic_subquadratic_program() { return {2.0, -1.0 / 3.0, 1.0 / 3.0}; }

struct RatioSolution {
  double alpha = 0.0;
  double x = 0.0;
  double y = 0.0;
};

/// Grid search at `grid_step`, then a local grid refined down to 1e-6.
inline RatioSolution solve_ratio_program(const RatioProgram& p, double grid_step = 1e-4) {
  if (!(grid_step > 0.0) || grid_step > 1e-4) throw std::invalid_argument("grid_step must be in (0, 1e-4]");
  RatioSolution best{p.value(0.0, 0.0), 0.0, 0.0};
  const auto steps = static_cast<std::size_t>(std::ceil(1.0 / grid_step));
  for (std::size_t i = 0; i <= steps; ++i) {
    const double x = std::min(1.0, static_cast<double>(i) * grid_step);
    for (std::size_t j = 0; j <= steps; ++j) {
      const double y = std::min(1.0, static_cast<double>(j) * grid_step);
      const double v = p.value(x, y);
      if (v > best.alpha) best = {v, x, y};
    }
  }
  for (double h = grid_step / 10.0; h >= 1e-6 * (1.0 - 1e-9); h /= 10.0) {
    const RatioSolution centre = best;
    for (int i = -10; i <= 10; ++i) {
      const double x = std::clamp(centre.x + i * h, 0.0, 1.0);
      for (int j = -10; j <= 10; ++j) {
        const double y = std::clamp(centre.y + j * h, 0.0, 1.0);
        const double v = p.value(x, y);
        if (v > best.alpha) best = {v, x, y};
      }
    }
  }
  return best;
}

/// r chained copies of a bipartite g: G_i joins V_i to U_i, and H_i joins
/// V_i to U_{i+1}, both with g's edges. Copy i of vertex x is i * n + x.
inline SimpleGraph build_reduction_prime(const SimpleGraph& g, const std::vector<int>& side, std::size_t r) {
  if (r < 1) throw std::invalid_argument("r must be at least 1");
  const std::size_t n = g.vertex_count();
  if (side.size() != n) throw std::invalid_argument("side vector has wrong length");
  for (auto [a, b] : g.edges()) {
    if (side[a] == side[b]) throw std::invalid_argument("sides are not a valid bipartition");
  }
  SimpleGraph out(n * r);
  for (std::size_t i = 0; i < r; ++i) {
    for (auto [a, b] : g.edges()) {
      Vertex x = side[a] == 0 ? a : b;  // V side
      Vertex y = side[a] == 0 ? b : a;  // U side
      out.add_edge(static_cast<Vertex>(i * n + x), static_cast<Vertex>(i * n + y));
      if (i + 1 < r) out.add_edge(static_cast<Vertex>(i * n + x), static_cast<Vertex>((i + 1) * n + y));
    }
  }
  return out;
}

}  // namespace sltsp
