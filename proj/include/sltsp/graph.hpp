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

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sltsp {

/// Dense 0-indexed vertex of a ground-truth graph.
using Vertex = std::uint32_t;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undirected simple graph with sorted adjacency lists.
///
/// Edges are stored canonically as (u, v) with u < v. Self-loops and
/// duplicate edges are rejected at insertion time, so the adjacency lists and
/// the edge list always describe the same relation.
class SimpleGraph {
 public:
  SimpleGraph() = default;
  explicit SimpleGraph(std::size_t n) : adj_(n) {}

  static SimpleGraph from_edges(std::size_t n,
                                const std::vector<std::pair<Vertex, Vertex>>& edges) {
    SimpleGraph g(n);
    for (auto [u, v] : edges) g.add_edge(u, v);
    return g;
  }

  std::size_t vertex_count() const { return adj_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  void add_edge(Vertex u, Vertex v) {
    if (u >= adj_.size() || v >= adj_.size()) {
      throw GraphError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                       ") out of range for n = " + std::to_string(adj_.size()));
    }
    if (u == v) throw GraphError("self-loop at vertex " + std::to_string(u));
    if (has_edge(u, v)) {
      throw GraphError("duplicate edge (" + std::to_string(u) + ", " + std::to_string(v) + ")");
    }
    insert_sorted(adj_[u], v);
    insert_sorted(adj_[v], u);
    edges_.emplace_back(std::min(u, v), std::max(u, v));
  }

  bool has_edge(Vertex u, Vertex v) const {
    if (u >= adj_.size() || v >= adj_.size() || u == v) return false;
    const auto& a = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
    Vertex target = adj_[u].size() <= adj_[v].size() ? v : u;
    return std::binary_search(a.begin(), a.end(), target);
  }

  const std::vector<Vertex>& neighbors(Vertex v) const { return adj_.at(v); }
  std::size_t degree(Vertex v) const { return adj_.at(v).size(); }

  /// Edges in insertion order, each as (min, max).
  const std::vector<std::pair<Vertex, Vertex>>& edges() const { return edges_; }

  /// Position of `u` within the sorted adjacency list of `v`.
  std::size_t slot_of(Vertex v, Vertex u) const {
    const auto& a = adj_.at(v);
    auto it = std::lower_bound(a.begin(), a.end(), u);
    if (it == a.end() || *it != u) {
      throw GraphError("vertex " + std::to_string(u) + " is not adjacent to " + std::to_string(v));
    }
    return static_cast<std::size_t>(it - a.begin());
  }

  bool is_connected() const {
    if (adj_.empty()) return true;
    std::vector<char> seen(adj_.size(), 0);
    std::vector<Vertex> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : adj_[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          ++reached;
          stack.push_back(w);
        }
      }
    }
    return reached == adj_.size();
  }

  friend bool operator==(const SimpleGraph& a, const SimpleGraph& b) { return a.adj_ == b.adj_; }

 private:
  static void insert_sorted(std::vector<Vertex>& list, Vertex x) {
    list.insert(std::upper_bound(list.begin(), list.end(), x), x);
  }

  std::vector<std::vector<Vertex>> adj_;
  std::vector<std::pair<Vertex, Vertex>> edges_;
};

/// Reads the plain-text edge-list format: a header line "n m" followed by m
/// lines "u v". Blank lines are ignored; every error names its line number.
inline SimpleGraph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++line_no;
      if (out.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  auto fail = [&](const std::string& what) {
    throw GraphError("line " + std::to_string(line_no) + ": " + what);
  };
  auto parse_pair = [&](const std::string& text, long long& a, long long& b) {
    std::istringstream ss(text);
    std::string extra;
    if (!(ss >> a >> b)) fail("expected two integers");
    if (ss >> extra) fail("unexpected trailing token '" + extra + "'");
  };

  if (!next_line(line)) throw GraphError("line 1: missing header \"n m\"");
  long long n = 0, m = 0;
  parse_pair(line, n, m);
  if (n < 0 || m < 0) fail("negative vertex or edge count");

  SimpleGraph g(static_cast<std::size_t>(n));
  for (long long i = 0; i < m; ++i) {
    if (!next_line(line)) {
      throw GraphError("line " + std::to_string(line_no + 1) + ": expected " + std::to_string(m) +
                       " edges, found " + std::to_string(i));
    }
    long long u = 0, v = 0;
    parse_pair(line, u, v);
    if (u < 0 || v < 0 || u >= n || v >= n) fail("vertex out of range");
    try {
      g.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v));
    } catch (const GraphError& e) {
      fail(e.what());
    }
  }
  if (next_line(line)) fail("unexpected content after " + std::to_string(m) + " edges");
  return g;
}

inline void write_edge_list(std::ostream& out, const SimpleGraph& g) {
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

}  // namespace sltsp
