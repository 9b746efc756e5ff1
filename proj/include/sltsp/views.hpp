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

#include <concepts>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "sltsp/edge_copy.hpp"
#include "sltsp/graph.hpp"

namespace sltsp {

/// Adjacency-list access as seen by the local oracles. `neighbor` may cost
/// ledger queries; `degree` and `slot_of` must not.
template <class V>
concept GraphView = requires(const V& g, NodeId v, NodeId u, std::size_t i) {
  { g.vertex_count() } -> std::convertible_to<NodeId>;
  { g.degree(v) } -> std::convertible_to<std::size_t>;
  { g.neighbor(v, i) } -> std::convertible_to<NodeId>;
  { g.slot_of(v, u) } -> std::convertible_to<std::size_t>;
};

/// Uncharged adjacency-list view of an explicit graph.
class ListView {
 public:
  explicit ListView(const SimpleGraph& g) : g_(&g) {}

  NodeId vertex_count() const { return g_->vertex_count(); }
  std::size_t degree(NodeId v) const { return g_->degree(narrow(v)); }

  NodeId neighbor(NodeId v, std::size_t i) const {
    const auto& adj = g_->neighbors(narrow(v));
    if (i >= adj.size()) {
      throw std::out_of_range("neighbor index " + std::to_string(i) + " >= degree " +
                              std::to_string(adj.size()));
    }
    return adj[i];
  }

  std::size_t slot_of(NodeId v, NodeId u) const { return g_->slot_of(narrow(v), narrow(u)); }

  const SimpleGraph& graph() const { return *g_; }

 private:
  Vertex narrow(NodeId v) const {
    if (v >= g_->vertex_count()) throw std::out_of_range("vertex " + std::to_string(v) + " out of range");
    return static_cast<Vertex>(v);
  }

  const SimpleGraph* g_;
};

static_assert(GraphView<ListView>);

}  // namespace sltsp
