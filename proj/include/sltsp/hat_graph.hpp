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

// Implicit gadget graph that turns adjacency-matrix access into
// adjacency-list access. Over a base graph on n vertices it has
//   V1 = {V1(i)}, V2 = {V2(i)}, and pendant blocks U_i = {U(i, j) : j < gamma}
// with the neighbor at slot s of
//   V1(v): V1(s) if (v, s) is an edge, else V2(s)             (s < n)
//   V2(v): V2(s) if (v, s) is an edge, else V1(s)             (s < n)
//          U(v, s - n)                                       (n <= s < n + gamma)
//   U(i, j): V2(i)                                           (s = 0)
// Node ids: V1(i) = i, V2(i) = n + i, U(i, j) = 2n + i * gamma + j.

#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "sltsp/edge_copy.hpp"
#include "sltsp/graph.hpp"
#include "sltsp/metric.hpp"
#include "sltsp/oracle.hpp"
#include "sltsp/views.hpp"

namespace sltsp {

enum class HatClass { kV1, kV2, kU };

struct HatVertexId {
  HatClass cls = HatClass::kV1;
  std::uint64_t i = 0;
  std::uint64_t j = 0;  // only meaningful for kU

  static HatVertexId v1(std::uint64_t i) { return {HatClass::kV1, i, 0}; }
  static HatVertexId v2(std::uint64_t i) { return {HatClass::kV2, i, 0}; }
  static HatVertexId u(std::uint64_t i, std::uint64_t j) { return {HatClass::kU, i, j}; }

  friend bool operator==(const HatVertexId&, const HatVertexId&) = default;
};

class HatGraph {
 public:
  /// Padding defaults to 16 K n; `gamma_override` is for diagnostics only.
  HatGraph(const TspInstance& inst, std::uint32_t k, std::optional<std::uint64_t> gamma_override = {})
      : inst_(&inst),
        n_(inst.vertex_count()),
        k_(k),
        gamma_(gamma_override ? *gamma_override : std::uint64_t{16} * k * inst.vertex_count()) {
    if (k < 1) throw std::invalid_argument("K must be at least 1");
  }

  std::uint64_t base_n() const { return n_; }
  std::uint32_t k() const { return k_; }
  std::uint64_t gamma() const { return gamma_; }
  const TspInstance& instance() const { return *inst_; }

  NodeId vertex_count() const { return 2 * n_ + n_ * gamma_; }

  NodeId id(const HatVertexId& h) const {
    check(h);
    switch (h.cls) {
      case HatClass::kV1: return h.i;
      case HatClass::kV2: return n_ + h.i;
      case HatClass::kU: return 2 * n_ + h.i * gamma_ + h.j;
    }
    return 0;
  }

  HatVertexId decode(NodeId x) const {
    if (x >= vertex_count()) throw std::out_of_range("hat node " + std::to_string(x) + " out of range");
    if (x < n_) return HatVertexId::v1(x);
    if (x < 2 * n_) return HatVertexId::v2(x - n_);
    const NodeId off = x - 2 * n_;
    return HatVertexId::u(off / gamma_, off % gamma_);
  }

  std::size_t hat_degree(const HatVertexId& h) const {
    check(h);
    switch (h.cls) {
      case HatClass::kV1: return n_;
      case HatClass::kV2: return n_ + gamma_;
      case HatClass::kU: return 1;
    }
    return 0;
  }

  /// Neighbor at slot `s`. Probes with s < n from V1 or V2 cost exactly one
  /// ledger query; all others are free.
  HatVertexId hat_neighbor(const HatVertexId& h, std::uint64_t s) const {
    if (s >= hat_degree(h)) {
      throw std::out_of_range("hat neighbor index " + std::to_string(s) + " >= degree " +
                              std::to_string(hat_degree(h)));
    }
    switch (h.cls) {
      case HatClass::kV1: {
        bool adjacent = probe(h.i, s);
        return adjacent ? HatVertexId::v1(s) : HatVertexId::v2(s);
      }
      case HatClass::kV2: {
        if (s >= n_) return HatVertexId::u(h.i, s - n_);
        bool adjacent = probe(h.i, s);
        return adjacent ? HatVertexId::v2(s) : HatVertexId::v1(s);
      }
      case HatClass::kU: return HatVertexId::v2(h.i);
    }
    return h;
  }

  // GraphView interface over node ids.
  std::size_t degree(NodeId x) const { return hat_degree(decode(x)); }
  NodeId neighbor(NodeId x, std::size_t s) const { return id(hat_neighbor(decode(x), s)); }

  /// Slot of `u` in the list of `v`; arithmetic, never charged. Assumes the
  /// two are adjacent.
  std::size_t slot_of(NodeId v, NodeId u) const {
    HatVertexId hv = decode(v), hu = decode(u);
    if (hv.cls == HatClass::kU) return 0;
    if (hu.cls == HatClass::kU) return static_cast<std::size_t>(n_ + hu.j);
    return static_cast<std::size_t>(hu.i);
  }

  bool is_v1(NodeId x) const { return x < n_; }

 private:
  void check(const HatVertexId& h) const {
    if (h.i >= n_ || (h.cls == HatClass::kU && h.j >= gamma_)) {
      throw std::out_of_range("hat vertex index out of range");
    }
  }

  // d(v, s) == 1, one query. The diagonal is charged too and is never an edge.
  bool probe(std::uint64_t v, std::uint64_t s) const {
    return inst_->weight_one_adjacency(static_cast<Vertex>(v), static_cast<Vertex>(s));
  }

  const TspInstance* inst_;
  std::uint64_t n_;
  std::uint32_t k_;
  std::uint64_t gamma_;
};

static_assert(GraphView<HatGraph>);

/// Explicit copy of the gadget graph, built from uncharged ground truth.
inline SimpleGraph materialize_hat(const HatGraph& h, std::uint64_t max_vertices = 1u << 20) {
  if (h.vertex_count() > max_vertices) {
    throw std::length_error("gadget graph has " + std::to_string(h.vertex_count()) +
                            " vertices, above the materialization cap " + std::to_string(max_vertices));
  }
  const auto n = h.base_n();
  const SimpleGraph& base = h.instance().ground_truth();
  SimpleGraph g(h.vertex_count());
  for (std::uint64_t a = 0; a < n; ++a) {
    for (std::uint64_t b = 0; b < n; ++b) {
      bool edge = base.has_edge(static_cast<Vertex>(a), static_cast<Vertex>(b));
      if (edge && a < b) {
        g.add_edge(static_cast<Vertex>(a), static_cast<Vertex>(b));
        g.add_edge(static_cast<Vertex>(n + a), static_cast<Vertex>(n + b));
      }
      if (!edge) g.add_edge(static_cast<Vertex>(a), static_cast<Vertex>(n + b));
    }
    for (std::uint64_t j = 0; j < h.gamma(); ++j) {
      g.add_edge(static_cast<Vertex>(n + a), static_cast<Vertex>(h.id(HatVertexId::u(a, j))));
    }
  }
  return g;
}

/// A V2 vertex is abnormal when the first chosen-or-not copy on its 0-port,
/// or either of the first two on its 1-port, is not a pendant edge into its
/// own block. Rank order is taken over all incident copies.
inline bool is_abnormal(const HatGraph& h, OracleSession<HatGraph>& session, std::uint64_t v) {
  auto& perm = session.permutation();
  if (perm.mode() != RankMode::kEager) {
    throw std::logic_error("is_abnormal requires an eager permutation");
  }
  if (v >= h.base_n()) throw std::out_of_range("V2 index out of range");
  const NodeId x = h.id(HatVertexId::v2(v));
  auto pendant = [&](const EdgeCopy& c) {
    HatVertexId o = h.decode(c.other(x));
    return o.cls == HatClass::kU && o.i == v;
  };
  int seen0 = 0, seen1 = 0;
  const std::uint64_t total = perm.incident_copies(x);
  for (std::uint64_t i = 1; i <= total && (seen0 < 1 || seen1 < 2); ++i) {
    Ranked r = perm.lowest(x, i);
    int side = r.copy.side_at(x);
    if (side == 0 && seen0 < 1) {
      ++seen0;
      if (!pendant(r.copy)) return true;
    } else if (side == 1 && seen1 < 2) {
      ++seen1;
      if (!pendant(r.copy)) return true;
    }
  }
  return seen0 < 1 || seen1 < 2;
}

}  // namespace sltsp
