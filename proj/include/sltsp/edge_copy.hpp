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
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

namespace sltsp {

/// Vertex of whatever graph an oracle runs on. Wider than `Vertex` because
/// the implicit gadget graph has Theta(K n^2) vertices.
using NodeId = std::uint64_t;

/// One of the two attachment slots of a vertex.
struct Port {
  NodeId vertex = 0;
  int side = 0;  // 0 or 1

  friend bool operator==(const Port&, const Port&) = default;
  friend auto operator<=>(const Port&, const Port&) = default;
};

/// Port pair occupied by an edge copy, relative to the canonical orientation
/// (u, v) with u < v. There is deliberately no (u^1, v^1) kind.
enum class CopyKind : std::uint8_t {
  kZeroZero = 0,  // (u^0, v^0); K of these per edge
  kZeroOne = 1,   // (u^0, v^1)
  kOneZero = 2,   // (u^1, v^0)
};

inline const char* to_string(CopyKind k) {
  switch (k) {
    case CopyKind::kZeroZero: return "00";
    case CopyKind::kZeroOne: return "01";
    case CopyKind::kOneZero: return "10";
  }
  return "?";
}

inline CopyKind copy_kind_from_string(const std::string& s) {
  if (s == "00") return CopyKind::kZeroZero;
  if (s == "01") return CopyKind::kZeroOne;
  if (s == "10") return CopyKind::kOneZero;
  throw std::invalid_argument("unknown copy kind '" + s + "'");
}

/// A replica of edge (u, v) bound to a port pair. Ordering is the canonical
/// copy id: edge pair, then kind, then copy index.
struct EdgeCopy {
  NodeId u = 0;
  NodeId v = 0;
  CopyKind kind = CopyKind::kZeroZero;
  std::uint32_t index = 0;  // in [0, K) for kZeroZero, 0 otherwise

  static EdgeCopy make(NodeId a, NodeId b, CopyKind kind, std::uint32_t index = 0) {
    if (a == b) throw std::invalid_argument("edge copy on a self-loop");
    return EdgeCopy{std::min(a, b), std::max(a, b), kind, index};
  }

  /// Copies of one edge are numbered by layer: K zero-zero layers, then the
  /// two mixed kinds.
  static EdgeCopy from_layer(NodeId a, NodeId b, std::uint32_t layer, std::uint32_t k) {
    if (layer < k) return make(a, b, CopyKind::kZeroZero, layer);
    if (layer == k) return make(a, b, CopyKind::kZeroOne);
    if (layer == k + 1) return make(a, b, CopyKind::kOneZero);
    throw std::out_of_range("copy layer " + std::to_string(layer) + " >= K + 2");
  }

  std::uint32_t layer(std::uint32_t k) const {
    switch (kind) {
      case CopyKind::kZeroZero: return index;
      case CopyKind::kZeroOne: return k;
      case CopyKind::kOneZero: return k + 1;
    }
    return 0;
  }

  bool has_endpoint(NodeId x) const { return x == u || x == v; }
  NodeId other(NodeId x) const { return x == u ? v : u; }
  bool same_edge(const EdgeCopy& o) const { return u == o.u && v == o.v; }

  /// Side of `x`'s port this copy occupies. `x` must be an endpoint.
  int side_at(NodeId x) const {
    switch (kind) {
      case CopyKind::kZeroZero: return 0;
      case CopyKind::kZeroOne: return x == u ? 0 : 1;
      case CopyKind::kOneZero: return x == u ? 1 : 0;
    }
    return 0;
  }

  Port port_at(NodeId x) const { return Port{x, side_at(x)}; }

  friend bool operator==(const EdgeCopy&, const EdgeCopy&) = default;
  friend auto operator<=>(const EdgeCopy&, const EdgeCopy&) = default;
};

/// Two copies conflict when they replicate the same edge, or share an
/// endpoint and occupy the same side of it. This is the adjacency relation of
/// the conflict graph; it is never materialized.
inline bool is_conflicting(const EdgeCopy& a, const EdgeCopy& b) {
  if (a == b) throw std::invalid_argument("is_conflicting on identical copies");
  if (a.same_edge(b)) return true;
  for (NodeId x : {a.u, a.v}) {
    if (b.has_endpoint(x) && a.side_at(x) == b.side_at(x)) return true;
  }
  return false;
}

/// An edge copy with its realized rank. Ties in rank fall back to the copy id.
struct Ranked {
  EdgeCopy copy;
  double rank = 0.0;

  friend bool operator==(const Ranked&, const Ranked&) = default;
  friend bool operator<(const Ranked& a, const Ranked& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    return a.copy < b.copy;
  }
  friend bool operator>(const Ranked& a, const Ranked& b) { return b < a; }
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
  return mix64(seed ^ mix64(value));
}

inline std::uint64_t copy_key(const EdgeCopy& c) {
  std::uint64_t h = mix64(c.u);
  h = hash_combine(h, c.v);
  h = hash_combine(h, (static_cast<std::uint64_t>(c.kind) << 32) | c.index);
  return h;
}

inline double to_unit(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

}  // namespace detail

/// Keyed-hash rank in [0, 1): the explicit ("eager") permutation.
inline double eager_rank(std::uint64_t seed, const EdgeCopy& c) {
  return detail::to_unit(detail::hash_combine(detail::mix64(seed), detail::copy_key(c)));
}

/// Derives an independent child seed, e.g. one per sample or repetition.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return detail::hash_combine(detail::mix64(seed ^ 0x5851f42d4c957f2dULL), stream);
}

}  // namespace sltsp

template <>
struct std::hash<sltsp::EdgeCopy> {
  std::size_t operator()(const sltsp::EdgeCopy& c) const noexcept {
    return static_cast<std::size_t>(sltsp::detail::copy_key(c));
  }
};
