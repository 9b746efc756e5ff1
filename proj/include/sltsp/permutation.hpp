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

// Implicit random ranking over the K + 2 copies of every edge.
//
// Eager mode ranks each copy by a keyed hash and sorts a vertex's incident
// copies on first use. Lazy mode realizes ranks on demand and never touches
// more of a neighborhood than the caller has asked to see.
//
// Lazy mode works per port. Port (x, 0) carries K + 1 copies of every edge
// at x and port (x, 1) carries one. For each port P:
//   t(P)       every copy on P with rank <= t(P) has been returned, in order;
//   pending(P) copies on P realized with rank > t(P), not yet returned;
//   realized   port-local keys of every realized copy on P.
// A copy spans two ports; while unrealized its rank is uniform on
// (max(t(P), t(Q)), 1). The next rank on P is the minimum of k uniforms on
// (t(P), 1), thinned against t(Q) of the copy it lands on. A vertex's full
// stream is the merge of its two port streams.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/container/flat_hash_set.h"
#include "absl/container/node_hash_map.h"
#include "sltsp/edge_copy.hpp"
#include "sltsp/views.hpp"

namespace sltsp {

enum class RankMode { kEager, kLazy };

inline const char* to_string(RankMode m) { return m == RankMode::kEager ? "eager" : "lazy"; }

template <GraphView View>
class PermutationProvider {
 public:
  PermutationProvider(const View& view, std::uint32_t k, std::uint64_t seed, RankMode mode)
      : view_(&view), k_(k), seed_(seed), mode_(mode), rng_(detail::mix64(seed)) {
    if (k < 1) throw std::invalid_argument("K must be at least 1");
  }

  std::uint32_t k() const { return k_; }
  std::uint64_t seed() const { return seed_; }
  RankMode mode() const { return mode_; }
  const View& view() const { return *view_; }

  std::uint64_t incident_copies(NodeId v) const { return std::uint64_t{k_ + 2} * view_->degree(v); }

  std::uint64_t port_copies(NodeId v, int side) const {
    return (side == 0 ? std::uint64_t{k_ + 1} : std::uint64_t{1}) * view_->degree(v);
  }

  /// The incident copy of v with the i-th smallest rank, i >= 1.
  Ranked lowest(NodeId v, std::uint64_t i) {
    if (i == 0 || i > incident_copies(v)) {
      throw std::out_of_range("lowest(" + std::to_string(v) + ", " + std::to_string(i) + ") with " +
                              std::to_string(incident_copies(v)) + " incident copies");
    }
    if (mode_ == RankMode::kEager) return eager_lists(v).all[i - 1];
    auto& m = merges_[v];
    while (m.order.size() < i) {
      std::optional<Ranked> a, b;
      if (m.next[0] < port_copies(v, 0)) a = lowest_port(v, 0, m.next[0] + 1);
      if (m.next[1] < port_copies(v, 1)) b = lowest_port(v, 1, m.next[1] + 1);
      if (a && (!b || *a < *b)) {
        m.order.push_back(*a);
        ++m.next[0];
      } else {
        m.order.push_back(*b);
        ++m.next[1];
      }
    }
    return m.order[i - 1];
  }

  /// The copy on port (v, side) with the i-th smallest rank, i >= 1.
  Ranked lowest_port(NodeId v, int side, std::uint64_t i) {
    if (i == 0 || i > port_copies(v, side)) {
      throw std::out_of_range("lowest_port(" + std::to_string(v) + ", " + std::to_string(side) + ", " +
                              std::to_string(i) + ") out of range");
    }
    if (mode_ == RankMode::kEager) return eager_lists(v).port[side][i - 1];
    auto& st = port_state(v, side);
    while (st.order.size() < i) advance(v, side, st);
    return st.order[i - 1];
  }

  /// Rank of `c`, realizing it if necessary. `via` must be an endpoint.
  double rank_of(const EdgeCopy& c, NodeId via) {
    if (!c.has_endpoint(via)) throw std::invalid_argument("via is not an endpoint of the copy");
    if (mode_ == RankMode::kEager) return eager_rank(seed_, c);
    if (auto it = ranks_.find(c); it != ranks_.end()) return it->second;
    return force_realize(c, via);
  }

  /// Neighbor at `slot` of v, resolved through the view once and cached.
  NodeId neighbor(NodeId v, std::size_t slot) {
    auto key = std::make_pair(v, static_cast<std::uint64_t>(slot));
    if (auto it = neighbors_.find(key); it != neighbors_.end()) return it->second;
    NodeId u = view_->neighbor(v, slot);
    neighbors_.emplace(key, u);
    neighbors_.emplace(std::make_pair(u, static_cast<std::uint64_t>(view_->slot_of(u, v))), v);
    return u;
  }

  std::size_t realized_count() const { return ranks_.size(); }

 private:
  struct PairHash {
    std::size_t operator()(const std::pair<NodeId, std::uint64_t>& p) const noexcept {
      return static_cast<std::size_t>(detail::hash_combine(detail::mix64(p.first), p.second));
    }
  };

  struct PortState {
    double threshold = 0.0;
    std::uint64_t total = 0;
    absl::flat_hash_set<std::uint64_t> realized;
    // Built once more than half the keys are realized: unrealized keys and
    // their positions, for O(1) uniform picks and removals.
    std::vector<std::uint64_t> free_keys;
    std::vector<std::uint32_t> free_pos;
    bool dense = false;
    std::priority_queue<Ranked, std::vector<Ranked>, std::greater<Ranked>> pending;
    std::vector<Ranked> order;
  };

  struct Merge {
    std::array<std::uint64_t, 2> next{0, 0};
    std::vector<Ranked> order;
  };

  struct EagerLists {
    std::vector<Ranked> all;
    std::array<std::vector<Ranked>, 2> port;
  };

  double uniform() { return detail::to_unit(rng_()); }

  const EagerLists& eager_lists(NodeId v) {
    auto it = eager_.find(v);
    if (it != eager_.end()) return it->second;
    EagerLists lists;
    const std::size_t deg = view_->degree(v);
    lists.all.reserve(deg * (k_ + 2));
    for (std::size_t s = 0; s < deg; ++s) {
      NodeId u = neighbor(v, s);
      for (std::uint32_t layer = 0; layer < k_ + 2; ++layer) {
        EdgeCopy c = EdgeCopy::from_layer(v, u, layer, k_);
        lists.all.push_back(Ranked{c, eager_rank(seed_, c)});
      }
    }
    std::sort(lists.all.begin(), lists.all.end());
    for (const auto& r : lists.all) lists.port[r.copy.side_at(v)].push_back(r);
    return eager_.emplace(v, std::move(lists)).first->second;
  }

  PortState& port_state(NodeId v, int side) {
    auto [it, inserted] = ports_.try_emplace(port_id(v, side));
    if (inserted) it->second.total = port_copies(v, side);
    return it->second;
  }

  static std::pair<NodeId, std::uint64_t> port_id(NodeId v, int side) {
    return {v, static_cast<std::uint64_t>(side)};
  }

  // Port-local key of copy c at endpoint x.
  std::uint64_t key_at(const EdgeCopy& c, NodeId x) const {
    const std::uint64_t slot = view_->slot_of(x, c.other(x));
    if (c.side_at(x) == 1) return slot;
    const std::uint64_t j = c.kind == CopyKind::kZeroZero ? c.index : k_;
    return slot * (k_ + 1) + j;
  }

  // Copy behind port-local key `key` on (x, side), given the neighbor u.
  EdgeCopy copy_at(NodeId x, int side, std::uint64_t key, NodeId u) const {
    const bool x_small = x < u;
    if (side == 1) return EdgeCopy::make(x, u, x_small ? CopyKind::kOneZero : CopyKind::kZeroOne);
    const std::uint64_t j = key % (k_ + 1);
    if (j < k_) return EdgeCopy::make(x, u, CopyKind::kZeroZero, static_cast<std::uint32_t>(j));
    return EdgeCopy::make(x, u, x_small ? CopyKind::kZeroOne : CopyKind::kOneZero);
  }

  std::uint64_t slot_of_key(int side, std::uint64_t key) const { return side == 1 ? key : key / (k_ + 1); }

  static void mark(PortState& st, std::uint64_t key) {
    st.realized.insert(key);
    if (!st.dense) return;
    const std::uint32_t pos = st.free_pos[key];
    const std::uint64_t last = st.free_keys.back();
    st.free_keys[pos] = last;
    st.free_pos[last] = pos;
    st.free_keys.pop_back();
  }

  void realize(const Ranked& r, PortState& sa, std::uint64_t key_a, PortState& sb, std::uint64_t key_b) {
    mark(sa, key_a);
    mark(sb, key_b);
    ranks_.emplace(r.copy, r.rank);
  }

  // Uniform unrealized key of a port.
  std::uint64_t pick_unrealized(PortState& st) {
    const std::uint64_t free = st.total - st.realized.size();
    if (!st.dense && 2 * free < st.total) {
      st.free_pos.assign(st.total, 0);
      for (std::uint64_t key = 0; key < st.total; ++key) {
        if (st.realized.count(key)) continue;
        st.free_pos[key] = static_cast<std::uint32_t>(st.free_keys.size());
        st.free_keys.push_back(key);
      }
      st.dense = true;
    }
    if (st.dense) {
      auto idx = static_cast<std::uint64_t>(uniform() * static_cast<double>(st.free_keys.size()));
      if (idx >= st.free_keys.size()) idx = st.free_keys.size() - 1;
      return st.free_keys[idx];
    }
    while (true) {
      auto key = static_cast<std::uint64_t>(uniform() * static_cast<double>(st.total));
      if (key >= st.total) key = st.total - 1;
      if (!st.realized.count(key)) return key;
    }
  }

  // Realizes an unrealized copy from its conditional law and queues it on
  // both of its ports.
  double force_realize(const EdgeCopy& c, NodeId via) {
    const NodeId a = via, b = c.other(via);
    const int sa_side = c.side_at(a), sb_side = c.side_at(b);
    PortState& sa = port_state(a, sa_side);
    PortState& sb = port_state(b, sb_side);
    const std::uint64_t ka = key_at(c, a), kb = key_at(c, b);
    if (sa.realized.count(ka)) throw std::logic_error("copy realized but missing from the rank memo");
    const double low = std::max(sa.threshold, sb.threshold);
    Ranked r{c, low + (1.0 - low) * uniform()};
    realize(r, sa, ka, sb, kb);
    sa.pending.push(r);
    sb.pending.push(r);
    return r.rank;
  }

  // Appends the next-ranked copy of port (v, side) to its order.
  void advance(NodeId v, int side, PortState& st) {
    while (true) {
      const std::uint64_t free = st.total - st.realized.size();
      const bool has_pending = !st.pending.empty();
      if (free == 0) {
        if (!has_pending) throw std::logic_error("no copies left on port");
        emit(st, pop_pending(st));
        return;
      }
      const double t = st.threshold;
      const double x = t + (1.0 - t) * -std::expm1(std::log1p(-uniform()) / static_cast<double>(free));
      if (has_pending && x >= st.pending.top().rank) {
        emit(st, pop_pending(st));
        return;
      }
      const std::uint64_t key = pick_unrealized(st);
      const NodeId u = neighbor(v, static_cast<std::size_t>(slot_of_key(side, key)));
      const EdgeCopy c = copy_at(v, side, key, u);
      PortState& su = port_state(u, c.side_at(u));
      const std::uint64_t ku = key_at(c, u);
      if (x > su.threshold) {
        Ranked r{c, x};
        realize(r, st, key, su, ku);
        su.pending.push(r);
        emit(st, r);
        return;
      }
      // Thinned: the copy lies above t(Q), so it is realized there and this
      // port moves past x without returning anything.
      Ranked r{c, su.threshold + (1.0 - su.threshold) * uniform()};
      realize(r, st, key, su, ku);
      su.pending.push(r);
      st.pending.push(r);
      st.threshold = x;
    }
  }

  static Ranked pop_pending(PortState& st) {
    Ranked r = st.pending.top();
    st.pending.pop();
    return r;
  }

  static void emit(PortState& st, const Ranked& r) {
    st.threshold = r.rank;
    st.order.push_back(r);
  }

  const View* view_;
  std::uint32_t k_;
  std::uint64_t seed_;
  RankMode mode_;
  std::mt19937_64 rng_;
  // Node-based: PortState references must survive later insertions.
  absl::node_hash_map<std::pair<NodeId, std::uint64_t>, PortState, PairHash> ports_;
  absl::node_hash_map<NodeId, Merge> merges_;
  absl::node_hash_map<NodeId, EagerLists> eager_;
  absl::flat_hash_map<EdgeCopy, double, std::hash<EdgeCopy>> ranks_;
  absl::flat_hash_map<std::pair<NodeId, std::uint64_t>, NodeId, PairHash> neighbors_;
};

}  // namespace sltsp
