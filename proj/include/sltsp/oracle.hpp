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

// Local membership oracles for the randomized greedy independent set over
// edge copies. An OracleSession owns one permutation and answers, for any
// copy, whether the greedy scan would take it.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "sltsp/edge_copy.hpp"
#include "sltsp/permutation.hpp"
#include "sltsp/port_greedy.hpp"
#include "sltsp/views.hpp"

namespace sltsp {

struct TrailStats {
  std::uint64_t vo_calls = 0;
  std::uint64_t eo_calls = 0;     // every edge-oracle invocation, memo hits included
  std::uint64_t evaluations = 0;  // invocations that were not answered by the memo
  std::uint64_t max_depth = 0;    // deepest explicit stack seen
  std::unordered_map<EdgeCopy, std::uint64_t> per_copy;  // filled only when tracked

  double mean_eo_per_vo() const {
    return vo_calls == 0 ? 0.0 : static_cast<double>(eo_calls) / static_cast<double>(vo_calls);
  }
};

struct OracleOptions {
  bool memoize = true;
  bool early_stop = true;
  bool track_per_copy = false;
#ifdef NDEBUG
  bool check_monotone = false;
#else
  bool check_monotone = true;
#endif
};

template <GraphView View>
class OracleSession {
 public:
  OracleSession(const View& view, std::uint32_t k, std::uint64_t seed, RankMode mode,
                OracleOptions options = {})
      : perm_(view, k, seed, mode), options_(options) {}

  PermutationProvider<View>& permutation() { return perm_; }
  const OracleOptions& options() const { return options_; }

  /// True iff `copy` belongs to the greedy independent set. `via` is the
  /// endpoint through which the copy's rank is located if unrealized.
  bool edge_oracle(const EdgeCopy& copy, NodeId via) {
    return edge_oracle_ranked(Ranked{copy, perm_.rank_of(copy, via)});
  }

  /// Degree of v in the greedy solution, scanning incident copies by rank.
  int vertex_oracle(NodeId v) {
    ++stats_.vo_calls;
    std::array<bool, 2> filled{known_occupant(v, 0).has_value(), known_occupant(v, 1).has_value()};
    const std::uint64_t total = perm_.incident_copies(v);
    for (std::uint64_t i = 1; i <= total; ++i) {
      if (options_.early_stop && filled[0] && filled[1]) break;
      Ranked r = perm_.lowest(v, i);
      const int side = r.copy.side_at(v);
      if (filled[side]) continue;  // a later copy on a filled port is always rejected
      if (edge_oracle_ranked(r)) filled[side] = true;
    }
    return (filled[0] ? 1 : 0) + (filled[1] ? 1 : 0);
  }

  /// Variant of the vertex oracle that evaluates every incident copy and
  /// never stops early.
  int vertex_oracle_full(NodeId v) {
    ++stats_.vo_calls;
    int degree = 0;
    const std::uint64_t total = perm_.incident_copies(v);
    for (std::uint64_t i = 1; i <= total; ++i) {
      if (edge_oracle_ranked(perm_.lowest(v, i))) ++degree;
    }
    return degree;
  }

  /// The chosen copy occupying port (v, side), if any. Scans the port's own
  /// rank stream.
  std::optional<EdgeCopy> port_occupant(NodeId v, int side) {
    ++stats_.vo_calls;
    if (auto o = known_occupant(v, side)) return o->copy;
    const std::uint64_t total = perm_.port_copies(v, side);
    for (std::uint64_t i = clear_prefix(v, side) + 1; i <= total; ++i) {
      Ranked r = perm_.lowest_port(v, side, i);
      if (edge_oracle_ranked(r)) return r.copy;
      extend_clear(v, side, i);
    }
    return std::nullopt;
  }

  const TrailStats& trail_report() const { return stats_; }
  void reset_trail() { stats_ = TrailStats{}; }

 private:
  // What is known about one port: its first `clear` copies in rank order
  // are rejected, and `occupant`, once found, is its unique chosen copy.
  struct PortInfo {
    std::uint64_t clear = 0;
    std::optional<Ranked> occupant;
  };

  struct PortHash {
    std::size_t operator()(const std::pair<NodeId, int>& p) const noexcept {
      return static_cast<std::size_t>(detail::hash_combine(detail::mix64(p.first), static_cast<std::uint64_t>(p.second)));
    }
  };

  enum Source : int { kPortU = 0, kPortV = 1, kTwin = 2 };

  // Candidates for self are the copies below it on its two ports, plus the
  // opposite mixed copy of the same edge, which shares neither port.
  struct Frame {
    Ranked self;
    std::array<std::uint64_t, 2> next{1, 1};  // 1-based indices into the two port streams
    std::array<bool, 2> done{false, false};
    std::optional<Ranked> twin;
    Source child = kPortU;  // stream of the candidate currently being evaluated
  };

  void count_call(const EdgeCopy& c) {
    ++stats_.eo_calls;
    if (options_.track_per_copy) ++stats_.per_copy[c];
  }

  std::optional<Ranked> known_occupant(NodeId v, int side) const {
    if (!options_.memoize) return std::nullopt;
    auto it = ports_.find({v, side});
    return it == ports_.end() ? std::nullopt : it->second.occupant;
  }

  std::uint64_t clear_prefix(NodeId v, int side) const {
    if (!options_.memoize) return 0;
    auto it = ports_.find({v, side});
    return it == ports_.end() ? 0 : it->second.clear;
  }

  // Records that item i of the port stream was rejected.
  void extend_clear(NodeId v, int side, std::uint64_t i) {
    if (!options_.memoize) return;
    auto& info = ports_[{v, side}];
    if (info.clear + 1 == i) info.clear = i;
  }

  std::optional<bool> known(const EdgeCopy& c) const {
    if (!options_.memoize) return std::nullopt;
    if (auto it = memo_.find(c); it != memo_.end()) return it->second;
    for (NodeId x : {c.u, c.v}) {
      if (auto o = known_occupant(x, c.side_at(x)); o && o->copy != c) return false;
    }
    return std::nullopt;
  }

  void record(const Ranked& r, bool accepted) {
    if (!options_.memoize) return;
    memo_.emplace(r.copy, accepted);
    if (!accepted) return;
    for (NodeId x : {r.copy.u, r.copy.v}) ports_[{x, r.copy.side_at(x)}].occupant = r;
  }

  Frame open_frame(const Ranked& self) {
    Frame f;
    f.self = self;
    const EdgeCopy& c = self.copy;
    f.next[kPortU] = clear_prefix(c.u, c.side_at(c.u)) + 1;
    f.next[kPortV] = clear_prefix(c.v, c.side_at(c.v)) + 1;
    if (c.kind != CopyKind::kZeroZero) {
      EdgeCopy twin = EdgeCopy::make(c.u, c.v, c.kind == CopyKind::kZeroOne ? CopyKind::kOneZero : CopyKind::kZeroOne);
      Ranked t{twin, perm_.rank_of(twin, c.u)};
      if (t < self) f.twin = t;
    }
    return f;
  }

  // Peeks the lowest-ranked unvisited candidate of f below f.self.
  std::optional<Ranked> peek_candidate(Frame& f, Source& src) {
    const EdgeCopy& c = f.self.copy;
    std::array<std::optional<Ranked>, 2> head;
    for (int s : {kPortU, kPortV}) {
      const NodeId x = s == kPortU ? c.u : c.v;
      const int side = c.side_at(x);
      f.next[s] = std::max(f.next[s], clear_prefix(x, side) + 1);
      while (!f.done[s] && !head[s]) {
        if (f.next[s] > perm_.port_copies(x, side)) {
          f.done[s] = true;
          break;
        }
        Ranked r = perm_.lowest_port(x, side, f.next[s]);
        if (!(r < f.self)) {
          f.done[s] = true;
          break;
        }
        // A same-edge copy on both ports is taken from the u stream only.
        if (s == kPortV && r.copy.same_edge(c) && r.copy.side_at(c.u) == c.side_at(c.u)) {
          ++f.next[s];
          continue;
        }
        head[s] = r;
      }
    }
    std::optional<Ranked> best;
    auto offer = [&](const std::optional<Ranked>& r, Source s) {
      if (r && (!best || *r < *best)) {
        best = r;
        src = s;
      }
    };
    offer(head[kPortU], kPortU);
    offer(head[kPortV], kPortV);
    offer(f.twin, kTwin);
    return best;
  }

  void consume(Frame& f, Source src, bool accepted) {
    if (src == kTwin) {
      f.twin.reset();
      return;
    }
    const NodeId x = src == kPortU ? f.self.copy.u : f.self.copy.v;
    if (!accepted) extend_clear(x, f.self.copy.side_at(x), f.next[src]);
    ++f.next[src];
  }

  bool edge_oracle_ranked(const Ranked& root) {
    count_call(root.copy);
    if (auto m = known(root.copy)) return *m;

    std::vector<Frame> stack;
    stack.push_back(open_frame(root));
    std::optional<bool> child_result;

    while (true) {
      Frame& f = stack.back();
      stats_.max_depth = std::max<std::uint64_t>(stats_.max_depth, stack.size());
      bool resolved = false;
      bool result = true;

      if (child_result) {
        consume(f, f.child, *child_result);
        if (*child_result) {
          resolved = true;
          result = false;
        }
        child_result.reset();
      }
      if (!resolved) {
        if (auto m = known(f.self.copy)) {
          resolved = true;
          result = *m;
        }
      }

      while (!resolved) {
        Source src = kPortU;
        auto cand = peek_candidate(f, src);
        if (!cand) {
          resolved = true;
          result = true;
          break;
        }
        count_call(cand->copy);
        if (auto m = known(cand->copy)) {
          consume(f, src, *m);
          if (*m) {
            resolved = true;
            result = false;
          }
          continue;
        }
        if (options_.check_monotone && !(*cand < f.self)) {
          throw InvariantViolation("query trail rank did not decrease");
        }
        f.child = src;
        Frame child = open_frame(*cand);
        stack.push_back(std::move(child));
        break;
      }
      if (!resolved) continue;

      ++stats_.evaluations;
      const Ranked done = stack.back().self;
      record(done, result);
      stack.pop_back();
      if (stack.empty()) return result;
      child_result = result;
    }
  }

  PermutationProvider<View> perm_;
  OracleOptions options_;
  absl::flat_hash_map<EdgeCopy, bool, std::hash<EdgeCopy>> memo_;
  absl::flat_hash_map<std::pair<NodeId, int>, PortInfo, PortHash> ports_;
  TrailStats stats_;
};

}  // namespace sltsp
