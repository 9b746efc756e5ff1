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

#include <atomic>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "sltsp/graph.hpp"

namespace sltsp {

/// Point-in-time copy of a ledger: total plus per-phase counts.
struct LedgerSnapshot {
  std::uint64_t total = 0;
  std::map<std::string, std::uint64_t> phases;

  std::uint64_t phase(const std::string& label) const {
    auto it = phases.find(label);
    return it == phases.end() ? 0 : it->second;
  }

  /// Counts accumulated between `earlier` and this snapshot.
  LedgerSnapshot since(const LedgerSnapshot& earlier) const {
    LedgerSnapshot d;
    d.total = total - earlier.total;
    for (const auto& [label, count] : phases) {
      std::uint64_t delta = count - earlier.phase(label);
      if (delta != 0) d.phases[label] = delta;
    }
    return d;
  }
};

namespace phase {
inline constexpr const char* kUnscoped = "unscoped";
inline constexpr const char* kTrail = "trail";
inline constexpr const char* kDegreeProbe = "degree_probe";
inline constexpr const char* kBridgeTest = "bridge_test";
}  // namespace phase

/// Counts distance-oracle queries. Every charge lands in exactly one phase,
/// so the total always equals the sum over phases.
///
/// Increments are atomic; the current phase is a single pointer swap. Two
/// estimators sharing one ledger concurrently will see merged counts.
class QueryLedger {
 public:
  QueryLedger() { current_.store(&counter_for(phase::kUnscoped)); }
  QueryLedger(const QueryLedger&) = delete;
  QueryLedger& operator=(const QueryLedger&) = delete;

  void charge(std::uint64_t count = 1) {
    total_.fetch_add(count, std::memory_order_relaxed);
    current_.load(std::memory_order_relaxed)->count.fetch_add(count, std::memory_order_relaxed);
  }

  std::uint64_t total() const { return total_.load(std::memory_order_relaxed); }

  std::string current_phase() const { return current_.load()->label; }

  /// Switches the phase that subsequent charges land in; returns the previous one.
  std::string set_phase(const std::string& label) {
    Counter* next = &counter_for(label);
    return current_.exchange(next)->label;
  }

  LedgerSnapshot snapshot() const {
    std::lock_guard lock(mu_);
    LedgerSnapshot s;
    s.total = total();
    for (const auto& c : counters_) {
      std::uint64_t v = c.count.load(std::memory_order_relaxed);
      if (v != 0) s.phases[c.label] = v;
    }
    return s;
  }

 private:
  struct Counter {
    explicit Counter(std::string l) : label(std::move(l)) {}
    std::string label;
    std::atomic<std::uint64_t> count{0};
  };

  Counter& counter_for(const std::string& label) {
    std::lock_guard lock(mu_);
    for (auto& c : counters_) {
      if (c.label == label) return c;
    }
    return counters_.emplace_back(label);
  }

  mutable std::mutex mu_;
  std::deque<Counter> counters_;  // deque: stable addresses
  std::atomic<std::uint64_t> total_{0};
  std::atomic<Counter*> current_{nullptr};
};

/// Charges land in `label` for the lifetime of the scope.
class PhaseScope {
 public:
  PhaseScope(QueryLedger& ledger, const std::string& label)
      : ledger_(ledger), previous_(ledger.set_phase(label)) {}
  ~PhaseScope() { ledger_.set_phase(previous_); }
  PhaseScope(const PhaseScope&) = delete;
  PhaseScope& operator=(const PhaseScope&) = delete;

 private:
  QueryLedger& ledger_;
  std::string previous_;
};

enum class MetricKind { kOneTwo, kGraphic };

inline const char* to_string(MetricKind k) { return k == MetricKind::kOneTwo ? "one_two" : "graphic"; }

/// Distance-oracle view over a hidden graph. Every call to `distance` costs
/// exactly one ledger query, including d(v, v).
///
/// For (1,2) instances the base graph holds the weight-1 pairs. For graphic
/// instances distances are shortest-path lengths in the base graph, which
/// must be connected. BFS rows are computed on first use and cached; that
/// cost is harness-side and never charged.
class TspInstance {
 public:
  TspInstance(SimpleGraph base, MetricKind kind) : base_(std::move(base)), kind_(kind) {
    if (kind_ == MetricKind::kGraphic) {
      if (!base_.is_connected()) throw GraphError("graphic metric requires a connected graph");
      rows_ = std::vector<std::atomic<const std::vector<std::uint32_t>*>>(base_.vertex_count());
      for (auto& r : rows_) r.store(nullptr);
    }
  }
  TspInstance(const TspInstance&) = delete;
  TspInstance& operator=(const TspInstance&) = delete;

  std::size_t vertex_count() const { return base_.vertex_count(); }
  MetricKind kind() const { return kind_; }
  QueryLedger& ledger() const { return ledger_; }

  /// Harness access to the hidden graph. Estimators must not call this.
  const SimpleGraph& ground_truth() const { return base_; }

  std::uint32_t distance(Vertex u, Vertex v) const {
    check(u);
    check(v);
    ledger_.charge();
    return peek(u, v);
  }

  /// Adjacency-matrix primitive: d(u, v) == 1, one query.
  bool weight_one_adjacency(Vertex u, Vertex v) const { return distance(u, v) == 1; }

  /// All weight-1 neighbors of v, found by probing every other vertex
  /// (exactly n - 1 queries).
  std::vector<Vertex> scan_neighbors(Vertex v) const {
    check(v);
    std::vector<Vertex> out;
    for (Vertex w = 0; w < vertex_count(); ++w) {
      if (w != v && weight_one_adjacency(v, w)) out.push_back(w);
    }
    return out;
  }

  /// Uncharged distance, for harness code and exact oracles only.
  std::uint32_t peek(Vertex u, Vertex v) const {
    if (u == v) return 0;
    if (kind_ == MetricKind::kOneTwo) return base_.has_edge(u, v) ? 1 : 2;
    return bfs_row(u)[v];
  }

 private:
  void check(Vertex v) const {
    if (v >= vertex_count()) {
      throw std::out_of_range("vertex " + std::to_string(v) + " out of range");
    }
  }

  const std::vector<std::uint32_t>& bfs_row(Vertex src) const {
    const auto* row = rows_[src].load(std::memory_order_acquire);
    if (row != nullptr) return *row;
    std::lock_guard lock(rows_mu_);
    row = rows_[src].load(std::memory_order_relaxed);
    if (row != nullptr) return *row;
    auto dist = std::make_unique<std::vector<std::uint32_t>>(
        vertex_count(), std::numeric_limits<std::uint32_t>::max());
    std::vector<Vertex> queue{src};
    (*dist)[src] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Vertex x = queue[head];
      for (Vertex y : base_.neighbors(x)) {
        if ((*dist)[y] == std::numeric_limits<std::uint32_t>::max()) {
          (*dist)[y] = (*dist)[x] + 1;
          queue.push_back(y);
        }
      }
    }
    row = dist.get();
    row_storage_.push_back(std::move(dist));
    rows_[src].store(row, std::memory_order_release);
    return *row;
  }

  SimpleGraph base_;
  MetricKind kind_;
  mutable QueryLedger ledger_;
  mutable std::mutex rows_mu_;
  mutable std::vector<std::atomic<const std::vector<std::uint32_t>*>> rows_;
  mutable std::vector<std::unique_ptr<std::vector<std::uint32_t>>> row_storage_;
};

}  // namespace sltsp
