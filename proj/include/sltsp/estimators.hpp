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

// Sampling estimators over a distance oracle. Every estimator is a
// deterministic function of (instance, config); all randomness flows from
// cfg.seed through derive_seed.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sltsp/exact.hpp"
#include "sltsp/hat_graph.hpp"
#include "sltsp/metric.hpp"
#include "sltsp/oracle.hpp"

namespace sltsp {

struct EstimatorConfig {
  std::uint32_t k = 20;
  double epsilon = 0.05;
  std::uint64_t seed = 0;
  bool clamp = true;
  std::optional<std::uint64_t> r_override;      // path-cover samples
  std::optional<std::uint64_t> aux_r_override;  // bad-vertex and bridge samples
  // Multiplier on the sampled port-occupancy fraction. A uniformly drawn
  // port is occupied by a V1 edge with probability |P|/n; the correction
  // term and the guarantee assume an indicator of mean 2|P|/n.
  double port_scale = 2.0;
  bool record_time = false;

  void validate() const {
    if (k < 1) throw std::invalid_argument("K must be at least 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    if (r_override && *r_override == 0) throw std::invalid_argument("r_override must be positive");
    if (aux_r_override && *aux_r_override == 0) throw std::invalid_argument("aux_r_override must be positive");
    if (!(port_scale > 0.0)) throw std::invalid_argument("port_scale must be positive");
  }
};

struct EstimateReport {
  std::string algorithm;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double value = 0.0;
  std::map<std::string, double> components;
  LedgerSnapshot queries;
  std::uint64_t samples = 0;
  double wall_ms = 0.0;
};

inline nlohmann::ordered_json to_json(const EstimateReport& r) {
  nlohmann::ordered_json j;
  j["algorithm"] = r.algorithm;
  j["n"] = r.n;
  j["seed"] = r.seed;
  j["value"] = r.value;
  j["components"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.components) j["components"][k] = v;
  j["queries"] = nlohmann::ordered_json::object();
  j["queries"]["total"] = r.queries.total;
  for (const auto& [k, v] : r.queries.phases) j["queries"][k] = v;
  j["samples"] = r.samples;
  j["wall_ms"] = r.wall_ms;
  return j;
}

/// Paper-default sample counts.
inline std::uint64_t default_path_cover_samples(std::size_t n, std::uint32_t k) {
  return static_cast<std::uint64_t>(std::ceil(192.0 * k * k * std::log(std::max<std::size_t>(n, 2))));
}

inline std::uint64_t default_bridge_samples(std::size_t n, double epsilon) {
  return static_cast<std::uint64_t>(
      std::ceil(256.0 * std::pow(epsilon, -4.0) * std::log(std::max<std::size_t>(n, 2))));
}

inline std::uint64_t default_bad_vertex_samples(std::size_t n, double epsilon) {
  return static_cast<std::uint64_t>(
      std::ceil(4.0 * std::pow(epsilon, -2.0) * std::log(std::max<std::size_t>(n, 2))));
}

namespace est_detail {

class Timer {
 public:
  explicit Timer(bool on) : on_(on), start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    if (!on_) return 0.0;
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  bool on_;
  std::chrono::steady_clock::time_point start_;
};

inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

// Stream ids keep sub-estimators of a composite independent.
inline constexpr std::uint64_t kPathCoverStream = 1;
inline constexpr std::uint64_t kBadVertexStream = 2;
inline constexpr std::uint64_t kBridgeStream = 3;
inline constexpr std::uint64_t kMatchingStream = 4;
inline constexpr std::uint64_t kPickStream = 0xfeed;

}  // namespace est_detail

/// Path-cover estimate via the gadget graph: sample (vertex, port) pairs of
/// V1, each under a fresh permutation, and count ports held by V1-V1 edges.
inline EstimateReport estimate_path_cover(const TspInstance& inst, const EstimatorConfig& cfg) {
  cfg.validate();
  const std::size_t n = inst.vertex_count();
  if (n < 2) throw std::invalid_argument("path cover estimate needs n >= 2");
  est_detail::Timer timer(cfg.record_time);
  auto& ledger = inst.ledger();
  const LedgerSnapshot before = ledger.snapshot();

  HatGraph hat(inst, cfg.k);
  const std::uint64_t r = cfg.r_override.value_or(default_path_cover_samples(n, cfg.k));
  std::mt19937_64 pick(derive_seed(cfg.seed, est_detail::kPickStream));
  std::uint64_t hits = 0;
  {
    PhaseScope scope(ledger, phase::kTrail);
    for (std::uint64_t i = 0; i < r; ++i) {
      const NodeId u = est_detail::uniform_index(pick, n);
      const int port = static_cast<int>(est_detail::uniform_index(pick, 2));
      OracleSession<HatGraph> session(hat, cfg.k, derive_seed(cfg.seed, i + 1), RankMode::kLazy);
      auto occ = session.port_occupant(u, port);
      if (occ && hat.is_v1(occ->other(u))) ++hits;
    }
  }

  const double raw = static_cast<double>(hits) / static_cast<double>(r);
  const double f = cfg.port_scale * raw;
  const double kk = cfg.k;
  const double nn = static_cast<double>(n);
  double rho = kk / (2.0 * (kk + 2.0)) * (f * nn - nn / (4.0 * kk));
  const double unclamped = rho;
  if (cfg.clamp) rho = std::clamp(rho, 0.0, nn - 1.0);

  EstimateReport rep;
  rep.algorithm = "path_cover";
  rep.n = n;
  rep.seed = cfg.seed;
  rep.value = rho;
  rep.components = {{"X", static_cast<double>(hits)},
                    {"r", static_cast<double>(r)},
                    {"f", f},
                    {"K", kk},
                    {"rho_unclamped", unclamped},
                    {"clamped", cfg.clamp ? 1.0 : 0.0}};
  rep.samples = r;
  rep.queries = ledger.snapshot().since(before);
  rep.wall_ms = timer.elapsed_ms();
  return rep;
}

/// (1,2)-TSP estimate 2n - rho.
inline EstimateReport estimate_tsp12(const TspInstance& inst, const EstimatorConfig& cfg) {
  if (inst.kind() != MetricKind::kOneTwo) throw std::invalid_argument("estimate_tsp12 needs a (1,2) instance");
  if (inst.vertex_count() < 3) throw std::invalid_argument("estimate_tsp12 needs n >= 3");
  est_detail::Timer timer(cfg.record_time);
  EstimatorConfig sub = cfg;
  sub.seed = derive_seed(cfg.seed, est_detail::kPathCoverStream);
  sub.record_time = false;
  EstimateReport pc = estimate_path_cover(inst, sub);
  EstimateReport rep;
  rep.algorithm = "tsp12";
  rep.n = inst.vertex_count();
  rep.seed = cfg.seed;
  rep.value = 2.0 * static_cast<double>(rep.n) - pc.value;
  rep.components = {{"rho_tilde", pc.value}};
  rep.queries = pc.queries;
  rep.samples = pc.samples;
  rep.wall_ms = timer.elapsed_ms();
  return rep;
}

/// Flags, per neighbor of u in increasing index order, whether the edge to
/// it is a bridge. Neighbors are found by a full scan charged to the degree
/// probe phase; distance tests are charged to the bridge phase.
struct BridgeFlags {
  std::vector<Vertex> neighbors;
  std::vector<bool> is_bridge;
};

inline BridgeFlags test_bridges_at(const TspInstance& inst, Vertex u, std::size_t cap,
                                   const std::vector<Vertex>* known_neighbors = nullptr) {
  if (inst.kind() != MetricKind::kGraphic) throw std::invalid_argument("bridge test needs a graphic instance");
  auto& ledger = inst.ledger();
  BridgeFlags out;
  if (known_neighbors != nullptr) {
    out.neighbors = *known_neighbors;
  } else {
    PhaseScope scope(ledger, phase::kDegreeProbe);
    out.neighbors = inst.scan_neighbors(u);
  }
  const std::size_t deg = out.neighbors.size();
  if (deg > cap) {
    throw std::invalid_argument("vertex " + std::to_string(u) + " has degree " + std::to_string(deg) +
                                " above the cap " + std::to_string(cap));
  }
  out.is_bridge.assign(deg, true);
  if (deg <= 1) return out;

  PhaseScope scope(ledger, phase::kBridgeTest);
  const std::size_t n = inst.vertex_count();
  // dist[w][i] = d(w, v_i); owner[w] = nearest neighbor of u, lowest index on ties.
  std::vector<std::vector<std::uint32_t>> dist(n, std::vector<std::uint32_t>(deg, 0));
  std::vector<std::size_t> owner(n, 0);
  for (Vertex w = 0; w < n; ++w) {
    if (w == u) continue;
    std::size_t best = 0;
    for (std::size_t i = 0; i < deg; ++i) {
      dist[w][i] = w == out.neighbors[i] ? 0 : inst.distance(w, out.neighbors[i]);
      if (dist[w][i] < dist[w][best]) best = i;
    }
    owner[w] = best;
  }
  for (std::size_t j = 0; j < deg; ++j) {
    bool bridge = true;
    for (Vertex w = 0; w < n && bridge; ++w) {
      if (w == u) continue;
      for (std::size_t i = 0; i < deg && bridge; ++i) {
        if (i == j) continue;
        if (owner[w] == j && dist[w][i] != dist[w][j] + 2) bridge = false;
        if (owner[w] == i && dist[w][j] != dist[w][i] + 2) bridge = false;
      }
    }
    out.is_bridge[j] = bridge;
  }
  return out;
}

/// Degree 1, or degree 2 with one of its two edges a bridge.
inline bool is_bad_vertex(const TspInstance& inst, Vertex v) {
  if (inst.kind() != MetricKind::kGraphic) throw std::invalid_argument("bad vertices need a graphic instance");
  std::vector<Vertex> nb;
  {
    PhaseScope scope(inst.ledger(), phase::kDegreeProbe);
    nb = inst.scan_neighbors(v);
  }
  if (nb.size() == 1) return true;
  if (nb.size() != 2) return false;
  auto flags = test_bridges_at(inst, v, 2, &nb);
  return flags.is_bridge[0] || flags.is_bridge[1];
}

/// n times the bad fraction of sampled vertices, shifted up by eps n / 2.
inline EstimateReport estimate_bad_vertices(const TspInstance& inst, const EstimatorConfig& cfg) {
  cfg.validate();
  const std::size_t n = inst.vertex_count();
  if (n < 1) throw std::invalid_argument("empty instance");
  est_detail::Timer timer(cfg.record_time);
  const LedgerSnapshot before = inst.ledger().snapshot();
  const std::uint64_t s = cfg.aux_r_override.value_or(default_bad_vertex_samples(n, cfg.epsilon));
  std::mt19937_64 pick(derive_seed(cfg.seed, est_detail::kPickStream));
  std::uint64_t bad = 0;
  for (std::uint64_t i = 0; i < s; ++i) {
    if (is_bad_vertex(inst, static_cast<Vertex>(est_detail::uniform_index(pick, n)))) ++bad;
  }
  const double nn = static_cast<double>(n);
  const double mean = static_cast<double>(bad) / static_cast<double>(s);
  EstimateReport rep;
  rep.algorithm = "bad_vertices";
  rep.n = n;
  rep.seed = cfg.seed;
  rep.value = nn * mean + cfg.epsilon * nn / 2.0;
  rep.components = {{"mean", mean}, {"epsilon", cfg.epsilon}, {"samples", static_cast<double>(s)}};
  rep.samples = s;
  rep.queries = inst.ledger().snapshot().since(before);
  rep.wall_ms = timer.elapsed_ms();
  return rep;
}

/// Bridge count estimate: every sampled vertex of degree <= 4/eps counts
/// the bridges it owns. An edge is owned by its lower-degree endpoint, ties
/// going to the smaller index.
inline EstimateReport estimate_bridges(const TspInstance& inst, const EstimatorConfig& cfg) {
  cfg.validate();
  if (inst.kind() != MetricKind::kGraphic) throw std::invalid_argument("bridges need a graphic instance");
  const std::size_t n = inst.vertex_count();
  if (n < 1) throw std::invalid_argument("empty instance");
  est_detail::Timer timer(cfg.record_time);
  auto& ledger = inst.ledger();
  const LedgerSnapshot before = ledger.snapshot();
  const auto cap = static_cast<std::size_t>(std::floor(4.0 / cfg.epsilon));
  const std::uint64_t r = cfg.aux_r_override.value_or(default_bridge_samples(n, cfg.epsilon));
  std::mt19937_64 pick(derive_seed(cfg.seed, est_detail::kPickStream));

  std::uint64_t owned = 0;
  for (std::uint64_t i = 0; i < r; ++i) {
    const auto u = static_cast<Vertex>(est_detail::uniform_index(pick, n));
    std::vector<Vertex> nb;
    {
      PhaseScope scope(ledger, phase::kDegreeProbe);
      nb = inst.scan_neighbors(u);
    }
    if (nb.size() > cap) continue;
    auto flags = test_bridges_at(inst, u, cap, &nb);
    for (std::size_t j = 0; j < nb.size(); ++j) {
      if (!flags.is_bridge[j]) continue;
      std::size_t other_deg = 0;
      {
        PhaseScope scope(ledger, phase::kDegreeProbe);
        other_deg = inst.scan_neighbors(nb[j]).size();
      }
      if (nb.size() < other_deg || (nb.size() == other_deg && u < nb[j])) ++owned;
    }
  }
  const double nn = static_cast<double>(n);
  const double mean = static_cast<double>(owned) / static_cast<double>(r);
  EstimateReport rep;
  rep.algorithm = "bridges";
  rep.n = n;
  rep.seed = cfg.seed;
  rep.value = nn * mean + 0.75 * cfg.epsilon * nn;
  rep.components = {{"mean", mean}, {"epsilon", cfg.epsilon}, {"cap", static_cast<double>(cap)}};
  rep.samples = r;
  rep.queries = ledger.snapshot().since(before);
  rep.wall_ms = timer.elapsed_ms();
  return rep;
}

namespace est_detail {

inline EstimatorConfig child(const EstimatorConfig& cfg, std::uint64_t stream) {
  EstimatorConfig c = cfg;
  c.seed = derive_seed(cfg.seed, stream);
  c.record_time = false;
  return c;
}

inline void require_connected_graphic(const TspInstance& inst) {
  if (inst.kind() != MetricKind::kGraphic) throw std::invalid_argument("graphic TSP needs a graphic instance");
  if (inst.vertex_count() < 3) throw std::invalid_argument("graphic TSP estimate needs n >= 3");
}

inline LedgerSnapshot merge(const LedgerSnapshot& a, const LedgerSnapshot& b) {
  LedgerSnapshot m = a;
  m.total += b.total;
  for (const auto& [k, v] : b.phases) m.phases[k] += v;
  return m;
}

}  // namespace est_detail

/// 2n - (rho - 2 beta) / 5.
inline EstimateReport estimate_graphic_tsp_v1(const TspInstance& inst, const EstimatorConfig& cfg) {
  est_detail::require_connected_graphic(inst);
  est_detail::Timer timer(cfg.record_time);
  auto pc = estimate_path_cover(inst, est_detail::child(cfg, est_detail::kPathCoverStream));
  auto bv = estimate_bad_vertices(inst, est_detail::child(cfg, est_detail::kBadVertexStream));
  EstimateReport rep;
  rep.algorithm = "graphic_v1";
  rep.n = inst.vertex_count();
  rep.seed = cfg.seed;
  rep.value = 2.0 * static_cast<double>(rep.n) - (pc.value - 2.0 * bv.value) / 5.0;
  rep.components = {{"rho_tilde", pc.value}, {"beta_tilde", bv.value}};
  rep.queries = est_detail::merge(pc.queries, bv.queries);
  rep.samples = pc.samples + bv.samples;
  rep.wall_ms = timer.elapsed_ms();
  return rep;
}

/// 2n - (rho - B) / 3.
inline EstimateReport estimate_graphic_tsp_v2(const TspInstance& inst, const EstimatorConfig& cfg) {
  est_detail::require_connected_graphic(inst);
  est_detail::Timer timer(cfg.record_time);
  auto pc = estimate_path_cover(inst, est_detail::child(cfg, est_detail::kPathCoverStream));
  auto br = estimate_bridges(inst, est_detail::child(cfg, est_detail::kBridgeStream));
  EstimateReport rep;
  rep.algorithm = "graphic_v2";
  rep.n = inst.vertex_count();
  rep.seed = cfg.seed;
  rep.value = 2.0 * static_cast<double>(rep.n) - (pc.value - br.value) / 3.0;
  rep.components = {{"rho_tilde", pc.value}, {"bridges_tilde", br.value}};
  rep.queries = est_detail::merge(pc.queries, br.queries);
  rep.samples = pc.samples + br.samples;
  rep.wall_ms = timer.elapsed_ms();
  return rep;
}

/// Source of a maximum-matching estimate mu~ with mu - eps n <= mu~ <= mu.
class MatchingEstimator {
 public:
  virtual ~MatchingEstimator() = default;
  virtual std::string name() const = 0;
  virtual double estimate(const TspInstance& inst, const EstimatorConfig& cfg) = 0;
};

/// Exact baseline: reads the hidden graph, charges nothing.
class ExactMatching : public MatchingEstimator {
 public:
  std::string name() const override { return "exact"; }
  double estimate(const TspInstance& inst, const EstimatorConfig&) override {
    return static_cast<double>(exact_max_matching(inst.ground_truth()).size);
  }
};

/// Returns exactly mu - eps n, the low end of the contract.
class LowerEdgeMatching : public MatchingEstimator {
 public:
  std::string name() const override { return "lower_edge"; }
  double estimate(const TspInstance& inst, const EstimatorConfig& cfg) override {
    return static_cast<double>(exact_max_matching(inst.ground_truth()).size) -
           cfg.epsilon * static_cast<double>(inst.vertex_count());
  }
};

/// 2n - (mu - B) / 3.
inline EstimateReport estimate_graphic_tsp_subquadratic(const TspInstance& inst, const EstimatorConfig& cfg,
                                                        MatchingEstimator& matcher) {
  est_detail::require_connected_graphic(inst);
  est_detail::Timer timer(cfg.record_time);
  const LedgerSnapshot before = inst.ledger().snapshot();
  const double mu = matcher.estimate(inst, est_detail::child(cfg, est_detail::kMatchingStream));
  const LedgerSnapshot matcher_queries = inst.ledger().snapshot().since(before);
  auto br = estimate_bridges(inst, est_detail::child(cfg, est_detail::kBridgeStream));
  EstimateReport rep;
  rep.algorithm = "graphic_subquadratic";
  rep.n = inst.vertex_count();
  rep.seed = cfg.seed;
  rep.value = 2.0 * static_cast<double>(rep.n) - (mu - br.value) / 3.0;
  rep.components = {{"mu_tilde", mu}, {"bridges_tilde", br.value}};
  rep.queries = est_detail::merge(matcher_queries, br.queries);
  rep.samples = br.samples;
  rep.wall_ms = timer.elapsed_ms();
  return rep;
}

}  // namespace sltsp
