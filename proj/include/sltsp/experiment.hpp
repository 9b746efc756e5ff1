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

// Experiment runner: sweeps (n, seed, algorithm) cells, attaches exact
// references where size guards allow, and writes rows in cell order so the
// output does not depend on the number of worker threads.

#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "sltsp/estimators.hpp"
#include "sltsp/exact.hpp"
#include "sltsp/generators.hpp"
#include "sltsp/oracle.hpp"
#include "sltsp/port_greedy.hpp"
#include "sltsp/views.hpp"

namespace sltsp {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> names = {"path_cover", "tsp12",         "bad_vertices",
                                                  "bridges",    "graphic_v1",    "graphic_v2",
                                                  "graphic_subquadratic"};
  return names;
}

struct ExperimentConfig {
  nlohmann::json generator;  // {"name": family, ...}; "n" is set from the sweep
  std::vector<std::string> algorithms;
  std::vector<std::size_t> n_values;
  std::vector<std::uint64_t> seeds;
  std::uint32_t k = 20;
  double epsilon = 0.05;
  std::optional<std::uint64_t> r_override;
  std::optional<std::uint64_t> aux_r_override;
  std::size_t repetitions = 1;
  bool exact = true;
  std::string output;  // path prefix; ".csv" and ".json" are appended
  std::size_t jobs = 1;
  bool timing = false;

  void validate() const {
    if (!generator.is_object() || !generator.contains("name")) throw ConfigError("generator.name is required");
    if (n_values.empty()) throw ConfigError("at least one n is required");
    if (seeds.empty()) throw ConfigError("seeds must be listed explicitly");
    if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
    for (const auto& a : algorithms) {
      if (std::find(known_algorithms().begin(), known_algorithms().end(), a) == known_algorithms().end()) {
        throw ConfigError("unknown algorithm '" + a + "'");
      }
    }
    EstimatorConfig probe;
    probe.k = k;
    probe.epsilon = epsilon;
    probe.r_override = r_override;
    probe.aux_r_override = aux_r_override;
    try {
      probe.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
};

/// Parses the documented JSON schema (see README). Seeds are either a list
/// or {"from": s, "count": c}.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    c.generator = j.at("generator");
    c.algorithms = j.value("algorithms", std::vector<std::string>{});
    if (j.contains("n")) {
      if (j.at("n").is_array()) c.n_values = j.at("n").get<std::vector<std::size_t>>();
      else c.n_values = {j.at("n").get<std::size_t>()};
    } else if (c.generator.contains("n")) {
      c.n_values = {c.generator.at("n").get<std::size_t>()};
    }
    const auto& s = j.at("seeds");
    if (s.is_array()) {
      c.seeds = s.get<std::vector<std::uint64_t>>();
    } else {
      const auto from = s.at("from").get<std::uint64_t>();
      const auto count = s.at("count").get<std::uint64_t>();
      for (std::uint64_t i = 0; i < count; ++i) c.seeds.push_back(from + i);
    }
    c.k = j.value("K", c.k);
    c.epsilon = j.value("epsilon", c.epsilon);
    if (j.contains("r_override") && !j.at("r_override").is_null()) c.r_override = j.at("r_override").get<std::uint64_t>();
    if (j.contains("aux_r_override") && !j.at("aux_r_override").is_null()) {
      c.aux_r_override = j.at("aux_r_override").get<std::uint64_t>();
    }
    c.repetitions = j.value("repetitions", c.repetitions);
    c.exact = j.value("exact", c.exact);
    c.output = j.value("output", c.output);
    c.jobs = j.value("jobs", c.jobs);
    c.timing = j.value("timing", c.timing);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad experiment config: ") + e.what());
  }
  c.validate();
  return c;
}

inline nlohmann::ordered_json config_to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["generator"] = c.generator;
  j["algorithms"] = c.algorithms;
  j["n"] = c.n_values;
  j["seeds"] = c.seeds;
  j["K"] = c.k;
  j["epsilon"] = c.epsilon;
  j["r_override"] = c.r_override ? nlohmann::ordered_json(*c.r_override) : nlohmann::ordered_json(nullptr);
  j["aux_r_override"] = c.aux_r_override ? nlohmann::ordered_json(*c.aux_r_override) : nlohmann::ordered_json(nullptr);
  j["repetitions"] = c.repetitions;
  j["exact"] = c.exact;
  return j;
}

struct ExperimentRow {
  std::string algorithm;
  std::string family;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::uint32_t k = 0;
  double epsilon = 0.0;
  std::uint64_t r = 0;
  std::optional<double> value;
  std::optional<double> exact;
  std::optional<double> ratio;
  std::uint64_t queries_total = 0;
  std::uint64_t queries_degree_probe = 0;
  std::uint64_t queries_trail = 0;
  double wall_ms = 0.0;
  std::string error;
  nlohmann::ordered_json report;
};

inline const char* kCsvHeader =
    "algorithm,family,n,seed,K,epsilon,r,value,exact,ratio,queries_total,queries_degree_probe,queries_trail,wall_ms";

namespace exp_detail {

inline std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

inline std::string fmt(const std::optional<double>& x) { return x ? fmt(*x) : std::string(); }

inline std::uint64_t phase_count(const LedgerSnapshot& s, const char* name) {
  auto it = s.phases.find(name);
  return it == s.phases.end() ? 0 : it->second;
}

inline bool is_graphic(const std::string& algorithm) {
  return algorithm != "path_cover" && algorithm != "tsp12";
}

// Cheap exact values known from the family alone.
inline std::optional<double> family_path_cover(const GeneratedGraph& gg) {
  const double n = static_cast<double>(gg.graph.vertex_count());
  const std::string& f = gg.family;
  if (f == "planted_ham_path" || f == "path" || f == "cycle" || f == "gadget_ham_cycle") return n - 1;
  if (f == "disjoint_edges") return n / 2;
  if (f == "gadget_empty") return 0.0;
  if (f == "gadget_single_edge") return 1.0;
  if (f == "star") return std::min(n - 1, 2.0);
  return std::nullopt;
}

}  // namespace exp_detail

/// Exact reference value for an algorithm's target quantity, or nullopt
/// when no exact oracle fits within its size guard.
inline std::optional<double> exact_reference(const std::string& algorithm, const GeneratedGraph& gg) {
  const SimpleGraph& g = gg.graph;
  const std::size_t n = g.vertex_count();
  const std::string& f = gg.family;
  try {
    if (algorithm == "path_cover") {
      if (auto v = exp_detail::family_path_cover(gg)) return v;
      return static_cast<double>(exact_max_path_cover(g));
    }
    if (algorithm == "bad_vertices") return static_cast<double>(exact_bad_vertex_count(g));
    if (algorithm == "bridges") return static_cast<double>(exact_bridges(g).size());
    if (algorithm == "tsp12") {
      if (f == "cycle" || f == "gadget_ham_cycle") return static_cast<double>(n);
      if (n <= 15) return static_cast<double>(held_karp(distance_table(g, MetricKind::kOneTwo)));
      if (auto rho = exp_detail::family_path_cover(gg); rho && *rho < static_cast<double>(n) - 1) {
        return 2.0 * static_cast<double>(n) - *rho;
      }
      return std::nullopt;
    }
    // Graphic TSP.
    if (f == "cycle" || f == "gadget_ham_cycle") return static_cast<double>(n);
    if (f == "path" || f == "star" || f == "tree") return 2.0 * (static_cast<double>(n) - 1.0);
    if (n <= 15) return static_cast<double>(held_karp(distance_table(g, MetricKind::kGraphic)));
  } catch (const SizeGuardError&) {
  }
  return std::nullopt;
}

inline EstimateReport run_algorithm(const std::string& algorithm, const TspInstance& inst,
                                    const EstimatorConfig& cfg) {
  if (algorithm == "path_cover") return estimate_path_cover(inst, cfg);
  if (algorithm == "tsp12") return estimate_tsp12(inst, cfg);
  if (algorithm == "bad_vertices") return estimate_bad_vertices(inst, cfg);
  if (algorithm == "bridges") return estimate_bridges(inst, cfg);
  if (algorithm == "graphic_v1") return estimate_graphic_tsp_v1(inst, cfg);
  if (algorithm == "graphic_v2") return estimate_graphic_tsp_v2(inst, cfg);
  if (algorithm == "graphic_subquadratic") {
    ExactMatching matcher;
    return estimate_graphic_tsp_subquadratic(inst, cfg, matcher);
  }
  throw ConfigError("unknown algorithm '" + algorithm + "'");
}

struct Cell {
  std::size_t n;
  std::uint64_t seed;
  std::size_t repetition;
  std::string algorithm;
};

inline std::vector<Cell> enumerate_cells(const ExperimentConfig& c) {
  std::vector<Cell> cells;
  for (std::size_t n : c.n_values) {
    for (std::uint64_t seed : c.seeds) {
      for (std::size_t rep = 0; rep < c.repetitions; ++rep) {
        for (const auto& a : c.algorithms) cells.push_back(Cell{n, seed, rep, a});
      }
    }
  }
  return cells;
}

/// One cell. The instance depends on (n, seed) only; the estimator seed
/// also folds in the repetition. Failures become error rows.
inline ExperimentRow run_cell(const ExperimentConfig& c, const Cell& cell) {
  ExperimentRow row;
  row.algorithm = cell.algorithm;
  row.family = c.generator.value("name", std::string("?"));
  row.n = cell.n;
  row.seed = cell.seed;
  row.k = c.k;
  row.epsilon = c.epsilon;
  try {
    nlohmann::json spec = c.generator;
    if (row.family != "bipartite_gnp" && row.family != "reduction_prime") spec["n"] = cell.n;
    GeneratedGraph gg = generate(spec, derive_seed(cell.seed, 0x67656e));
    row.n = gg.graph.vertex_count();
    const bool graphic = exp_detail::is_graphic(cell.algorithm);
    TspInstance inst(gg.graph, graphic ? MetricKind::kGraphic : MetricKind::kOneTwo);
    EstimatorConfig ec;
    ec.k = c.k;
    ec.epsilon = c.epsilon;
    ec.seed = cell.repetition == 0 ? cell.seed : derive_seed(cell.seed, 0x72657000 + cell.repetition);
    ec.r_override = c.r_override;
    ec.aux_r_override = c.aux_r_override;
    ec.record_time = c.timing;
    EstimateReport rep = run_algorithm(cell.algorithm, inst, ec);
    row.value = rep.value;
    row.r = rep.samples;
    row.queries_total = rep.queries.total;
    row.queries_degree_probe = exp_detail::phase_count(rep.queries, phase::kDegreeProbe);
    row.queries_trail = exp_detail::phase_count(rep.queries, phase::kTrail);
    row.wall_ms = rep.wall_ms;
    row.report = to_json(rep);
    if (c.exact) row.exact = exact_reference(cell.algorithm, gg);
    if (row.exact && *row.exact != 0.0) row.ratio = *row.value / *row.exact;
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

inline std::string csv_line(const ExperimentRow& r) {
  using exp_detail::fmt;
  std::ostringstream os;
  os << r.algorithm << ',' << r.family << ',' << r.n << ',' << r.seed << ',' << r.k << ',' << fmt(r.epsilon) << ','
     << r.r << ',' << (r.error.empty() ? fmt(r.value) : std::string("error")) << ',' << fmt(r.exact) << ','
     << fmt(r.ratio) << ',' << r.queries_total << ',' << r.queries_degree_probe << ',' << r.queries_trail << ','
     << fmt(r.wall_ms);
  return os.str();
}

inline nlohmann::ordered_json row_json(const ExperimentRow& r) {
  nlohmann::ordered_json j;
  j["algorithm"] = r.algorithm;
  j["family"] = r.family;
  j["n"] = r.n;
  j["seed"] = r.seed;
  j["K"] = r.k;
  j["epsilon"] = r.epsilon;
  j["r"] = r.r;
  j["value"] = r.value ? nlohmann::ordered_json(*r.value) : nlohmann::ordered_json(nullptr);
  j["exact"] = r.exact ? nlohmann::ordered_json(*r.exact) : nlohmann::ordered_json(nullptr);
  j["ratio"] = r.ratio ? nlohmann::ordered_json(*r.ratio) : nlohmann::ordered_json(nullptr);
  if (!r.error.empty()) j["error"] = r.error;
  if (!r.report.is_null()) j["report"] = r.report;
  return j;
}

/// Runs every cell, `jobs` at a time. Rows come back in cell order.
inline std::vector<ExperimentRow> run_experiment(const ExperimentConfig& c) {
  c.validate();
  const auto cells = enumerate_cells(c);
  std::vector<ExperimentRow> rows(cells.size());
  const std::size_t jobs = std::max<std::size_t>(1, std::min(c.jobs, cells.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) rows[i] = run_cell(c, cells[i]);
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

inline void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) out << csv_line(r) << '\n';
}

inline nlohmann::ordered_json rows_json(const ExperimentConfig& c, const std::vector<ExperimentRow>& rows) {
  nlohmann::ordered_json j;
  j["config"] = config_to_json(c);
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) j["rows"].push_back(row_json(r));
  return j;
}

/// Writes <prefix>.csv and <prefix>.json, creating missing parent directories.
inline void write_outputs(const std::string& prefix, const ExperimentConfig& c, const std::vector<ExperimentRow>& rows) {
  const auto parent = std::filesystem::path(prefix).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream csv(prefix + ".csv");
  std::ofstream js(prefix + ".json");
  if (!csv || !js) throw std::runtime_error("cannot open output files with prefix '" + prefix + "'");
  write_csv(csv, rows);
  js << rows_json(c, rows).dump(2) << '\n';
}

/// Round-synchronous greedy MIS over the explicit copy conflict relation,
/// with the same ranks an eager session uses. Each round takes every live
/// copy that is the rank minimum among its live conflicting copies, then
/// drops those and their conflicting copies.
inline std::size_t diagnostic_parallel_rounds(const SimpleGraph& g, std::uint32_t k, std::uint64_t seed,
                                              std::size_t max_copies = 2'000'000) {
  if (k < 1) throw std::invalid_argument("K must be at least 1");
  const std::size_t copies_per_edge = k + 2;
  if (g.edge_count() * copies_per_edge > max_copies) {
    throw SizeGuardError("too many edge copies for the round diagnostic");
  }
  const auto copies = all_copies(g, k);
  const std::size_t total = copies.size();
  std::vector<double> rank(total);
  for (std::size_t i = 0; i < total; ++i) rank[i] = eager_rank(seed, copies[i]);
  const std::size_t n = g.vertex_count();
  // Members of each port (2v + side) and of each edge.
  std::vector<std::vector<std::uint32_t>> port(2 * n);
  for (std::size_t i = 0; i < total; ++i) {
    const auto& c = copies[i];
    port[2 * c.u + c.side_at(c.u)].push_back(static_cast<std::uint32_t>(i));
    port[2 * c.v + c.side_at(c.v)].push_back(static_cast<std::uint32_t>(i));
  }
  auto edge_of = [&](std::size_t i) { return i / copies_per_edge; };
  auto less = [&](std::size_t a, std::size_t b) { return Ranked{copies[a], rank[a]} < Ranked{copies[b], rank[b]}; };

  std::vector<char> alive(total, 1);
  std::size_t remaining = total, rounds = 0;
  const std::size_t none = std::numeric_limits<std::size_t>::max();
  while (remaining > 0) {
    ++rounds;
    std::vector<std::size_t> port_min(2 * n, none), edge_min(g.edge_count(), none);
    for (std::size_t i = 0; i < total; ++i) {
      if (!alive[i]) continue;
      const auto& c = copies[i];
      for (std::size_t p : {2 * c.u + c.side_at(c.u), 2 * c.v + c.side_at(c.v)}) {
        if (port_min[p] == none || less(i, port_min[p])) port_min[p] = i;
      }
      auto& em = edge_min[edge_of(i)];
      if (em == none || less(i, em)) em = i;
    }
    std::vector<std::size_t> picked;
    for (std::size_t i = 0; i < total; ++i) {
      if (!alive[i]) continue;
      const auto& c = copies[i];
      if (port_min[2 * c.u + c.side_at(c.u)] == i && port_min[2 * c.v + c.side_at(c.v)] == i &&
          edge_min[edge_of(i)] == i) {
        picked.push_back(i);
      }
    }
    for (std::size_t i : picked) {
      const auto& c = copies[i];
      auto kill = [&](std::size_t j) {
        if (alive[j]) {
          alive[j] = 0;
          --remaining;
        }
      };
      for (std::size_t p : {2 * c.u + c.side_at(c.u), 2 * c.v + c.side_at(c.v)}) {
        for (auto j : port[p]) kill(j);
      }
      const std::size_t e0 = edge_of(i) * copies_per_edge;
      for (std::size_t j = e0; j < e0 + copies_per_edge; ++j) kill(j);
    }
  }
  return rounds;
}

/// Least-squares fit of y = a * (ln n)^b in log-log space.
struct PolylogFit {
  double a = 0.0;
  double b = 0.0;
  double r2 = 0.0;
};

/// Fits ln y = alpha + beta * ln x and reports R^2 of that regression.
inline PolylogFit fit_log_linear(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit needs at least two points");
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) throw std::invalid_argument("fit needs positive data");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
    sx += lx.back();
    sy += ly.back();
    sxx += lx.back() * lx.back();
    sxy += lx.back() * ly.back();
  }
  const double denom = m * sxx - sx * sx;
  PolylogFit f;
  f.b = denom == 0.0 ? 0.0 : (m * sxy - sx * sy) / denom;
  const double alpha = (sy - f.b * sx) / m;
  f.a = std::exp(alpha);
  const double mean = sy / m;
  double ss_tot = 0, ss_res = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double pred = alpha + f.b * lx[i];
    ss_res += (ly[i] - pred) * (ly[i] - pred);
    ss_tot += (ly[i] - mean) * (ly[i] - mean);
  }
  f.r2 = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return f;
}

/// y = a * (ln n)^b.
inline PolylogFit fit_polylog(const std::vector<double>& n, const std::vector<double>& y) {
  std::vector<double> ln;
  for (double v : n) ln.push_back(std::log(v));
  return fit_log_linear(ln, y);
}

struct TrailPoint {
  std::size_t n = 0;
  double mean_eo_per_vo = 0.0;
  double mean_max_depth = 0.0;
  std::uint64_t vo_calls = 0;
};

/// Mean edge-oracle calls per vertex-oracle call on a graph, each call in
/// a fresh lazy session on a uniformly drawn vertex.
inline TrailPoint measure_trails(const SimpleGraph& g, std::uint32_t k, std::size_t samples, std::uint64_t seed) {
  ListView view(g);
  gen_detail::Rng pick(derive_seed(seed, 0x747261));
  TrailPoint p;
  p.n = g.vertex_count();
  double eo = 0, depth = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    OracleSession<ListView> session(view, k, derive_seed(seed, i + 1), RankMode::kLazy);
    session.vertex_oracle(static_cast<NodeId>(pick.below(g.vertex_count())));
    eo += static_cast<double>(session.trail_report().eo_calls);
    depth += static_cast<double>(session.trail_report().max_depth);
  }
  p.vo_calls = samples;
  p.mean_eo_per_vo = eo / static_cast<double>(samples);
  p.mean_max_depth = depth / static_cast<double>(samples);
  return p;
}

}  // namespace sltsp
