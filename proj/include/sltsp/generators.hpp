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

// Seeded graph families. A spec is a JSON object {"name": family, ...params};
// the graph is a pure function of (spec, seed). Every family declares a
// structural property that is re-checked after generation.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sltsp/edge_copy.hpp"
#include "sltsp/exact.hpp"
#include "sltsp/graph.hpp"

namespace sltsp {

class GeneratorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GeneratedGraph {
  std::string family;
  SimpleGraph graph;
  std::vector<Vertex> planted_path;  // Hamiltonian path witness, when planted
  std::vector<int> sides;            // declared bipartition, when bipartite
};

namespace gen_detail {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(detail::mix64(seed)) {}
  double unit() { return detail::to_unit(engine_()); }
  bool coin(double p) { return unit() < p; }
  std::uint64_t below(std::uint64_t n) {
    auto x = static_cast<std::uint64_t>(unit() * static_cast<double>(n));
    return x >= n ? n - 1 : x;
  }
  // Fisher-Yates with our own index draws, so orders do not depend on the
  // standard library's shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }
  std::vector<Vertex> permutation(std::size_t n) {
    std::vector<Vertex> p(n);
    std::iota(p.begin(), p.end(), Vertex{0});
    shuffle(p);
    return p;
  }

 private:
  std::mt19937_64 engine_;
};

inline std::size_t get_n(const nlohmann::json& spec, const char* key = "n") {
  if (!spec.contains(key)) throw GeneratorError(std::string("missing parameter '") + key + "'");
  const auto& v = spec.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw GeneratorError(std::string("parameter '") + key + "' must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

inline double get_p(const nlohmann::json& spec, const char* key, double fallback = -1.0) {
  if (!spec.contains(key)) {
    if (fallback >= 0.0) return fallback;
    throw GeneratorError(std::string("missing parameter '") + key + "'");
  }
  const auto& v = spec.at(key);
  if (!v.is_number()) throw GeneratorError(std::string("parameter '") + key + "' must be a number");
  double p = v.get<double>();
  if (!(p >= 0.0 && p <= 1.0)) throw GeneratorError(std::string("parameter '") + key + "' must lie in [0, 1]");
  return p;
}

inline void add_gnp(SimpleGraph& g, Rng& rng, double p, const std::function<bool(Vertex, Vertex)>& allowed) {
  const std::size_t n = g.vertex_count();
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = a + 1; b < n; ++b) {
      if (!allowed(a, b) || g.has_edge(a, b)) continue;
      if (rng.coin(p)) g.add_edge(a, b);
    }
  }
}

inline auto any_pair() {
  return [](Vertex, Vertex) { return true; };
}

inline SimpleGraph random_tree(std::size_t n, Rng& rng) {
  SimpleGraph g(n);
  auto order = rng.permutation(n);
  for (std::size_t i = 1; i < n; ++i) g.add_edge(order[i], order[rng.below(i)]);
  return g;
}

// Pairing model, restarted until the multigraph is simple.
inline SimpleGraph random_regular(std::size_t n, std::size_t d, Rng& rng) {
  if (d >= n || (n * d) % 2 != 0) throw GeneratorError("regular graph needs d < n and n * d even");
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<Vertex> points;
    points.reserve(n * d);
    for (Vertex v = 0; v < n; ++v) points.insert(points.end(), d, v);
    rng.shuffle(points);
    SimpleGraph g(n);
    bool ok = true;
    for (std::size_t i = 0; i < points.size() && ok; i += 2) {
      Vertex a = points[i], b = points[i + 1];
      if (a == b || g.has_edge(a, b)) ok = false;
      else g.add_edge(a, b);
    }
    if (ok) return g;
  }
  throw GeneratorError("pairing model did not produce a simple regular graph");
}

}  // namespace gen_detail

/// Families with their required parameters; documentation for the CLI.
inline const std::map<std::string, std::string>& generator_families() {
  static const std::map<std::string, std::string> families = {
      {"gnp", "n, p"},
      {"connected_gnp", "n, p (random spanning tree plus G(n, p))"},
      {"planted_ham_path", "n, extra_p"},
      {"disjoint_edges", "n (even)"},
      {"cycle", "n >= 3"},
      {"path", "n"},
      {"star", "n (center 0)"},
      {"tree", "n"},
      {"regular", "n, d"},
      {"bipartite_gnp", "a, b, p"},
      {"reduction_prime", "inner (bipartite spec), r"},
      {"gadget_empty", "n"},
      {"gadget_single_edge", "n >= 2"},
      {"gadget_ham_cycle", "n >= 3"},
  };
  return families;
}

/// Throws GeneratorError unless `gg` has the property its family declares.
inline void verify_structure(const GeneratedGraph& gg) {
  const auto& g = gg.graph;
  const std::size_t n = g.vertex_count();
  auto fail = [&](const std::string& what) { throw GeneratorError(gg.family + ": " + what); };
  auto all_degree = [&](std::size_t d) {
    for (Vertex v = 0; v < n; ++v) {
      if (g.degree(v) != d) return false;
    }
    return true;
  };
  const std::string& f = gg.family;
  if (f == "cycle" || f == "gadget_ham_cycle") {
    if (!g.is_connected() || !all_degree(2)) fail("not a Hamiltonian cycle");
  } else if (f == "path" || f == "tree" || f == "star") {
    if (!g.is_connected() || g.edge_count() + 1 != std::max<std::size_t>(n, 1)) fail("not a spanning tree");
  } else if (f == "connected_gnp") {
    if (!g.is_connected()) fail("not connected");
  } else if (f == "disjoint_edges") {
    if (!all_degree(1)) fail("not a perfect matching");
  } else if (f == "gadget_empty") {
    if (g.edge_count() != 0) fail("has edges");
  } else if (f == "gadget_single_edge") {
    if (g.edge_count() != 1) fail("does not have exactly one edge");
  } else if (f == "regular") {
    if (n > 0 && !all_degree(g.degree(0))) fail("not regular");
  }
  if (!gg.planted_path.empty()) {
    if (gg.planted_path.size() != n) fail("planted path does not span");
    std::vector<char> seen(n, 0);
    for (Vertex v : gg.planted_path) {
      if (v >= n || seen[v]) fail("planted path is not a permutation");
      seen[v] = 1;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!g.has_edge(gg.planted_path[i], gg.planted_path[i + 1])) fail("planted path edge missing");
    }
  }
  if (f == "bipartite_gnp" || f == "reduction_prime") {
    if (gg.sides.size() != n) fail("missing bipartition");
    for (auto [a, b] : g.edges()) {
      if (gg.sides[a] == gg.sides[b]) fail("edge inside one side");
    }
  }
}

inline GeneratedGraph generate(const nlohmann::json& spec, std::uint64_t seed) {
  using namespace gen_detail;
  if (!spec.is_object() || !spec.contains("name") || !spec.at("name").is_string()) {
    throw GeneratorError("generator spec must be an object with a string 'name'");
  }
  GeneratedGraph out;
  out.family = spec.at("name").get<std::string>();
  const std::string& f = out.family;
  Rng rng(seed);

  if (f == "gnp") {
    out.graph = SimpleGraph(get_n(spec));
    add_gnp(out.graph, rng, get_p(spec, "p"), any_pair());
  } else if (f == "connected_gnp") {
    out.graph = random_tree(get_n(spec), rng);
    add_gnp(out.graph, rng, get_p(spec, "p"), any_pair());
  } else if (f == "planted_ham_path") {
    const std::size_t n = get_n(spec);
    out.graph = SimpleGraph(n);
    out.planted_path = rng.permutation(n);
    for (std::size_t i = 0; i + 1 < n; ++i) out.graph.add_edge(out.planted_path[i], out.planted_path[i + 1]);
    add_gnp(out.graph, rng, get_p(spec, "extra_p", 0.0), any_pair());
  } else if (f == "disjoint_edges") {
    const std::size_t n = get_n(spec);
    if (n % 2 != 0) throw GeneratorError("disjoint_edges needs even n");
    out.graph = SimpleGraph(n);
    auto p = rng.permutation(n);
    for (std::size_t i = 0; i < n; i += 2) out.graph.add_edge(p[i], p[i + 1]);
  } else if (f == "cycle" || f == "gadget_ham_cycle") {
    const std::size_t n = get_n(spec);
    if (n < 3) throw GeneratorError(f + " needs n >= 3");
    out.graph = SimpleGraph(n);
    std::vector<Vertex> p(n);
    std::iota(p.begin(), p.end(), Vertex{0});
    if (f == "gadget_ham_cycle") p = rng.permutation(n);
    for (std::size_t i = 0; i < n; ++i) out.graph.add_edge(p[i], p[(i + 1) % n]);
  } else if (f == "path") {
    const std::size_t n = get_n(spec);
    out.graph = SimpleGraph(n);
    for (Vertex i = 0; i + 1 < n; ++i) out.graph.add_edge(i, i + 1);
  } else if (f == "star") {
    const std::size_t n = get_n(spec);
    out.graph = SimpleGraph(n);
    for (Vertex i = 1; i < n; ++i) out.graph.add_edge(0, i);
  } else if (f == "tree") {
    out.graph = random_tree(get_n(spec), rng);
  } else if (f == "regular") {
    out.graph = random_regular(get_n(spec), get_n(spec, "d"), rng);
  } else if (f == "bipartite_gnp") {
    const std::size_t a = get_n(spec, "a"), b = get_n(spec, "b");
    out.graph = SimpleGraph(a + b);
    out.sides.assign(a + b, 0);
    std::fill(out.sides.begin() + static_cast<std::ptrdiff_t>(a), out.sides.end(), 1);
    add_gnp(out.graph, rng, get_p(spec, "p"), [a](Vertex x, Vertex y) { return (x < a) != (y < a); });
  } else if (f == "reduction_prime") {
    if (!spec.contains("inner")) throw GeneratorError("reduction_prime needs an 'inner' spec");
    const std::size_t r = get_n(spec, "r");
    if (r < 1) throw GeneratorError("reduction_prime needs r >= 1");
    GeneratedGraph inner = generate(spec.at("inner"), derive_seed(seed, 1));
    std::vector<int> side = inner.sides;
    if (side.empty()) {
      auto bp = bipartition(inner.graph);
      if (!bp) throw GeneratorError("reduction_prime inner graph is not bipartite");
      side = *bp;
    }
    out.graph = build_reduction_prime(inner.graph, side, r);
    const std::size_t n = inner.graph.vertex_count();
    out.sides.resize(n * r);
    for (std::size_t i = 0; i < n * r; ++i) out.sides[i] = side[i % n];
  } else if (f == "gadget_empty") {
    out.graph = SimpleGraph(get_n(spec));
  } else if (f == "gadget_single_edge") {
    const std::size_t n = get_n(spec);
    if (n < 2) throw GeneratorError("gadget_single_edge needs n >= 2");
    out.graph = SimpleGraph(n);
    auto p = rng.permutation(n);
    out.graph.add_edge(p[0], p[1]);
  } else {
    throw GeneratorError("unknown generator family '" + f + "'");
  }
  verify_structure(out);
  return out;
}

}  // namespace sltsp
