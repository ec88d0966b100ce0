#pragma once

// Brute-force double-cycle decision by simple-cycle enumeration, independent of the
// SCC argument, and a seeded random multigraph generator to compare the two.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pfree/analysis.hpp"
#include "pfree/graph.hpp"

namespace pfree {

/// Simple cycles (no repeated vertex) of length <= max_len as edge lists in traversal
/// order, each starting at its smallest vertex index, so every cycle appears once.
inline std::vector<std::vector<Edge>> simple_cycles(const Graph& g, std::size_t max_len) {
  std::vector<std::vector<Edge>> out;
  std::vector<Edge> stack;
  std::vector<char> on_path(g.vertex_count(), 0);
  auto dfs = [&](auto&& self, Vertex start, Vertex at) -> void {
    for (auto e : g.out_edges(at)) {
      auto r = g.range(e);
      if (r == start) {
        stack.push_back(e);
        out.push_back(stack);
        stack.pop_back();
      } else if (index(r) > index(start) && !on_path[index(r)] && stack.size() + 1 < max_len) {
        on_path[index(r)] = 1;
        stack.push_back(e);
        self(self, start, r);
        stack.pop_back();
        on_path[index(r)] = 0;
      }
    }
  };
  for (auto s : g.vertices()) {
    on_path[index(s)] = 1;
    dfs(dfs, s, s);
    on_path[index(s)] = 0;
  }
  return out;
}

/// Two distinct simple cycles through a common vertex. max_len 0 means |V|, which
/// covers every simple cycle.
inline bool oracle_has_double_cycle(const Graph& g, std::size_t max_len = 0) {
  auto cycles = simple_cycles(g, max_len == 0 ? g.vertex_count() : max_len);
  std::vector<std::vector<char>> visits;
  for (const auto& c : cycles) {
    std::vector<char> seen(g.vertex_count(), 0);
    for (auto e : c) seen[index(g.source(e))] = 1;
    visits.push_back(std::move(seen));
  }
  for (std::size_t i = 0; i < cycles.size(); ++i)
    for (std::size_t j = i + 1; j < cycles.size(); ++j)
      for (std::size_t v = 0; v < g.vertex_count(); ++v)
        if (visits[i][v] && visits[j][v]) return true;
  return false;
}

/// Loops and parallel edges allowed; vertex and edge counts uniform in their ranges.
inline Graph random_multigraph(std::mt19937_64& rng, std::size_t max_vertices = 8, std::size_t max_edges = 16) {
  std::uniform_int_distribution<std::size_t> nv(1, max_vertices), ne(0, max_edges);
  Graph g;
  auto n = nv(rng);
  for (std::size_t i = 0; i < n; ++i) g.add_vertex("v" + std::to_string(i));
  std::uniform_int_distribution<std::uint32_t> end(0, static_cast<std::uint32_t>(n - 1));
  auto m = ne(rng);
  for (std::size_t k = 0; k < m; ++k) {
    auto s = Vertex{end(rng)};
    auto r = Vertex{end(rng)};
    g.add_edge("e" + std::to_string(k), s, r);
  }
  return g;
}

struct OracleReport {
  std::size_t graphs = 0;
  std::size_t with_double_cycle = 0;
  std::size_t disagreements = 0;
  std::string first_disagreement;  // graph text of the first disagreeing graph
  bool agrees() const { return disagreements == 0; }
};

inline bool oracle_agrees(const Graph& g) { return oracle_has_double_cycle(g) == !double_cycle_witnesses(g).empty(); }

inline OracleReport run_oracle_batch(std::uint64_t seed, std::size_t count = 200, std::size_t max_vertices = 8,
                                     std::size_t max_edges = 16) {
  OracleReport r;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    auto g = random_multigraph(rng, max_vertices, max_edges);
    ++r.graphs;
    bool brute = oracle_has_double_cycle(g);
    if (brute) ++r.with_double_cycle;
    if (brute != !double_cycle_witnesses(g).empty()) {
      if (r.disagreements++ == 0) r.first_disagreement = to_graph_text(g);
    }
  }
  return r;
}

}  // namespace pfree
