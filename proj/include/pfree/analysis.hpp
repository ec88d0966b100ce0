#pragma once

// Cycle structure and the partly-free decision procedures for finite graphs.

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pfree/graph.hpp"

namespace pfree {

/// A first-return cycle at `base`. `word` is in traversal order: word.front() leaves
/// base, word.back() returns to it, and no other edge of the word starts at base.
struct CycleWitness {
  Vertex base;
  std::vector<Edge> word;
  bool operator==(const CycleWitness&) const = default;
};

struct DoubleCycleWitness {
  Vertex base;
  CycleWitness first;
  CycleWitness second;
  bool operator==(const DoubleCycleWitness&) const = default;
};

/// Edge names of a proper infinite path omega, produced segment by segment. Only the
/// catalog families carry one.
struct InfinitePathCertificate {
  std::string family;
  std::string start_vertex;
  std::string rule;
  /// first_edges(m): the first m edges of omega in traversal order.
  std::function<std::vector<std::string>(std::size_t)> first_edges;
};

struct PropertyReport {
  bool has_double_cycle = false;
  std::vector<DoubleCycleWitness> double_cycles;
  bool uniform_double_cycle = false;
  bool aperiodic_path = false;
  std::optional<InfinitePathCertificate> infinite_path;
  bool uniform_aperiodic_path = false;

  bool lg_partly_free = false;
  bool lg_unitally_partly_free = false;
  bool ag_partly_free = false;
  bool ag_unitally_partly_free = false;

  /// The commutant test: the transpose graph has the uniform aperiodic path property.
  bool hyperreflexive_sufficient = false;
  bool vertex_count_finite = true;

  std::vector<std::string> warnings;

  /// Fills the four algebra flags from the graph properties.
  void derive_algebra_flags() {
    lg_partly_free = aperiodic_path;
    lg_unitally_partly_free = uniform_aperiodic_path;
    ag_partly_free = has_double_cycle;
    ag_unitally_partly_free = vertex_count_finite && uniform_double_cycle;
  }

  /// Violated report invariants, empty when consistent.
  std::vector<std::string> inconsistencies() const {
    std::vector<std::string> out;
    if (lg_partly_free != aperiodic_path) out.push_back("LG partly free != aperiodic path");
    if (lg_unitally_partly_free != uniform_aperiodic_path)
      out.push_back("LG unitally partly free != uniform aperiodic path");
    if (ag_partly_free != has_double_cycle) out.push_back("AG partly free != double-cycle");
    if (ag_unitally_partly_free != (vertex_count_finite && uniform_double_cycle))
      out.push_back("AG unitally partly free != finite and uniform double-cycle");
    if (uniform_double_cycle && !has_double_cycle) out.push_back("uniform double-cycle without double-cycle");
    if (uniform_aperiodic_path && !aperiodic_path) out.push_back("uniform aperiodic without aperiodic");
    if (has_double_cycle && !aperiodic_path) out.push_back("double-cycle without aperiodic path");
    if (has_double_cycle != !double_cycles.empty() && vertex_count_finite)
      out.push_back("double-cycle flag disagrees with witness list");
    return out;
  }
};

namespace detail {

inline bool word_less(const Graph& g, const std::vector<Edge>& a, const std::vector<Edge>& b) {
  // shortlex on the written form, which lists the last-traversed edge first
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = a.size(); i-- > 0;) {
    const auto& na = g.name(a[i]);
    const auto& nb = g.name(b[i]);
    if (na != nb) return na < nb;
  }
  return false;
}

/// Up to `want` first-return cycles at base, shortest first, length <= max_len.
inline std::vector<std::vector<Edge>> first_return_cycles(const Graph& g, Vertex base,
                                                          std::size_t max_len, std::size_t want) {
  struct Walk {
    Vertex at;
    std::vector<Edge> word;
  };
  std::vector<std::vector<Edge>> found;
  std::vector<Walk> level{{base, {}}};
  for (std::size_t len = 1; len <= max_len && !level.empty(); ++len) {
    std::vector<Walk> next;
    std::vector<std::vector<Edge>> closed;
    for (const auto& walk : level) {
      for (auto e : g.out_edges(walk.at)) {
        auto word = walk.word;
        word.push_back(e);
        if (g.range(e) == base)
          closed.push_back(std::move(word));
        else
          next.push_back({g.range(e), std::move(word)});
      }
    }
    std::sort(closed.begin(), closed.end(),
              [&](const auto& a, const auto& b) { return word_less(g, a, b); });
    for (auto& c : closed) {
      if (found.size() == want) break;
      found.push_back(std::move(c));
    }
    if (found.size() == want) break;
    level = std::move(next);
  }
  return found;
}

struct SccShape {
  std::vector<Vertex> vertices;
  bool has_double_cycle = false;
};

inline std::vector<SccShape> scc_shapes(const Graph& g) {
  std::vector<SccShape> shapes;
  std::vector<std::size_t> component_of(g.vertex_count());
  auto components = strongly_connected_components(g);
  for (std::size_t c = 0; c < components.size(); ++c)
    for (auto v : components[c]) component_of[index(v)] = c;
  for (std::size_t c = 0; c < components.size(); ++c) {
    std::size_t internal = 0;
    bool out_degree_one = true;
    for (auto v : components[c]) {
      std::size_t deg = 0;
      for (auto e : g.out_edges(v))
        if (component_of[index(g.range(e))] == c) ++deg;
      internal += deg;
      if (deg != 1) out_degree_one = false;
    }
    // A strongly connected piece is a lone vertex without a loop, a simple cycle
    // (every internal out-degree 1), or it carries two first-return cycles at every vertex.
    bool simple = internal == 0 || (internal == components[c].size() && out_degree_one);
    shapes.push_back({components[c], !simple});
  }
  return shapes;
}

struct GraphProperties {
  std::vector<DoubleCycleWitness> witnesses;
  bool uniform_double_cycle = false;
};

}  // namespace detail

/// Replays a cycle: composable, closes at base, and only its initial edge leaves base.
inline bool is_first_return_cycle(const Graph& g, const CycleWitness& c) {
  if (c.word.empty()) return false;
  Vertex at = c.base;
  for (std::size_t i = 0; i < c.word.size(); ++i) {
    auto e = c.word[i];
    if (index(e) >= g.edge_count() || g.source(e) != at) return false;
    if (i > 0 && g.source(e) == c.base) return false;
    at = g.range(e);
  }
  return at == c.base;
}

/// One witness per strongly connected component that is not a simple cycle, based at
/// the component's lexicographically smallest vertex name, with its two shortlex-first
/// first-return cycles. Sorted by (vertex name, first word). Both cycles have length at
/// most 2|component|: route to a branching vertex, leave by two different edges, come back.
inline std::vector<DoubleCycleWitness> double_cycle_witnesses(const Graph& g) {
  std::vector<DoubleCycleWitness> out;
  for (const auto& shape : detail::scc_shapes(g)) {
    if (!shape.has_double_cycle) continue;
    auto base = *std::min_element(shape.vertices.begin(), shape.vertices.end(),
                                  [&](Vertex a, Vertex b) { return g.name(a) < g.name(b); });
    auto cycles = detail::first_return_cycles(g, base, 2 * shape.vertices.size(), 2);
    if (cycles.size() < 2) throw GraphError("internal: double-cycle search bound exhausted");
    out.push_back({base, {base, cycles[0]}, {base, cycles[1]}});
  }
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    if (g.name(a.base) != g.name(b.base)) return g.name(a.base) < g.name(b.base);
    return detail::word_less(g, a.first.word, b.first.word);
  });
  return out;
}

/// Vertices whose saturation meets some double-cycle, ascending.
inline std::vector<Vertex> vertices_reaching_double_cycle(const Graph& g) {
  std::vector<char> mark(g.vertex_count(), 0);
  std::vector<Vertex> stack;
  for (const auto& shape : detail::scc_shapes(g)) {
    if (!shape.has_double_cycle) continue;
    for (auto v : shape.vertices)
      if (!mark[index(v)]) {
        mark[index(v)] = 1;
        stack.push_back(v);
      }
  }
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto e : g.in_edges(v)) {
      auto s = g.source(e);
      if (!mark[index(s)]) {
        mark[index(s)] = 1;
        stack.push_back(s);
      }
    }
  }
  std::vector<Vertex> out;
  for (std::size_t i = 0; i < mark.size(); ++i)
    if (mark[i]) out.push_back(Vertex(i));
  return out;
}

namespace detail {

inline GraphProperties graph_properties(const Graph& g) {
  GraphProperties p;
  p.witnesses = double_cycle_witnesses(g);
  p.uniform_double_cycle =
      g.vertex_count() > 0 && vertices_reaching_double_cycle(g).size() == g.vertex_count();
  return p;
}

}  // namespace detail

/// Exact decision for a finite graph.
///
/// A finite graph has no proper infinite path: its edge set is finite and such a path
/// never repeats an edge. So an aperiodic infinite path exists exactly when a
/// double-cycle does, and the uniform versions coincide the same way.
inline PropertyReport classify_finite(const Graph& g) {
  PropertyReport r;
  auto props = detail::graph_properties(g);
  r.double_cycles = std::move(props.witnesses);
  r.has_double_cycle = !r.double_cycles.empty();
  r.uniform_double_cycle = props.uniform_double_cycle;
  r.aperiodic_path = r.has_double_cycle;
  r.uniform_aperiodic_path = r.uniform_double_cycle;
  r.vertex_count_finite = true;
  r.derive_algebra_flags();
  r.hyperreflexive_sufficient = detail::graph_properties(transpose(g)).uniform_double_cycle;
  if (g.vertex_count() == 0)
    r.warnings.push_back("empty vertex set: uniform properties reported false");
  return r;
}

}  // namespace pfree
