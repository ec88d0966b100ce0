#pragma once

// Built-in example graphs with stored classifications, the regression check run by
// `catalog check`, and the matrix-pattern checks for the examples that are matrix or
// function algebras.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pfree/analysis.hpp"
#include "pfree/families.hpp"
#include "pfree/fock.hpp"
#include "pfree/graph.hpp"
#include "pfree/partlyfree.hpp"
#include "pfree/path.hpp"

namespace pfree {

class CatalogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CatalogEntry {
  std::string name;
  std::string note;
  std::optional<Graph> graph;    // finite entries
  std::optional<Family> family;  // countable families
  PropertyReport expected;
  std::size_t default_depth = 6;

  bool is_family() const noexcept { return family.has_value(); }
};

namespace detail {

inline PropertyReport finite_expected(bool double_cycle, bool uniform, bool transpose_uniform) {
  PropertyReport r;
  r.has_double_cycle = r.aperiodic_path = double_cycle;
  r.uniform_double_cycle = r.uniform_aperiodic_path = uniform;
  r.hyperreflexive_sufficient = transpose_uniform;
  r.vertex_count_finite = true;
  r.derive_algebra_flags();
  return r;
}

inline std::string loop_name(std::size_t i, std::size_t n) {
  if (n > 22) return "e" + std::to_string(i + 1);
  return std::string(1, static_cast<char>('e' + i));
}

inline Graph cycle_graph(std::size_t n) {
  Graph g;
  for (std::size_t k = 1; k <= n; ++k) g.add_vertex("x" + std::to_string(k));
  for (std::size_t k = 1; k <= n; ++k)
    g.add_edge("e" + std::to_string(k), "x" + std::to_string(k), "x" + std::to_string(k % n + 1));
  return g;
}

}  // namespace detail

inline CatalogEntry builtin(std::string_view full_name) {
  auto [base, param] = detail::split_parameter(full_name);
  CatalogEntry c;
  if (base == "single_loop" && !param) {
    c.note = "one vertex, one loop: the unilateral shift";
    Graph g;
    g.add_vertex("x");
    g.add_edge("e", "x", "x");
    c.graph = std::move(g);
    c.expected = detail::finite_expected(false, false, false);
  } else if (base == "n_loops") {
    std::size_t n = param.value_or(2);
    if (n == 0) throw CatalogError("n_loops needs n >= 1");
    c.note = "one vertex with " + std::to_string(n) + " loops";
    Graph g;
    g.add_vertex("x");
    for (std::size_t i = 0; i < n; ++i) g.add_edge(detail::loop_name(i, n), "x", "x");
    c.graph = std::move(g);
    c.expected = detail::finite_expected(n >= 2, n >= 2, n >= 2);
  } else if (base == "triangle_Lfree" && !param) {
    c.note = "e: x -> x, f: x -> y";
    Graph g;
    g.add_vertex("x");
    g.add_vertex("y");
    g.add_edge("e", "x", "x");
    g.add_edge("f", "x", "y");
    c.graph = std::move(g);
    c.expected = detail::finite_expected(false, false, false);
  } else if (base == "partly_free_D" && !param) {
    c.note = "e: x -> x, f: x -> y, g: y -> x";
    Graph g;
    g.add_vertex("x");
    g.add_vertex("y");
    g.add_edge("e", "x", "x");
    g.add_edge("f", "x", "y");
    g.add_edge("g", "y", "x");
    c.graph = std::move(g);
    c.expected = detail::finite_expected(true, true, true);
    c.default_depth = 8;
  } else if (base == "digraph_T" && !param) {
    c.note = "e: x1 -> x2, f: x1 -> x3; finite dimensional";
    Graph g;
    for (auto v : {"x1", "x2", "x3"}) g.add_vertex(v);
    g.add_edge("e", "x1", "x2");
    g.add_edge("f", "x1", "x3");
    c.graph = std::move(g);
    c.expected = detail::finite_expected(false, false, false);
  } else if (base == "cycle" && param) {
    if (*param == 0) throw CatalogError("cycle needs n >= 1");
    c.note = "cycle graph C_" + std::to_string(*param);
    c.graph = detail::cycle_graph(*param);
    c.expected = detail::finite_expected(false, false, false);
  } else if (auto f = find_family(full_name)) {
    c.name = f->name;
    c.note = f->note;
    c.expected = f->expected;
    c.default_depth = f->default_depth;
    c.family = std::move(*f);
    return c;
  } else {
    throw CatalogError("unknown catalog entry '" + std::string(full_name) + "'");
  }
  c.name = std::string(full_name);
  return c;
}

/// Names shown by `catalog list`; parameterized entries accept other parameters too.
inline std::vector<std::string> catalog_names() {
  std::vector<std::string> out{"single_loop", "n_loops(2)", "n_loops(3)", "triangle_Lfree", "partly_free_D", "digraph_T"};
  for (int n = 1; n <= 8; ++n) out.push_back("cycle(" + std::to_string(n) + ")");
  for (auto name : {"cycle_inf", "int_line", "int_line_loops", "half_line_loops", "half_line_loops_t", "rationals_Q",
                    "tree_Gn(1)", "tree_Gn(2)", "star_in", "two_vertex_multi", "zigzag"})
    out.emplace_back(name);
  return out;
}

/// Graph for analysis: the finite graph, or the family window at K.
inline Graph entry_graph(const CatalogEntry& c, std::optional<std::size_t> window = std::nullopt) {
  if (c.graph) return *c.graph;
  if (!c.family->truncate) throw CatalogError(c.name + " has no finite truncation (metadata only)");
  return c.family->truncate(window.value_or(c.family->default_window));
}

struct CheckReport {
  std::string name;
  std::vector<std::string> lines;
  bool passed = true;

  void check(bool ok, const std::string& what) {
    lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    passed = passed && ok;
  }
};

namespace detail {

inline void compare_flags(CheckReport& r, const PropertyReport& got, const PropertyReport& want, bool with_hyper = true) {
  auto flag = [&](const char* label, bool g, bool w) {
    r.check(g == w, std::string(label) + " = " + (g ? "true" : "false"));
  };
  flag("double-cycle", got.has_double_cycle, want.has_double_cycle);
  flag("uniform double-cycle", got.uniform_double_cycle, want.uniform_double_cycle);
  flag("aperiodic path", got.aperiodic_path, want.aperiodic_path);
  flag("uniform aperiodic path", got.uniform_aperiodic_path, want.uniform_aperiodic_path);
  flag("L_G partly free", got.lg_partly_free, want.lg_partly_free);
  flag("L_G unitally partly free", got.lg_unitally_partly_free, want.lg_unitally_partly_free);
  flag("A_G partly free", got.ag_partly_free, want.ag_partly_free);
  flag("A_G unitally partly free", got.ag_unitally_partly_free, want.ag_unitally_partly_free);
  if (with_hyper) flag("hyper-reflexive sufficient", got.hyperreflexive_sufficient, want.hyperreflexive_sufficient);
}

inline void check_pair(CheckReport& r, const std::string& label, const std::function<FormalIsometryPair()>& build,
                       std::size_t depth) {
  try {
    auto pair = build();
    r.check(pair.invariant_violations().empty(), label + " pair well formed");
    auto n = std::max(depth, pair.max_word_length());
    auto b = build_basis(pair.graph, n);
    auto v = verify_pair(pair, b);
    std::string detail = label + " pair verified at N=" + std::to_string(n) + ", m=" + std::to_string(v.interior_level);
    for (const auto& note : v.notes) detail += "; " + note;
    r.check(v.passed(), detail);
  } catch (const std::exception& e) {
    r.check(false, label + " pair: " + e.what());
  }
}

/// Same vertex names and same named edges with the same endpoints.
inline bool same_structure(const Graph& a, const Graph& b, const std::function<std::string(const std::string&)>& vmap,
                           const std::function<std::string(const std::string&)>& emap) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  for (auto v : a.vertices())
    if (!b.find_vertex(vmap(a.name(v)))) return false;
  for (auto e : a.edges()) {
    auto f = b.find_edge(emap(a.name(e)));
    if (!f || b.name(b.source(*f)) != vmap(a.name(a.source(e))) || b.name(b.range(*f)) != vmap(a.name(a.range(e))))
      return false;
  }
  return true;
}

inline void check_family(CheckReport& r, const CatalogEntry& c, std::size_t depth, std::optional<std::size_t> window) {
  const auto& f = *c.family;
  r.check(c.expected.inconsistencies().empty(), "stored classification consistent");
  if (!f.truncate) {
    if (c.expected.infinite_path) {
      auto edges = c.expected.infinite_path->first_edges(8);
      std::set<std::string> distinct(edges.begin(), edges.end());
      r.check(distinct.size() == edges.size(), "certificate edges never repeat (first 8)");
    }
    r.lines.push_back("note metadata only: no finite truncation");
    return;
  }
  const auto K = window.value_or(f.default_window);
  auto g = f.truncate(K);
  r.lines.push_back("note window K=" + std::to_string(K) + ": " + std::to_string(g.vertex_count()) + " vertices, " +
                    std::to_string(g.edge_count()) + " edges");
  if (c.expected.infinite_path && f.window_for_edges) {
    std::size_t m = 0;
    while (f.window_for_edges(m + 1) <= K) ++m;
    r.check(m > 0 && verify_certificate(*c.expected.infinite_path, g, m),
            "certificate replays " + std::to_string(m) + " edges without repetition");
  }
  r.check(double_cycle_witnesses(g).empty() != c.expected.has_double_cycle, "window double-cycle matches stored flag");
  // The transpose of half_line_loops_t is half_line_loops, whose infinite path no window shows.
  bool transpose_infinite = c.name == "half_line_loops_t";
  if (!c.expected.aperiodic_path) compare_flags(r, classify_finite(g), c.expected, !transpose_infinite);
  if (transpose_infinite)
    r.check(c.expected.hyperreflexive_sufficient == find_family("half_line_loops")->expected.uniform_aperiodic_path,
            "hyper-reflexive flag equals the uniform aperiodic path flag of half_line_loops");
  if (f.pairing) {
    check_pair(r, "infinite-path", [&] { return construct_pair_infinite_path(c.name, K); }, depth);
  }
  if (c.name == "tree_Gn(1)") {
    auto line = find_family("cycle_inf")->truncate(K + 1);
    // x followed by j ones is x_{j+1}; e followed by j ones is e_j
    auto vertex = [](const std::string& s) { return "x" + std::to_string(s.size()); };
    auto edge = [](const std::string& s) { return "e" + std::to_string(s.size() - 1); };
    r.check(same_structure(g, line, vertex, edge), "G_1 window matches the C_inf window under 1^j <-> j+1");
  }
  if (c.name == "half_line_loops") {
    auto t = find_family("half_line_loops_t")->truncate(K);
    auto id = [](const std::string& s) { return s; };
    r.check(same_structure(transpose(g), t, id, id), "transpose of the window is the half_line_loops_t window");
  }
}

inline void check_finite(CheckReport& r, const CatalogEntry& c, std::size_t depth) {
  auto g = std::make_shared<const Graph>(*c.graph);
  auto report = classify_finite(*g);
  r.check(report.inconsistencies().empty(), "report consistent");
  compare_flags(r, report, c.expected);
  for (const auto& w : report.double_cycles)
    r.check(is_first_return_cycle(*g, w.first) && is_first_return_cycle(*g, w.second),
            "witness at " + g->name(w.base) + " replays as two first-return cycles");
  if (report.has_double_cycle) {
    check_pair(r, "double-cycle", [&] { return construct_pair_double_cycle(g, report.double_cycles.front()); }, depth);
    check_pair(r, "quiver", [&] { return quiver_pair(g); }, depth);
  }
  if (report.uniform_double_cycle) check_pair(r, "unital", [&] { return construct_pair_unital(g); }, depth);
}

}  // namespace detail

/// Classifies, compares with the stored report and verifies every pair the flags promise.
/// Depth is raised to the longest constructed word when smaller.
inline CheckReport check_entry(std::string_view name, std::optional<std::size_t> depth = std::nullopt,
                               std::optional<std::size_t> window = std::nullopt) {
  CheckReport r;
  auto c = builtin(name);
  r.name = c.name;
  auto n = depth.value_or(c.default_depth);
  if (c.is_family())
    detail::check_family(r, c, n, window);
  else
    detail::check_finite(r, c, n);
  return r;
}

/// Every nonzero entry (p, q) of A on C_n satisfies |p| - |q| = idx(range p) - idx(range q)
/// mod n and |p| >= |q|, and every Fourier coefficient a_w has |w| = idx(range w) -
/// idx(source w) mod n. Vertex index is declaration order.
inline bool cycle_pattern_conforms(const SparseOp& a, std::size_t n) {
  const auto& b = a.basis();
  auto residue = [n](long v) { return ((v % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n); };
  bool ok = true;
  a.matrix().for_each([&](std::size_t p, std::size_t q, const Rational&) {
    long dl = static_cast<long>(b.length(p)) - static_cast<long>(b.length(q));
    long dv = static_cast<long>(index(b.range(p))) - static_cast<long>(index(b.range(q)));
    if (dl < 0 || residue(dl) != residue(dv)) ok = false;
  });
  auto table = fourier_coefficients(a);
  for (const auto& [i, value] : table.coefficients()) {
    long dv = static_cast<long>(index(b.range(i))) - static_cast<long>(index(b.source(i)));
    if (residue(static_cast<long>(b.length(i))) != residue(dv)) ok = false;
  }
  return ok;
}

/// Samples elements of L_{C_n} at depth N: every word of length <= n, then random
/// rational combinations of products of generators L_e and P_x.
inline bool verify_cycle_pattern(std::size_t n, std::size_t depth, std::uint64_t seed = 1, std::size_t samples = 40) {
  if (n == 0) throw std::invalid_argument("cycle pattern needs n >= 1");
  auto g = std::make_shared<const Graph>(detail::cycle_graph(n));
  auto b = build_basis(g, depth);
  for (std::size_t i = 0; i < b->dim() && b->length(i) <= n; ++i)
    if (!cycle_pattern_conforms(left_op(b, b->path(i)), n)) return false;
  std::vector<SparseOp> generators;
  for (auto e : g->edges()) generators.push_back(left_op(b, Path::edge(*g, e)));
  for (auto x : g->vertices()) generators.push_back(vertex_projection(b, x));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, generators.size() - 1);
  std::uniform_int_distribution<int> factors(1, 4), coeff(-5, 5);
  for (std::size_t s = 0; s < samples; ++s) {
    auto sum = SparseOp::zero(b);
    for (int t = 0; t < 3; ++t) {
      auto prod = generators[pick(rng)];
      for (int k = factors(rng); k > 1; --k) prod = prod * generators[pick(rng)];
      sum = sum + make_rational(coeff(rng), 1 + t) * prod;
    }
    if (!cycle_pattern_conforms(sum, n)) return false;
  }
  return true;
}

/// P_row A P_col.
inline SparseOp corner(const SparseOp& a, Vertex row, Vertex col) {
  auto b = a.basis_ptr();
  return vertex_projection(b, row) * a * vertex_projection(b, col);
}

/// Support check for the three-corner picture on e: x -> x, f: x -> y. Returns an empty
/// string on success, else the failed condition.
inline std::string triangle_corner_failure(const SparseOp& a) {
  const auto& g = a.basis().graph();
  auto x = *g.find_vertex("x");
  auto y = *g.find_vertex("y");
  auto f = *g.find_edge("f");
  if (!corner(a, x, y).is_zero()) return "P_x A P_y != 0";
  auto diagonal = fourier_coefficients(corner(a, y, y));
  for (const auto& [i, value] : diagonal.coefficients())
    if (a.basis().length(i) != 0) return "P_y A P_y has support off the unit";
  auto lower = fourier_coefficients(corner(a, y, x));
  for (const auto& [i, value] : lower.coefficients()) {
    auto edges = a.basis().path(i).edges();
    if (std::find(edges.begin(), edges.end(), f) == edges.end()) return "P_y A P_x has support on a word avoiding f";
  }
  return {};
}

struct StructureReport {
  std::vector<std::string> lines;
  bool passed = true;
  void check(bool ok, const std::string& what) {
    lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    passed = passed && ok;
  }
};

/// The digraph-algebra display at N = 1 with (alpha, beta, gamma, lambda, mu) =
/// (1, 2, 3, 4, 5), listed in basis order x1, x2, x3, e, f.
inline std::vector<std::vector<Rational>> digraph_display() {
  return {{1, 0, 0, 0, 0}, {0, 2, 0, 0, 0}, {0, 0, 3, 0, 0}, {4, 0, 0, 2, 0}, {5, 0, 0, 0, 3}};
}

inline StructureReport verify_structure_examples(std::size_t depth, std::uint64_t seed = 1) {
  if (depth < 2) throw std::invalid_argument("structure examples need depth >= 2");
  StructureReport r;
  {
    auto g = std::make_shared<const Graph>(*builtin("digraph_T").graph);
    auto b = build_basis(g, 1);
    auto& G = *g;
    auto x = SparseOp::zero(b);
    x = x + Rational(1) * vertex_projection(b, *G.find_vertex("x1"));
    x = x + Rational(2) * vertex_projection(b, *G.find_vertex("x2"));
    x = x + Rational(3) * vertex_projection(b, *G.find_vertex("x3"));
    x = x + Rational(4) * left_op(b, Path::edge(G, *G.find_edge("e")));
    x = x + Rational(5) * left_op(b, Path::edge(G, *G.find_edge("f")));
    auto want = digraph_display();
    bool match = b->dim() == want.size();
    for (std::size_t i = 0; match && i < want.size(); ++i)
      for (std::size_t j = 0; j < want.size(); ++j) match = match && x.at(i, j) == want[i][j];
    r.check(match, "digraph_T N=1 matrix matches the 5x5 display entrywise");
  }
  {
    auto g = std::make_shared<const Graph>(*builtin("triangle_Lfree").graph);
    auto b = build_basis(g, depth);
    std::string first_failure;
    std::vector<SparseOp> words;
    for (std::size_t i = 0; i < b->dim() && b->length(i) <= 4; ++i) {
      words.push_back(left_op(b, b->path(i)));
      auto why = triangle_corner_failure(words.back());
      if (!why.empty() && first_failure.empty()) first_failure = format_path(b->path(i)) + ": " + why;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    std::uniform_int_distribution<int> coeff(-4, 4);
    for (int s = 0; s < 25; ++s) {
      auto a = SparseOp::zero(b);
      for (int t = 0; t < 4; ++t) a = a + Rational(coeff(rng)) * words[pick(rng)];
      auto why = triangle_corner_failure(a);
      if (!why.empty() && first_failure.empty()) first_failure = "random combination: " + why;
    }
    r.check(first_failure.empty(), "triangle_Lfree corners (CI, 0, H^inf_0) for words of length <= 4" +
                                       (first_failure.empty() ? "" : ": " + first_failure));
  }
  return r;
}

/// Exact AB == BA.
inline bool operators_commute(const SparseOp& a, const SparseOp& b) { return a * b == b * a; }

struct CommutantReport {
  std::size_t pairs_checked = 0;
  bool commutation = true;
  bool transpose_match = true;
  std::string failure;
  bool passed() const { return commutation && transpose_match; }
};

/// L_u R_w == R_w L_u for every pair of generators (edges and vertices) and for
/// `random_pairs` random word pairs of length <= 3; then R_w on g against L_{w'} on
/// transpose(g), w' the reversed word, through the reversal bijection of the bases.
inline CommutantReport commutant_check(std::shared_ptr<const Graph> g, std::size_t depth, std::uint64_t seed = 1,
                                       std::size_t random_pairs = 50) {
  CommutantReport r;
  auto b = build_basis(g, depth);
  std::vector<Path> generators;
  for (auto x : g->vertices()) generators.push_back(Path::unit(*g, x));
  for (auto e : g->edges()) generators.push_back(Path::edge(*g, e));
  std::vector<std::pair<Path, Path>> pairs;
  for (const auto& a : generators)
    for (const auto& c : generators) pairs.emplace_back(a, c);
  std::vector<std::size_t> short_words;
  for (std::size_t i = 0; i < b->dim(); ++i)
    if (b->length(i) <= 3) short_words.push_back(i);
  std::mt19937_64 rng(seed);
  if (!short_words.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, short_words.size() - 1);
    for (std::size_t k = 0; k < random_pairs; ++k)
      pairs.emplace_back(b->path(short_words[pick(rng)]), b->path(short_words[pick(rng)]));
  }
  for (const auto& [u, w] : pairs) {
    ++r.pairs_checked;
    if (!operators_commute(left_op(b, u), right_op(b, w))) {
      r.commutation = false;
      r.failure = "L[" + format_path(u) + "] R[" + format_path(w) + "] do not commute";
      return r;
    }
  }

  auto gt = std::make_shared<const Graph>(transpose(*g));
  auto bt = build_basis(gt, depth);
  auto reversed = [&](const Path& p) {
    if (p.is_unit()) return Path::unit(*gt, p.source());
    std::vector<Edge> edges(p.edges().rbegin(), p.edges().rend());
    return *Path::from_traversal(*gt, std::move(edges));
  };
  std::vector<std::size_t> to_t(b->dim());
  for (std::size_t i = 0; i < b->dim(); ++i) to_t[i] = *bt->index_of(reversed(b->path(i)));
  std::vector<Path> words = generators;
  for (auto i : short_words) words.push_back(b->path(i));
  for (const auto& w : words) {
    auto right = right_op(b, w);
    auto left = left_op(bt, reversed(w));
    bool same = right.matrix().nonzeros() == left.matrix().nonzeros();
    right.matrix().for_each([&](std::size_t i, std::size_t j, const Rational& v) {
      if (left.at(to_t[i], to_t[j]) != v) same = false;
    });
    if (!same) {
      r.transpose_match = false;
      r.failure = "R[" + format_path(w) + "] differs from the transpose's left operator";
      return r;
    }
  }
  return r;
}

}  // namespace pfree
