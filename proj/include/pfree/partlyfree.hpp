#pragma once

// Isometry pairs (U, V) witnessing that L_G or A_G contains a free semigroup algebra:
// constructions from a double-cycle, from a proper infinite path, the unital assembly
// over a vertex partition, and the single-summand quiver pair. Every pair is
// materialized on a truncated Fock space and checked by exact matrix identities.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "pfree/analysis.hpp"
#include "pfree/families.hpp"
#include "pfree/fock.hpp"
#include "pfree/graph.hpp"
#include "pfree/path.hpp"

namespace pfree {

class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PairMode { double_cycle, infinite_path, unital, quiver };

inline std::string to_string(PairMode m) {
  switch (m) {
    case PairMode::double_cycle: return "double-cycle";
    case PairMode::infinite_path: return "infinite-path";
    case PairMode::unital: return "unital";
    case PairMode::quiver: return "quiver";
  }
  return "?";
}

inline std::optional<PairMode> parse_pair_mode(std::string_view s) {
  if (s == "double-cycle") return PairMode::double_cycle;
  if (s == "infinite-path") return PairMode::infinite_path;
  if (s == "unital") return PairMode::unital;
  if (s == "quiver") return PairMode::quiver;
  return std::nullopt;
}

struct Summand {
  Vertex source;
  Path word;
};

/// U = sum_k L_{u_k}, V = sum_k L_{v_k}, each summand starting at its own vertex.
struct FormalIsometryPair {
  std::shared_ptr<const Graph> graph;
  PairMode mode = PairMode::double_cycle;
  std::vector<Summand> u;
  std::vector<Summand> v;
  std::set<Vertex> initial_set;
  /// Vertices the ranges must land in. Equal to initial_set except for finite windows
  /// of infinite sums, whose targets lie past the last summand source.
  std::set<Vertex> range_set;

  std::size_t max_word_length() const {
    std::size_t d = 0;
    for (const auto* list : {&u, &v})
      for (const auto& s : *list) d = std::max(d, s.word.length());
    return d;
  }

  std::vector<std::string> invariant_violations() const {
    std::vector<std::string> out;
    for (const auto* list : {&u, &v}) {
      std::set<Vertex> seen;
      for (const auto& s : *list) {
        if (&s.word.graph() != graph.get()) out.push_back("summand word on a different graph");
        if (s.word.source() != s.source) out.push_back("word does not start at its summand vertex " + graph->name(s.source));
        if (!seen.insert(s.source).second) out.push_back("repeated summand source " + graph->name(s.source));
      }
    }
    return out;
  }
};

namespace detail {

/// Written word (last-traversed edge first).
inline std::vector<Edge> written(const Path& p) { return {p.edges().rbegin(), p.edges().rend()}; }

/// L_a^* L_b != 0 exactly when one written word is a prefix of the other.
inline bool prefix_comparable(const Path& a, const Path& b) {
  if (a.is_unit() || b.is_unit()) return a.range() == b.range();
  auto wa = written(a), wb = written(b);
  auto n = std::min(wa.size(), wb.size());
  return std::equal(wa.begin(), wa.begin() + static_cast<long>(n), wb.begin());
}

/// Word-level orthogonality: all summand words pairwise prefix-incomparable.
inline bool words_orthogonal(const FormalIsometryPair& p) {
  std::vector<const Path*> all;
  for (const auto& s : p.u) all.push_back(&s.word);
  for (const auto& s : p.v) all.push_back(&s.word);
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (prefix_comparable(*all[i], *all[j])) return false;
  return true;
}

}  // namespace detail

/// Shortest path from -> to whose written word is lexicographically least by edge name.
inline std::optional<Path> shortest_path(const Graph& g, Vertex from, Vertex to) {
  if (from == to) return Path::unit(g, from);
  constexpr std::size_t inf = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(g.vertex_count(), inf);
  std::queue<Vertex> queue;
  dist[index(from)] = 0;
  queue.push(from);
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop();
    for (auto e : g.out_edges(v)) {
      auto r = g.range(e);
      if (dist[index(r)] == inf) {
        dist[index(r)] = dist[index(v)] + 1;
        queue.push(r);
      }
    }
  }
  if (dist[index(to)] == inf) return std::nullopt;
  // walk back from the target choosing the least name at each step; the written word
  // starts with the last traversed edge, so this is its lexicographic minimum
  std::vector<Edge> backwards;
  std::set<Vertex> frontier{to};
  for (std::size_t d = dist[index(to)]; d > 0; --d) {
    std::optional<Edge> best;
    for (auto v : frontier)
      for (auto e : g.in_edges(v))
        if (dist[index(g.source(e))] == d - 1 && (!best || g.name(e) < g.name(*best))) best = e;
    backwards.push_back(*best);
    frontier = {g.source(*best)};
  }
  std::vector<Edge> traversal(backwards.rbegin(), backwards.rend());
  return *Path::from_traversal(g, std::move(traversal));
}

namespace detail {

inline constexpr std::size_t max_exponent_retries = 8;

/// u_k = w1^{2k-1+shift} w2 r_k and v_k = w1^{2k+shift} w2 r_k for the k-th vertex of part.
inline void add_double_cycle_part(const Graph& g, const DoubleCycleWitness& w, const std::vector<Vertex>& part,
                                  std::size_t shift, FormalIsometryPair& out) {
  auto w1 = *Path::from_traversal(g, w.first.word);
  auto w2 = *Path::from_traversal(g, w.second.word);
  for (std::size_t k = 1; k <= part.size(); ++k) {
    auto xk = part[k - 1];
    auto r = shortest_path(g, xk, w.base);
    if (!r) throw ConstructionError("vertex " + g.name(xk) + " cannot reach " + g.name(w.base));
    auto head_u = *compose(power(w1, 2 * k - 1 + shift), w2);
    auto head_v = *compose(power(w1, 2 * k + shift), w2);
    out.u.push_back({xk, *compose(head_u, *r)});
    out.v.push_back({xk, *compose(head_v, *r)});
    out.initial_set.insert(xk);
    out.range_set.insert(xk);
  }
}

inline std::vector<Vertex> saturation_members(const Graph& g, Vertex base, const std::set<Vertex>& excluded) {
  std::vector<Vertex> part;
  for (auto v : g.vertices()) {
    if (excluded.contains(v)) continue;
    auto sat = saturation_vertices(g, v);
    if (std::binary_search(sat.begin(), sat.end(), base)) part.push_back(v);
  }
  return part;
}

template <typename Build>
FormalIsometryPair with_retries(Build&& build) {
  for (std::size_t attempt = 0; attempt < max_exponent_retries; ++attempt) {
    auto pair = build(2 * attempt);
    if (words_orthogonal(pair)) return pair;
  }
  throw ConstructionError("could not find orthogonal exponents for the double-cycle recipe");
}

inline void check_witness(const Graph& g, const DoubleCycleWitness& w) {
  if (w.first.base != w.base || w.second.base != w.base || w.first.word == w.second.word ||
      !is_first_return_cycle(g, w.first) || !is_first_return_cycle(g, w.second))
    throw ConstructionError("invalid double-cycle witness");
}

}  // namespace detail

/// Vertices whose saturation contains the witness base, in declaration order, each
/// with its own pair of words from {w1^m w2 : m >= 1}.
inline FormalIsometryPair construct_pair_double_cycle(std::shared_ptr<const Graph> g, const DoubleCycleWitness& w) {
  detail::check_witness(*g, w);
  auto part = detail::saturation_members(*g, w.base, {});
  return detail::with_retries([&](std::size_t shift) {
    FormalIsometryPair p{g, PairMode::double_cycle, {}, {}, {}, {}};
    detail::add_double_cycle_part(*g, w, part, shift, p);
    return p;
  });
}

/// Partitions V(G) by the first double-cycle each vertex can reach and concatenates
/// the per-part pairs, so the initial set is every vertex.
inline FormalIsometryPair construct_pair_unital(std::shared_ptr<const Graph> g) {
  auto reaching = vertices_reaching_double_cycle(*g);
  if (g->vertex_count() == 0) throw ConstructionError("empty graph has no unital pair");
  if (reaching.size() != g->vertex_count()) {
    for (auto v : g->vertices())
      if (!std::binary_search(reaching.begin(), reaching.end(), v))
        throw ConstructionError("saturation of vertex " + g->name(v) + " contains no double-cycle");
  }
  auto witnesses = double_cycle_witnesses(*g);
  std::vector<std::pair<DoubleCycleWitness, std::vector<Vertex>>> parts;
  std::set<Vertex> assigned;
  for (const auto& w : witnesses) {
    auto part = detail::saturation_members(*g, w.base, assigned);
    if (part.empty()) continue;
    assigned.insert(part.begin(), part.end());
    parts.emplace_back(w, std::move(part));
  }
  return detail::with_retries([&](std::size_t shift) {
    FormalIsometryPair p{g, PairMode::unital, {}, {}, {}, {}};
    for (const auto& [w, part] : parts) detail::add_double_cycle_part(*g, w, part, shift, p);
    return p;
  });
}

/// U = L_{w1}, V = L_{w2} for the first double-cycle: a single summand each.
inline FormalIsometryPair quiver_pair(std::shared_ptr<const Graph> g) {
  auto witnesses = double_cycle_witnesses(*g);
  if (witnesses.empty()) throw ConstructionError("graph has no double-cycle");
  const auto& w = witnesses.front();
  FormalIsometryPair p{g, PairMode::quiver, {}, {}, {w.base}, {w.base}};
  p.u.push_back({w.base, *Path::from_traversal(*g, w.first.word)});
  p.v.push_back({w.base, *Path::from_traversal(*g, w.second.word)});
  return p;
}

/// The finite window of the infinite sums for a catalog family with a two-to-one map.
inline FormalIsometryPair construct_pair_infinite_path(std::string_view family_name, std::size_t window) {
  auto family = find_family(family_name);
  if (!family) throw ConstructionError("unknown family '" + std::string(family_name) + "'");
  if (!family->pairing || !family->expected.infinite_path || !family->truncate)
    throw ConstructionError("family '" + family->name + "' has no infinite-path certificate");
  auto triples = family->pairing->in_window(window);
  if (triples.empty())
    throw ConstructionError("window K=" + std::to_string(window) + " too small for any summand of " + family->name);
  auto g = std::make_shared<const Graph>(family->truncate(window));
  FormalIsometryPair p{g, PairMode::infinite_path, {}, {}, {}, {}};
  auto vertex = [&](const std::string& name) {
    auto v = g->find_vertex(name);
    if (!v) throw ConstructionError("pairing names vertex " + name + " outside the window");
    return *v;
  };
  for (const auto& t : triples) {
    auto s = vertex(t.source);
    auto a = shortest_path(*g, s, vertex(t.first_target));
    auto b = shortest_path(*g, s, vertex(t.second_target));
    if (!a || !b) throw ConstructionError("pairing target unreachable from " + t.source);
    p.u.push_back({s, *a});
    p.v.push_back({s, *b});
    p.initial_set.insert(s);
  }
  for (auto v : g->vertices()) p.range_set.insert(v);
  if (!detail::words_orthogonal(p)) throw ConstructionError("pairing produced overlapping ranges");
  return p;
}

struct MaterializedPair {
  SparseOp u;
  SparseOp v;
  std::size_t interior_level;
};

/// U = sum L_{u_k}, V = sum L_{v_k} on the basis; interior level N - max word length.
inline MaterializedPair materialize(const FormalIsometryPair& p, const std::shared_ptr<const FockBasis>& b) {
  if (&b->graph() != p.graph.get()) throw ConstructionError("basis built over a different graph");
  auto d = p.max_word_length();
  if (d > b->depth())
    throw ConstructionError("word length " + std::to_string(d) + " exceeds depth " + std::to_string(b->depth()) +
                            "; use a depth of at least " + std::to_string(d));
  auto u = SparseOp::zero(b), v = SparseOp::zero(b);
  for (const auto& s : p.u) u = u + left_op(b, s.word);
  for (const auto& s : p.v) v = v + left_op(b, s.word);
  return {std::move(u), std::move(v), b->depth() - d};
}

struct VerificationReport {
  bool nonzero = false;
  bool orthogonal = false;           // U*V == 0 on the whole truncated space
  bool initial_projections = false;  // U*U E_m == V*V E_m == sum_{x in I} P_x E_m
  bool range_contained = false;      // E_m UU* E_m <= sum_{x in R} P_x E_m, same for V
  bool standard_form = false;        // initial projections decompose over the same I
  std::size_t depth = 0;
  std::size_t interior_level = 0;
  std::vector<std::string> notes;
  std::string exactness = "exact rational arithmetic, no tolerance";

  bool passed() const { return nonzero && orthogonal && initial_projections && range_contained && standard_form; }
};

namespace detail {

/// A = E_m X X* E_m is a projection dominated by the diagonal projection Q.
inline bool range_dominated(const SparseOp& x, const SparseOp& q, const std::vector<char>& mask) {
  auto a = (x * x.adjoint()).compress(mask, mask);
  if (!(a.adjoint() == a) || !(a * a == a)) return false;
  return q * a == a;
}

}  // namespace detail

inline VerificationReport verify_pair(const SparseOp& u, const SparseOp& v, const std::set<Vertex>& initial_set,
                                      std::size_t level, std::optional<std::set<Vertex>> range_set = std::nullopt) {
  VerificationReport r;
  const auto& b = u.basis_ptr();
  r.depth = b->depth();
  r.interior_level = level;
  if (level > b->depth()) throw std::invalid_argument("interior level exceeds depth");
  auto all = std::vector<char>(b->dim(), 1);
  auto mask = interior_mask(*b, level);

  r.nonzero = !u.is_zero() && !v.is_zero();
  if (!r.nonzero) r.notes.push_back("U or V is zero");

  r.orthogonal = (u.adjoint() * v).is_zero();
  if (!r.orthogonal) r.notes.push_back("U*V != 0");

  auto target = vertex_projection_at_level(b, initial_set, level);
  auto uu = (u.adjoint() * u).compress(all, mask);
  auto vv = (v.adjoint() * v).compress(all, mask);
  r.initial_projections = uu == target && vv == target;
  if (!r.initial_projections) r.notes.push_back("U*U or V*V differs from the predicted P_I E_m");

  auto ranges = vertex_projection_at_level(b, range_set.value_or(initial_set), level);
  r.range_contained = detail::range_dominated(u, ranges, mask) && detail::range_dominated(v, ranges, mask);
  if (!r.range_contained) r.notes.push_back("UU* or VV* not below the initial projection");

  auto ru = partial_isometry_report(u);
  auto rv = partial_isometry_report(v);
  r.standard_form = ru.form && rv.form && ru.form->vertices == initial_set && rv.form->vertices == initial_set &&
                    ru.form->interior_level >= level && rv.form->interior_level >= level;
  if (!r.standard_form) {
    std::string why = !ru.failure.empty() ? ru.failure : rv.failure;
    r.notes.push_back("initial projection not of the form sum P_x E_m over I" + (why.empty() ? "" : ": " + why));
  }
  return r;
}

inline VerificationReport verify_pair(const FormalIsometryPair& p, const std::shared_ptr<const FockBasis>& b) {
  auto m = materialize(p, b);
  return verify_pair(m.u, m.v, p.initial_set, m.interior_level, p.range_set);
}

struct NegativeSearchResult {
  std::size_t candidates = 0;
  std::size_t pairs_checked = 0;
  std::size_t satisfying = 0;
  std::optional<std::pair<std::string, std::string>> example;
};

/// Exhausts pairs of operators sum L_w (distinct sources, at most max_summands terms,
/// words of length <= max_length) and counts those meeting U*U = V*V, UU* <= U*U,
/// VV* <= V*V, U*V = 0 with U, V nonzero. Identities with a boundary defect are
/// compared below E_{N - max_length}, N = 2 max_length.
inline NegativeSearchResult negative_pair_search(std::shared_ptr<const Graph> g, std::size_t max_length,
                                                 std::size_t max_summands = 2) {
  NegativeSearchResult result;
  auto basis = build_basis(g, 2 * max_length);
  const auto level = basis->depth() - max_length;
  auto mask = interior_mask(*basis, level);
  auto all = std::vector<char>(basis->dim(), 1);

  std::vector<std::vector<std::size_t>> words_by_source(g->vertex_count());
  for (std::size_t i = 0; i < basis->dim(); ++i)
    if (basis->length(i) <= max_length) words_by_source[index(basis->source(i))].push_back(i);

  struct Candidate {
    std::string label;
    SparseOp op;
    SparseOp initial;  // X*X E_m
    bool range_ok;     // E_m XX* E_m <= E_m X*X E_m
  };
  std::vector<Candidate> candidates;
  auto add_candidate = [&](const std::vector<std::size_t>& terms) {
    auto op = SparseOp::zero(basis);
    std::string label;
    for (auto t : terms) {
      op = op + left_op(basis, basis->path(t));
      label += (label.empty() ? "" : " + ") + ("L[" + format_path(basis->path(t)) + "]");
    }
    auto xx = op.adjoint() * op;
    auto initial = xx.compress(all, mask);
    auto q = xx.compress(mask, mask);
    bool range_ok = detail::range_dominated(op, q, mask);
    candidates.push_back({std::move(label), std::move(op), std::move(initial), range_ok});
  };

  std::vector<std::size_t> terms;
  std::function<void(std::size_t)> choose = [&](std::size_t next_source) {
    if (!terms.empty()) add_candidate(terms);
    if (terms.size() == max_summands) return;
    for (std::size_t s = next_source; s < g->vertex_count(); ++s)
      for (auto w : words_by_source[s]) {
        terms.push_back(w);
        choose(s + 1);
        terms.pop_back();
      }
  };
  choose(0);
  result.candidates = candidates.size();

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (std::size_t j = i; j < candidates.size(); ++j) {
      ++result.pairs_checked;
      const auto& a = candidates[i];
      const auto& c = candidates[j];
      if (!a.range_ok || !c.range_ok || !(a.initial == c.initial)) continue;
      if (!(a.op.adjoint() * c.op).is_zero()) continue;
      ++result.satisfying;
      if (!result.example) result.example = std::make_pair(a.label, c.label);
    }
  }
  return result;
}

}  // namespace pfree
