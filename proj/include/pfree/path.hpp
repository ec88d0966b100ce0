#pragma once

// The free semigroupoid F+(G): vertices as units plus composable edge words.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pfree/graph.hpp"

namespace pfree {

class PathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BasisTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Element of F+(G). Edges are kept in traversal order (first traversed first), so the
/// written word e_k...e_2.e_1 is stored as [e_1, e_2, ..., e_k] and extending on the
/// left, w -> e.w, is a push_back.
class Path {
 public:
  static Path unit(const Graph& g, Vertex x) {
    if (index(x) >= g.vertex_count()) throw PathError("unknown vertex");
    return Path(&g, x, x, {});
  }

  static Path edge(const Graph& g, Edge e) {
    if (index(e) >= g.edge_count()) throw PathError("unknown edge");
    return Path(&g, g.source(e), g.range(e), {e});
  }

  /// Validates composability; nullopt when some consecutive pair does not meet.
  static std::optional<Path> from_traversal(const Graph& g, std::vector<Edge> edges) {
    if (edges.empty()) throw PathError("empty edge word; use Path::unit");
    for (auto e : edges)
      if (index(e) >= g.edge_count()) throw PathError("unknown edge");
    for (std::size_t i = 1; i < edges.size(); ++i)
      if (g.range(edges[i - 1]) != g.source(edges[i])) return std::nullopt;
    auto s = g.source(edges.front());
    auto r = g.range(edges.back());
    return Path(&g, s, r, std::move(edges));
  }

  const Graph& graph() const noexcept { return *graph_; }
  Vertex source() const noexcept { return source_; }
  Vertex range() const noexcept { return range_; }
  std::size_t length() const noexcept { return edges_.size(); }
  bool is_unit() const noexcept { return edges_.empty(); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  bool operator==(const Path& o) const {
    return graph_ == o.graph_ && source_ == o.source_ && edges_ == o.edges_;
  }

 private:
  Path(const Graph* g, Vertex s, Vertex r, std::vector<Edge> edges)
      : graph_(g), source_(s), range_(r), edges_(std::move(edges)) {}

  const Graph* graph_;
  Vertex source_;
  Vertex range_;
  std::vector<Edge> edges_;
};

/// The product pq (q traversed first); nullopt when range(q) != source(p) or the
/// paths live on different graphs.
inline std::optional<Path> compose(const Path& p, const Path& q) {
  if (&p.graph() != &q.graph() || q.range() != p.source()) return std::nullopt;
  if (p.is_unit()) return q;
  if (q.is_unit()) return p;
  std::vector<Edge> edges(q.edges().begin(), q.edges().end());
  edges.insert(edges.end(), p.edges().begin(), p.edges().end());
  return Path::from_traversal(p.graph(), std::move(edges));
}

/// w^k, k >= 1, for a closed path w.
inline Path power(const Path& w, std::size_t k) {
  if (k == 0) return Path::unit(w.graph(), w.source());
  Path out = w;
  for (std::size_t i = 1; i < k; ++i) {
    auto next = compose(w, out);
    if (!next) throw PathError("power of a path that is not closed");
    out = std::move(*next);
  }
  return out;
}

/// `@x` for units, otherwise edge names dot-separated with the last-traversed edge
/// first (`g.f` is f then g).
inline std::string format_path(const Path& p) {
  const auto& g = p.graph();
  if (p.is_unit()) return "@" + g.name(p.source());
  std::string out;
  auto edges = p.edges();
  for (std::size_t i = edges.size(); i-- > 0;) {
    out += g.name(edges[i]);
    if (i > 0) out += '.';
  }
  return out;
}

inline Path parse_path(const Graph& g, std::string_view text) {
  if (text.empty()) throw PathError("empty path literal");
  if (text.front() == '@') {
    auto v = g.find_vertex(text.substr(1));
    if (!v) throw PathError("unknown vertex '" + std::string(text.substr(1)) + "'");
    return Path::unit(g, *v);
  }
  std::vector<Edge> written;
  std::size_t start = 0;
  while (true) {
    auto dot = text.find('.', start);
    auto token = text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    auto e = g.find_edge(token);
    if (!e) throw PathError("unknown edge '" + std::string(token) + "'");
    written.push_back(*e);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  std::vector<Edge> traversal(written.rbegin(), written.rend());
  auto p = Path::from_traversal(g, std::move(traversal));
  if (!p) throw PathError("path '" + std::string(text) + "' is not composable");
  return *p;
}

namespace detail {

/// All paths of length <= depth as a prefix tree: node i is e.parent(i). Nodes are
/// numbered in basis order: (length, written word by edge declaration order, source).
struct PathTree {
  struct Node {
    std::int64_t parent;  // -1 for units
    Edge last;            // meaningless for units
    Vertex source;
    Vertex range;
    std::uint32_t length;
  };
  std::vector<Node> nodes;
  std::vector<std::size_t> child_offset;  // per node, into children
  std::vector<std::int64_t> children;     // indexed by out-edge slot of node's range
  std::vector<std::size_t> edge_slot;     // position of each edge within out_edges(source)
  std::vector<std::size_t> unit_of;       // vertex -> node

  std::optional<std::size_t> child(std::size_t node, Edge e) const {
    auto c = children[child_offset[node] + edge_slot[index(e)]];
    if (c < 0) return std::nullopt;
    return static_cast<std::size_t>(c);
  }
};

inline PathTree build_path_tree(const Graph& g, std::size_t depth, std::size_t cap) {
  PathTree t;
  t.edge_slot.resize(g.edge_count());
  for (auto v : g.vertices()) {
    auto out = g.out_edges(v);
    for (std::size_t i = 0; i < out.size(); ++i) t.edge_slot[index(out[i])] = i;
  }
  if (g.vertex_count() > cap)
    throw BasisTooLarge("Fock basis exceeds cap of " + std::to_string(cap) + " paths");
  t.unit_of.resize(g.vertex_count());
  for (auto v : g.vertices()) {
    t.unit_of[index(v)] = t.nodes.size();
    t.nodes.push_back({-1, Edge(0), v, v, 0});
  }
  std::size_t level_begin = 0;
  for (std::size_t len = 1; len <= depth; ++len) {
    std::size_t level_end = t.nodes.size();
    // children sorted by (leftmost edge, parent rank) = (written word, source)
    std::vector<std::pair<Edge, std::size_t>> next;
    for (std::size_t p = level_begin; p < level_end; ++p)
      for (auto e : g.out_edges(t.nodes[p].range)) next.emplace_back(e, p);
    if (next.empty()) break;
    std::sort(next.begin(), next.end());
    if (t.nodes.size() + next.size() > cap)
      throw BasisTooLarge("Fock basis exceeds cap of " + std::to_string(cap) +
                          " paths; lower the depth or raise the cap");
    for (auto [e, p] : next)
      t.nodes.push_back({static_cast<std::int64_t>(p), e, t.nodes[p].source, g.range(e),
                         static_cast<std::uint32_t>(len)});
    level_begin = level_end;
  }
  t.child_offset.resize(t.nodes.size());
  std::size_t total = 0;
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    t.child_offset[i] = total;
    total += g.out_edges(t.nodes[i].range).size();
  }
  t.children.assign(total, -1);
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const auto& n = t.nodes[i];
    if (n.parent >= 0)
      t.children[t.child_offset[static_cast<std::size_t>(n.parent)] + t.edge_slot[index(n.last)]] =
          static_cast<std::int64_t>(i);
  }
  return t;
}

inline Path path_of(const Graph& g, const PathTree& t, std::size_t node) {
  const auto& n = t.nodes[node];
  if (n.length == 0) return Path::unit(g, n.source);
  std::vector<Edge> edges(n.length);
  std::int64_t at = static_cast<std::int64_t>(node);
  for (std::size_t i = n.length; i-- > 0;) {
    edges[i] = t.nodes[static_cast<std::size_t>(at)].last;
    at = t.nodes[static_cast<std::size_t>(at)].parent;
  }
  return *Path::from_traversal(g, std::move(edges));
}

}  // namespace detail

inline constexpr std::size_t default_basis_cap = 2'000'000;

/// Every path of length 0..depth ordered by (length, written word, source).
inline std::vector<Path> enumerate_paths(const Graph& g, std::size_t depth,
                                         std::size_t cap = default_basis_cap) {
  auto tree = detail::build_path_tree(g, depth, cap);
  std::vector<Path> out;
  out.reserve(tree.nodes.size());
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) out.push_back(detail::path_of(g, tree, i));
  return out;
}

}  // namespace pfree
