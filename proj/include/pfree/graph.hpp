#pragma once

// Directed multigraph model. Orientation follows the path convention w = y·w·x:
// an edge is stored with its source x (where it starts) and range y (where it ends).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pfree {

enum class Vertex : std::uint32_t {};
enum class Edge : std::uint32_t {};

constexpr std::size_t index(Vertex v) noexcept { return static_cast<std::size_t>(v); }
constexpr std::size_t index(Edge e) noexcept { return static_cast<std::size_t>(e); }

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GraphParseError : public GraphError {
 public:
  GraphParseError(std::size_t line, const std::string& what)
      : GraphError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Records that a finite graph is the window of a built-in countable family.
struct FamilyTruncation {
  std::string family;
  std::size_t parameter = 0;
  bool operator==(const FamilyTruncation&) const = default;
};

inline bool valid_name(std::string_view name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  });
}

class Graph {
 public:
  struct EdgeData {
    std::string name;
    Vertex source;
    Vertex range;
    bool operator==(const EdgeData&) const = default;
  };

  Graph() = default;

  Vertex add_vertex(std::string name) {
    if (!valid_name(name)) throw GraphError("invalid vertex name '" + name + "'");
    if (vertex_ids_.contains(name)) throw GraphError("duplicate vertex '" + name + "'");
    auto v = Vertex(vertex_names_.size());
    vertex_ids_.emplace(name, v);
    vertex_names_.push_back(std::move(name));
    out_.emplace_back();
    in_.emplace_back();
    return v;
  }

  Edge add_edge(std::string name, Vertex source, Vertex range) {
    if (!valid_name(name)) throw GraphError("invalid edge name '" + name + "'");
    if (edge_ids_.contains(name)) throw GraphError("duplicate edge '" + name + "'");
    if (index(source) >= vertex_count() || index(range) >= vertex_count())
      throw GraphError("edge '" + name + "' has an undeclared endpoint");
    auto e = Edge(edges_.size());
    edge_ids_.emplace(name, e);
    edges_.push_back({std::move(name), source, range});
    out_[index(source)].push_back(e);
    in_[index(range)].push_back(e);
    return e;
  }

  Edge add_edge(std::string name, std::string_view source, std::string_view range) {
    auto s = find_vertex(source);
    auto r = find_vertex(range);
    if (!s || !r) throw GraphError("edge '" + name + "' has an undeclared endpoint");
    return add_edge(std::move(name), *s, *r);
  }

  std::size_t vertex_count() const noexcept { return vertex_names_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const std::string& name(Vertex v) const { return vertex_names_.at(index(v)); }
  const std::string& name(Edge e) const { return edges_.at(index(e)).name; }
  Vertex source(Edge e) const { return edges_.at(index(e)).source; }
  Vertex range(Edge e) const { return edges_.at(index(e)).range; }

  std::optional<Vertex> find_vertex(std::string_view name) const {
    auto it = vertex_ids_.find(std::string(name));
    if (it == vertex_ids_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<Edge> find_edge(std::string_view name) const {
    auto it = edge_ids_.find(std::string(name));
    if (it == edge_ids_.end()) return std::nullopt;
    return it->second;
  }

  /// Edges leaving v, in declaration order.
  std::span<const Edge> out_edges(Vertex v) const { return out_.at(index(v)); }
  /// Edges arriving at v, in declaration order.
  std::span<const Edge> in_edges(Vertex v) const { return in_.at(index(v)); }

  std::vector<Vertex> vertices() const {
    std::vector<Vertex> vs;
    vs.reserve(vertex_count());
    for (std::size_t i = 0; i < vertex_count(); ++i) vs.push_back(Vertex(i));
    return vs;
  }
  std::vector<Edge> edges() const {
    std::vector<Edge> es;
    es.reserve(edge_count());
    for (std::size_t i = 0; i < edge_count(); ++i) es.push_back(Edge(i));
    return es;
  }

  const std::optional<FamilyTruncation>& truncation() const noexcept { return truncation_; }
  void set_truncation(FamilyTruncation t) { truncation_ = std::move(t); }
  bool is_family_truncation() const noexcept { return truncation_.has_value(); }

  bool operator==(const Graph& other) const {
    return vertex_names_ == other.vertex_names_ && edges_ == other.edges_ &&
           truncation_ == other.truncation_;
  }

 private:
  std::vector<std::string> vertex_names_;
  std::vector<EdgeData> edges_;
  std::unordered_map<std::string, Vertex> vertex_ids_;
  std::unordered_map<std::string, Edge> edge_ids_;
  std::vector<std::vector<Edge>> out_;
  std::vector<std::vector<Edge>> in_;
  std::optional<FamilyTruncation> truncation_;
};

/// Reads the line format: `vertex NAME`, `edge NAME SRC DST`, `#` comments.
inline Graph parse_graph(std::string_view text) {
  Graph g;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::vector<std::string> words;
    for (std::string w; tokens >> w;) words.push_back(std::move(w));
    if (words.empty()) continue;

    const auto& keyword = words[0];
    if (keyword == "vertex") {
      if (words.size() != 2) throw GraphParseError(line_no, "expected 'vertex NAME'");
      if (!valid_name(words[1])) throw GraphParseError(line_no, "invalid name '" + words[1] + "'");
      if (g.find_vertex(words[1])) throw GraphParseError(line_no, "duplicate vertex '" + words[1] + "'");
      g.add_vertex(words[1]);
    } else if (keyword == "edge") {
      if (words.size() != 4) throw GraphParseError(line_no, "expected 'edge NAME SRC DST'");
      if (!valid_name(words[1])) throw GraphParseError(line_no, "invalid name '" + words[1] + "'");
      if (g.find_edge(words[1])) throw GraphParseError(line_no, "duplicate edge '" + words[1] + "'");
      auto s = g.find_vertex(words[2]);
      auto r = g.find_vertex(words[3]);
      if (!s) throw GraphParseError(line_no, "undeclared endpoint '" + words[2] + "'");
      if (!r) throw GraphParseError(line_no, "undeclared endpoint '" + words[3] + "'");
      g.add_edge(words[1], *s, *r);
    } else {
      throw GraphParseError(line_no, "unknown directive '" + keyword + "'");
    }
  }
  return g;
}

/// Inverse of parse_graph (comments aside).
inline std::string to_graph_text(const Graph& g) {
  std::ostringstream out;
  if (const auto& t = g.truncation())
    out << "# window of " << t->family << " at K=" << t->parameter << "\n";
  for (auto v : g.vertices()) out << "vertex " << g.name(v) << "\n";
  for (auto e : g.edges())
    out << "edge " << g.name(e) << " " << g.name(g.source(e)) << " " << g.name(g.range(e)) << "\n";
  return out.str();
}

inline std::string to_dot(const Graph& g, std::string_view title = "G") {
  std::ostringstream out;
  out << "digraph \"" << title << "\" {\n";
  for (auto v : g.vertices()) out << "  \"" << g.name(v) << "\";\n";
  for (auto e : g.edges())
    out << "  \"" << g.name(g.source(e)) << "\" -> \"" << g.name(g.range(e)) << "\" [label=\""
        << g.name(e) << "\"];\n";
  out << "}\n";
  return out.str();
}

/// Same ids, every edge reversed.
inline Graph transpose(const Graph& g) {
  Graph t;
  for (auto v : g.vertices()) t.add_vertex(g.name(v));
  for (auto e : g.edges()) t.add_edge(g.name(e), g.range(e), g.source(e));
  if (g.truncation()) t.set_truncation(*g.truncation());
  return t;
}

/// Vertices reachable from x by directed paths, x included; ascending vertex order.
inline std::vector<Vertex> saturation_vertices(const Graph& g, Vertex x) {
  if (index(x) >= g.vertex_count()) throw GraphError("unknown vertex");
  std::vector<char> seen(g.vertex_count(), 0);
  std::vector<Vertex> stack{x};
  seen[index(x)] = 1;
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto e : g.out_edges(v)) {
      auto r = g.range(e);
      if (!seen[index(r)]) {
        seen[index(r)] = 1;
        stack.push_back(r);
      }
    }
  }
  std::vector<Vertex> result;
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (seen[i]) result.push_back(Vertex(i));
  return result;
}

/// Tarjan's algorithm, iterative. Components come out in reverse topological order;
/// each component lists its vertices ascending.
inline std::vector<std::vector<Vertex>> strongly_connected_components(const Graph& g) {
  const std::size_t n = g.vertex_count();
  constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> number(n, unvisited), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<Vertex> stack;
  std::vector<std::vector<Vertex>> components;
  std::size_t counter = 0;

  struct Frame {
    Vertex v;
    std::size_t next_edge;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (number[root] != unvisited) continue;
    std::vector<Frame> call{{Vertex(root), 0}};
    number[root] = low[root] = counter++;
    stack.push_back(Vertex(root));
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& frame = call.back();
      auto v = index(frame.v);
      auto out = g.out_edges(frame.v);
      if (frame.next_edge < out.size()) {
        auto w = index(g.range(out[frame.next_edge++]));
        if (number[w] == unvisited) {
          number[w] = low[w] = counter++;
          stack.push_back(Vertex(w));
          on_stack[w] = 1;
          call.push_back({Vertex(w), 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], number[w]);
        }
        continue;
      }
      if (low[v] == number[v]) {
        std::vector<Vertex> component;
        Vertex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[index(w)] = 0;
          component.push_back(w);
        } while (index(w) != v);
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
      }
      call.pop_back();
      if (!call.empty()) {
        auto parent = index(call.back().v);
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return components;
}

}  // namespace pfree
