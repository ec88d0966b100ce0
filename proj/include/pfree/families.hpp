#pragma once

// Built-in countable graphs. Their classification cannot be read off a finite window
// (a window of C_inf is a finite line), so each family stores its known classification
// together with machine-checkable evidence: an infinite-path certificate and, where the
// family is partly free, the two-to-one map used to build isometry pairs.
//
// Window conventions, fixed per family:
//   cycle_inf, half_line_loops(_t), star_in   vertices x1..xK
//   int_line, int_line_loops, zigzag          vertices x_{-K}..x_K, written xm3 for x_{-3}
//   tree_Gn(n)                                words of length <= K over {1..n}
//   two_vertex_multi                          x1, x2 and K parallel edges
//   rationals_Q                               none (every vertex has infinite out-degree)

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pfree/analysis.hpp"
#include "pfree/graph.hpp"

namespace pfree {

/// One summand source with its two targets, by vertex name.
struct PairingTriple {
  std::string source;
  std::string first_target;
  std::string second_target;
};

struct PairingRule {
  std::string description;
  std::function<std::vector<PairingTriple>(std::size_t window)> in_window;
};

struct Family {
  std::string name;
  std::string note;
  std::size_t default_window = 0;
  std::size_t default_depth = 6;
  std::function<Graph(std::size_t window)> truncate;  // empty for metadata-only families
  PropertyReport expected;
  std::optional<PairingRule> pairing;
  /// Smallest window containing the first m certificate edges.
  std::function<std::size_t(std::size_t m)> window_for_edges;
};

class FamilyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string signed_suffix(long k) { return k < 0 ? "m" + std::to_string(-k) : std::to_string(k); }

inline PropertyReport stored_report(bool double_cycle, bool uniform_double_cycle, bool aperiodic,
                                    bool uniform_aperiodic, bool transpose_uniform_aperiodic) {
  PropertyReport r;
  r.has_double_cycle = double_cycle;
  r.uniform_double_cycle = uniform_double_cycle;
  r.aperiodic_path = aperiodic;
  r.uniform_aperiodic_path = uniform_aperiodic;
  r.vertex_count_finite = false;
  r.hyperreflexive_sufficient = transpose_uniform_aperiodic;
  r.derive_algebra_flags();
  return r;
}

inline InfinitePathCertificate numbered_tail(std::string family, long first, std::string rule) {
  return {std::move(family), "x" + signed_suffix(first), std::move(rule), [first](std::size_t m) {
            std::vector<std::string> out;
            for (std::size_t i = 0; i < m; ++i) out.push_back("e" + signed_suffix(first + static_cast<long>(i)));
            return out;
          }};
}

inline Graph half_line(std::size_t window, bool loops) {
  Graph g;
  for (std::size_t k = 1; k <= window; ++k) g.add_vertex("x" + std::to_string(k));
  for (std::size_t k = 1; k < window; ++k)
    g.add_edge("e" + std::to_string(k), "x" + std::to_string(k), "x" + std::to_string(k + 1));
  if (loops)
    for (std::size_t k = 1; k <= window; ++k)
      g.add_edge("w" + std::to_string(k), "x" + std::to_string(k), "x" + std::to_string(k));
  return g;
}

inline Graph integer_line(std::size_t window, bool loops) {
  Graph g;
  const long K = static_cast<long>(window);
  for (long k = -K; k <= K; ++k) g.add_vertex("x" + signed_suffix(k));
  for (long k = -K; k < K; ++k)
    g.add_edge("e" + signed_suffix(k), "x" + signed_suffix(k), "x" + signed_suffix(k + 1));
  if (loops)
    for (long k = -K; k <= K; ++k) g.add_edge("w" + signed_suffix(k), "x" + signed_suffix(k), "x" + signed_suffix(k));
  return g;
}

/// Words over {1..n} of length <= depth, shortlex. Letters are prepended: w -> iw.
inline std::vector<std::string> tree_words(std::size_t n, std::size_t depth) {
  std::vector<std::string> words{""};
  std::size_t level_begin = 0;
  for (std::size_t len = 1; len <= depth; ++len) {
    std::size_t level_end = words.size();
    std::vector<std::string> next;
    for (std::size_t i = level_begin; i < level_end; ++i)
      for (std::size_t letter = 1; letter <= n; ++letter) next.push_back(std::to_string(letter) + words[i]);
    std::sort(next.begin(), next.end());
    words.insert(words.end(), next.begin(), next.end());
    level_begin = level_end;
  }
  return words;
}

inline Graph bifurcating_tree(std::size_t n, std::size_t window) {
  Graph g;
  auto words = tree_words(n, window);
  for (const auto& w : words) g.add_vertex("x" + w);
  for (const auto& w : words) {
    if (w.size() >= window) continue;
    for (std::size_t letter = 1; letter <= n; ++letter) {
      auto iw = std::to_string(letter) + w;
      g.add_edge("e" + iw, "x" + w, "x" + iw);
    }
  }
  return g;
}

/// Binary-tree map on x1, x2, ...: x_k -> {x_{2k}, x_{2k+1}}.
inline std::vector<PairingTriple> doubling_pairs(std::size_t window) {
  std::vector<PairingTriple> out;
  for (std::size_t k = 1; 2 * k + 1 <= window; ++k)
    out.push_back({"x" + std::to_string(k), "x" + std::to_string(2 * k), "x" + std::to_string(2 * k + 1)});
  return out;
}

/// Two-to-one map on Z with targets strictly downstream: s >= 0 takes the odd
/// targets 4s+1, 4s+3; s = -m < 0 takes the even targets 4m-2, 4m.
inline std::vector<PairingTriple> integer_pairs(std::size_t window) {
  std::vector<PairingTriple> out;
  const long K = static_cast<long>(window);
  for (long s = -K; s <= K; ++s) {
    long a = s >= 0 ? 4 * s + 1 : -4 * s - 2;
    long b = s >= 0 ? 4 * s + 3 : -4 * s;
    if (b <= K) out.push_back({"x" + signed_suffix(s), "x" + signed_suffix(a), "x" + signed_suffix(b)});
  }
  return out;
}

inline std::vector<PairingTriple> tree_pairs(std::size_t n, std::size_t window) {
  std::vector<PairingTriple> out;
  if (n == 1) {
    // G_1 = C_inf under 1^j <-> x_{j+1}
    for (std::size_t j = 0; 2 * j + 2 <= window; ++j)
      out.push_back({"x" + std::string(j, '1'), "x" + std::string(2 * j + 1, '1'), "x" + std::string(2 * j + 2, '1')});
    return out;
  }
  if (window == 0) return out;
  for (const auto& w : tree_words(n, window - 1)) out.push_back({"x" + w, "x1" + w, "x2" + w});
  return out;
}

/// Parses `base` or `base(p)`.
inline std::pair<std::string, std::optional<std::size_t>> split_parameter(std::string_view name) {
  auto open = name.find('(');
  if (open == std::string_view::npos || name.back() != ')') return {std::string(name), std::nullopt};
  auto digits = name.substr(open + 1, name.size() - open - 2);
  if (digits.empty() || digits.size() > 6 ||
      !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return {std::string(name), std::nullopt};
  return {std::string(name.substr(0, open)), std::stoul(std::string(digits))};
}

}  // namespace detail

inline std::optional<Family> find_family(std::string_view full_name) {
  auto [base, param] = detail::split_parameter(full_name);
  Family f;
  if (base == "cycle_inf" && !param) {
    f.name = "cycle_inf";
    f.note = "C_inf: x_k -> x_{k+1}, k >= 1";
    f.default_window = 9;
    f.truncate = [](std::size_t K) { return detail::half_line(K, false); };
    f.expected = detail::stored_report(false, false, true, true, false);
    f.expected.infinite_path = detail::numbered_tail("cycle_inf", 1, "omega = ... e3 e2 e1 from x1");
    f.pairing = PairingRule{"x_k -> {x_{2k}, x_{2k+1}}", detail::doubling_pairs};
    f.window_for_edges = [](std::size_t m) { return m + 1; };
  } else if ((base == "int_line" || base == "int_line_loops") && !param) {
    bool loops = base == "int_line_loops";
    f.name = base;
    f.note = loops ? "integer line x_k -> x_{k+1} with a loop w_k at every vertex" : "integer line x_k -> x_{k+1}, k in Z";
    f.default_window = 4;
    f.truncate = [loops](std::size_t K) { return detail::integer_line(K, loops); };
    // the transpose is again an integer line (with loops), so the commutant test holds
    f.expected = detail::stored_report(false, false, true, true, true);
    f.expected.infinite_path = detail::numbered_tail(base, 0, "tail omega_k = ... e_{k+1} e_k from any x_k; certificate from x0");
    f.pairing = PairingRule{"s >= 0 -> {x_{4s+1}, x_{4s+3}}, -m -> {x_{4m-2}, x_{4m}}", detail::integer_pairs};
    f.window_for_edges = [](std::size_t m) { return m; };
  } else if (base == "half_line_loops" && !param) {
    f.name = base;
    f.note = "H = {x_k, e_k, w_k : k >= 1}, one-sided line with loops";
    f.default_window = 9;
    f.truncate = [](std::size_t K) { return detail::half_line(K, true); };
    f.expected = detail::stored_report(false, false, true, true, false);
    f.expected.infinite_path = detail::numbered_tail(base, 1, "omega = ... e3 e2 e1 from x1");
    f.pairing = PairingRule{"x_k -> {x_{2k}, x_{2k+1}}", detail::doubling_pairs};
    f.window_for_edges = [](std::size_t m) { return m + 1; };
  } else if (base == "half_line_loops_t" && !param) {
    f.name = base;
    f.note = "transpose of H: every path runs down to x1; loops give single cycles only";
    f.default_window = 9;
    f.truncate = [](std::size_t K) { return transpose(detail::half_line(K, true)); };
    f.expected = detail::stored_report(false, false, false, false, true);
  } else if (base == "rationals_Q" && !param) {
    f.name = base;
    f.note = "Q: x_q -> x_q' for p <= q; infinite out-degree, metadata only";
    f.expected = detail::stored_report(false, false, true, true, true);
    f.expected.infinite_path = InfinitePathCertificate{
        "rationals_Q", "x_0", "omega along the integer points x_0 -> x_1 -> x_2 -> ...", [](std::size_t m) {
          std::vector<std::string> out;
          for (std::size_t i = 0; i < m; ++i) out.push_back("e_" + std::to_string(i + 1) + "_" + std::to_string(i));
          return out;
        }};
  } else if (base == "tree_Gn" && param && *param >= 1 && *param <= 9) {
    std::size_t n = *param;
    f.name = "tree_Gn(" + std::to_string(n) + ")";
    f.note = "sideways tree on words over n letters, x_w -> x_{iw}";
    f.default_window = n == 1 ? 8 : 3;
    f.truncate = [n](std::size_t K) { return detail::bifurcating_tree(n, K); };
    // n = 1 is C_inf, whose transpose also fails; for n >= 2 the transpose is not partly free
    f.expected = detail::stored_report(false, false, true, true, false);
    f.expected.infinite_path = InfinitePathCertificate{
        f.name, "x", "omega along the 1-branch: x -> x1 -> x11 -> ...", [](std::size_t m) {
          std::vector<std::string> out;
          for (std::size_t i = 1; i <= m; ++i) out.push_back("e" + std::string(i, '1'));
          return out;
        }};
    f.pairing = PairingRule{n == 1 ? "1^j -> {1^{2j+1}, 1^{2j+2}}" : "x_w -> {x_{1w}, x_{2w}}",
                            [n](std::size_t K) { return detail::tree_pairs(n, K); }};
    f.window_for_edges = [](std::size_t m) { return m; };
  } else if (base == "star_in" && !param) {
    f.name = base;
    f.note = "e_k: x1 -> x_k, k >= 1 (e1 is a loop)";
    f.default_window = 6;
    f.truncate = [](std::size_t K) {
      Graph g;
      for (std::size_t k = 1; k <= K; ++k) g.add_vertex("x" + std::to_string(k));
      for (std::size_t k = 1; k <= K; ++k) g.add_edge("e" + std::to_string(k), "x1", "x" + std::to_string(k));
      return g;
    };
    f.expected = detail::stored_report(false, false, false, false, false);
  } else if (base == "two_vertex_multi") {
    f.name = base;
    f.note = "x1, x2 joined by infinitely many edges e_k: x1 -> x2";
    f.default_window = param.value_or(4);
    f.truncate = [](std::size_t K) {
      Graph g;
      g.add_vertex("x1");
      g.add_vertex("x2");
      for (std::size_t k = 1; k <= K; ++k) g.add_edge("e" + std::to_string(k), "x1", "x2");
      return g;
    };
    f.expected = detail::stored_report(false, false, false, false, false);
  } else if (base == "zigzag" && !param) {
    f.name = base;
    f.note = "e_{2m}: x_{2m} -> x_{2m+1}, e_{2m+1}: x_{2m+2} -> x_{2m+1}";
    f.default_window = 4;
    f.truncate = [](std::size_t window) {
      Graph g;
      const long K = static_cast<long>(window);
      for (long k = -K; k <= K; ++k) g.add_vertex("x" + detail::signed_suffix(k));
      for (long k = -K; k < K; ++k) {
        bool even = k % 2 == 0;
        auto lo = "x" + detail::signed_suffix(k);
        auto hi = "x" + detail::signed_suffix(k + 1);
        g.add_edge("e" + detail::signed_suffix(k), even ? lo : hi, even ? hi : lo);
      }
      return g;
    };
    f.expected = detail::stored_report(false, false, false, false, false);
  } else {
    return std::nullopt;
  }
  if (f.truncate) {
    auto inner = f.truncate;
    auto name = f.name;
    f.truncate = [inner, name](std::size_t K) {
      auto g = inner(K);
      g.set_truncation({name, K});
      return g;
    };
  }
  return f;
}

inline std::vector<std::string> family_names() {
  return {"cycle_inf", "int_line", "int_line_loops", "half_line_loops", "half_line_loops_t", "rationals_Q",
          "tree_Gn(2)", "star_in", "two_vertex_multi", "zigzag"};
}

struct FamilyClassification {
  PropertyReport report;
  std::optional<Graph> window;  // attached for simulation only
};

/// Stored classification of a countable family; the window at K does not drive it.
inline FamilyClassification classify_family(std::string_view name, std::optional<std::size_t> window = std::nullopt) {
  auto f = find_family(name);
  if (!f) throw FamilyError("unknown family '" + std::string(name) + "'");
  FamilyClassification out{f->expected, std::nullopt};
  if (f->truncate) out.window = f->truncate(window.value_or(f->default_window));
  return out;
}

/// The first m certificate edges exist in g, compose from the start vertex and never
/// repeat an edge.
inline bool verify_certificate(const InfinitePathCertificate& cert, const Graph& g, std::size_t m) {
  auto names = cert.first_edges(m);
  auto start = g.find_vertex(cert.start_vertex);
  if (!start || names.size() != m) return false;
  Vertex at = *start;
  std::vector<char> used(g.edge_count(), 0);
  for (const auto& n : names) {
    auto e = g.find_edge(n);
    if (!e || g.source(*e) != at || used[index(*e)]) return false;
    used[index(*e)] = 1;
    at = g.range(*e);
  }
  return true;
}

}  // namespace pfree
