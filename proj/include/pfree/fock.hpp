#pragma once

// Truncated Fock space l2(F+(G)) restricted to paths of length <= N, and the exact
// left/right regular representations on it. Images longer than N are sent to 0.

#include <cstdint>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pfree/graph.hpp"
#include "pfree/path.hpp"
#include "pfree/rational.hpp"
#include "pfree/sparse.hpp"

namespace pfree {

class BasisMismatch : public std::invalid_argument {
 public:
  BasisMismatch() : std::invalid_argument("operators live on different Fock bases") {}
};

class FockBasis {
 public:
  FockBasis(std::shared_ptr<const Graph> g, std::size_t depth, std::size_t cap = default_basis_cap)
      : graph_(std::move(g)), depth_(depth), tree_(detail::build_path_tree(*graph_, depth, cap)) {
    paths_.reserve(tree_.nodes.size());
    for (std::size_t i = 0; i < tree_.nodes.size(); ++i) paths_.push_back(detail::path_of(*graph_, tree_, i));
  }

  const Graph& graph() const noexcept { return *graph_; }
  std::shared_ptr<const Graph> graph_ptr() const noexcept { return graph_; }
  std::size_t depth() const noexcept { return depth_; }
  std::size_t dim() const noexcept { return paths_.size(); }
  const std::vector<Path>& paths() const noexcept { return paths_; }
  const Path& path(std::size_t i) const { return paths_.at(i); }
  std::size_t length(std::size_t i) const { return tree_.nodes.at(i).length; }
  Vertex source(std::size_t i) const { return tree_.nodes.at(i).source; }
  Vertex range(std::size_t i) const { return tree_.nodes.at(i).range; }

  std::size_t unit_index(Vertex x) const { return tree_.unit_of.at(index(x)); }

  /// Ordinal of e.(path i), if it fits within the depth.
  std::optional<std::size_t> extend(std::size_t i, Edge e) const {
    if (graph_->source(e) != range(i)) return std::nullopt;
    return tree_.child(i, e);
  }

  std::optional<std::size_t> index_of(const Path& p) const {
    if (&p.graph() != graph_.get()) return std::nullopt;
    std::size_t at = unit_index(p.source());
    for (auto e : p.edges()) {
      auto next = extend(at, e);
      if (!next) return std::nullopt;
      at = *next;
    }
    return at;
  }

  /// FNV-1a over the ordered path list, hex.
  std::string hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](const std::string& s) {
      for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
      }
      h ^= 0xff;
      h *= 0x100000001b3ULL;
    };
    for (const auto& p : paths_) mix(graph_->name(p.source()) + ":" + format_path(p));
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
  }

 private:
  std::shared_ptr<const Graph> graph_;
  std::size_t depth_;
  detail::PathTree tree_;
  std::vector<Path> paths_;
};

inline std::shared_ptr<const FockBasis> build_basis(std::shared_ptr<const Graph> g, std::size_t depth,
                                                    std::size_t cap = default_basis_cap) {
  return std::make_shared<const FockBasis>(std::move(g), depth, cap);
}

/// Operator on a truncated Fock space.
class SparseOp {
 public:
  SparseOp(std::shared_ptr<const FockBasis> basis, SparseMatrix<Rational> m)
      : basis_(std::move(basis)), matrix_(std::move(m)) {
    if (matrix_.dim() != basis_->dim()) throw std::invalid_argument("matrix does not match basis");
  }
  static SparseOp zero(std::shared_ptr<const FockBasis> b) {
    auto n = b->dim();
    return {std::move(b), SparseMatrix<Rational>(n)};
  }
  static SparseOp identity(std::shared_ptr<const FockBasis> b) {
    auto n = b->dim();
    return {std::move(b), SparseMatrix<Rational>::identity(n)};
  }

  const FockBasis& basis() const noexcept { return *basis_; }
  const std::shared_ptr<const FockBasis>& basis_ptr() const noexcept { return basis_; }
  const SparseMatrix<Rational>& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return matrix_.dim(); }
  bool is_zero() const noexcept { return matrix_.is_zero(); }
  Rational at(std::size_t r, std::size_t c) const { return matrix_.at(r, c); }

  SparseOp adjoint() const { return {basis_, matrix_.transpose()}; }

  SparseOp operator+(const SparseOp& o) const { return {same(o), matrix_ + o.matrix_}; }
  SparseOp operator-(const SparseOp& o) const { return {same(o), matrix_ - o.matrix_}; }
  SparseOp operator*(const SparseOp& o) const { return {same(o), matrix_ * o.matrix_}; }
  SparseOp operator*(const Rational& s) const { return {basis_, matrix_ * s}; }
  friend SparseOp operator*(const Rational& s, const SparseOp& a) { return a * s; }

  bool operator==(const SparseOp& o) const { return basis_ == o.basis_ && matrix_ == o.matrix_; }

  /// Keeps only rows and columns whose mask entry is set.
  SparseOp compress(const std::vector<char>& rows, const std::vector<char>& cols) const {
    return {basis_, matrix_.compress(rows, cols)};
  }

 private:
  const std::shared_ptr<const FockBasis>& same(const SparseOp& o) const {
    if (basis_ != o.basis_) throw BasisMismatch();
    return basis_;
  }

  std::shared_ptr<const FockBasis> basis_;
  SparseMatrix<Rational> matrix_;
};

namespace detail {
inline void check_graph(const FockBasis& b, const Path& w) {
  if (&w.graph() != &b.graph()) throw PathError("path belongs to a different graph");
}
}  // namespace detail

/// L_w: xi_v -> xi_{wv} when composable and |wv| <= N. For a unit this is P_x.
inline SparseOp left_op(const std::shared_ptr<const FockBasis>& b, const Path& w) {
  detail::check_graph(*b, w);
  SparseMatrix<Rational> m(b->dim());
  const std::size_t d = w.length();
  for (std::size_t v = 0; v < b->dim(); ++v) {
    if (b->range(v) != w.source() || b->length(v) + d > b->depth()) continue;
    std::size_t at = v;
    for (auto e : w.edges()) at = *b->extend(at, e);
    m.add(at, v, Rational(1));
  }
  return {b, std::move(m)};
}

/// R_w: xi_v -> xi_{vw} when composable and |vw| <= N. For a unit this is Q_x.
inline SparseOp right_op(const std::shared_ptr<const FockBasis>& b, const Path& w) {
  detail::check_graph(*b, w);
  SparseMatrix<Rational> m(b->dim());
  auto start = b->index_of(w);
  if (!start) return {b, std::move(m)};
  for (std::size_t v = 0; v < b->dim(); ++v) {
    if (b->source(v) != w.range() || b->length(v) + w.length() > b->depth()) continue;
    std::size_t at = *start;
    for (auto e : b->path(v).edges()) at = *b->extend(at, e);
    m.add(at, v, Rational(1));
  }
  return {b, std::move(m)};
}

inline SparseOp vertex_projection(const std::shared_ptr<const FockBasis>& b, Vertex x) {
  return left_op(b, Path::unit(b->graph(), x));
}

/// Diagonal mask of basis paths with length <= level.
inline std::vector<char> interior_mask(const FockBasis& b, std::size_t level) {
  std::vector<char> mask(b.dim(), 0);
  for (std::size_t i = 0; i < b.dim(); ++i) mask[i] = b.length(i) <= level ? 1 : 0;
  return mask;
}

/// E_{N-d}: projection onto paths of length <= N - d.
inline SparseOp interior_projection(const std::shared_ptr<const FockBasis>& b, std::size_t d) {
  if (d > b->depth()) throw std::invalid_argument("interior degree exceeds depth");
  auto n = b->dim();
  auto mask = interior_mask(*b, b->depth() - d);
  SparseMatrix<Rational> m(n);
  for (std::size_t i = 0; i < n; ++i)
    if (mask[i]) m.add(i, i, Rational(1));
  return {b, std::move(m)};
}

/// sum over x in vertices of P_x E_level, with E_level the projection onto lengths <= level.
inline SparseOp vertex_projection_at_level(const std::shared_ptr<const FockBasis>& b,
                                           const std::set<Vertex>& vertices, std::size_t level) {
  SparseMatrix<Rational> m(b->dim());
  for (std::size_t i = 0; i < b->dim(); ++i)
    if (b->length(i) <= level && vertices.contains(b->range(i))) m.add(i, i, Rational(1));
  return {b, std::move(m)};
}

/// Coefficients a_w = <A xi_{source(w)}, xi_w>, keyed by basis ordinal; zeros omitted.
class FourierTable {
 public:
  FourierTable() = default;
  explicit FourierTable(std::shared_ptr<const FockBasis> b) : basis_(std::move(b)) {}

  const FockBasis& basis() const { return *basis_; }
  const std::map<std::size_t, Rational>& coefficients() const noexcept { return coeffs_; }

  Rational coefficient(const Path& w) const {
    auto i = basis_->index_of(w);
    if (!i) throw PathError("path outside the basis");
    auto it = coeffs_.find(*i);
    return it == coeffs_.end() ? Rational(0) : it->second;
  }

  void set(const Path& w, const Rational& value) {
    auto i = basis_->index_of(w);
    if (!i) throw PathError("path outside the basis");
    if (value == 0)
      coeffs_.erase(*i);
    else
      coeffs_[*i] = value;
  }

  std::size_t max_length() const {
    std::size_t d = 0;
    for (const auto& [i, v] : coeffs_) d = std::max(d, basis_->length(i));
    return d;
  }

 private:
  std::shared_ptr<const FockBasis> basis_;
  std::map<std::size_t, Rational> coeffs_;
};

inline FourierTable fourier_coefficients(const SparseOp& a) {
  FourierTable t(a.basis_ptr());
  const auto& b = a.basis();
  for (std::size_t w = 0; w < b.dim(); ++w) {
    auto value = a.at(w, b.unit_index(b.source(w)));
    if (value != 0) t.set(b.path(w), value);
  }
  return t;
}

struct Summation {
  enum class Kind { plain, cesaro } kind = Kind::plain;
  std::size_t order = 0;

  static Summation plain(std::size_t d) { return {Kind::plain, d}; }
  static Summation cesaro(std::size_t k) { return {Kind::cesaro, k}; }

  /// Weight on a_w: 1 for plain sums, 1 - |w|/(k+1) for Cesaro means; 0 past the order.
  Rational weight(std::size_t length) const {
    if (length > order) return Rational(0);
    if (kind == Kind::plain) return Rational(1);
    return Rational(1) - make_rational(static_cast<long>(length), static_cast<long>(order + 1));
  }
};

/// sum_{|w| <= order} weight(|w|) a_w L_w over the given basis.
inline SparseOp reconstruct(const FourierTable& t, Summation mode, const std::shared_ptr<const FockBasis>& b) {
  if (&t.basis() != b.get()) throw BasisMismatch();
  auto out = SparseOp::zero(b);
  for (const auto& [i, a] : t.coefficients()) {
    const auto& w = b->path(i);
    auto weight = mode.weight(w.length());
    if (weight == 0) continue;
    out = out + left_op(b, w) * Rational(weight * a);
  }
  return out;
}

struct InitialSpaceForm {
  std::set<Vertex> vertices;                 // vertices x with V xi_x != 0
  std::map<Vertex, std::size_t> levels;      // per vertex: support is P_x E_level
  std::size_t interior_level = 0;            // min level over the index set (N if empty)
};

struct PartialIsometryReport {
  bool is_partial_isometry = false;
  std::optional<SparseOp> initial_projection;
  std::optional<InitialSpaceForm> form;
  std::string failure;  // empty on success
};

/// Checks V*V is an exact projection and, if so, whether it is sum_x P_x E_{m_x}.
inline PartialIsometryReport partial_isometry_report(const SparseOp& v) {
  PartialIsometryReport r;
  auto q = v.adjoint() * v;
  r.initial_projection = q;
  if (!(q.adjoint() == q)) {
    r.failure = "V*V is not self-adjoint";
    return r;
  }
  if (!(q * q == q)) {
    r.failure = "V*V is not idempotent";
    return r;
  }
  r.is_partial_isometry = true;

  const auto& b = v.basis();
  const auto& g = b.graph();
  std::vector<char> diag(b.dim(), 0);
  bool diagonal = true;
  q.matrix().for_each([&](std::size_t row, std::size_t col, const Rational& value) {
    if (row != col || value != 1)
      diagonal = false;
    else
      diag[row] = 1;
  });
  if (!diagonal) {
    r.failure = "initial projection is not diagonal in the path basis";
    return r;
  }

  InitialSpaceForm form;
  form.interior_level = b.depth();
  for (auto x : g.vertices()) {
    std::optional<std::size_t> level;
    std::vector<std::size_t> count_by_length(b.depth() + 1, 0), support_by_length(b.depth() + 1, 0);
    for (std::size_t i = 0; i < b.dim(); ++i) {
      if (b.range(i) != x) continue;
      ++count_by_length[b.length(i)];
      if (diag[i]) {
        ++support_by_length[b.length(i)];
        level = std::max(level.value_or(0), b.length(i));
      }
    }
    if (!level) continue;
    for (std::size_t len = 0; len <= *level; ++len) {
      if (support_by_length[len] != count_by_length[len]) {
        r.failure = "support under P_" + g.name(x) + " is not an initial segment by length";
        return r;
      }
    }
    // The largest level describing the same support: stop before the next nonempty length.
    auto next = *level + 1;
    while (next <= b.depth() && count_by_length[next] == 0) ++next;
    level = next - 1;
    form.vertices.insert(x);
    form.levels[x] = *level;
    form.interior_level = std::min(form.interior_level, *level);
  }
  r.form = std::move(form);
  return r;
}

/// `dim N hash` header, then `row col num/den` sorted by (row, col).
inline std::string export_sparse(const SparseOp& op) {
  std::ostringstream out;
  out << op.basis().dim() << " " << op.basis().depth() << " " << op.basis().hash() << "\n";
  op.matrix().for_each([&](std::size_t r, std::size_t c, const Rational& v) {
    out << r << " " << c << " " << to_fraction(v) << "\n";
  });
  return out.str();
}

}  // namespace pfree
