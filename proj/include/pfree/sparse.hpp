#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pfree {

/// Square row-major sparse matrix. Rows keep their entries sorted by column and
/// never store an explicit zero, so == is exact entrywise equality.
template <typename Scalar>
class SparseMatrix {
 public:
  using Entry = std::pair<std::uint32_t, Scalar>;

  SparseMatrix() = default;
  explicit SparseMatrix(std::size_t dim) : rows_(dim) {}

  static SparseMatrix identity(std::size_t dim) {
    SparseMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.rows_[i].emplace_back(static_cast<std::uint32_t>(i), Scalar(1));
    return m;
  }

  std::size_t dim() const noexcept { return rows_.size(); }

  std::size_t nonzeros() const noexcept {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.size();
    return n;
  }

  bool is_zero() const noexcept {
    return std::all_of(rows_.begin(), rows_.end(), [](const auto& r) { return r.empty(); });
  }

  const std::vector<Entry>& row(std::size_t i) const { return rows_.at(i); }

  Scalar at(std::size_t r, std::size_t c) const {
    const auto& row = rows_.at(r);
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const Entry& e, std::size_t col) { return e.first < col; });
    if (it != row.end() && it->first == c) return it->second;
    return Scalar(0);
  }

  /// entry(r, c) += value, dropping the entry if it cancels.
  void add(std::size_t r, std::size_t c, const Scalar& value) {
    if (r >= dim() || c >= dim()) throw std::out_of_range("sparse entry out of range");
    if (value == 0) return;
    auto& row = rows_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const Entry& e, std::size_t col) { return e.first < col; });
    if (it != row.end() && it->first == c) {
      it->second += value;
      if (it->second == 0) row.erase(it);
    } else {
      row.insert(it, Entry(static_cast<std::uint32_t>(c), value));
    }
  }

  /// Visits (row, col, value) in (row, col) order.
  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t r = 0; r < rows_.size(); ++r)
      for (const auto& [c, v] : rows_[r]) f(r, static_cast<std::size_t>(c), v);
  }

  SparseMatrix transpose() const {
    SparseMatrix t(dim());
    for_each([&](std::size_t r, std::size_t c, const Scalar& v) {
      t.rows_[c].emplace_back(static_cast<std::uint32_t>(r), v);
    });
    return t;
  }

  SparseMatrix operator+(const SparseMatrix& o) const { return combine(o, Scalar(1)); }
  SparseMatrix operator-(const SparseMatrix& o) const { return combine(o, Scalar(-1)); }

  SparseMatrix operator*(const Scalar& s) const {
    SparseMatrix out(dim());
    if (s == 0) return out;
    for (std::size_t r = 0; r < dim(); ++r) {
      out.rows_[r] = rows_[r];
      for (auto& e : out.rows_[r]) e.second *= s;
    }
    return out;
  }

  SparseMatrix operator*(const SparseMatrix& o) const {
    check_dim(o);
    const std::size_t n = dim();
    SparseMatrix out(n);
    std::vector<Scalar> acc(n);
    std::vector<char> used(n, 0);
    std::vector<std::uint32_t> touched;
    for (std::size_t r = 0; r < n; ++r) {
      touched.clear();
      for (const auto& [k, a] : rows_[r]) {
        for (const auto& [c, b] : o.rows_[k]) {
          if (!used[c]) {
            used[c] = 1;
            touched.push_back(c);
            acc[c] = a * b;
          } else {
            acc[c] += a * b;
          }
        }
      }
      std::sort(touched.begin(), touched.end());
      auto& row = out.rows_[r];
      for (auto c : touched) {
        if (acc[c] != 0) row.emplace_back(c, acc[c]);
        used[c] = 0;
      }
    }
    return out;
  }

  bool operator==(const SparseMatrix& o) const { return rows_ == o.rows_; }

  /// Only the listed diagonal positions survive: D * this * D for a 0/1 diagonal D
  /// given as a mask.
  SparseMatrix compress(const std::vector<char>& keep_rows, const std::vector<char>& keep_cols) const {
    SparseMatrix out(dim());
    for (std::size_t r = 0; r < dim(); ++r) {
      if (!keep_rows[r]) continue;
      for (const auto& e : rows_[r])
        if (keep_cols[e.first]) out.rows_[r].push_back(e);
    }
    return out;
  }

 private:
  void check_dim(const SparseMatrix& o) const {
    if (o.dim() != dim()) throw std::invalid_argument("sparse matrix dimension mismatch");
  }

  SparseMatrix combine(const SparseMatrix& o, const Scalar& sign) const {
    check_dim(o);
    SparseMatrix out(dim());
    for (std::size_t r = 0; r < dim(); ++r) {
      const auto& a = rows_[r];
      const auto& b = o.rows_[r];
      auto& row = out.rows_[r];
      std::size_t i = 0, j = 0;
      while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
          row.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
          row.emplace_back(b[j].first, sign * b[j].second);
          ++j;
        } else {
          Scalar v = a[i].second + sign * b[j].second;
          if (v != 0) row.emplace_back(a[i].first, v);
          ++i;
          ++j;
        }
      }
    }
    return out;
  }

  std::vector<std::vector<Entry>> rows_;
};

}  // namespace pfree
