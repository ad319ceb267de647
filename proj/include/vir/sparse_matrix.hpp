#pragma once

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <utility>
#include <vector>

#include "vir/scalar.hpp"

namespace vir {

// Scatter buffer for building one sparse column at a time.
template <class S>
class ColumnAccumulator {
 public:
  explicit ColumnAccumulator(int rows) : work_(rows), mark_(rows, 0) {}

  void add(int row, const S& v) {
    if (!mark_[row]) {
      mark_[row] = 1;
      touched_.push_back(row);
      work_[row] = v;
    } else {
      work_[row] += v;
    }
  }

  std::vector<std::pair<int, S>> flush() {
    std::sort(touched_.begin(), touched_.end());
    std::vector<std::pair<int, S>> out;
    out.reserve(touched_.size());
    for (int r : touched_) {
      if (!ScalarTraits<S>::is_zero(work_[r])) out.emplace_back(r, work_[r]);
      mark_[r] = 0;
      work_[r] = S{};
    }
    touched_.clear();
    return out;
  }

 private:
  std::vector<S> work_;
  std::vector<char> mark_;
  std::vector<int> touched_;
};

// Column-compressed matrix; each column keeps its nonzeros sorted by row.
template <class S>
class SparseMatrix {
 public:
  using Column = std::vector<std::pair<int, S>>;

  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), columns_(cols) {}

  static SparseMatrix identity(int n, const S& value = S(1)) {
    SparseMatrix m(n, n);
    if (!ScalarTraits<S>::is_zero(value))
      for (int i = 0; i < n; ++i) m.columns_[i].emplace_back(i, value);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const Column& column(int c) const { return columns_[c]; }
  void set_column(int c, Column col) { columns_[c] = std::move(col); }

  std::size_t nnz() const {
    std::size_t n = 0;
    for (const auto& c : columns_) n += c.size();
    return n;
  }

  S at(int r, int c) const {
    const auto& col = columns_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const std::pair<int, S>& e, int row) { return e.first < row; });
    if (it != col.end() && it->first == r) return it->second;
    return S{};
  }

  SparseMatrix scaled(const S& s) const {
    SparseMatrix out(rows_, cols_);
    if (ScalarTraits<S>::is_zero(s)) return out;
    for (int c = 0; c < cols_; ++c) {
      auto& dst = out.columns_[c];
      dst.reserve(columns_[c].size());
      for (const auto& [r, v] : columns_[c]) dst.emplace_back(r, v * s);
    }
    return out;
  }

  SparseMatrix conjugate_transpose() const {
    SparseMatrix out(cols_, rows_);
    for (int c = 0; c < cols_; ++c)
      for (const auto& [r, v] : columns_[c]) out.columns_[r].emplace_back(c, ScalarTraits<S>::conj(v));
    return out;
  }

  // this + s * other
  SparseMatrix axpy(const S& s, const SparseMatrix& other) const {
    check_same_shape(other);
    SparseMatrix out(rows_, cols_);
    ColumnAccumulator<S> acc(rows_);
    for (int c = 0; c < cols_; ++c) {
      for (const auto& [r, v] : columns_[c]) acc.add(r, v);
      for (const auto& [r, v] : other.columns_[c]) acc.add(r, s * v);
      out.columns_[c] = acc.flush();
    }
    return out;
  }

  friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) { return a.axpy(S(1), b); }
  friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) { return a.axpy(S(-1), b); }

  // Product restricted to the first `ncols` columns of the right factor;
  // the remaining columns of the result are left empty.
  static SparseMatrix product(const SparseMatrix& a, const SparseMatrix& b, int ncols = -1) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("sparse product: shape mismatch");
    if (ncols < 0 || ncols > b.cols_) ncols = b.cols_;
    SparseMatrix out(a.rows_, b.cols_);
    ColumnAccumulator<S> acc(a.rows_);
    for (int c = 0; c < ncols; ++c) {
      for (const auto& [k, bv] : b.columns_[c])
        for (const auto& [r, av] : a.columns_[k]) acc.add(r, av * bv);
      out.columns_[c] = acc.flush();
    }
    return out;
  }

  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) { return product(a, b); }

  std::vector<S> apply(const std::vector<S>& x) const {
    if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("sparse apply: size mismatch");
    std::vector<S> y(rows_);
    for (int c = 0; c < cols_; ++c) {
      if (ScalarTraits<S>::is_zero(x[c])) continue;
      for (const auto& [r, v] : columns_[c]) y[r] += v * x[c];
    }
    return y;
  }

 private:
  void check_same_shape(const SparseMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("sparse matrix: shape mismatch");
  }

  int rows_ = 0, cols_ = 0;
  std::vector<Column> columns_;
};

}  // namespace vir
