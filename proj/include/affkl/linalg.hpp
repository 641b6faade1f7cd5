#pragma once

#include <vector>
#include <cstddef>
#include <stdexcept>
#include <algorithm>

#include "affkl/field.hpp"

namespace affkl {

template <class T>
class Mat {
public:
  Mat() : r_(0), c_(0) {}
  Mat(size_t r, size_t c, T fill = T()) : r_(r), c_(c), d_(r * c, fill) {}
  size_t rows() const { return r_; }
  size_t cols() const { return c_; }
  T& operator()(size_t i, size_t j) { return d_[i * c_ + j]; }
  const T& operator()(size_t i, size_t j) const { return d_[i * c_ + j]; }
  bool operator==(const Mat& o) const { return r_ == o.r_ && c_ == o.c_ && d_ == o.d_; }

  static Mat identity(size_t n, T zero, T one) {
    Mat m(n, n, zero);
    for (size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

private:
  size_t r_, c_;
  std::vector<T> d_;
};

template <class K>
Mat<K> mat_mul(const Mat<K>& a, const Mat<K>& b, K zero) {
  if (a.cols() != b.rows()) throw std::logic_error("mat_mul: shape");
  Mat<K> out(a.rows(), b.cols(), zero);
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k).is_zero()) continue;
      for (size_t j = 0; j < b.cols(); ++j) {
        if (b(k, j).is_zero()) continue;
        out(i, j) += a(i, k) * b(k, j);
      }
    }
  return out;
}

// Row-echelon workspace: incremental rank / kernel computations over a field.
// Rows are inserted one at a time; pivots recorded per column.
template <class K>
class Echelon {
public:
  explicit Echelon(size_t ncols, K zero) : ncols_(ncols), zero_(zero), pivot_of_col_(ncols, SIZE_MAX) {}

  // reduces row in place; returns true if the row added a new pivot
  bool insert(std::vector<K>& row) {
    reduce(row);
    size_t lead = leading(row);
    if (lead == SIZE_MAX) return false;
    K inv = row[lead].inv();
    for (size_t j = lead; j < ncols_; ++j)
      if (!row[j].is_zero()) row[j] = row[j] * inv;
    pivot_of_col_[lead] = rows_.size();
    pivot_cols_.push_back(lead);
    rows_.push_back(row);
    return true;
  }

  void reduce(std::vector<K>& row) const {
    for (size_t r = 0; r < rows_.size(); ++r) {
      size_t pc = pivot_cols_[r];
      if (row[pc].is_zero()) continue;
      K f = row[pc];
      const auto& pr = rows_[r];
      for (size_t j = pc; j < ncols_; ++j)
        if (!pr[j].is_zero()) row[j] -= f * pr[j];
    }
  }

  size_t rank() const { return rows_.size(); }
  const std::vector<size_t>& pivot_cols() const { return pivot_cols_; }

  // kernel basis of the matrix whose rows were inserted
  std::vector<std::vector<K>> kernel(K one) const {
    // back-substitute into fully reduced form first
    std::vector<std::vector<K>> rr = rows_;
    for (size_t r = rr.size(); r-- > 0;) {
      for (size_t q = 0; q < r; ++q) {
        size_t pc = pivot_cols_[r];
        if (rr[q][pc].is_zero()) continue;
        K f = rr[q][pc];
        for (size_t j = 0; j < ncols_; ++j)
          if (!rr[r][j].is_zero()) rr[q][j] -= f * rr[r][j];
      }
    }
    std::vector<char> is_pivot(ncols_, 0);
    for (size_t pc : pivot_cols_) is_pivot[pc] = 1;
    std::vector<std::vector<K>> basis;
    for (size_t j = 0; j < ncols_; ++j) {
      if (is_pivot[j]) continue;
      std::vector<K> v(ncols_, zero_);
      v[j] = one;
      for (size_t r = 0; r < rr.size(); ++r) {
        if (!rr[r][j].is_zero()) v[pivot_cols_[r]] = -rr[r][j];
      }
      basis.push_back(std::move(v));
    }
    return basis;
  }

private:
  size_t leading(const std::vector<K>& row) const {
    for (size_t j = 0; j < ncols_; ++j)
      if (!row[j].is_zero()) return j;
    return SIZE_MAX;
  }
  size_t ncols_;
  K zero_;
  std::vector<size_t> pivot_of_col_;
  std::vector<size_t> pivot_cols_;
  std::vector<std::vector<K>> rows_;
};

// Kernel basis of a dense matrix (rows are constraints).
template <class K>
std::vector<std::vector<K>> kernel_basis(const std::vector<std::vector<K>>& rows, size_t ncols,
                                         K zero, K one) {
  Echelon<K> ech(ncols, zero);
  for (auto row : rows) ech.insert(row);
  return ech.kernel(one);
}

template <class K>
size_t mat_rank(Mat<K> m, K zero) {
  Echelon<K> ech(m.cols(), zero);
  for (size_t i = 0; i < m.rows(); ++i) {
    std::vector<K> row(m.cols(), zero);
    for (size_t j = 0; j < m.cols(); ++j) row[j] = m(i, j);
    ech.insert(row);
  }
  return ech.rank();
}

// Inverse over a field; throws if singular.
template <class K>
Mat<K> mat_inverse(const Mat<K>& m, K zero, K one) {
  size_t n = m.rows();
  if (n != m.cols()) throw std::logic_error("mat_inverse: not square");
  Mat<K> a = m, inv = Mat<K>::identity(n, zero, one);
  for (size_t col = 0; col < n; ++col) {
    size_t piv = SIZE_MAX;
    for (size_t i = col; i < n; ++i)
      if (!a(i, col).is_zero()) { piv = i; break; }
    if (piv == SIZE_MAX) throw std::domain_error("mat_inverse: singular");
    if (piv != col)
      for (size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    K f = a(col, col).inv();
    for (size_t j = 0; j < n; ++j) { a(col, j) *= f; inv(col, j) *= f; }
    for (size_t i = 0; i < n; ++i) {
      if (i == col || a(i, col).is_zero()) continue;
      K g = a(i, col);
      for (size_t j = 0; j < n; ++j) {
        a(i, j) -= g * a(col, j);
        inv(i, j) -= g * inv(col, j);
      }
    }
  }
  return inv;
}

template <class K>
bool mat_is_invertible(const Mat<K>& m, K zero) {
  if (m.rows() != m.cols()) return false;
  return mat_rank(m, zero) == m.rows();
}

// Sparse constraint row used by the big solvers: (column index, value) pairs.
template <class K>
struct SparseRow {
  std::vector<std::pair<size_t, K>> terms;
  void add(size_t col, const K& v) {
    if (!v.is_zero()) terms.emplace_back(col, v);
  }
};

// Kernel of a sparse constraint system. Generic exact path: every row goes
// through the echelon. Specialised steered path for rationals below.
template <class K>
std::vector<std::vector<K>> sparse_kernel(const std::vector<SparseRow<K>>& rows, size_t ncols,
                                          K zero, K one) {
  Echelon<K> ech(ncols, zero);
  std::vector<K> dense(ncols, zero);
  for (const auto& sr : rows) {
    std::fill(dense.begin(), dense.end(), zero);
    for (auto& [c, v] : sr.terms) dense[c] += v;
    std::vector<K> row = dense;
    ech.insert(row);
    if (ech.rank() == ncols) break;  // kernel already trivial
  }
  return ech.kernel(one);
}

// Rational kernel with mod-p steering: ranks and pivots are found modulo a
// large prime, then each kernel vector is reconstructed exactly and verified
// against every constraint. Falls back to the direct path on any mismatch.
std::vector<std::vector<Rat>> sparse_kernel_steered(const std::vector<SparseRow<Rat>>& rows,
                                                    size_t ncols);

}  // namespace affkl
