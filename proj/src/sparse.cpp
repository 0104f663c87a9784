#include "cardio/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cardio {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries) {
  for (const auto& t : entries) {
    if (t.row < 0 || static_cast<std::size_t>(t.row) >= rows || t.col < 0 || static_cast<std::size_t>(t.col) >= cols) {
      throw std::out_of_range("triplet index out of range");
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  SparseMatrix m(rows, cols);
  m.cols_idx_.reserve(entries.size());
  m.values_.reserve(entries.size());
  std::vector<std::size_t> counts(rows, 0);
  for (std::size_t k = 0; k < entries.size();) {
    const Index r = entries[k].row, c = entries[k].col;
    double v = 0.0;
    for (; k < entries.size() && entries[k].row == r && entries[k].col == c; ++k) v += entries[k].value;
    m.cols_idx_.push_back(c);
    m.values_.push_back(v);
    ++counts[r];
  }
  for (std::size_t r = 0; r < rows; ++r) m.row_ptr_[r + 1] = m.row_ptr_[r] + counts[r];
  return m;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += values_[k] * x[cols_idx_[k]];
    y[r] = s;
  }
}

void SparseMatrix::multiply_transpose(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) y[cols_idx_[k]] += values_[k] * x[r];
  }
}

Vector SparseMatrix::operator*(std::span<const double> x) const {
  Vector y(rows_);
  multiply(x, y);
  return y;
}

double SparseMatrix::at(Index r, Index c) const {
  const auto b = cols_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
  const auto e = cols_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
  const auto it = std::lower_bound(b, e, c);
  if (it == e || *it != c) return 0.0;
  return values_[static_cast<std::size_t>(it - cols_idx_.begin())];
}

Vector SparseMatrix::diagonal() const {
  Vector d(std::min(rows_, cols_), 0.0);
  for (std::size_t r = 0; r < d.size(); ++r) d[r] = at(static_cast<Index>(r), static_cast<Index>(r));
  return d;
}

std::vector<Triplet> SparseMatrix::to_triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      out.push_back({static_cast<Index>(r), cols_idx_[k], values_[k]});
    }
  }
  return out;
}

SparseMatrix SparseMatrix::transpose() const {
  auto t = to_triplets();
  for (auto& e : t) std::swap(e.row, e.col);
  return from_triplets(cols_, rows_, std::move(t));
}

SparseMatrix SparseMatrix::scaled(double s) const {
  SparseMatrix m = *this;
  for (auto& v : m.values_) v *= s;
  return m;
}

double SparseMatrix::norm_inf() const {
  double best = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += std::abs(values_[k]);
    best = std::max(best, s);
  }
  return best;
}

bool SparseMatrix::is_symmetric(double tol) const {
  if (rows_ != cols_) return false;
  double amax = 0.0;
  for (double v : values_) amax = std::max(amax, std::abs(v));
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const double other = at(cols_idx_[k], static_cast<Index>(r));
      if (std::abs(values_[k] - other) > tol * amax) return false;
    }
  }
  return true;
}

SparseMatrix combine(double a, const SparseMatrix& A, double b, const SparseMatrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) throw std::invalid_argument("combine: shape mismatch");
  auto t = A.to_triplets();
  for (auto& e : t) e.value *= a;
  for (auto e : B.to_triplets()) {
    e.value *= b;
    t.push_back(e);
  }
  return SparseMatrix::from_triplets(A.rows(), A.cols(), std::move(t));
}

SparseMatrix block2x2(const SparseMatrix& a, const SparseMatrix& b, const SparseMatrix& c, const SparseMatrix& d) {
  if (a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() || b.cols() != d.cols()) {
    throw std::invalid_argument("block2x2: incompatible block shapes");
  }
  const auto r0 = static_cast<Index>(a.rows());
  const auto c0 = static_cast<Index>(a.cols());
  std::vector<Triplet> t;
  t.reserve(a.nnz() + b.nnz() + c.nnz() + d.nnz());
  for (auto e : a.to_triplets()) t.push_back(e);
  for (auto e : b.to_triplets()) t.push_back({e.row, e.col + c0, e.value});
  for (auto e : c.to_triplets()) t.push_back({e.row + r0, e.col, e.value});
  for (auto e : d.to_triplets()) t.push_back({e.row + r0, e.col + c0, e.value});
  return SparseMatrix::from_triplets(a.rows() + c.rows(), a.cols() + b.cols(), std::move(t));
}

namespace vec {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double sum(std::span<const double> a) { return std::accumulate(a.begin(), a.end(), 0.0); }

}  // namespace vec

}  // namespace cardio
