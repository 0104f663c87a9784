#pragma once

#include <span>
#include <vector>

#include "cardio/tensor2.hpp"

namespace cardio {

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Compressed sparse row matrix. Column indices are sorted within each row
/// and no (row, col) pair is stored twice.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols);

  /// Sums duplicate entries; explicit zeros produced by cancellation are kept.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const std::size_t> row_offsets() const { return row_ptr_; }
  std::span<const Index> col_indices() const { return cols_idx_; }
  std::span<const double> values() const { return values_; }

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  /// y = A^T x
  void multiply_transpose(std::span<const double> x, std::span<double> y) const;
  Vector operator*(std::span<const double> x) const;

  double at(Index r, Index c) const;
  Vector diagonal() const;
  SparseMatrix transpose() const;
  SparseMatrix scaled(double s) const;
  double norm_inf() const;
  /// max |A_ij - A_ji| <= tol * max |A_ij|
  bool is_symmetric(double tol) const;
  std::vector<Triplet> to_triplets() const;

  /// Computes a * A + b * B on the union pattern.
  friend SparseMatrix combine(double a, const SparseMatrix& A, double b, const SparseMatrix& B);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<Index> cols_idx_;
  std::vector<double> values_;
};

SparseMatrix combine(double a, const SparseMatrix& A, double b, const SparseMatrix& B);

/// Assembles [[A, B], [C, D]] from four blocks with compatible shapes.
SparseMatrix block2x2(const SparseMatrix& a, const SparseMatrix& b, const SparseMatrix& c, const SparseMatrix& d);

namespace vec {
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);
/// y += alpha x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double sum(std::span<const double> a);
}  // namespace vec

}  // namespace cardio
