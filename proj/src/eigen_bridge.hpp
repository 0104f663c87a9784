#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cardio/sparse.hpp"

namespace cardio::detail {

using EigenSparse = Eigen::SparseMatrix<double>;

inline EigenSparse to_eigen(const SparseMatrix& m) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(m.nnz());
  for (const auto& e : m.to_triplets()) t.emplace_back(e.row, e.col, e.value);
  EigenSparse out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

inline Eigen::MatrixXd to_dense(const SparseMatrix& m) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (const auto& e : m.to_triplets()) out(e.row, e.col) += e.value;
  return out;
}

inline Eigen::Map<const Eigen::VectorXd> view(std::span<const double> x) {
  return {x.data(), static_cast<Eigen::Index>(x.size())};
}

inline Vector to_vector(const Eigen::VectorXd& x) { return Vector(x.data(), x.data() + x.size()); }

}  // namespace cardio::detail
