#pragma once

#include <doctest.h>

#include <Eigen/Dense>

#include "postlie/matrix.hpp"
#include "postlie/random.hpp"

namespace postlie::test {

inline Eigen::MatrixXd to_eigen(const RealMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  Eigen::MatrixXd e(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) e(i, j) = m(i, j);
  return e;
}

inline RealMatrix from_eigen(const Eigen::MatrixXd& e) {
  RealMatrix m(static_cast<std::size_t>(e.rows()));
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

/// Random matrix rescaled to Frobenius norm `size`.
inline RealMatrix random_with_norm(Rng& rng, std::size_t n, double size) {
  RealMatrix m = rng.real_matrix(n);
  return (size / frobenius_norm(m)) * m;
}

}  // namespace postlie::test
