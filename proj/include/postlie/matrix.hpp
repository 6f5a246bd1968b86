#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "postlie/error.hpp"
#include "postlie/rational.hpp"

namespace postlie {

/// Dense square matrix over a scalar field. Instantiated with `double`
/// (numeric mode) and `Rational` (exact mode); the two modes never mix,
/// which the type system enforces.
template <class T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), data_(n * n, T(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  /// Row-major construction; throws DimensionError unless the rows are square.
  static Matrix from_rows(std::initializer_list<std::initializer_list<T>> rows) {
    Matrix m(rows.size());
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != m.n_) throw DimensionError("matrix rows must form a square array");
      std::size_t j = 0;
      for (const auto& v : row) m(i, j++) = v;
      ++i;
    }
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    Matrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.n_) throw DimensionError("matrix rows must form a square array");
      for (std::size_t j = 0; j < m.n_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  /// Matrix unit E_ij.
  static Matrix unit(std::size_t n, std::size_t i, std::size_t j) {
    Matrix m(n);
    m(i, j) = T(1);
    return m;
  }

  std::size_t dim() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  std::span<const T> values() const noexcept { return data_; }
  std::span<T> values() noexcept { return data_; }

  Matrix& operator+=(const Matrix& o) {
    require_same_dim(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    require_same_dim(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const T& s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  /// this += s * o
  Matrix& add_scaled(const T& s, const Matrix& o) {
    require_same_dim(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * o.data_[k];
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
  friend Matrix operator*(const T& s, Matrix a) { return a *= s; }
  friend Matrix operator-(Matrix a) {
    for (auto& v : a.data_) v = -v;
    return a;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    a.require_same_dim(b);
    const std::size_t n = a.n_;
    Matrix c(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const T& aik = a(i, k);
        if (is_zero(aik)) continue;
        for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
      }
    }
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.n_ == b.n_ && a.data_ == b.data_;
  }

  Matrix transpose() const {
    Matrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero_matrix() const {
    for (const auto& v : data_)
      if (!is_zero(v)) return false;
    return true;
  }

  T trace() const {
    T s(0);
    for (std::size_t i = 0; i < n_; ++i) s += (*this)(i, i);
    return s;
  }

  void require_same_dim(const Matrix& o) const {
    if (n_ != o.n_)
      throw DimensionError("dimension mismatch: " + std::to_string(n_) + " vs " +
                           std::to_string(o.n_));
  }

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using RationalMatrix = Matrix<Rational>;

/// Elements of a matrix Lie algebra are plain square matrices.
template <class T>
using LieElement = Matrix<T>;

/// Frobenius norm, evaluated in double precision for either mode.
template <class T>
double frobenius_norm(const Matrix<T>& m) {
  double s = 0.0;
  for (const auto& v : m.values()) {
    const double d = to_double(v);
    s += d * d;
  }
  return std::sqrt(s);
}

/// Induced 1-norm (max column sum).
inline double one_norm(const RealMatrix& m) {
  double best = 0.0;
  for (std::size_t j = 0; j < m.dim(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i) s += std::abs(m(i, j));
    if (s > best) best = s;
  }
  return best;
}

inline bool all_finite(const RealMatrix& m) {
  for (double v : m.values())
    if (!std::isfinite(v)) return false;
  return true;
}

template <class T>
RealMatrix to_real(const Matrix<T>& m) {
  RealMatrix r(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) r(i, j) = to_double(m(i, j));
  return r;
}

inline RationalMatrix to_rational(const RealMatrix& m) {
  RationalMatrix r(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) r(i, j) = rational_from_double(m(i, j));
  return r;
}

}  // namespace postlie
