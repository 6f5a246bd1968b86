#pragma once

// Dense matrix Lie-algebra arithmetic: commutators, the matrix exponential
// and principal logarithm, and the Baker-Campbell-Hausdorff map
// BCH(a, b) = log(exp(a) exp(b)).
//
// exp/log/BCH are numeric-only. Near the identity they are evaluated in
// "minus identity" form (expm1 / log1pm) so that small arguments keep full
// relative accuracy instead of an absolute 1e-16 floor.

#include "postlie/matrix.hpp"

namespace postlie {

inline constexpr double kDefaultBchRadius = 0.5;

/// [a, b] = ab - ba
template <class T>
Matrix<T> bracket(const Matrix<T>& a, const Matrix<T>& b) {
  return a * b - b * a;
}

/// Invertible matrix, element of the matrix group GL(n).
class GroupElement {
 public:
  /// Throws DomainError when |det m| <= det_floor or det is not finite.
  explicit GroupElement(RealMatrix m, double det_floor = 0.0);

  static GroupElement identity(std::size_t n) { return GroupElement(RealMatrix::identity(n)); }

  const RealMatrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.dim(); }
  double determinant() const;

  GroupElement inverse() const;

  /// g^{-1} a g
  RealMatrix conjugate(const RealMatrix& a) const;

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b);

 private:
  struct Unchecked {};
  GroupElement(RealMatrix m, Unchecked) : m_(std::move(m)) {}
  RealMatrix m_;
};

/// exp(a) by scaling and squaring with a diagonal Pade approximant
/// (degree 3..13 chosen from the 1-norm). Throws NonFiniteError.
GroupElement expm(const RealMatrix& a);

/// exp(a) - I, accurate relative to |a| when a is small.
RealMatrix expm1(const RealMatrix& a);

/// Principal logarithm via inverse scaling and squaring. Throws BranchError
/// when an eigenvalue lies on the closed negative real axis.
RealMatrix logm(const GroupElement& g);
RealMatrix logm(const RealMatrix& g);

/// log(I + f), accurate relative to |f| when f is small.
RealMatrix log1pm(const RealMatrix& f);

/// Principal square root (Denman-Beavers iteration).
RealMatrix sqrtm(const RealMatrix& a);

/// BCH(a, b) = log(exp(a) exp(b)). Throws DomainError when
/// |a|_F + |b|_F exceeds `radius`.
RealMatrix bch(const RealMatrix& a, const RealMatrix& b, double radius = kDefaultBchRadius);

/// BCH(a, b) - a - b
RealMatrix bch_reduced(const RealMatrix& a, const RealMatrix& b, double radius = kDefaultBchRadius);

/// log(exp(a) exp(b)) with no radius contract; only the branch condition of
/// the principal logarithm is enforced.
RealMatrix bch_unchecked(const RealMatrix& a, const RealMatrix& b);

}  // namespace postlie
