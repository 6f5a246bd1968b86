#pragma once

// The BCH-recursion chi(tx) = tx + BCH(-pi+(chi), tx) - (-pi+(chi)) - tx,
// its graded (Magnus-type) expansion Omega_n, and the Bernoulli series of the
// inverse post-Lie dexp.

#include <cstddef>
#include <optional>
#include <vector>

#include "postlie/rational.hpp"
#include "postlie/splitting.hpp"

namespace postlie {

struct ChiOptions {
  double tol = 1e-14;
  int max_iter = 200;
  double radius = kDefaultBchRadius;
  /// Start of the iteration; defaults to tx.
  std::optional<RealMatrix> initial_guess;
};

struct ChiResult {
  RealMatrix value;
  int iterations = 0;
  /// Frobenius distance between the last two iterates.
  double last_step = 0.0;
};

/// Fixed point c = pi+(c) + log(exp(-pi+(c)) exp(tx)), iterated from c0.
/// Throws DomainError if |tx|_F exceeds the radius and ConvergenceError
/// after max_iter sweeps.
ChiResult chi_fixed_point(const SplittingSpec& spec, const RealMatrix& x, double t, const ChiOptions& options = {});

/// |c - pi+(c) - log(exp(-pi+(c)) exp(tx))|_F
double chi_fixed_point_residual(const SplittingSpec& spec, const RealMatrix& x, double t, const RealMatrix& chi);

/// |exp(tx) - exp(pi+ chi) exp(pi- chi)|_F
double factorization_residual(const SplittingSpec& spec, const RealMatrix& x, double t, const RealMatrix& chi);

/// |exp(tx) - exp(-pi-(chi_m)) exp(-pi+(chi_m))|_F where chi_m = chi(-tx).
double alternate_factorization_residual(const SplittingSpec& spec, const RealMatrix& x, double t,
                                        const RealMatrix& chi_minus);

/// B_0 .. B_n with B_1 = -1/2.
class BernoulliTable {
 public:
  explicit BernoulliTable(std::size_t n);
  std::size_t size() const noexcept { return values_.size(); }
  const Rational& operator[](std::size_t k) const { return values_.at(k); }
  const std::vector<Rational>& values() const noexcept { return values_; }

 private:
  std::vector<Rational> values_;
};

/// Truncated series sum_{n=1}^{order} t^n c_n.
template <class T>
struct GradedSeries {
  std::size_t order = 0;
  std::vector<Matrix<T>> coefficients;  // coefficients[n-1] multiplies t^n
  Matrix<T> base_point;
  SplittingSpec spec;

  const Matrix<T>& operator[](std::size_t n) const { return coefficients.at(n - 1); }

  Matrix<T> evaluate(const T& t) const {
    Matrix<T> sum(base_point.dim());
    T power = t;
    for (const auto& c : coefficients) {
      sum.add_scaled(power, c);
      power *= t;
    }
    return sum;
  }
};

inline constexpr std::size_t kDefaultMagnusOrder = 8;

/// Omega_1 .. Omega_order from the post-Lie Magnus recursion with ad*_x = [[x, .]].
template <class T>
GradedSeries<T> magnus_coefficients(const SplittingSpec& spec, const Matrix<T>& a0,
                                    std::size_t order = kDefaultMagnusOrder);

/// chi_1 .. chi_order from the closed-form low-order terms (order <= 3).
template <class T>
std::vector<Matrix<T>> chi_printed_terms(const SplittingSpec& spec, const Matrix<T>& x, std::size_t order);

/// sum_{k<=n} B_k/k! ad*_x^k(y)
template <class T>
Matrix<T> dexp_star_inv(const SplittingSpec& spec, const Matrix<T>& x, const Matrix<T>& y, std::size_t n);

}  // namespace postlie
