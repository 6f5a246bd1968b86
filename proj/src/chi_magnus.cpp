#include "postlie/chi_magnus.hpp"

#include <map>

namespace postlie {

namespace {

RealMatrix scaled(double t, const RealMatrix& x) { return t * x; }

void require_radius(const RealMatrix& tx, double radius) {
  const double size = frobenius_norm(tx);
  if (!(size <= radius))
    throw DomainError("chi: |tx|_F = " + std::to_string(size) + " exceeds the BCH radius " + std::to_string(radius));
}

// exp(p) exp(q) - I
RealMatrix product_minus_identity(const RealMatrix& p, const RealMatrix& q) {
  const RealMatrix ep = expm1(p);
  const RealMatrix eq = expm1(q);
  return ep + eq + ep * eq;
}

Rational factorial(std::size_t k) {
  Rational f(1);
  for (std::size_t i = 2; i <= k; ++i) f *= static_cast<unsigned long>(i);
  return f;
}

// Sums over compositions k_1 + ... + k_s = m (k_i > 0) of
// ad*_{Omega_k1} ... ad*_{Omega_ks}(base), stored as rows[m][s]; rows are
// appended as further Omega_k become available.
template <class T>
class AdWordTable {
 public:
  explicit AdWordTable(Matrix<T> base) : base_(std::move(base)) {}

  const Matrix<T>& at(std::size_t s, std::size_t m) const { return rows_.at(m).at(s); }

  void extend_to(std::size_t m, const std::vector<Matrix<T>>& omega, const SplittingSpec& spec) {
    const std::size_t n = base_.dim();
    while (rows_.size() <= m) {
      const std::size_t row = rows_.size();
      std::vector<Matrix<T>> entries(row + 1, Matrix<T>(n));
      if (row == 0) entries[0] = base_;
      for (std::size_t s = 1; s <= row; ++s)
        for (std::size_t k = 1; k + (s - 1) <= row; ++k)
          entries[s] += double_bracket(spec, omega[k], rows_[row - k][s - 1]);
      rows_.push_back(std::move(entries));
    }
  }

 private:
  Matrix<T> base_;
  std::vector<std::vector<Matrix<T>>> rows_;
};

}  // namespace

ChiResult chi_fixed_point(const SplittingSpec& spec, const RealMatrix& x, double t, const ChiOptions& options) {
  const RealMatrix tx = scaled(t, x);
  require_radius(tx, options.radius);
  RealMatrix c = options.initial_guess ? *options.initial_guess : tx;
  c.require_same_dim(tx);
  double step = 0.0;
  for (int it = 1; it <= options.max_iter; ++it) {
    const RealMatrix p = spec.plus(c);
    RealMatrix next = p + bch_unchecked(-p, tx);
    step = frobenius_norm(next - c);
    c = std::move(next);
    if (step <= options.tol) return {std::move(c), it, step};
  }
  throw ConvergenceError("chi fixed point did not converge within " + std::to_string(options.max_iter) +
                             " iterations (last step " + std::to_string(step) + ")",
                         step, options.max_iter);
}

double chi_fixed_point_residual(const SplittingSpec& spec, const RealMatrix& x, double t, const RealMatrix& chi) {
  const RealMatrix p = spec.plus(chi);
  return frobenius_norm(chi - p - bch_unchecked(-p, scaled(t, x)));
}

double factorization_residual(const SplittingSpec& spec, const RealMatrix& x, double t, const RealMatrix& chi) {
  return frobenius_norm(expm1(scaled(t, x)) - product_minus_identity(spec.plus(chi), spec.minus(chi)));
}

double alternate_factorization_residual(const SplittingSpec& spec, const RealMatrix& x, double t,
                                        const RealMatrix& chi_minus) {
  return frobenius_norm(expm1(scaled(t, x)) -
                        product_minus_identity(-spec.minus(chi_minus), -spec.plus(chi_minus)));
}

BernoulliTable::BernoulliTable(std::size_t n) {
  // sum_{k=0}^{m} C(m+1, k) B_k = 0 for m >= 1
  values_.reserve(n + 1);
  values_.emplace_back(1);
  for (std::size_t m = 1; m <= n; ++m) {
    Rational sum(0);
    Rational binom(1);  // C(m+1, k)
    for (std::size_t k = 0; k < m; ++k) {
      sum += binom * values_[k];
      binom = binom * static_cast<unsigned long>(m + 1 - k) / static_cast<unsigned long>(k + 1);
    }
    Rational b = -sum / static_cast<unsigned long>(m + 1);
    b.canonicalize();
    values_.push_back(b);
  }
}

template <class T>
GradedSeries<T> magnus_coefficients(const SplittingSpec& spec, const Matrix<T>& a0, std::size_t order) {
  if (order < 1) throw ValidationError("Magnus order must be at least 1");
  const std::size_t dim = a0.dim();
  const BernoulliTable bern(order);
  const auto weight = [&](const Rational& r) { return scalar_cast<T>(r); };

  // omega[k] for k >= 1; omega[0] is unused.
  std::vector<Matrix<T>> omega{Matrix<T>(dim), a0};
  // nest[m][u]: sum over compositions of m into u parts of
  // Omega_k1 |> (Omega_k2 |> ... (Omega_ku |> a0)).
  std::vector<std::vector<Matrix<T>>> nest{{a0}};
  // exp_tri[m] = sum_{u=1}^{m} nest[m][u] / u!
  std::vector<Matrix<T>> exp_tri{Matrix<T>(dim)};
  AdWordTable<T> ad_a0(a0);
  std::map<std::size_t, AdWordTable<T>> ad_exp;

  for (std::size_t n = 2; n <= order; ++n) {
    const std::size_t m = n - 1;
    std::vector<Matrix<T>> row(m + 1, Matrix<T>(dim));
    for (std::size_t u = 1; u <= m; ++u)
      for (std::size_t k = 1; k + (u - 1) <= m; ++k) row[u] += post_lie(spec, omega[k], nest[m - k][u - 1]);
    nest.push_back(row);
    Matrix<T> e(dim);
    for (std::size_t u = 1; u <= m; ++u) e.add_scaled(weight(1 / factorial(u)), row[u]);
    exp_tri.push_back(e);
    ad_exp.emplace(m, AdWordTable<T>(e));

    Matrix<T> sum = exp_tri[m];
    ad_a0.extend_to(m, omega, spec);
    for (std::size_t j = 1; j <= m; ++j) sum.add_scaled(weight(bern[j] / factorial(j)), ad_a0.at(j, m));
    for (std::size_t j = 2; j <= m; ++j) {
      auto& table = ad_exp.at(n - j);
      table.extend_to(j - 1, omega, spec);
      for (std::size_t s = 1; s <= j - 1; ++s) sum.add_scaled(weight(bern[s] / factorial(s)), table.at(s, j - 1));
    }
    omega.push_back(weight(Rational(1, static_cast<unsigned long>(n))) * sum);
  }

  GradedSeries<T> series{order, {omega.begin() + 1, omega.end()}, a0, spec};
  return series;
}

template <class T>
std::vector<Matrix<T>> chi_printed_terms(const SplittingSpec& spec, const Matrix<T>& x, std::size_t order) {
  if (order < 1 || order > 3) throw ValidationError("printed chi terms exist for orders 1..3 only");
  std::vector<Matrix<T>> terms{x};
  const Matrix<T> px = spec.plus(x);
  const Matrix<T> pxx = bracket(px, x);
  if (order >= 2) terms.push_back(scalar_cast<T>(Rational(-1, 2)) * pxx);
  if (order >= 3) {
    Matrix<T> c3 = scalar_cast<T>(Rational(1, 4)) * bracket(spec.plus(pxx), x);
    c3.add_scaled(scalar_cast<T>(Rational(1, 12)), bracket(px, pxx) - bracket(pxx, x));
    terms.push_back(std::move(c3));
  }
  return terms;
}

template <class T>
Matrix<T> dexp_star_inv(const SplittingSpec& spec, const Matrix<T>& x, const Matrix<T>& y, std::size_t n) {
  x.require_same_dim(y);
  const BernoulliTable bern(n);
  Matrix<T> sum = y;
  Matrix<T> word = y;
  Rational fact(1);
  for (std::size_t k = 1; k <= n; ++k) {
    word = double_bracket(spec, x, word);
    fact *= static_cast<unsigned long>(k);
    if (!is_zero(bern[k])) sum.add_scaled(scalar_cast<T>(bern[k] / fact), word);
  }
  return sum;
}

#define POSTLIE_INSTANTIATE(T)                                                                          \
  template GradedSeries<T> magnus_coefficients<T>(const SplittingSpec&, const Matrix<T>&, std::size_t); \
  template std::vector<Matrix<T>> chi_printed_terms<T>(const SplittingSpec&, const Matrix<T>&, std::size_t); \
  template Matrix<T> dexp_star_inv<T>(const SplittingSpec&, const Matrix<T>&, const Matrix<T>&, std::size_t);

POSTLIE_INSTANTIATE(double)
POSTLIE_INSTANTIATE(Rational)

#undef POSTLIE_INSTANTIATE

}  // namespace postlie
