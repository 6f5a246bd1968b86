#include "postlie/splitting.hpp"

#include <algorithm>
#include <functional>

namespace postlie {

std::string to_string(SplittingKind kind) {
  switch (kind) {
    case SplittingKind::lower_triangular: return "lower_triangular";
    case SplittingKind::qr_skew: return "qr_skew";
    case SplittingKind::custom: return "custom";
  }
  return "unknown";
}

SplittingKind parse_splitting_kind(const std::string& name) {
  if (name == "lower_triangular") return SplittingKind::lower_triangular;
  if (name == "qr_skew") return SplittingKind::qr_skew;
  if (name == "custom") return SplittingKind::custom;
  throw ParseError("unknown splitting kind '" + name + "'");
}

double ValidationReport::max_residual() const {
  return std::max({mybe_plus, mybe_minus, mcybe, closure_plus, closure_minus});
}

SplittingSpec SplittingSpec::lower_triangular(std::size_t n) {
  if (n == 0) throw DimensionError("splitting dimension must be positive");
  return SplittingSpec(n, SplittingKind::lower_triangular);
}

SplittingSpec SplittingSpec::qr_skew(std::size_t n) {
  if (n == 0) throw DimensionError("splitting dimension must be positive");
  return SplittingSpec(n, SplittingKind::qr_skew);
}

SplittingSpec SplittingSpec::custom(std::size_t n, RationalMatrix coefficients) {
  if (n == 0) throw DimensionError("splitting dimension must be positive");
  if (coefficients.dim() != n * n)
    throw DimensionError("custom splitting needs an n^2 x n^2 coefficient matrix (n = " +
                         std::to_string(n) + ", got " + std::to_string(coefficients.dim()) + ")");
  SplittingSpec spec(n, SplittingKind::custom);
  spec.custom_real_ = to_real(coefficients);
  spec.custom_exact_ = std::move(coefficients);
  return spec;
}

bool SplittingSpec::is_projector() const {
  if (kind_ != SplittingKind::custom) return true;
  return custom_exact_ * custom_exact_ == custom_exact_;
}

SplittingSpec SplittingSpec::with_validation(const ValidationReport& report) const {
  SplittingSpec copy = *this;
  copy.validation_ = report;
  return copy;
}

bool SplittingSpec::validated() const noexcept { return validation_ && validation_->validated; }

void SplittingSpec::require_dim(std::size_t n) const {
  if (n != n_)
    throw DimensionError("element of dimension " + std::to_string(n) + " used with a splitting of gl(" +
                         std::to_string(n_) + ")");
}

template <class T>
Matrix<T> SplittingSpec::plus(const Matrix<T>& a) const {
  require_dim(a.dim());
  const std::size_t n = n_;
  Matrix<T> r(n);
  switch (kind_) {
    case SplittingKind::lower_triangular:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) r(i, j) = a(i, j);
      break;
    case SplittingKind::qr_skew:
      for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
          r(i, j) = a(i, j);
          r(j, i) = -a(i, j);
        }
      break;
    case SplittingKind::custom: {
      const auto& c = [&]() -> const Matrix<T>& {
        if constexpr (std::is_same_v<T, double>)
          return custom_real_;
        else
          return custom_exact_;
      }();
      for (std::size_t row = 0; row < n * n; ++row) {
        T acc(0);
        for (std::size_t col = 0; col < n * n; ++col) {
          const T& w = c(row, col);
          if (!is_zero(w)) acc += w * a(col % n, col / n);
        }
        r(row % n, row / n) = acc;
      }
      break;
    }
  }
  return r;
}

template <class T>
Matrix<T> SplittingSpec::project(Side side, const Matrix<T>& a) const {
  return side == Side::plus ? plus(a) : minus(a);
}

template <class T>
ValidationReport validate_splitting(const SplittingSpec& spec, const SamplePairs<T>& samples, double tol) {
  if (samples.empty()) throw ValidationError("validation needs at least one sample pair");
  constexpr bool exact = std::is_same_v<T, Rational>;
  ValidationReport report;
  report.dim = spec.dim();
  report.kind = spec.kind();
  report.exact = exact;
  report.sample_count = samples.size();
  report.tolerance = exact ? 0.0 : tol;

  const auto mybe = [&](Side side, const Matrix<T>& x, const Matrix<T>& y) {
    const auto px = spec.project(side, x);
    const auto py = spec.project(side, y);
    return bracket(px, py) + spec.project(side, bracket(x, y)) -
           spec.project(side, bracket(px, y) + bracket(x, py));
  };
  bool all_zero = true;
  const auto track = [&](double& slot, const Matrix<T>& residual) {
    slot = std::max(slot, frobenius_norm(residual));
    if constexpr (exact) all_zero = all_zero && residual.is_zero_matrix();
  };
  for (const auto& [x, y] : samples) {
    track(report.mybe_plus, mybe(Side::plus, x, y));
    track(report.mybe_minus, mybe(Side::minus, x, y));
    const auto rx = spec.r_matrix(x);
    const auto ry = spec.r_matrix(y);
    track(report.mcybe, bracket(rx, ry) - spec.r_matrix(bracket(rx, y) + bracket(x, ry)) + bracket(x, y));
    track(report.closure_plus, spec.minus(bracket(spec.plus(x), spec.plus(y))));
    track(report.closure_minus, spec.plus(bracket(spec.minus(x), spec.minus(y))));
  }
  report.validated = exact ? all_zero : report.max_residual() <= tol;
  return report;
}

double PostLieResiduals::max() const {
  return std::max({axiom_derivation, axiom_associator, black_derivation, black_associator, double_jacobi,
                   subalgebra_minus, subalgebra_plus, succ_associator, succ_commutator, double_forms});
}

template <class T>
PostLieResiduals postlie_residuals(const SplittingSpec& spec, const Matrix<T>& x, const Matrix<T>& y,
                                   const Matrix<T>& z) {
  using M = Matrix<T>;
  using Product = std::function<M(const M&, const M&)>;
  const Product tri = [&](const M& a, const M& b) { return post_lie(spec, a, b); };
  const Product black = [&](const M& a, const M& b) { return black_product(spec, a, b); };
  const Product succ = [&](const M& a, const M& b) { return succ_product(spec, a, b); };
  const Product dbl = [&](const M& a, const M& b) { return double_bracket(spec, a, b); };
  const Product lie = [](const M& a, const M& b) { return bracket(a, b); };
  const Product neg_lie = [](const M& a, const M& b) { return -bracket(a, b); };

  const auto assoc = [](const Product& p, const M& a, const M& b, const M& c) {
    return p(a, p(b, c)) - p(p(a, b), c);
  };
  // x |> {y,z} = {x|>y, z} + {y, x|>z}  and  {x,y} |> z = a(x,y,z) - a(y,x,z)
  const auto derivation = [&](const Product& p, const Product& br) {
    return frobenius_norm(p(x, br(y, z)) - br(p(x, y), z) - br(y, p(x, z)));
  };
  const auto associator = [&](const Product& p, const Product& br) {
    return frobenius_norm(p(br(x, y), z) - assoc(p, x, y, z) + assoc(p, y, x, z));
  };

  PostLieResiduals r;
  r.axiom_derivation = derivation(tri, lie);
  r.axiom_associator = associator(tri, lie);
  r.black_derivation = derivation(black, neg_lie);
  r.black_associator = associator(black, neg_lie);
  r.double_jacobi = frobenius_norm(dbl(x, dbl(y, z)) + dbl(y, dbl(z, x)) + dbl(z, dbl(x, y)));
  const M xy = dbl(x, y);
  r.subalgebra_minus = frobenius_norm(spec.minus(xy) - bracket(spec.minus(x), spec.minus(y)));
  r.subalgebra_plus = frobenius_norm(spec.plus(xy) + bracket(spec.plus(x), spec.plus(y)));
  M succ_assoc = assoc(succ, x, y, z) - assoc(succ, y, x, z);
  succ_assoc.add_scaled(scalar_cast<T>(Rational(1, 4)), bracket(bracket(x, y), z));
  r.succ_associator = frobenius_norm(succ_assoc);
  r.succ_commutator = frobenius_norm(succ(x, y) - succ(y, x) - xy);
  const auto forms = double_bracket_forms(spec, x, y);
  r.double_forms = std::max(frobenius_norm(forms[1] - forms[0]), frobenius_norm(forms[2] - forms[0]));
  return r;
}

#define POSTLIE_INSTANTIATE(T)                                                                           \
  template Matrix<T> SplittingSpec::plus<T>(const Matrix<T>&) const;                                     \
  template Matrix<T> SplittingSpec::project<T>(Side, const Matrix<T>&) const;                            \
  template ValidationReport validate_splitting<T>(const SplittingSpec&, const SamplePairs<T>&, double); \
  template PostLieResiduals postlie_residuals<T>(const SplittingSpec&, const Matrix<T>&, const Matrix<T>&, \
                                                 const Matrix<T>&);

POSTLIE_INSTANTIATE(double)
POSTLIE_INSTANTIATE(Rational)

#undef POSTLIE_INSTANTIATE

}  // namespace postlie
