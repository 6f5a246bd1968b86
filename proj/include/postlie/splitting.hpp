#pragma once

// R-matrix splittings g = g+ (+) g- of a matrix Lie algebra and the
// structures they induce:
//
//   pi-        = id - pi+
//   R          = id - 2 pi+
//   a |> b     = -[pi+(a), b]                       (post-Lie product)
//   [[a, b]]   = [pi-(a), b] + [a, pi-(b)] - [a, b]  (double bracket)
//   a >| b     = a |> b + [a, b] = [pi-(a), b]      ("black" product)
//   a >- b     = a |> b + [a, b]/2 = [R(a)/2, b]     (Lie-admissible product)

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "postlie/lie.hpp"
#include "postlie/matrix.hpp"

namespace postlie {

enum class SplittingKind { lower_triangular, qr_skew, custom };
enum class Side { plus, minus };

std::string to_string(SplittingKind kind);
SplittingKind parse_splitting_kind(const std::string& name);

struct ValidationReport {
  std::size_t dim = 0;
  SplittingKind kind = SplittingKind::lower_triangular;
  bool exact = false;
  std::size_t sample_count = 0;
  std::optional<std::uint64_t> seed;
  double tolerance = 0.0;
  /// max_samples |[pi x, pi y] + pi[x,y] - pi([pi x, y] + [x, pi y])|_F
  double mybe_plus = 0.0;
  double mybe_minus = 0.0;
  /// max_samples |[Rx, Ry] - R([Rx, y] + [x, Ry]) + [x, y]|_F
  double mcybe = 0.0;
  /// max_samples |pi-([pi+ x, pi+ y])|_F and |pi+([pi- x, pi- y])|_F
  double closure_plus = 0.0;
  double closure_minus = 0.0;
  bool validated = false;

  double max_residual() const;
};

class SplittingSpec {
 public:
  /// pi+ keeps the lower triangle including the diagonal; g- is strictly upper.
  static SplittingSpec lower_triangular(std::size_t n);
  /// pi+(a) = L - L^T with L the strictly lower part of a; g+ = so(n),
  /// g- = upper triangular.
  static SplittingSpec qr_skew(std::size_t n);
  /// pi+ given by an n^2 x n^2 matrix acting on column-major vec(a),
  /// vec(a)[i + j*n] = a(i, j).
  static SplittingSpec custom(std::size_t n, RationalMatrix coefficients);

  std::size_t dim() const noexcept { return n_; }
  SplittingKind kind() const noexcept { return kind_; }
  const RationalMatrix& coefficients() const noexcept { return custom_exact_; }

  /// True when pi+ is known to be idempotent (built-in kinds), or when the
  /// custom coefficient matrix C satisfies C*C = C exactly.
  bool is_projector() const;

  template <class T>
  Matrix<T> project(Side side, const Matrix<T>& a) const;
  template <class T>
  Matrix<T> plus(const Matrix<T>& a) const;
  template <class T>
  Matrix<T> minus(const Matrix<T>& a) const {
    return a - plus(a);
  }
  /// R = id - 2 pi+
  template <class T>
  Matrix<T> r_matrix(const Matrix<T>& a) const {
    return a - T(2) * plus(a);
  }

  /// Copy carrying a validation report.
  SplittingSpec with_validation(const ValidationReport& report) const;
  bool validated() const noexcept;
  const std::optional<ValidationReport>& validation() const noexcept { return validation_; }

 private:
  SplittingSpec(std::size_t n, SplittingKind kind) : n_(n), kind_(kind) {}
  void require_dim(std::size_t n) const;

  std::size_t n_ = 0;
  SplittingKind kind_ = SplittingKind::lower_triangular;
  RationalMatrix custom_exact_;
  RealMatrix custom_real_;
  std::optional<ValidationReport> validation_;
};

/// Defaults for sampling-based certification.
inline constexpr std::size_t kDefaultValidationSamples = 100;
inline constexpr double kDefaultValidationTol = 1e-10;

template <class T>
using SamplePairs = std::vector<std::pair<Matrix<T>, Matrix<T>>>;

/// Residuals of the mYBE (both signs), the modified CYBE for R, and
/// subalgebra closure, maximized over `samples`. In exact mode residuals
/// are exact zeros or not, and `tol` is ignored.
template <class T>
ValidationReport validate_splitting(const SplittingSpec& spec, const SamplePairs<T>& samples,
                                    double tol = kDefaultValidationTol);

template <class T>
Matrix<T> post_lie(const SplittingSpec& spec, const Matrix<T>& a, const Matrix<T>& b) {
  return -bracket(spec.plus(a), b);
}

template <class T>
Matrix<T> double_bracket(const SplittingSpec& spec, const Matrix<T>& a, const Matrix<T>& b) {
  return bracket(spec.minus(a), b) + bracket(a, spec.minus(b)) - bracket(a, b);
}

/// The three equivalent expressions of the double bracket:
/// [pi-a, b] + [a, pi-b] - [a,b];  [pi-a, pi-b] - [pi+a, pi+b];  a|>b - b|>a + [a,b].
template <class T>
std::array<Matrix<T>, 3> double_bracket_forms(const SplittingSpec& spec, const Matrix<T>& a,
                                              const Matrix<T>& b) {
  return {double_bracket(spec, a, b),
          bracket(spec.minus(a), spec.minus(b)) - bracket(spec.plus(a), spec.plus(b)),
          post_lie(spec, a, b) - post_lie(spec, b, a) + bracket(a, b)};
}

template <class T>
Matrix<T> black_product(const SplittingSpec& spec, const Matrix<T>& a, const Matrix<T>& b) {
  return post_lie(spec, a, b) + bracket(a, b);
}

template <class T>
Matrix<T> succ_product(const SplittingSpec& spec, const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> r = post_lie(spec, a, b);
  r.add_scaled(scalar_cast<T>(Rational(1, 2)), bracket(a, b));
  return r;
}

/// Per-triple residual norms of the post-Lie identities induced by a splitting.
struct PostLieResiduals {
  double axiom_derivation = 0.0;   // x|>[y,z] - [x|>y, z] - [y, x|>z]
  double axiom_associator = 0.0;   // [x,y]|>z - a(x,y,z) + a(y,x,z)
  double black_derivation = 0.0;   // same two axioms for (g, -[.,.], >|)
  double black_associator = 0.0;
  double double_jacobi = 0.0;      // Jacobi identity of [[.,.]]
  double subalgebra_minus = 0.0;   // pi-[[x,y]] - [pi-x, pi-y]
  double subalgebra_plus = 0.0;    // pi+[[x,y]] + [pi+x, pi+y]
  double succ_associator = 0.0;    // a>-(x,y,z) - a>-(y,x,z) + [[x,y],z]/4
  double succ_commutator = 0.0;    // x>-y - y>-x - [[x,y]]
  double double_forms = 0.0;       // max spread between the three [[.,.]] forms

  double max() const;
};

template <class T>
PostLieResiduals postlie_residuals(const SplittingSpec& spec, const Matrix<T>& x, const Matrix<T>& y,
                                   const Matrix<T>& z);

}  // namespace postlie
