#pragma once

// Exact PBW arithmetic in the universal enveloping algebra U(g) of a Lie
// algebra given by structure constants, and in U(gbar) for the double
// bracket of a splitting.
//
// Elements are formal series sum_n t^n A_n with A_n in U(g); the series is
// cut at t-degree `cap`. A generator enters with weight 1 unless stated
// otherwise, so through cap N means through degree N in the generators.
// Products convolve weights, which keeps truncation compatible with every
// operation (unlike cutting by PBW length, which straightening does not
// respect).

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "postlie/matrix.hpp"
#include "postlie/random.hpp"
#include "postlie/rational.hpp"
#include "postlie/splitting.hpp"

namespace postlie {

/// Non-decreasing sequence of basis indices; empty is the unit.
using Word = std::vector<std::uint8_t>;
/// Finite linear combination of PBW monomials; zero coefficients are not stored.
using Poly = std::map<Word, Rational>;
using TensorPoly = std::map<std::pair<Word, Word>, Rational>;
/// Coordinates of a Lie element in the basis.
using LieVector = std::vector<Rational>;

void add_term(Poly& p, const Word& w, const Rational& c);
void add_scaled(Poly& acc, const Poly& p, const Rational& s);
void add_term(TensorPoly& p, const std::pair<Word, Word>& w, const Rational& c);

class StructureConstants {
 public:
  explicit StructureConstants(std::size_t dim, std::vector<std::string> labels = {});

  /// Constants of span(basis), which must be closed under the commutator.
  /// The basis is kept for coordinates() and the matrix representation.
  static StructureConstants from_basis(std::vector<RationalMatrix> basis, std::vector<std::string> labels = {});
  /// sl(2) with ordered basis e < h < f.
  static StructureConstants sl2();
  /// gl(n) with matrix units E_ij in row-major order.
  static StructureConstants gl(std::size_t n);
  /// "sl2", "gl2", "gl3"
  static StructureConstants builtin(const std::string& name);

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<RationalMatrix>& basis() const noexcept { return basis_; }
  bool has_basis() const noexcept { return !basis_.empty(); }

  /// c^k_{ij}, with [e_i, e_j] = sum_k c^k_{ij} e_k
  const Rational& operator()(std::size_t i, std::size_t j, std::size_t k) const { return c_[index(i, j, k)]; }
  /// Sets c^k_{ij} and c^k_{ji} = -value.
  void set(std::size_t i, std::size_t j, std::size_t k, const Rational& value);

  LieVector bracket(const LieVector& x, const LieVector& y) const;
  /// Antisymmetry and the Jacobi identity, checked exactly on basis triples.
  bool antisymmetric() const;
  bool satisfies_jacobi() const;
  /// Throws ValidationError when either check fails.
  void validate() const;

  /// Coordinates of m in the basis, or nullopt when m is outside the span.
  std::optional<LieVector> coordinates(const RationalMatrix& m) const;

 private:
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (i * dim_ + j) * dim_ + k; }

  std::size_t dim_;
  std::vector<std::string> labels_;
  std::vector<Rational> c_;
  std::vector<RationalMatrix> basis_;
};

enum class AlgebraTag { U_g, U_gbar };
std::string to_string(AlgebraTag tag);

/// Truncated series of PBW polynomials, graded by weight 0..cap.
class PBWElement {
 public:
  PBWElement(AlgebraTag tag, std::size_t cap);

  static PBWElement one(AlgebraTag tag, std::size_t cap);
  /// Lie element sum_i coords[i] e_i placed at the given weight.
  static PBWElement lie(AlgebraTag tag, std::size_t cap, const LieVector& coords, std::size_t weight = 1);
  static PBWElement homogeneous(AlgebraTag tag, std::size_t cap, const Poly& p, std::size_t weight);

  AlgebraTag tag() const noexcept { return tag_; }
  std::size_t cap() const noexcept { return grades_.size() - 1; }
  const Poly& grade(std::size_t weight) const { return grades_.at(weight); }
  Poly& grade(std::size_t weight) { return grades_.at(weight); }

  bool is_zero() const;
  std::size_t term_count() const;
  /// Largest weight with a nonzero component (0 for the zero element).
  std::size_t degree() const;
  /// True when all components are Lie elements of weight 1.
  bool is_lie_weight_one() const;
  /// Coordinates of the weight-1, length-1 part.
  LieVector lie_part(std::size_t dim) const;
  /// Drops components above the new cap.
  PBWElement truncated(std::size_t cap) const;

  PBWElement& operator+=(const PBWElement& o);
  PBWElement& operator-=(const PBWElement& o);
  PBWElement& operator*=(const Rational& s);
  friend PBWElement operator+(PBWElement a, const PBWElement& b) { return a += b; }
  friend PBWElement operator-(PBWElement a, const PBWElement& b) { return a -= b; }
  friend PBWElement operator*(const Rational& s, PBWElement a) { return a *= s; }
  friend bool operator==(const PBWElement& a, const PBWElement& b);

  /// Human-readable form such as "2 e h + 1/3 f^2 [t^2]".
  std::string to_string(const std::vector<std::string>& labels) const;

 private:
  void require_compatible(const PBWElement& o) const;

  AlgebraTag tag_;
  std::vector<Poly> grades_;
};

/// Element of U (x) U, graded by total weight.
class TensorElement {
 public:
  TensorElement(AlgebraTag tag, std::size_t cap) : tag_(tag), grades_(cap + 1) {}

  AlgebraTag tag() const noexcept { return tag_; }
  std::size_t cap() const noexcept { return grades_.size() - 1; }
  const TensorPoly& grade(std::size_t w) const { return grades_.at(w); }
  TensorPoly& grade(std::size_t w) { return grades_.at(w); }
  bool is_zero() const;
  friend bool operator==(const TensorElement& a, const TensorElement& b) {
    return a.tag_ == b.tag_ && a.grades_ == b.grades_;
  }

 private:
  AlgebraTag tag_;
  std::vector<TensorPoly> grades_;
};

/// Ordered sub-words of a word: every split of its letters into a left and
/// right part, as in the coproduct of a product of primitive elements.
std::vector<std::pair<Word, Word>> word_splits(const Word& w);

/// The concatenation Hopf algebra U(g) (or U(gbar)).
class EnvelopingAlgebra {
 public:
  EnvelopingAlgebra(std::shared_ptr<const StructureConstants> sc, AlgebraTag tag);

  const StructureConstants& constants() const noexcept { return *sc_; }
  AlgebraTag tag() const noexcept { return tag_; }
  std::size_t dim() const noexcept { return sc_->dim(); }

  /// PBW normal form of c * x_{w_1} ... x_{w_k}; straightens with an explicit stack.
  Poly normalize(const Word& word, const Rational& coeff = Rational(1)) const;
  Poly multiply(const Poly& a, const Poly& b) const;
  Poly antipode(const Poly& a) const;

  PBWElement product(const PBWElement& a, const PBWElement& b) const;
  TensorElement coproduct(const PBWElement& a) const;
  PBWElement antipode(const PBWElement& a) const;
  /// epsilon applied at each weight, as a scalar multiple of the unit.
  PBWElement counit_unit(const PBWElement& a) const;
  /// epsilon(A) with t = 1.
  Rational counit(const PBWElement& a) const;
  /// mu: U (x) U -> U
  PBWElement multiply(const TensorElement& a) const;
  /// (a1 (x) a2)(b1 (x) b2) = a1 b1 (x) a2 b2
  TensorElement tensor_product(const TensorElement& a, const TensorElement& b) const;
  /// (S (x) id) and (id (x) S)
  TensorElement antipode_left(const TensorElement& a) const;

  /// sum_{n<=cap} v^n / n! for a weight-one Lie element v.
  PBWElement exp_concat(const PBWElement& v) const;

  /// Image under the defining matrix representation (requires a matrix
  /// basis), summing all weights with t = 1.
  RationalMatrix represent(const PBWElement& a) const;
  RealMatrix represent_real(const PBWElement& a) const;

  void require_tag(const PBWElement& a) const;

 private:
  std::shared_ptr<const StructureConstants> sc_;
  AlgebraTag tag_;
};

/// Structure constants of [[x, y]] = [pi- x, y] + [x, pi- y] - [x, y], where
/// pi_plus holds the coordinates of pi+(e_j) in column j. Throws
/// ValidationError if the result fails the Jacobi identity.
StructureConstants double_constants(const StructureConstants& sc, const RationalMatrix& pi_plus);

/// Columns are the coordinates of spec.plus(e_j) in the basis of sc.
/// Throws UnsupportedSpecError when pi+ leaves the span of the basis.
RationalMatrix splitting_on_basis(const StructureConstants& sc, const SplittingSpec& spec);

/// U(g) with the post-Lie product x |> y = -[pi+ x, y] extended to U(g), the
/// product A * B = A_(1) (A_(2) |> B), and the map F: U(gbar) -> U(g).
///
/// The extension of |> to U(g) uses the rules of the general enveloping
/// algebra construction for post-Lie algebras, taken as given here:
///   1 |> A = A,  A |> 1 = eps(A) 1,
///   (x A) |> y = x |> (A |> y) - (x |> A) |> y,
///   A |> (y B) = (A_(1) |> y)(A_(2) |> B).
class PostLieEnveloping {
 public:
  PostLieEnveloping(std::shared_ptr<const StructureConstants> sc, RationalMatrix pi_plus);
  static PostLieEnveloping from_splitting(std::shared_ptr<const StructureConstants> sc, const SplittingSpec& spec);

  const EnvelopingAlgebra& algebra() const noexcept { return ug_; }
  const EnvelopingAlgebra& double_algebra() const noexcept { return ugbar_; }
  const StructureConstants& constants() const noexcept { return ug_.constants(); }
  const StructureConstants& double_structure() const noexcept { return ugbar_.constants(); }
  const RationalMatrix& pi_plus() const noexcept { return pi_plus_; }
  std::size_t dim() const noexcept { return ug_.dim(); }

  LieVector plus(const LieVector& x) const;
  LieVector minus(const LieVector& x) const;
  /// pi+ o pi+ = pi+
  bool is_projector() const;

  Poly triangleright(const Poly& a, const Poly& b) const;
  Poly star(const Poly& a, const Poly& b) const;

  PBWElement triangleright(const PBWElement& a, const PBWElement& b) const;
  PBWElement star(const PBWElement& a, const PBWElement& b) const;
  /// (a1 (x) a2) (* (x) *) (b1 (x) b2)
  TensorElement star_tensor(const TensorElement& a, const TensorElement& b) const;

  /// sum_{n<=cap} v^{*n} / n! for a weight-one Lie element v.
  PBWElement exp_star(const PBWElement& v) const;
  /// Concatenation exponential of v in U(gbar).
  PBWElement exp_dot(const PBWElement& v) const;
  /// Splits a weight-one Lie element into its pi- and pi+ parts.
  std::pair<PBWElement, PBWElement> split(const PBWElement& v) const;

  /// F = mu (id (x) S)(r- (x) r+) Delta with r- = pi-, r+ = -pi+.
  PBWElement f_map(const PBWElement& x) const;

 private:
  using MonomialPair = std::pair<Word, Word>;
  struct Cache {
    std::mutex mutex;
    std::map<MonomialPair, Poly> triangleright;
  };

  Poly triangleright_monomial(const Word& a, const Word& b) const;
  Poly triangleright_word(const Word& a, const Poly& b) const;
  Poly generator_triangleright(std::uint8_t i, std::uint8_t j) const;
  Poly morphism_image(const Word& w, bool minus_side) const;

  RationalMatrix pi_plus_;
  EnvelopingAlgebra ug_;
  EnvelopingAlgebra ugbar_;
  std::shared_ptr<Cache> cache_;
};

/// Random combination of PBW monomials of length <= max_length, each kept
/// with probability 1/2 and placed at weight equal to its length.
PBWElement random_element(Rng& rng, AlgebraTag tag, std::size_t dim, std::size_t cap, std::size_t max_length);
LieVector random_lie_vector(Rng& rng, std::size_t dim);

}  // namespace postlie
