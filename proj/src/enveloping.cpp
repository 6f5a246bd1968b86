#include "postlie/enveloping.hpp"

#include <algorithm>
#include <sstream>

namespace postlie {

void add_term(Poly& p, const Word& w, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = p.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) p.erase(it);
  }
}

void add_scaled(Poly& acc, const Poly& p, const Rational& s) {
  if (sgn(s) == 0) return;
  for (const auto& [w, c] : p) add_term(acc, w, c * s);
}

void add_term(TensorPoly& p, const std::pair<Word, Word>& w, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = p.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) p.erase(it);
  }
}

namespace {

Rational factorial(std::size_t k) {
  Rational f(1);
  for (std::size_t i = 2; i <= k; ++i) f *= static_cast<unsigned long>(i);
  return f;
}

Poly lie_poly(const LieVector& v) {
  Poly p;
  for (std::size_t i = 0; i < v.size(); ++i) add_term(p, Word{static_cast<std::uint8_t>(i)}, v[i]);
  return p;
}

Word concat(const Word& a, const Word& b) {
  Word w = a;
  w.insert(w.end(), b.begin(), b.end());
  return w;
}

// Exact solve of sum_k a_k columns[k] = target; nullopt when inconsistent or
// when the columns are dependent.
std::optional<LieVector> solve_exact(const std::vector<std::vector<Rational>>& columns,
                                     const std::vector<Rational>& target) {
  const std::size_t rows = target.size();
  const std::size_t d = columns.size();
  std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(d + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < d; ++k) m[r][k] = columns[k][r];
    m[r][d] = target[r];
  }
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < d && row < rows; ++col) {
    std::size_t p = row;
    while (p < rows && sgn(m[p][col]) == 0) ++p;
    if (p == rows) return std::nullopt;
    std::swap(m[p], m[row]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row || sgn(m[r][col]) == 0) continue;
      const Rational f = m[r][col] / m[row][col];
      for (std::size_t c = col; c <= d; ++c) m[r][c] -= f * m[row][c];
    }
    pivot_col.push_back(col);
    ++row;
  }
  if (pivot_col.size() != d) return std::nullopt;
  for (std::size_t r = d; r < rows; ++r)
    if (sgn(m[r][d]) != 0) return std::nullopt;
  LieVector x(d);
  for (std::size_t k = 0; k < d; ++k) x[k] = m[k][d] / m[k][k];
  return x;
}

std::vector<Rational> vec(const RationalMatrix& m) {
  const auto v = m.values();
  return {v.begin(), v.end()};
}

}  // namespace

// ---------------------------------------------------------------------------
// StructureConstants

StructureConstants::StructureConstants(std::size_t dim, std::vector<std::string> labels)
    : dim_(dim), labels_(std::move(labels)), c_(dim * dim * dim) {
  if (dim == 0 || dim > 255) throw DimensionError("Lie algebra dimension must be in 1..255");
  if (labels_.empty())
    for (std::size_t i = 0; i < dim; ++i) labels_.push_back("x" + std::to_string(i + 1));
  if (labels_.size() != dim) throw DimensionError("label count does not match the dimension");
}

void StructureConstants::set(std::size_t i, std::size_t j, std::size_t k, const Rational& value) {
  if (i >= dim_ || j >= dim_ || k >= dim_) throw DimensionError("structure constant index out of range");
  if (i == j && sgn(value) != 0) throw ValidationError("[e_i, e_i] must vanish");
  c_[index(i, j, k)] = value;
  c_[index(j, i, k)] = -value;
}

StructureConstants StructureConstants::from_basis(std::vector<RationalMatrix> basis, std::vector<std::string> labels) {
  if (basis.empty()) throw DimensionError("empty basis");
  StructureConstants sc(basis.size(), std::move(labels));
  for (const auto& b : basis) b.require_same_dim(basis.front());
  sc.basis_ = std::move(basis);
  const std::size_t d = sc.dim_;
  std::vector<std::vector<Rational>> columns;
  for (const auto& b : sc.basis_) columns.push_back(vec(b));
  if (!solve_exact(columns, std::vector<Rational>(columns.front().size())))
    throw ValidationError("basis matrices are linearly dependent");
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const auto coords = solve_exact(columns, vec(postlie::bracket(sc.basis_[i], sc.basis_[j])));
      if (!coords) throw ValidationError("span of the basis is not closed under the commutator");
      for (std::size_t k = 0; k < d; ++k) sc.set(i, j, k, (*coords)[k]);
    }
  return sc;
}

StructureConstants StructureConstants::sl2() {
  const auto e = RationalMatrix::unit(2, 0, 1);
  const auto h = RationalMatrix::unit(2, 0, 0) - RationalMatrix::unit(2, 1, 1);
  const auto f = RationalMatrix::unit(2, 1, 0);
  return from_basis({e, h, f}, {"e", "h", "f"});
}

StructureConstants StructureConstants::gl(std::size_t n) {
  std::vector<RationalMatrix> basis;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      basis.push_back(RationalMatrix::unit(n, i, j));
      labels.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
    }
  return from_basis(std::move(basis), std::move(labels));
}

StructureConstants StructureConstants::builtin(const std::string& name) {
  if (name == "sl2") return sl2();
  if (name == "gl2") return gl(2);
  if (name == "gl3") return gl(3);
  throw ParseError("unknown built-in algebra '" + name + "' (expected sl2, gl2 or gl3)");
}

LieVector StructureConstants::bracket(const LieVector& x, const LieVector& y) const {
  if (x.size() != dim_ || y.size() != dim_) throw DimensionError("Lie vector of wrong dimension");
  LieVector r(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    if (sgn(x[i]) == 0) continue;
    for (std::size_t j = 0; j < dim_; ++j) {
      if (sgn(y[j]) == 0) continue;
      const Rational xy = x[i] * y[j];
      for (std::size_t k = 0; k < dim_; ++k) {
        const auto& c = (*this)(i, j, k);
        if (sgn(c) != 0) r[k] += xy * c;
      }
    }
  }
  return r;
}

bool StructureConstants::antisymmetric() const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      for (std::size_t k = 0; k < dim_; ++k)
        if ((*this)(i, j, k) != -(*this)(j, i, k)) return false;
  return true;
}

bool StructureConstants::satisfies_jacobi() const {
  // sum_m c^m_{jk} c^l_{im} + c^m_{ki} c^l_{jm} + c^m_{ij} c^l_{km} = 0
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i + 1; j < dim_; ++j)
      for (std::size_t k = j + 1; k < dim_; ++k)
        for (std::size_t l = 0; l < dim_; ++l) {
          Rational s(0);
          for (std::size_t m = 0; m < dim_; ++m)
            s += (*this)(j, k, m) * (*this)(i, m, l) + (*this)(k, i, m) * (*this)(j, m, l) +
                 (*this)(i, j, m) * (*this)(k, m, l);
          if (sgn(s) != 0) return false;
        }
  return true;
}

void StructureConstants::validate() const {
  if (!antisymmetric()) throw ValidationError("structure constants are not antisymmetric");
  if (!satisfies_jacobi()) throw ValidationError("structure constants violate the Jacobi identity");
}

std::optional<LieVector> StructureConstants::coordinates(const RationalMatrix& m) const {
  if (basis_.empty()) throw UnsupportedSpecError("structure constants carry no matrix basis");
  m.require_same_dim(basis_.front());
  std::vector<std::vector<Rational>> columns;
  for (const auto& b : basis_) columns.push_back(vec(b));
  return solve_exact(columns, vec(m));
}

std::string to_string(AlgebraTag tag) { return tag == AlgebraTag::U_g ? "U(g)" : "U(gbar)"; }

// ---------------------------------------------------------------------------
// PBWElement / TensorElement

PBWElement::PBWElement(AlgebraTag tag, std::size_t cap) : tag_(tag), grades_(cap + 1) {}

PBWElement PBWElement::one(AlgebraTag tag, std::size_t cap) {
  PBWElement e(tag, cap);
  e.grades_[0].emplace(Word{}, Rational(1));
  return e;
}

PBWElement PBWElement::lie(AlgebraTag tag, std::size_t cap, const LieVector& coords, std::size_t weight) {
  return homogeneous(tag, cap, lie_poly(coords), weight);
}

PBWElement PBWElement::homogeneous(AlgebraTag tag, std::size_t cap, const Poly& p, std::size_t weight) {
  PBWElement e(tag, cap);
  if (weight <= cap) e.grades_[weight] = p;
  return e;
}

bool PBWElement::is_zero() const {
  return std::all_of(grades_.begin(), grades_.end(), [](const Poly& p) { return p.empty(); });
}

std::size_t PBWElement::term_count() const {
  std::size_t n = 0;
  for (const auto& p : grades_) n += p.size();
  return n;
}

std::size_t PBWElement::degree() const {
  for (std::size_t w = grades_.size(); w-- > 0;)
    if (!grades_[w].empty()) return w;
  return 0;
}

bool PBWElement::is_lie_weight_one() const {
  for (std::size_t w = 0; w < grades_.size(); ++w)
    for (const auto& [word, c] : grades_[w])
      if (w != 1 || word.size() != 1) return false;
  return true;
}

LieVector PBWElement::lie_part(std::size_t dim) const {
  LieVector v(dim);
  if (grades_.size() < 2) return v;
  for (const auto& [word, c] : grades_[1])
    if (word.size() == 1) v.at(word[0]) = c;
  return v;
}

PBWElement PBWElement::truncated(std::size_t cap) const {
  PBWElement e(tag_, cap);
  for (std::size_t w = 0; w <= std::min(cap, this->cap()); ++w) e.grades_[w] = grades_[w];
  return e;
}

void PBWElement::require_compatible(const PBWElement& o) const {
  if (tag_ != o.tag_)
    throw TagMismatchError("cannot combine elements of " + postlie::to_string(tag_) + " and " +
                           postlie::to_string(o.tag_));
}

PBWElement& PBWElement::operator+=(const PBWElement& o) {
  require_compatible(o);
  if (o.cap() < cap()) grades_.resize(o.cap() + 1);
  for (std::size_t w = 0; w < grades_.size(); ++w) add_scaled(grades_[w], o.grades_[w], Rational(1));
  return *this;
}

PBWElement& PBWElement::operator-=(const PBWElement& o) {
  require_compatible(o);
  if (o.cap() < cap()) grades_.resize(o.cap() + 1);
  for (std::size_t w = 0; w < grades_.size(); ++w) add_scaled(grades_[w], o.grades_[w], Rational(-1));
  return *this;
}

PBWElement& PBWElement::operator*=(const Rational& s) {
  for (auto& p : grades_) {
    if (sgn(s) == 0) {
      p.clear();
      continue;
    }
    for (auto& [w, c] : p) c *= s;
  }
  return *this;
}

bool operator==(const PBWElement& a, const PBWElement& b) {
  if (a.tag_ != b.tag_) return false;
  const std::size_t cap = std::min(a.cap(), b.cap());
  for (std::size_t w = 0; w <= cap; ++w)
    if (a.grades_[w] != b.grades_[w]) return false;
  return true;
}

std::string PBWElement::to_string(const std::vector<std::string>& labels) const {
  std::ostringstream out;
  bool first = true;
  for (std::size_t w = 0; w < grades_.size(); ++w) {
    for (const auto& [word, c] : grades_[w]) {
      if (!first) out << " + ";
      first = false;
      out << postlie::to_string(c);
      for (std::size_t i = 0; i < word.size();) {
        std::size_t j = i;
        while (j < word.size() && word[j] == word[i]) ++j;
        out << ' ' << (word[i] < labels.size() ? labels[word[i]] : "x" + std::to_string(word[i] + 1));
        if (j - i > 1) out << '^' << (j - i);
        i = j;
      }
      if (w > 0) out << " [t^" << w << ']';
    }
  }
  return first ? "0" : out.str();
}

bool TensorElement::is_zero() const {
  return std::all_of(grades_.begin(), grades_.end(), [](const TensorPoly& p) { return p.empty(); });
}

std::vector<std::pair<Word, Word>> word_splits(const Word& w) {
  if (w.size() > 20) throw DimensionError("word too long to split");
  std::vector<std::pair<Word, Word>> out;
  const std::size_t n = w.size();
  out.reserve(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Word left, right;
    for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1 ? left : right).push_back(w[i]);
    out.emplace_back(std::move(left), std::move(right));
  }
  return out;
}

// ---------------------------------------------------------------------------
// EnvelopingAlgebra

EnvelopingAlgebra::EnvelopingAlgebra(std::shared_ptr<const StructureConstants> sc, AlgebraTag tag)
    : sc_(std::move(sc)), tag_(tag) {
  if (!sc_) throw ValidationError("missing structure constants");
}

void EnvelopingAlgebra::require_tag(const PBWElement& a) const {
  if (a.tag() != tag_)
    throw TagMismatchError("element of " + to_string(a.tag()) + " passed to " + to_string(tag_));
}

Poly EnvelopingAlgebra::normalize(const Word& word, const Rational& coeff) const {
  const std::size_t d = dim();
  for (auto letter : word)
    if (letter >= d) throw DimensionError("basis index out of range in PBW word");
  Poly out;
  std::vector<std::pair<Word, Rational>> stack{{word, coeff}};
  while (!stack.empty()) {
    auto [w, c] = std::move(stack.back());
    stack.pop_back();
    if (sgn(c) == 0) continue;
    const auto descent = std::adjacent_find(w.begin(), w.end(), [](auto a, auto b) { return a > b; });
    if (descent == w.end()) {
      add_term(out, w, c);
      continue;
    }
    const auto pos = static_cast<std::size_t>(descent - w.begin());
    const std::uint8_t hi = w[pos], lo = w[pos + 1];
    // x_hi x_lo = x_lo x_hi + [x_hi, x_lo]
    for (std::size_t k = 0; k < d; ++k) {
      const auto& ck = (*sc_)(hi, lo, k);
      if (sgn(ck) == 0) continue;
      Word shorter(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(pos));
      shorter.push_back(static_cast<std::uint8_t>(k));
      shorter.insert(shorter.end(), w.begin() + static_cast<std::ptrdiff_t>(pos + 2), w.end());
      stack.emplace_back(std::move(shorter), c * ck);
    }
    std::swap(w[pos], w[pos + 1]);
    stack.emplace_back(std::move(w), c);
  }
  return out;
}

Poly EnvelopingAlgebra::multiply(const Poly& a, const Poly& b) const {
  Poly out;
  for (const auto& [u, cu] : a)
    for (const auto& [v, cv] : b) {
      if (u.empty() || v.empty() || u.back() <= v.front())
        add_term(out, concat(u, v), cu * cv);
      else
        add_scaled(out, normalize(concat(u, v)), cu * cv);
    }
  return out;
}

Poly EnvelopingAlgebra::antipode(const Poly& a) const {
  Poly out;
  for (const auto& [w, c] : a) {
    const Word reversed(w.rbegin(), w.rend());
    add_scaled(out, normalize(reversed), w.size() % 2 == 0 ? c : Rational(-c));
  }
  return out;
}

PBWElement EnvelopingAlgebra::product(const PBWElement& a, const PBWElement& b) const {
  require_tag(a);
  require_tag(b);
  const std::size_t cap = std::min(a.cap(), b.cap());
  PBWElement out(tag_, cap);
  for (std::size_t i = 0; i <= cap; ++i) {
    if (a.grade(i).empty()) continue;
    for (std::size_t j = 0; i + j <= cap; ++j)
      if (!b.grade(j).empty()) add_scaled(out.grade(i + j), multiply(a.grade(i), b.grade(j)), Rational(1));
  }
  return out;
}

TensorElement EnvelopingAlgebra::coproduct(const PBWElement& a) const {
  require_tag(a);
  TensorElement out(tag_, a.cap());
  for (std::size_t w = 0; w <= a.cap(); ++w)
    for (const auto& [word, c] : a.grade(w))
      for (const auto& split : word_splits(word)) add_term(out.grade(w), split, c);
  return out;
}

PBWElement EnvelopingAlgebra::antipode(const PBWElement& a) const {
  require_tag(a);
  PBWElement out(tag_, a.cap());
  for (std::size_t w = 0; w <= a.cap(); ++w) out.grade(w) = antipode(a.grade(w));
  return out;
}

PBWElement EnvelopingAlgebra::counit_unit(const PBWElement& a) const {
  require_tag(a);
  PBWElement out(tag_, a.cap());
  for (std::size_t w = 0; w <= a.cap(); ++w) {
    const auto it = a.grade(w).find(Word{});
    if (it != a.grade(w).end()) out.grade(w).emplace(Word{}, it->second);
  }
  return out;
}

Rational EnvelopingAlgebra::counit(const PBWElement& a) const {
  Rational s(0);
  const auto unit = counit_unit(a);
  for (std::size_t w = 0; w <= unit.cap(); ++w)
    for (const auto& [word, c] : unit.grade(w)) s += c;
  return s;
}

PBWElement EnvelopingAlgebra::multiply(const TensorElement& a) const {
  if (a.tag() != tag_) throw TagMismatchError("tensor of " + to_string(a.tag()) + " passed to " + to_string(tag_));
  PBWElement out(tag_, a.cap());
  for (std::size_t w = 0; w <= a.cap(); ++w)
    for (const auto& [pair, c] : a.grade(w)) add_scaled(out.grade(w), normalize(concat(pair.first, pair.second)), c);
  return out;
}

TensorElement EnvelopingAlgebra::tensor_product(const TensorElement& a, const TensorElement& b) const {
  if (a.tag() != tag_ || b.tag() != tag_) throw TagMismatchError("tensor factors of the wrong algebra");
  const std::size_t cap = std::min(a.cap(), b.cap());
  TensorElement out(tag_, cap);
  for (std::size_t i = 0; i <= cap; ++i)
    for (std::size_t j = 0; i + j <= cap; ++j)
      for (const auto& [pa, ca] : a.grade(i))
        for (const auto& [pb, cb] : b.grade(j)) {
          const Poly left = normalize(concat(pa.first, pb.first));
          const Poly right = normalize(concat(pa.second, pb.second));
          for (const auto& [l, cl] : left)
            for (const auto& [r, cr] : right) add_term(out.grade(i + j), {l, r}, ca * cb * cl * cr);
        }
  return out;
}

TensorElement EnvelopingAlgebra::antipode_left(const TensorElement& a) const {
  TensorElement out(tag_, a.cap());
  for (std::size_t w = 0; w <= a.cap(); ++w)
    for (const auto& [pair, c] : a.grade(w))
      for (const auto& [s, cs] : antipode(Poly{{pair.first, Rational(1)}})) add_term(out.grade(w), {s, pair.second}, c * cs);
  return out;
}

PBWElement EnvelopingAlgebra::exp_concat(const PBWElement& v) const {
  require_tag(v);
  if (!v.is_lie_weight_one()) throw ValidationError("exponential argument must be a weight-one Lie element");
  PBWElement out = PBWElement::one(tag_, v.cap());
  Poly power{{Word{}, Rational(1)}};
  for (std::size_t n = 1; n <= v.cap(); ++n) {
    power = multiply(v.grade(1), power);
    add_scaled(out.grade(n), power, 1 / factorial(n));
  }
  return out;
}

RationalMatrix EnvelopingAlgebra::represent(const PBWElement& a) const {
  require_tag(a);
  if (!sc_->has_basis()) throw UnsupportedSpecError("structure constants carry no matrix basis");
  const auto& basis = sc_->basis();
  const std::size_t n = basis.front().dim();
  RationalMatrix out(n);
  for (std::size_t w = 0; w <= a.cap(); ++w)
    for (const auto& [word, c] : a.grade(w)) {
      RationalMatrix m = RationalMatrix::identity(n);
      for (auto letter : word) m = m * basis[letter];
      out.add_scaled(c, m);
    }
  return out;
}

RealMatrix EnvelopingAlgebra::represent_real(const PBWElement& a) const {
  require_tag(a);
  if (!sc_->has_basis()) throw UnsupportedSpecError("structure constants carry no matrix basis");
  std::vector<RealMatrix> basis;
  for (const auto& b : sc_->basis()) basis.push_back(to_real(b));
  const std::size_t n = basis.front().dim();
  RealMatrix out(n);
  for (std::size_t w = 0; w <= a.cap(); ++w)
    for (const auto& [word, c] : a.grade(w)) {
      RealMatrix m = RealMatrix::identity(n);
      for (auto letter : word) m = m * basis[letter];
      out.add_scaled(c.get_d(), m);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Double constants and splittings on a basis

StructureConstants double_constants(const StructureConstants& sc, const RationalMatrix& pi_plus) {
  const std::size_t d = sc.dim();
  if (pi_plus.dim() != d) throw DimensionError("pi+ matrix does not match the algebra dimension");
  StructureConstants out(d, sc.labels());
  const auto column_minus = [&](std::size_t j) {
    LieVector v(d);
    for (std::size_t k = 0; k < d; ++k) v[k] = (k == j ? Rational(1) : Rational(0)) - pi_plus(k, j);
    return v;
  };
  const auto unit = [&](std::size_t j) {
    LieVector v(d);
    v[j] = 1;
    return v;
  };
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const LieVector a = sc.bracket(column_minus(i), unit(j));
      const LieVector b = sc.bracket(unit(i), column_minus(j));
      for (std::size_t k = 0; k < d; ++k) out.set(i, j, k, a[k] + b[k] - sc(i, j, k));
    }
  if (!out.satisfies_jacobi())
    throw ValidationError("double bracket violates the Jacobi identity; pi+ is not a valid splitting");
  return out;
}

RationalMatrix splitting_on_basis(const StructureConstants& sc, const SplittingSpec& spec) {
  if (!sc.has_basis()) throw UnsupportedSpecError("structure constants carry no matrix basis");
  if (sc.basis().front().dim() != spec.dim())
    throw DimensionError("splitting dimension does not match the matrix basis");
  const std::size_t d = sc.dim();
  RationalMatrix p(d);
  for (std::size_t j = 0; j < d; ++j) {
    const auto coords = sc.coordinates(spec.plus(sc.basis()[j]));
    if (!coords)
      throw UnsupportedSpecError("pi+ maps basis element " + sc.labels()[j] + " outside the span of the basis");
    for (std::size_t k = 0; k < d; ++k) p(k, j) = (*coords)[k];
  }
  return p;
}

// ---------------------------------------------------------------------------
// PostLieEnveloping

PostLieEnveloping::PostLieEnveloping(std::shared_ptr<const StructureConstants> sc, RationalMatrix pi_plus)
    : pi_plus_(std::move(pi_plus)),
      ug_(sc, AlgebraTag::U_g),
      ugbar_(std::make_shared<const StructureConstants>(double_constants(*sc, pi_plus_)), AlgebraTag::U_gbar),
      cache_(std::make_shared<Cache>()) {}

PostLieEnveloping PostLieEnveloping::from_splitting(std::shared_ptr<const StructureConstants> sc,
                                                    const SplittingSpec& spec) {
  RationalMatrix p = splitting_on_basis(*sc, spec);
  return PostLieEnveloping(std::move(sc), std::move(p));
}

LieVector PostLieEnveloping::plus(const LieVector& x) const {
  const std::size_t d = dim();
  if (x.size() != d) throw DimensionError("Lie vector of wrong dimension");
  LieVector r(d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t j = 0; j < d; ++j) r[k] += pi_plus_(k, j) * x[j];
  return r;
}

LieVector PostLieEnveloping::minus(const LieVector& x) const {
  LieVector r = plus(x);
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = x[k] - r[k];
  return r;
}

bool PostLieEnveloping::is_projector() const { return pi_plus_ * pi_plus_ == pi_plus_; }

Poly PostLieEnveloping::generator_triangleright(std::uint8_t i, std::uint8_t j) const {
  // e_i |> e_j = -[pi+ e_i, e_j]
  const std::size_t d = dim();
  LieVector p(d), e(d);
  for (std::size_t k = 0; k < d; ++k) p[k] = -pi_plus_(k, i);
  e[j] = 1;
  return lie_poly(constants().bracket(p, e));
}

Poly PostLieEnveloping::triangleright_word(const Word& a, const Poly& b) const {
  Poly out;
  for (const auto& [w, c] : b) add_scaled(out, triangleright_monomial(a, w), c);
  return out;
}

Poly PostLieEnveloping::triangleright(const Poly& a, const Poly& b) const {
  Poly out;
  for (const auto& [u, cu] : a)
    for (const auto& [v, cv] : b) add_scaled(out, triangleright_monomial(u, v), cu * cv);
  return out;
}

Poly PostLieEnveloping::triangleright_monomial(const Word& a, const Word& b) const {
  if (a.empty()) return Poly{{b, Rational(1)}};
  if (b.empty()) return {};
  if (a.size() == 1 && b.size() == 1) return generator_triangleright(a[0], b[0]);
  {
    std::lock_guard lock(cache_->mutex);
    const auto it = cache_->triangleright.find({a, b});
    if (it != cache_->triangleright.end()) return it->second;
  }

  Poly out;
  if (b.size() == 1) {
    // (x A') |> y = x |> (A' |> y) - (x |> A') |> y
    const Word x{a.front()};
    const Word rest(a.begin() + 1, a.end());
    const Poly inner = triangleright_monomial(rest, b);
    out = triangleright_word(x, inner);
    const Poly x_on_rest = triangleright_monomial(x, rest);
    add_scaled(out, triangleright(x_on_rest, Poly{{b, Rational(1)}}), Rational(-1));
  } else {
    // A |> (y B') = (A_(1) |> y)(A_(2) |> B')
    const Word y{b.front()};
    const Word rest(b.begin() + 1, b.end());
    for (const auto& [left, right] : word_splits(a)) {
      const Poly l = triangleright_monomial(left, y);
      if (l.empty()) continue;
      const Poly r = triangleright_monomial(right, rest);
      if (r.empty()) continue;
      add_scaled(out, ug_.multiply(l, r), Rational(1));
    }
  }

  std::lock_guard lock(cache_->mutex);
  cache_->triangleright.emplace(std::make_pair(a, b), out);
  return out;
}

Poly PostLieEnveloping::star(const Poly& a, const Poly& b) const {
  Poly out;
  for (const auto& [u, cu] : a) {
    if (u.size() == 1) {
      // x * B = x B + x |> B
      add_scaled(out, ug_.multiply(Poly{{u, Rational(1)}}, b), cu);
      add_scaled(out, triangleright_word(u, b), cu);
      continue;
    }
    for (const auto& [left, right] : word_splits(u)) {
      const Poly tail = triangleright_word(right, b);
      if (!tail.empty()) add_scaled(out, ug_.multiply(Poly{{left, Rational(1)}}, tail), cu);
    }
  }
  return out;
}

PBWElement PostLieEnveloping::triangleright(const PBWElement& a, const PBWElement& b) const {
  ug_.require_tag(a);
  ug_.require_tag(b);
  const std::size_t cap = std::min(a.cap(), b.cap());
  PBWElement out(AlgebraTag::U_g, cap);
  for (std::size_t i = 0; i <= cap; ++i)
    for (std::size_t j = 0; i + j <= cap; ++j)
      if (!a.grade(i).empty() && !b.grade(j).empty())
        add_scaled(out.grade(i + j), triangleright(a.grade(i), b.grade(j)), Rational(1));
  return out;
}

PBWElement PostLieEnveloping::star(const PBWElement& a, const PBWElement& b) const {
  ug_.require_tag(a);
  ug_.require_tag(b);
  const std::size_t cap = std::min(a.cap(), b.cap());
  PBWElement out(AlgebraTag::U_g, cap);
  for (std::size_t i = 0; i <= cap; ++i)
    for (std::size_t j = 0; i + j <= cap; ++j)
      if (!a.grade(i).empty() && !b.grade(j).empty())
        add_scaled(out.grade(i + j), star(a.grade(i), b.grade(j)), Rational(1));
  return out;
}

TensorElement PostLieEnveloping::star_tensor(const TensorElement& a, const TensorElement& b) const {
  if (a.tag() != AlgebraTag::U_g || b.tag() != AlgebraTag::U_g) throw TagMismatchError("star needs U(g) tensors");
  const std::size_t cap = std::min(a.cap(), b.cap());
  TensorElement out(AlgebraTag::U_g, cap);
  for (std::size_t i = 0; i <= cap; ++i)
    for (std::size_t j = 0; i + j <= cap; ++j)
      for (const auto& [pa, ca] : a.grade(i))
        for (const auto& [pb, cb] : b.grade(j)) {
          const Poly left = star(Poly{{pa.first, Rational(1)}}, Poly{{pb.first, Rational(1)}});
          if (left.empty()) continue;
          const Poly right = star(Poly{{pa.second, Rational(1)}}, Poly{{pb.second, Rational(1)}});
          for (const auto& [l, cl] : left)
            for (const auto& [r, cr] : right) add_term(out.grade(i + j), {l, r}, ca * cb * cl * cr);
        }
  return out;
}

PBWElement PostLieEnveloping::exp_star(const PBWElement& v) const {
  ug_.require_tag(v);
  if (!v.is_lie_weight_one()) throw ValidationError("exponential argument must be a weight-one Lie element");
  PBWElement out = PBWElement::one(AlgebraTag::U_g, v.cap());
  Poly power{{Word{}, Rational(1)}};
  for (std::size_t n = 1; n <= v.cap(); ++n) {
    power = star(v.grade(1), power);
    add_scaled(out.grade(n), power, 1 / factorial(n));
  }
  return out;
}

PBWElement PostLieEnveloping::exp_dot(const PBWElement& v) const { return ugbar_.exp_concat(v); }

std::pair<PBWElement, PBWElement> PostLieEnveloping::split(const PBWElement& v) const {
  ug_.require_tag(v);
  if (!v.is_lie_weight_one()) throw ValidationError("split needs a weight-one Lie element");
  const LieVector x = v.lie_part(dim());
  return {PBWElement::lie(AlgebraTag::U_g, v.cap(), minus(x)), PBWElement::lie(AlgebraTag::U_g, v.cap(), plus(x))};
}

Poly PostLieEnveloping::morphism_image(const Word& w, bool minus_side) const {
  // r- = pi- and r+ = -pi+ extended multiplicatively
  const std::size_t d = dim();
  Poly out{{Word{}, Rational(1)}};
  for (auto letter : w) {
    LieVector e(d);
    e[letter] = 1;
    LieVector image = minus_side ? minus(e) : plus(e);
    if (!minus_side)
      for (auto& c : image) c = -c;
    out = ug_.multiply(out, lie_poly(image));
  }
  return out;
}

PBWElement PostLieEnveloping::f_map(const PBWElement& x) const {
  ugbar_.require_tag(x);
  PBWElement out(AlgebraTag::U_g, x.cap());
  for (std::size_t w = 0; w <= x.cap(); ++w)
    for (const auto& [word, c] : x.grade(w))
      for (const auto& [left, right] : word_splits(word)) {
        const Poly l = morphism_image(left, true);
        if (l.empty()) continue;
        const Poly r = ug_.antipode(morphism_image(right, false));
        add_scaled(out.grade(w), ug_.multiply(l, r), c);
      }
  return out;
}

// ---------------------------------------------------------------------------

LieVector random_lie_vector(Rng& rng, std::size_t dim) {
  LieVector v(dim);
  for (auto& c : v) c = rng.rational(5, 4);
  return v;
}

PBWElement random_element(Rng& rng, AlgebraTag tag, std::size_t dim, std::size_t cap, std::size_t max_length) {
  PBWElement e(tag, cap);
  // non-decreasing words of each length, built level by level
  std::vector<Word> level{Word{}};
  for (std::size_t len = 0; len <= std::min(cap, max_length); ++len) {
    for (const auto& w : level)
      if (rng.integer(0, 1) == 1) add_term(e.grade(len), w, rng.rational(5, 4));
    std::vector<Word> next;
    for (const auto& w : level)
      for (std::size_t letter = w.empty() ? 0 : w.back(); letter < dim; ++letter) {
        Word longer = w;
        longer.push_back(static_cast<std::uint8_t>(letter));
        next.push_back(std::move(longer));
      }
    level = std::move(next);
  }
  return e;
}

}  // namespace postlie
