#include <functional>

#include "postlie/enveloping.hpp"
#include "postlie/error.hpp"
#include "postlie/lie.hpp"
#include "support.hpp"

using namespace postlie;

namespace {

constexpr auto Ug = AlgebraTag::U_g;
constexpr auto Ugbar = AlgebraTag::U_gbar;

std::shared_ptr<const StructureConstants> sl2() {
  return std::make_shared<const StructureConstants>(StructureConstants::sl2());
}

Poly mono(Word w, Rational c = 1) { return Poly{{std::move(w), c}}; }

// Straightening that always rewrites the rightmost descent, recursively.
Poly straighten_right(const StructureConstants& sc, const Word& w) {
  for (std::size_t pos = w.size(); pos-- > 1;) {
    if (w[pos - 1] <= w[pos]) continue;
    Word swapped = w;
    std::swap(swapped[pos - 1], swapped[pos]);
    Poly out = straighten_right(sc, swapped);
    for (std::size_t k = 0; k < sc.dim(); ++k) {
      const auto& c = sc(w[pos - 1], w[pos], k);
      if (sgn(c) == 0) continue;
      Word shorter(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(pos - 1));
      shorter.push_back(static_cast<std::uint8_t>(k));
      shorter.insert(shorter.end(), w.begin() + static_cast<std::ptrdiff_t>(pos + 1), w.end());
      add_scaled(out, straighten_right(sc, shorter), c);
    }
    return out;
  }
  return mono(w);
}

// Non-projector solution of the modified Yang-Baxter equation on sl(2):
// R = +1 on e, -1 on f, 0 on h, so pi+ = (id - R)/2 halves h.
RationalMatrix sl2_standard_r_plus() {
  RationalMatrix p(3);
  p(1, 1) = Rational(1, 2);
  p(2, 2) = 1;
  return p;
}

PBWElement lie(const LieVector& v, std::size_t cap, AlgebraTag tag = Ug) { return PBWElement::lie(tag, cap, v); }

}  // namespace

TEST_CASE("sl2 structure constants") {
  const auto sc = StructureConstants::sl2();
  CHECK(sc.dim() == 3);
  CHECK(sc(1, 0, 0) == 2);   // [h, e] = 2e
  CHECK(sc(1, 2, 2) == -2);  // [h, f] = -2f
  CHECK(sc(0, 2, 1) == 1);   // [e, f] = h
  CHECK_NOTHROW(sc.validate());
  for (const auto& name : {"gl2", "gl3"}) CHECK_NOTHROW(StructureConstants::builtin(name).validate());
  CHECK_THROWS_AS(StructureConstants::builtin("so3"), ParseError);
}

TEST_CASE("structure constants reject bad input") {
  StructureConstants sc(3);
  sc.set(0, 1, 0, 1);
  sc.set(0, 2, 1, 1);  // [x1, [x2, x3]] + cyclic = -x2
  CHECK(sc.antisymmetric());
  CHECK_THROWS_AS(sc.validate(), ValidationError);
  CHECK_THROWS_AS(sc.set(1, 1, 0, 1), ValidationError);
  CHECK_THROWS_AS(StructureConstants::from_basis({RationalMatrix::unit(2, 0, 1), RationalMatrix::unit(2, 1, 0)}),
                  ValidationError);
  CHECK_THROWS_AS(StructureConstants::from_basis({RationalMatrix::unit(2, 0, 1), RationalMatrix::unit(2, 0, 1)}),
                  ValidationError);
}

TEST_CASE("PBW normal forms") {
  const EnvelopingAlgebra u(sl2(), Ug);
  CHECK(u.normalize({0, 1, 1, 2}) == mono({0, 1, 1, 2}));
  Poly he = mono({0, 1});
  add_term(he, {0}, 2);
  CHECK(u.normalize({1, 0}) == he);
  CHECK(u.normalize({2, 2}) == mono({2, 2}));
  CHECK(u.normalize({}) == mono({}));
}

TEST_CASE("PBW normal form does not depend on rewrite order") {
  const auto sc = StructureConstants::gl(2);
  const EnvelopingAlgebra u(std::make_shared<const StructureConstants>(sc), Ug);
  Rng rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    Word w;
    const auto len = rng.integer(2, 6);
    for (long i = 0; i < len; ++i) w.push_back(static_cast<std::uint8_t>(rng.integer(0, 3)));
    CHECK(u.normalize(w) == straighten_right(sc, w));
  }
}

TEST_CASE("concatenation product is associative") {
  const EnvelopingAlgebra u(sl2(), Ug);
  Rng rng(2);
  const auto a = random_element(rng, Ug, 3, 6, 2), b = random_element(rng, Ug, 3, 6, 2),
             c = random_element(rng, Ug, 3, 6, 2);
  CHECK(u.product(u.product(a, b), c) == u.product(a, u.product(b, c)));
}

TEST_CASE("coproduct") {
  const EnvelopingAlgebra u(sl2(), Ug);
  const auto x = PBWElement::lie(Ug, 3, {0, 1, 0});
  const auto dx = u.coproduct(x);
  CHECK(dx.grade(1) == TensorPoly{{{Word{1}, Word{}}, 1}, {{Word{}, Word{1}}, 1}});

  Rng rng(3);
  const auto a = random_element(rng, Ug, 3, 5, 2), b = random_element(rng, Ug, 3, 5, 3);
  // cocommutative
  const auto da = u.coproduct(a);
  TensorElement flipped(Ug, da.cap());
  for (std::size_t w = 0; w <= da.cap(); ++w)
    for (const auto& [p, c] : da.grade(w)) add_term(flipped.grade(w), {p.second, p.first}, c);
  CHECK(flipped == da);
  // multiplicative
  CHECK(u.coproduct(u.product(a, b)) == u.tensor_product(u.coproduct(a), u.coproduct(b)));
  // counit on either side
  PBWElement recovered(Ug, da.cap());
  for (std::size_t w = 0; w <= da.cap(); ++w)
    for (const auto& [p, c] : da.grade(w))
      if (p.first.empty()) add_term(recovered.grade(w), p.second, c);
  CHECK(recovered == a);
}

TEST_CASE("antipode") {
  const EnvelopingAlgebra u(sl2(), Ug);
  // S(e f) = f e
  CHECK(u.antipode(PBWElement::homogeneous(Ug, 2, mono({0, 2}), 2)).grade(2) == u.normalize({2, 0}));
  Rng rng(4);
  for (int trial = 0; trial < 3; ++trial) {
    const auto a = random_element(rng, Ug, 3, 4, 4);
    CHECK(u.multiply(u.antipode_left(u.coproduct(a))) == u.counit_unit(a));
    CHECK(u.antipode(u.antipode(a)) == a);
  }
  const auto x = PBWElement::lie(Ug, 2, {1, 2, 3});
  CHECK(u.multiply(u.antipode_left(u.coproduct(x))).is_zero());
  CHECK(u.counit(x) == 0);
  CHECK(u.counit(PBWElement::one(Ug, 2)) == 1);
}

TEST_CASE("tags must agree") {
  const PostLieEnveloping p = PostLieEnveloping::from_splitting(sl2(), SplittingSpec::lower_triangular(2));
  const auto a = PBWElement::one(Ug, 2);
  const auto b = PBWElement::one(Ugbar, 2);
  CHECK_THROWS_AS(a + b, TagMismatchError);
  CHECK_THROWS_AS(p.algebra().product(a, b), TagMismatchError);
  CHECK_THROWS_AS(p.star(b, b), TagMismatchError);
  CHECK_THROWS_AS(p.f_map(a), TagMismatchError);
}

TEST_CASE("splitting on a basis") {
  const auto lower = splitting_on_basis(StructureConstants::sl2(), SplittingSpec::lower_triangular(2));
  CHECK(lower == RationalMatrix::from_rows({{0, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  // qr skew sends f to f - e
  const auto qr = splitting_on_basis(StructureConstants::sl2(), SplittingSpec::qr_skew(2));
  CHECK(qr == RationalMatrix::from_rows({{0, 0, -1}, {0, 0, 0}, {0, 0, 1}}));
  // a custom map leaving sl(2)
  RationalMatrix c(4);
  c(0, 1) = 1;  // vec index 0 = (0,0) picks up entry (1,0)
  CHECK_THROWS_AS(splitting_on_basis(StructureConstants::sl2(), SplittingSpec::custom(2, c)), UnsupportedSpecError);
}

TEST_CASE("double constants") {
  const auto sc = StructureConstants::sl2();
  CHECK(double_constants(sc, RationalMatrix(3)).bracket({1, 2, 3}, {3, 1, -1}) == sc.bracket({1, 2, 3}, {3, 1, -1}));
  const auto neg = double_constants(sc, RationalMatrix::identity(3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) CHECK(neg(i, j, k) == -sc(i, j, k));
  const auto lower = double_constants(sc, splitting_on_basis(sc, SplittingSpec::lower_triangular(2)));
  CHECK(lower.satisfies_jacobi());
  CHECK(lower.antisymmetric());

  Rng rng(5);
  bool rejected = false;
  for (int trial = 0; trial < 5 && !rejected; ++trial) {
    try {
      double_constants(StructureConstants::gl(2), rng.rational_matrix(4));
    } catch (const ValidationError&) {
      rejected = true;
    }
  }
  CHECK(rejected);
}

TEST_CASE("post-Lie product on U(g)") {
  const auto p = PostLieEnveloping::from_splitting(sl2(), SplittingSpec::lower_triangular(2));
  const auto& sc = p.constants();
  Rng rng(6);
  const LieVector x = random_lie_vector(rng, 3), y = random_lie_vector(rng, 3);
  const auto a = random_element(rng, Ug, 3, 4, 3);
  CHECK(p.triangleright(PBWElement::one(Ug, 4), a) == a);
  CHECK(p.triangleright(a, PBWElement::one(Ug, 4)) == p.algebra().counit_unit(a));

  LieVector px = p.plus(x);
  for (auto& c : px) c = -c;
  CHECK(p.triangleright(lie(x, 3), lie(y, 3)) == PBWElement::lie(Ug, 3, sc.bracket(px, y), 2));

  // x |> y^2 = (x |> y) y + y (x |> y)
  const auto yy = p.algebra().product(lie(y, 4), lie(y, 4));
  const auto xy = p.triangleright(lie(x, 4), lie(y, 4));
  CHECK(p.triangleright(lie(x, 4), yy) == p.algebra().product(xy, lie(y, 4)) + p.algebra().product(lie(y, 4), xy));
}

TEST_CASE("composition law for the extended product") {
  for (const auto& spec : {SplittingSpec::lower_triangular(2), SplittingSpec::qr_skew(2)}) {
    const auto p = PostLieEnveloping::from_splitting(sl2(), spec);
    Rng rng(7);
    for (int trial = 0; trial < 3; ++trial) {
      const auto a = random_element(rng, Ug, 3, 5, 2), b = random_element(rng, Ug, 3, 5, 2),
                 c = random_element(rng, Ug, 3, 5, 2);
      CHECK(p.triangleright(a, p.triangleright(b, c)) == p.triangleright(p.star(a, b), c));
    }
  }
}

TEST_CASE("star product") {
  const auto p = PostLieEnveloping::from_splitting(sl2(), SplittingSpec::lower_triangular(2));
  const auto& u = p.algebra();
  Rng rng(8);
  const LieVector x = random_lie_vector(rng, 3), y = random_lie_vector(rng, 3);
  LieVector bracket_term = p.constants().bracket(p.plus(x), y);
  for (auto& c : bracket_term) c = -c;
  CHECK(p.star(lie(x, 3), lie(y, 3)) ==
        u.product(lie(x, 3), lie(y, 3)) + PBWElement::lie(Ug, 3, bracket_term, 2));

  const auto a = random_element(rng, Ug, 3, 4, 3);
  const auto one = PBWElement::one(Ug, 4);
  CHECK(p.star(one, a) == a);
  CHECK(p.star(a, one) == a);

  for (int trial = 0; trial < 3; ++trial) {
    const auto gx = lie(random_lie_vector(rng, 3), 3), gy = lie(random_lie_vector(rng, 3), 3),
               gz = lie(random_lie_vector(rng, 3), 3);
    CHECK(p.star(p.star(gx, gy), gz) == p.star(gx, p.star(gy, gz)));
  }
  const auto b = random_element(rng, Ug, 3, 6, 2), c = random_element(rng, Ug, 3, 6, 2);
  const auto a2 = random_element(rng, Ug, 3, 6, 2);
  CHECK(p.star(p.star(a2, b), c) == p.star(a2, p.star(b, c)));
}

TEST_CASE("star exponential factorizes") {
  Rng rng(9);
  for (const auto& pi_plus : {splitting_on_basis(StructureConstants::sl2(), SplittingSpec::lower_triangular(2)),
                              splitting_on_basis(StructureConstants::sl2(), SplittingSpec::qr_skew(2)),
                              sl2_standard_r_plus()}) {
    const PostLieEnveloping p(sl2(), pi_plus);
    const auto v = lie(random_lie_vector(rng, 3), 5);
    const auto [vm, vp] = p.split(v);
    const auto& u = p.algebra();
    CHECK(p.exp_star(v) == u.product(u.exp_concat(vm), u.exp_concat(vp)));
    // group-like through the cap
    const auto e = p.exp_star(v);
    TensorElement ee(Ug, e.cap());
    for (std::size_t i = 0; i <= e.cap(); ++i)
      for (std::size_t j = 0; i + j <= e.cap(); ++j)
        for (const auto& [l, cl] : e.grade(i))
          for (const auto& [r, cr] : e.grade(j)) add_term(ee.grade(i + j), {l, r}, cl * cr);
    CHECK(u.coproduct(e) == ee);
  }
}

TEST_CASE("star exponential on the subalgebras") {
  const auto p = PostLieEnveloping::from_splitting(sl2(), SplittingSpec::lower_triangular(2));
  Rng rng(10);
  const auto [vm, vp] = p.split(lie(random_lie_vector(rng, 3), 5));
  CHECK(p.exp_star(vm) == p.algebra().exp_concat(vm));
  CHECK(p.exp_star(vp) == p.algebra().exp_concat(vp));
}

TEST_CASE("second-order star exponential term") {
  const auto p = PostLieEnveloping::from_splitting(sl2(), SplittingSpec::qr_skew(2));
  const auto& u = p.algebra();
  Rng rng(11);
  const auto v = lie(random_lie_vector(rng, 3), 2);
  const auto [vm, vp] = p.split(v);
  const auto half = Rational(1, 2);
  const auto expected = half * u.product(vp, vp) + half * u.product(vm, vm) + u.product(vm, vp);
  CHECK(p.exp_star(v).grade(2) == expected.grade(2));
  CHECK_THROWS_AS(p.exp_star(u.product(v, v)), ValidationError);
}

TEST_CASE("Delta is a morphism for the star product") {
  const auto p = PostLieEnveloping::from_splitting(sl2(), SplittingSpec::lower_triangular(2));
  Rng rng(12);
  const auto a = random_element(rng, Ug, 3, 4, 2), b = random_element(rng, Ug, 3, 4, 2);
  CHECK(p.algebra().coproduct(p.star(a, b)) == p.star_tensor(p.algebra().coproduct(a), p.algebra().coproduct(b)));
}

TEST_CASE("F map") {
  Rng rng(13);
  for (const auto& spec : {SplittingSpec::lower_triangular(2), SplittingSpec::qr_skew(2)}) {
    const auto p = PostLieEnveloping::from_splitting(sl2(), spec);
    const LieVector x = random_lie_vector(rng, 3), y = random_lie_vector(rng, 3);
    CHECK(p.f_map(lie(x, 2, Ugbar)) == lie(x, 2));
    const auto xy = p.double_algebra().product(lie(x, 2, Ugbar), lie(y, 2, Ugbar));
    CHECK(p.f_map(xy) == p.star(lie(x, 2), lie(y, 2)));

    std::vector<LieVector> xs;
    for (int i = 0; i < 4; ++i) xs.push_back(random_lie_vector(rng, 3));
    PBWElement bar = PBWElement::one(Ugbar, 4), starred = PBWElement::one(Ug, 4);
    for (const auto& xi : xs) {
      bar = p.double_algebra().product(bar, lie(xi, 4, Ugbar));
      starred = p.star(starred, lie(xi, 4));
    }
    CHECK(p.f_map(bar) == starred);

    const auto v = random_lie_vector(rng, 3);
    const auto [vm, vp] = p.split(lie(v, 5));
    CHECK(p.f_map(p.exp_dot(lie(v, 5, Ugbar))) == p.algebra().product(p.algebra().exp_concat(vm), p.algebra().exp_concat(vp)));
  }
}

TEST_CASE("matrix image of the star exponential") {
  const auto sc = std::make_shared<const StructureConstants>(StructureConstants::gl(2));
  const auto spec = SplittingSpec::qr_skew(2);
  const auto p = PostLieEnveloping::from_splitting(sc, spec);
  Rng rng(14);
  LieVector v = random_lie_vector(rng, 4);
  RealMatrix vm(2);
  for (std::size_t k = 0; k < 4; ++k) vm += v[k].get_d() * to_real(sc->basis()[k]);
  const double scale = 0.5 / frobenius_norm(vm);
  for (auto& c : v) c *= rational_from_double(scale);
  vm = RealMatrix(2);
  for (std::size_t k = 0; k < 4; ++k) vm += v[k].get_d() * to_real(sc->basis()[k]);
  const auto image = p.algebra().represent_real(p.exp_star(lie(v, 10)));
  const auto expected = expm(spec.minus(vm)).matrix() * expm(spec.plus(vm)).matrix();
  CHECK(frobenius_norm(image - expected) <= 1e-10);
}

TEST_CASE("printing") {
  const auto sc = StructureConstants::sl2();
  PBWElement a = PBWElement::one(Ug, 2);
  add_term(a.grade(2), {0, 0, 2}, Rational(1, 3));
  CHECK(a.to_string(sc.labels()) == "1 + 1/3 e^2 f [t^2]");
  CHECK(PBWElement(Ug, 1).to_string(sc.labels()) == "0");
}
