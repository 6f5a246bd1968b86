#include "postlie/error.hpp"
#include "postlie/io.hpp"
#include "postlie/verify.hpp"
#include "support.hpp"

using namespace postlie;

TEST_CASE("doubles print with 17 significant digits") {
  CHECK(format_double(0.1) == "1.0000000000000001e-01");
  CHECK(format_double(-2.0) == "-2.0000000000000000e+00");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(dump_json(Json{{"x", 0.5}, {"n", 3}, {"v", {1.5, 2}}}) ==
        "{\n  \"x\": 5.0000000000000000e-01,\n  \"n\": 3,\n  \"v\": [1.5000000000000000e+00, 2]\n}\n");
}

TEST_CASE("matrices round trip") {
  Rng rng(1);
  const auto real = rng.real_matrix(3);
  CHECK(real_matrix_from_json(parse_json(dump_json(to_json(real)))) == real);
  const auto exact = rng.rational_matrix(3);
  CHECK(rational_matrix_from_json(to_json(exact)) == exact);
  CHECK(rational_matrix_from_json(parse_json(R"([[0.5, "1/3"], [2, "-7/4"]])"))(0, 1) == Rational(1, 3));
  CHECK_THROWS_AS(real_matrix_from_json(parse_json(R"({"dim": 2, "rows": [[1, 2], [3]]})")), ParseError);
  CHECK_THROWS_AS(real_matrix_from_json(parse_json(R"({"dim": 3, "rows": [[1, 2], [3, 4]]})")), ParseError);
  CHECK_THROWS_AS(rational_matrix_from_json(parse_json(R"([["x"]])")), ParseError);
}

TEST_CASE("splitting specs round trip") {
  for (const auto& spec : {SplittingSpec::lower_triangular(3), SplittingSpec::qr_skew(4)}) {
    const auto back = spec_from_json(parse_json(dump_json(to_json(spec))));
    CHECK(back.kind() == spec.kind());
    CHECK(back.dim() == spec.dim());
  }
  RationalMatrix half = RationalMatrix::identity(4);
  half *= Rational(1, 2);
  const auto custom = SplittingSpec::custom(2, half);
  CHECK(spec_from_json(to_json(custom)).coefficients() == half);
  CHECK_THROWS_AS(spec_from_json(parse_json(R"({"dim": 2, "kind": "upper"})")), ParseError);
  CHECK_THROWS_AS(spec_from_json(parse_json(R"({"dim": 0, "kind": "qr_skew"})")), ParseError);
  CHECK_THROWS_AS(spec_from_json(parse_json(R"({"dim": 2, "kind": "custom", "matrix": [[1]]})")), ParseError);
  CHECK_THROWS_AS(parse_json("{\"dim\": "), ParseError);
}

TEST_CASE("structure constants documents") {
  const auto sl2 = StructureConstants::sl2();
  const auto doc = algebra_from_json(to_json(sl2));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) CHECK(doc.constants(i, j, k) == sl2(i, j, k));
  CHECK(doc.constants.labels() == sl2.labels());
  CHECK_FALSE(doc.pi_plus);
  CHECK_THROWS_AS(algebra_from_json(parse_json(R"({"dim": 2, "c": [[0, 5, 1, "1"]]})")), ParseError);
  CHECK_THROWS_AS(algebra_from_json(parse_json(R"({"dim": 3, "c": [[0, 1, 0, "1"], [0, 2, 1, "1"]]})")),
                  ValidationError);
}

TEST_CASE("flow problems") {
  const auto p = problem_from_json(parse_json(R"({
    "spec": {"dim": 2, "kind": "qr_skew"},
    "a0": [[1, 2], [2, -1]],
    "t_grid": {"t_end": 0.5, "step": 0.1},
    "method": "rk4",
    "tolerances": {"rk4_step": 0.001}
  })"));
  CHECK(p.t_grid.size() == 6);
  CHECK(p.method == FlowMethod::rk4);
  CHECK(p.tol.rk4_step == 0.001);
  const auto again = problem_from_json(to_json(p));
  CHECK(again.t_grid == p.t_grid);
  CHECK(again.a0 == p.a0);
  CHECK(problem_from_json(parse_json(R"({"preset": "toda5"})")).a0.dim() == 5);
  CHECK_THROWS_AS(problem_from_json(parse_json(R"({"spec": {"dim": 2, "kind": "qr_skew"}, "a0": [[1, 0], [0, 1]]})")),
                  ParseError);
  CHECK_THROWS_AS(problem_from_json(parse_json(R"({"preset": "toda5", "method": "euler"})")), ParseError);
}

TEST_CASE("trajectory output") {
  auto p = preset("triangular3");
  p.t_grid = uniform_grid(0.2, 0.1);
  const auto traj = solve(p);
  const auto csv = to_csv(traj);
  CHECK(csv.rfind("t,a_1_1,a_1_2,a_1_3,a_2_1,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  const auto j = to_json(traj);
  CHECK(j["samples"].size() == 3);
  CHECK(j["method"] == "factorized");
}

TEST_CASE("verify reports do not depend on the thread count") {
  VerifyOptions one, three;
  one.threads = 1;
  three.threads = 3;
  const auto a = run_verify("star", one), b = run_verify("star", three);
  CHECK(a.passed());
  CHECK(dump_json(to_json(a)) == dump_json(to_json(b)));
  three.seed = 7;
  CHECK(dump_json(to_json(run_verify("star", three))) != dump_json(to_json(a)));
  CHECK_THROWS_AS(run_verify("everything"), ParseError);
}
