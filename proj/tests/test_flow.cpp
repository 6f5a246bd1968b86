#include <cmath>

#include "postlie/error.hpp"
#include "postlie/flow.hpp"
#include "postlie/linalg.hpp"
#include "support.hpp"

using namespace postlie;

namespace {

FlowProblem problem(SplittingSpec spec, RealMatrix a0, std::vector<double> grid,
                    FlowMethod method = FlowMethod::factorized) {
  return {std::move(spec), std::move(a0), std::move(grid), method, {}};
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

}  // namespace

TEST_CASE("problem validation") {
  auto p = problem(SplittingSpec::qr_skew(2), RealMatrix(2), {0.1, 0.2});
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p.t_grid = {0.0, 0.2, 0.2};
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p.t_grid = {};
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p.t_grid = {0.0, 1.0};
  p.a0 = RealMatrix(3);
  CHECK_THROWS_AS(solve(p), ValidationError);
  CHECK_THROWS_AS(parse_flow_method("euler"), ParseError);
  CHECK(parse_flow_method(to_string(FlowMethod::magnus_series)) == FlowMethod::magnus_series);
}

TEST_CASE("stationary initial values") {
  const auto spec = SplittingSpec::lower_triangular(3);
  Rng rng(1);
  const auto a0 = spec.plus(rng.real_matrix(3));
  for (auto method : {FlowMethod::factorized, FlowMethod::rk4, FlowMethod::magnus_series}) {
    auto p = problem(spec, a0, uniform_grid(1.0, 0.25), method);
    p.tol.rk4_step = 1e-2;
    const auto traj = solve(p);
    for (const auto& s : traj.samples) CHECK(frobenius_norm(s.a - a0) <= 1e-14);
    CHECK(max_of(traj.spectral_drift) <= 1e-14);
    CHECK(max_of(traj.lax_defect) <= 1e-13);
  }
}

TEST_CASE("qr flow on gl(2) sorts the eigenvalues") {
  const auto spec = SplittingSpec::qr_skew(2);
  const auto a0 = RealMatrix::from_rows({{0, 1}, {1, 0}});
  const auto traj = solve(problem(spec, a0, uniform_grid(10.0, 0.5)));
  CHECK(max_of(traj.spectral_drift) <= 1e-12);
  const auto& last = traj.samples.back().a;
  CHECK(last(0, 0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(last(1, 1) == doctest::Approx(-1.0).epsilon(1e-6));
  auto rk = problem(spec, a0, uniform_grid(10.0, 0.5), FlowMethod::rk4);
  CHECK(max_deviation(traj, solve_rk4(rk)) <= 1e-10);
}

TEST_CASE("initial derivative") {
  const auto spec = SplittingSpec::qr_skew(2);
  const auto a0 = RealMatrix::from_rows({{0, 1}, {1, 0}});
  const auto expected = RealMatrix::from_rows({{2, 0}, {0, -2}});
  CHECK(bracket(a0, spec.plus(a0)) == expected);
  for (double h : {1e-3, 1e-4}) {
    const auto traj = solve_factorized(problem(spec, a0, {0.0, h}));
    const RealMatrix slope = (1.0 / h) * (traj.samples[1].a - a0);
    CHECK(frobenius_norm(slope - expected) <= 10 * h);
  }
}

TEST_CASE("Toda flow") {
  const auto p = preset("toda5");
  const auto traj = solve(p);
  CHECK(traj.samples.size() == 21);
  CHECK(max_of(traj.spectral_drift) <= 1e-10);
  CHECK(conjugation_residual(traj) <= 1e-11);
  CHECK(symmetry_residual(traj) <= 1e-11);
  for (const auto& s : traj.samples) CHECK(frobenius_norm(s.transporter.transpose() * s.transporter - RealMatrix::identity(5)) <= 1e-10);

  auto halved = p;
  halved.tol.substep_norm_cap /= 2;
  CHECK(max_deviation(traj, solve_factorized(halved)) <= 1e-9);

  auto magnus = p;
  magnus.method = FlowMethod::magnus_series;
  CHECK(max_deviation(traj, solve(magnus)) <= 1e-8);
}

TEST_CASE("RK4 converges at fourth order toward the factorized flow") {
  auto p = preset("toda5");
  p.t_grid = uniform_grid(1.0, 0.5);
  const auto exact = solve_factorized(p);
  std::vector<double> dev;
  for (double h : {0.02, 0.01}) {
    p.tol.rk4_step = h;
    dev.push_back(max_deviation(exact, solve_rk4(p)));
  }
  CHECK(dev[0] / dev[1] == doctest::Approx(16.0).epsilon(0.15));
}

TEST_CASE("coarse RK4 drifts off the isospectral manifold") {
  auto p = preset("toda5");
  p.method = FlowMethod::rk4;
  p.tol.rk4_step = 0.1;
  const auto coarse = solve(p);
  const auto exact = solve(preset("toda5"));
  CHECK(max_of(coarse.spectral_drift) > 100 * std::max(max_of(exact.spectral_drift), 1e-16));
}

TEST_CASE("Lax defect is second order in the grid spacing") {
  auto p = preset("toda5");
  std::vector<double> defects;
  for (double step : {0.04, 0.02, 0.01}) {
    p.t_grid = uniform_grid(0.4, step);
    const auto traj = solve_factorized(p);
    const auto d = lax_defect(traj, p.spec);
    defects.push_back(max_of(d));
  }
  CHECK(defects[0] / defects[1] == doctest::Approx(4.0).epsilon(0.2));
  CHECK(defects[1] / defects[2] == doctest::Approx(4.0).epsilon(0.2));
  FlowTrajectory two;
  two.samples.resize(2, {0.0, RealMatrix(2), RealMatrix(2)});
  CHECK_THROWS_AS(lax_defect(two, p.spec), ValidationError);
}

TEST_CASE("isospectral for random gl(n)") {
  Rng rng(2);
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto spec = SplittingSpec::qr_skew(n);
    const auto a0 = test::random_with_norm(rng, n, rng.uniform(0.5, 2.0));
    const auto traj = solve(problem(spec, a0, uniform_grid(2.0, 0.25)));
    CHECK(max_of(traj.spectral_drift) <= 1e-10);
    CHECK(conjugation_residual(traj) <= 1e-11);
  }
}

TEST_CASE("other presets") {
  for (const auto& name : {"qrflow4", "triangular3"}) {
    const auto traj = solve(preset(name));
    CHECK(max_of(traj.spectral_drift) <= 1e-10);
    CHECK(conjugation_residual(traj) <= 1e-11);
  }
  CHECK(symmetry_residual(solve(preset("qrflow4"))) <= 1e-11);
  CHECK_THROWS_AS(preset("toda7"), ParseError);
}

TEST_CASE("star identities in the matrix representation") {
  Rng rng(3);
  const auto spec = SplittingSpec::lower_triangular(3);
  const auto x = rng.real_matrix(3), y = rng.real_matrix(3), xi = rng.real_matrix(3);
  const auto id = star_identity_check(spec, x, y, RealMatrix::identity(3), 0.1);
  CHECK(id.star_action <= 1e-12);
  for (const auto& s : {SplittingSpec::lower_triangular(3), SplittingSpec::qr_skew(3)}) {
    const auto r = star_identity_check(s, x, y, xi, 0.1);
    CHECK(r.negative_exponential <= 1e-10);
    CHECK(r.star_action <= 1e-10);
    CHECK(r.star_group_product <= 1e-10);
    CHECK(r.star_inverse_right <= 1e-10);
    CHECK(r.star_inverse_left <= 1e-10);
  }
  CHECK_THROWS_AS(star_identity_check(spec, 10.0 * x, y, xi, 0.1), DomainError);
}
