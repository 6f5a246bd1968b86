// Acceptance gate: one PASS/FAIL line per criterion, with the pinned
// tolerances and runtime limits. Usage: acceptance <path to postlie CLI> <work dir>

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "postlie/chi_magnus.hpp"
#include "postlie/enveloping.hpp"
#include "postlie/flow.hpp"
#include "postlie/random.hpp"
#include "postlie/splitting.hpp"

using namespace postlie;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const std::array<SplittingSpec (*)(std::size_t), 2> kSplittings = {&SplittingSpec::lower_triangular,
                                                                   &SplittingSpec::qr_skew};

RealMatrix with_norm(Rng& rng, std::size_t n, double size) {
  RealMatrix m = rng.real_matrix(n);
  return (size / frobenius_norm(m)) * m;
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

std::size_t nonzero_entries(const RationalMatrix& m) {
  return static_cast<std::size_t>(
      std::count_if(m.values().begin(), m.values().end(), [](const Rational& v) { return sgn(v) != 0; }));
}

std::shared_ptr<const StructureConstants> algebra(const std::string& name) {
  return std::make_shared<const StructureConstants>(StructureConstants::builtin(name));
}

PostLieEnveloping enveloping(const std::string& name, SplittingSpec (*make)(std::size_t)) {
  const auto sc = algebra(name);
  return PostLieEnveloping::from_splitting(sc, make(sc->basis().front().dim()));
}

constexpr auto Ug = AlgebraTag::U_g;
constexpr auto Ugbar = AlgebraTag::U_gbar;

Outcome r_matrix_certification() {
  Rng rng(101);
  double mybe = 0.0, mcybe = 0.0;
  for (std::size_t n = 2; n <= 6; ++n) {
    for (auto make : kSplittings) {
      SamplePairs<double> pairs;
      for (int i = 0; i < 100; ++i) pairs.emplace_back(rng.real_matrix(n), rng.real_matrix(n));
      const auto r = validate_splitting(make(n), pairs, 1e-12);
      mybe = std::max({mybe, r.mybe_plus, r.mybe_minus});
      mcybe = std::max(mcybe, r.mcybe);
    }
  }
  return {mybe <= 1e-12 && mcybe <= 1e-12,
          fmt::format("gl(2..6) x 2 splittings x 100 pairs: mYBE {:.2e}, mCYBE {:.2e} (<= 1e-12)", mybe, mcybe)};
}

Outcome postlie_axioms() {
  Rng rng(102);
  double axioms = 0.0, jacobi = 0.0, subalg = 0.0, assoc = 0.0;
  for (std::size_t n = 2; n <= 6; ++n) {
    for (auto make : kSplittings) {
      const auto spec = make(n);
      for (int i = 0; i < 100; ++i) {
        const auto r = postlie_residuals(spec, rng.real_matrix(n), rng.real_matrix(n), rng.real_matrix(n));
        axioms = std::max({axioms, r.axiom_derivation, r.axiom_associator});
        jacobi = std::max(jacobi, r.double_jacobi);
        subalg = std::max({subalg, r.subalgebra_minus, r.subalgebra_plus});
        assoc = std::max(assoc, r.succ_associator);
      }
    }
  }
  const double worst = std::max({axioms, jacobi, subalg, assoc});
  return {worst <= 1e-12, fmt::format("axioms {:.2e}, [[.,.]] Jacobi {:.2e}, pi-+[[x,y]] {:.2e}, "
                                      "-1/4 associator {:.2e} (<= 1e-12)",
                                      axioms, jacobi, subalg, assoc)};
}

Outcome factorization() {
  Rng rng(103);
  double worst = 0.0;
  int iterations = 0;
  for (auto make : kSplittings) {
    const auto spec = make(4);
    const auto x = with_norm(rng, 4, 1.0);
    ChiOptions opts;
    opts.tol = 1e-14;
    const auto chi = chi_fixed_point(spec, x, 0.2, opts);
    const auto lhs = expm(0.2 * x).matrix();
    const auto rhs = expm(spec.plus(chi.value)).matrix() * expm(spec.minus(chi.value)).matrix();
    worst = std::max(worst, frobenius_norm(lhs - rhs));
    iterations = std::max(iterations, chi.iterations);
  }
  return {worst <= 1e-10 && iterations <= 30,
          fmt::format("gl(4), |x| = 1, t = 0.2: residual {:.2e} (<= 1e-10), {} iterations (<= 30)", worst, iterations)};
}

Outcome magnus_order() {
  Rng rng(104);
  bool pass = true;
  std::string detail;
  for (auto make : kSplittings) {
    const auto spec = make(3);
    const auto x = with_norm(rng, 3, 3.9);
    for (std::size_t order : {4u, 6u}) {
      const auto series = magnus_coefficients(spec, x, order);
      std::vector<double> ts, errs;
      for (int k = 3; k <= 8; ++k) {
        const double t = std::ldexp(1.0, -k);
        ChiOptions opts;
        opts.tol = 1e-16;
        ts.push_back(t);
        errs.push_back(frobenius_norm(series.evaluate(t) - chi_fixed_point(spec, x, t, opts).value));
      }
      const double slope = loglog_slope(ts, errs);
      pass = pass && std::abs(slope - (order + 1.0)) <= 0.3;
      detail += fmt::format("{}{} N={}: {:.3f}", detail.empty() ? "" : ", ", to_string(spec.kind()), order, slope);
    }
  }
  return {pass, "slopes " + detail + " (N+1 +- 0.3)"};
}

Outcome printed_terms() {
  Rng rng(105);
  std::size_t nonzero = 0;
  double numeric = 0.0;
  for (auto make : kSplittings) {
    for (int trial = 0; trial < 5; ++trial) {
      auto a0 = rng.rational_matrix(2);
      a0(1, 1) = -a0(0, 0);
      const auto printed = chi_printed_terms(make(2), a0, 3);
      const auto series = magnus_coefficients(make(2), a0, 3);
      nonzero += nonzero_entries(printed[1] - series[2]) + nonzero_entries(printed[2] - series[3]);
    }
    const auto a0 = rng.real_matrix(3);
    const auto printed = chi_printed_terms(make(3), a0, 3);
    const auto series = magnus_coefficients(make(3), a0, 3);
    numeric = std::max({numeric, frobenius_norm(printed[1] - series[2]), frobenius_norm(printed[2] - series[3])});
  }
  return {nonzero == 0 && numeric <= 1e-13,
          fmt::format("sl(2) exact: {} nonzero entries; gl(3): {:.2e} (<= 1e-13)", nonzero, numeric)};
}

Outcome star_factorization() {
  Rng rng(106);
  const auto p = enveloping("sl2", &SplittingSpec::lower_triangular);
  const auto& u = p.algebra();
  std::size_t terms = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const auto v = PBWElement::lie(Ug, 6, random_lie_vector(rng, 3));
    const auto [vm, vp] = p.split(v);
    terms += (p.exp_star(v) - u.product(u.exp_concat(vm), u.exp_concat(vp))).term_count();
  }
  return {terms == 0, fmt::format("U(sl2), degree 6, 5 rational v: {} nonzero terms in exp*(v) - exp(v-)exp(v+)", terms)};
}

Outcome f_morphism() {
  Rng rng(107);
  std::size_t products = 0, exponentials = 0;
  for (const char* name : {"sl2", "gl2"}) {
    const auto p = enveloping(name, &SplittingSpec::lower_triangular);
    const std::size_t d = p.dim();
    for (int trial = 0; trial < 20; ++trial) {
      const auto length = static_cast<std::size_t>(rng.integer(1, 4));
      PBWElement bar = PBWElement::one(Ugbar, 4), starred = PBWElement::one(Ug, 4);
      for (std::size_t k = 0; k < length; ++k) {
        const auto x = random_lie_vector(rng, d);
        bar = p.double_algebra().product(bar, PBWElement::lie(Ugbar, 4, x));
        starred = p.star(starred, PBWElement::lie(Ug, 4, x));
      }
      products += (p.f_map(bar) - starred).term_count();
    }
    const auto v = random_lie_vector(rng, d);
    const auto [vm, vp] = p.split(PBWElement::lie(Ug, 5, v));
    const auto& u = p.algebra();
    exponentials +=
        (p.f_map(p.exp_dot(PBWElement::lie(Ugbar, 5, v))) - u.product(u.exp_concat(vm), u.exp_concat(vp))).term_count();
  }
  return {products == 0 && exponentials == 0,
          fmt::format("sl2/gl2: {} nonzero terms over 40 monomials, {} in F(exp(v)) - exp(v-)exp(v+) through degree 5",
                      products, exponentials)};
}

Outcome hopf_compatibility() {
  Rng rng(108);
  std::size_t mismatches = 0, cases = 0;
  for (const char* name : {"sl2", "gl2"}) {
    for (auto make : kSplittings) {
      const auto p = enveloping(name, make);
      for (int trial = 0; trial < 5; ++trial, ++cases) {
        const auto a = random_element(rng, Ug, p.dim(), 3, 3), b = random_element(rng, Ug, p.dim(), 3, 3);
        const auto& u = p.algebra();
        if (!(u.coproduct(p.star(a, b)) == p.star_tensor(u.coproduct(a), u.coproduct(b)))) ++mismatches;
      }
    }
  }
  return {mismatches == 0, fmt::format("{} of {} random pairs differ through degree 3", mismatches, cases)};
}

Outcome isospectral_flow() {
  const auto p = preset("toda5");
  const auto traj = solve(p);
  auto rk4 = p;
  rk4.method = FlowMethod::rk4;
  rk4.tol.rk4_step = 1e-4;
  const double drift = max_of(traj.spectral_drift);
  const double deviation = max_deviation(traj, solve(rk4));
  const double symmetry = symmetry_residual(traj);

  auto refine = p;
  std::vector<double> steps, defects;
  for (double step : {0.04, 0.02, 0.01}) {
    refine.t_grid = uniform_grid(0.4, step);
    steps.push_back(step);
    defects.push_back(max_of(lax_defect(solve_factorized(refine), refine.spec)));
  }
  const double order = loglog_slope(steps, defects);
  return {drift <= 1e-10 && deviation <= 1e-7 && symmetry <= 1e-11 && std::abs(order - 2.0) <= 0.3,
          fmt::format("toda5 on [0,2]: drift {:.2e} (<= 1e-10), vs RK4 {:.2e} (<= 1e-7), symmetry {:.2e} (<= 1e-11), "
                      "Lax defect order {:.3f} (2 +- 0.3)",
                      drift, deviation, symmetry, order)};
}

Outcome star_identities() {
  Rng rng(110);
  double worst = 0.0, inverse = 0.0;
  for (auto make : kSplittings) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto r = star_identity_check(make(3), rng.real_matrix(3), rng.real_matrix(3), rng.real_matrix(3), 0.1);
      worst = std::max(worst, r.max());
      inverse = std::max({inverse, r.star_inverse_left, r.star_inverse_right});
    }
  }
  return {worst <= 1e-10, fmt::format("gl(3), t = 0.1: max residual {:.2e}, *-inverse {:.2e} (<= 1e-10)", worst, inverse)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& cli, const std::string& args) {
  const int status = std::system(fmt::format("\"{}\" {} > /dev/null", cli, args).c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <postlie cli> <work dir>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const std::filesystem::path work = argv[2];
  std::filesystem::create_directories(work);

  int failures = 0;
  const auto run = [&](const std::string& id, const std::string& title, double limit_s, const std::function<Outcome()>& f) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("raised: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && secs < limit_s;
    if (!pass) ++failures;
    std::cout << fmt::format("{} [{}] {}: {}; {:.2f} s (< {:g} s)\n", pass ? "PASS" : "FAIL", id, title, o.detail, secs,
                             limit_s)
              << std::flush;
  };

  run("1", "R-matrix certification", 5, r_matrix_certification);
  run("2", "post-Lie axiom suite", 5, postlie_axioms);
  run("3", "factorization", 1, factorization);
  run("4", "Omega_n = chi_n order check", 10, magnus_order);
  run("5", "printed chi terms", 1, printed_terms);
  run("6", "symbolic star factorization", 60, star_factorization);
  run("7", "F morphism", 60, f_morphism);
  run("8", "Hopf compatibility", 30, hopf_compatibility);
  run("9", "isospectral flow", 30, isospectral_flow);
  run("10", "star identities", 5, star_identities);
  run("all", "verify all", 300, [&] {
    const int code = run_cli(cli, fmt::format("verify all --seed 42 --out \"{}\"", (work / "verify_a.json").string()));
    return Outcome{code == 0, fmt::format("exit code {}", code)};
  });
  run("det", "determinism", 300, [&] {
    const int code = run_cli(cli, fmt::format("verify all --seed 42 --out \"{}\"", (work / "verify_b.json").string()));
    const std::string a = slurp(work / "verify_a.json"), b = slurp(work / "verify_b.json");
    return Outcome{code == 0 && !a.empty() && a == b,
                   fmt::format("two seed-42 reports of {} bytes are {}", a.size(), a == b ? "identical" : "different")};
  });

  std::cout << fmt::format("{} of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
