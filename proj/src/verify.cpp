#include "postlie/verify.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <memory>
#include <thread>

#include "postlie/chi_magnus.hpp"
#include "postlie/enveloping.hpp"
#include "postlie/error.hpp"
#include "postlie/flow.hpp"
#include "postlie/random.hpp"

namespace postlie {

namespace {

using Checks = std::vector<CheckResult>;

struct Task {
  std::string suite;
  std::string name;
  std::function<Checks(Rng&)> run;
};

class Recorder {
 public:
  Recorder(std::string suite, const VerifyOptions& options) : suite_(std::move(suite)), options_(options) {}

  /// residual <= threshold; `threshold` yields to --tol unless fixed.
  void numeric(std::string name, double residual, double threshold, bool fixed = false) {
    CheckResult c{suite_, std::move(name), false, residual, fixed ? threshold : options_.tol.value_or(threshold), {}, false};
    c.passed = std::isfinite(residual) && residual <= c.threshold;
    out_.push_back(std::move(c));
  }

  void exact(std::string name, std::size_t nonzero_terms) {
    out_.push_back({suite_, std::move(name), true, static_cast<double>(nonzero_terms), 0.0, {}, nonzero_terms == 0});
  }

  void slope(std::string name, double value, double target, double width) {
    CheckResult c{suite_, std::move(name), false, value, width, target, false};
    c.passed = std::isfinite(value) && std::abs(value - target) <= width;
    out_.push_back(std::move(c));
  }

  Checks take() { return std::move(out_); }

 private:
  std::string suite_;
  const VerifyOptions& options_;
  Checks out_;
};

std::size_t nonzero_entries(const RationalMatrix& m) {
  return static_cast<std::size_t>(
      std::count_if(m.values().begin(), m.values().end(), [](const Rational& v) { return sgn(v) != 0; }));
}

std::size_t difference_terms(const PBWElement& a, const PBWElement& b) { return (a - b).term_count(); }

RealMatrix with_norm(Rng& rng, std::size_t n, double size) {
  RealMatrix m = rng.real_matrix(n);
  return (size / frobenius_norm(m)) * m;
}

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
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

double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

const std::array<SplittingKind, 2> kBuiltinKinds = {SplittingKind::lower_triangular, SplittingKind::qr_skew};

SplittingSpec builtin_spec(SplittingKind kind, std::size_t n) {
  return kind == SplittingKind::lower_triangular ? SplittingSpec::lower_triangular(n) : SplittingSpec::qr_skew(n);
}

// ---- postlie ------------------------------------------------------------

void postlie_tasks(std::vector<Task>& tasks, const VerifyOptions& opts) {
  for (std::size_t n = 2; n <= 6; ++n) {
    for (const auto kind : kBuiltinKinds) {
      const std::string label = fmt::format("{} gl({})", to_string(kind), n);
      tasks.push_back({"postlie", label, [n, kind, label, &opts](Rng& rng) {
                         Recorder rec("postlie", opts);
                         const auto spec = builtin_spec(kind, n);
                         SamplePairs<double> pairs;
                         for (int i = 0; i < 100; ++i) pairs.emplace_back(rng.real_matrix(n), rng.real_matrix(n));
                         const auto report = validate_splitting(spec, pairs, 1e-12);
                         rec.numeric(label + ": modified Yang-Baxter, pi+", report.mybe_plus, 1e-12);
                         rec.numeric(label + ": modified Yang-Baxter, pi-", report.mybe_minus, 1e-12);
                         rec.numeric(label + ": modified classical Yang-Baxter for R", report.mcybe, 1e-12);
                         rec.numeric(label + ": g+ closed", report.closure_plus, 1e-12);
                         rec.numeric(label + ": g- closed", report.closure_minus, 1e-12);

                         PostLieResiduals worst;
                         for (int i = 0; i < 100; ++i) {
                           const auto r = postlie_residuals(spec, rng.real_matrix(n), rng.real_matrix(n), rng.real_matrix(n));
                           worst.axiom_derivation = std::max(worst.axiom_derivation, r.axiom_derivation);
                           worst.axiom_associator = std::max(worst.axiom_associator, r.axiom_associator);
                           worst.black_derivation = std::max(worst.black_derivation, r.black_derivation);
                           worst.black_associator = std::max(worst.black_associator, r.black_associator);
                           worst.double_jacobi = std::max(worst.double_jacobi, r.double_jacobi);
                           worst.subalgebra_minus = std::max(worst.subalgebra_minus, r.subalgebra_minus);
                           worst.subalgebra_plus = std::max(worst.subalgebra_plus, r.subalgebra_plus);
                           worst.succ_associator = std::max(worst.succ_associator, r.succ_associator);
                           worst.succ_commutator = std::max(worst.succ_commutator, r.succ_commutator);
                           worst.double_forms = std::max(worst.double_forms, r.double_forms);
                         }
                         rec.numeric(label + ": |> is a derivation of [.,.]", worst.axiom_derivation, 1e-12);
                         rec.numeric(label + ": |> associator identity", worst.axiom_associator, 1e-12);
                         rec.numeric(label + ": >| is a derivation of -[.,.]", worst.black_derivation, 1e-12);
                         rec.numeric(label + ": >| associator identity", worst.black_associator, 1e-12);
                         rec.numeric(label + ": Jacobi for [[.,.]]", worst.double_jacobi, 1e-12);
                         rec.numeric(label + ": pi-[[x,y]] = [pi-x, pi-y]", worst.subalgebra_minus, 1e-12);
                         rec.numeric(label + ": pi+[[x,y]] = -[pi+x, pi+y]", worst.subalgebra_plus, 1e-12);
                         rec.numeric(label + ": >- associator with -1/4 [[.,.]] term", worst.succ_associator, 1e-12);
                         rec.numeric(label + ": >- commutator is [[.,.]]", worst.succ_commutator, 1e-12);
                         rec.numeric(label + ": three forms of [[.,.]] agree", worst.double_forms, 1e-12);
                         return rec.take();
                       }});
    }
  }
  for (const auto kind : kBuiltinKinds) {
    const std::string label = fmt::format("{} gl(3) exact", to_string(kind));
    tasks.push_back({"postlie", label, [kind, label, &opts](Rng& rng) {
                       Recorder rec("postlie", opts);
                       const auto spec = builtin_spec(kind, 3);
                       SamplePairs<Rational> pairs;
                       for (int i = 0; i < 20; ++i) pairs.emplace_back(rng.rational_matrix(3), rng.rational_matrix(3));
                       const auto report = validate_splitting(spec, pairs);
                       rec.exact(label + ": Yang-Baxter and closure residuals vanish", report.validated ? 0 : 1);
                       std::size_t failures = 0;
                       for (int i = 0; i < 20; ++i) {
                         const auto r =
                             postlie_residuals(spec, rng.rational_matrix(3), rng.rational_matrix(3), rng.rational_matrix(3));
                         if (r.max() != 0.0) ++failures;
                       }
                       rec.exact(label + ": post-Lie identities vanish", failures);
                       return rec.take();
                     }});
  }
}

// ---- chi ----------------------------------------------------------------

void chi_tasks(std::vector<Task>& tasks, const VerifyOptions& opts) {
  for (const auto kind : kBuiltinKinds) {
    const std::string label = fmt::format("{} gl(4)", to_string(kind));
    tasks.push_back({"chi", label + " factorization", [kind, label, &opts](Rng& rng) {
                       Recorder rec("chi", opts);
                       const auto spec = builtin_spec(kind, 4);
                       const auto x = with_norm(rng, 4, 1.0);
                       const double t = 0.2;
                       const auto chi = chi_fixed_point(spec, x, t);
                       rec.numeric(label + ": exp(tx) = exp(pi+ chi) exp(pi- chi)", factorization_residual(spec, x, t, chi.value),
                                   1e-10);
                       rec.numeric(label + ": fixed-point iterations", chi.iterations, 30, true);
                       rec.numeric(label + ": fixed-point residual", chi_fixed_point_residual(spec, x, t, chi.value), 1e-13);
                       const auto chi_minus = chi_fixed_point(spec, x, -t);
                       rec.numeric(label + ": exp(tx) = exp(-pi- chi(-tx)) exp(-pi+ chi(-tx))",
                                   alternate_factorization_residual(spec, x, t, chi_minus.value), 1e-10);
                       return rec.take();
                     }});
  }
  const std::size_t order = opts.order;
  for (const auto kind : kBuiltinKinds) {
    const std::string label = fmt::format("{} gl(3)", to_string(kind));
    tasks.push_back({"chi", label + " series order", [kind, label, order, &opts](Rng& rng) {
                       Recorder rec("chi", opts);
                       const auto spec = builtin_spec(kind, 3);
                       const auto x = with_norm(rng, 3, 3.9);
                       const auto series = magnus_coefficients(spec, x, order);
                       ChiOptions chi_opts;
                       chi_opts.tol = 1e-16;
                       std::vector<double> ts, errs;
                       for (int k = 3; k <= 8; ++k) {
                         const double t = std::ldexp(1.0, -k);
                         const auto chi = chi_fixed_point(spec, x, t, chi_opts).value;
                         const double err = frobenius_norm(series.evaluate(t) - chi);
                         // points at roundoff level carry no slope information
                         if (err <= 1e3 * std::numeric_limits<double>::epsilon() * frobenius_norm(chi)) continue;
                         ts.push_back(t);
                         errs.push_back(err);
                       }
                       const double slope = ts.size() >= 3 ? least_squares_slope(ts, errs) : std::numeric_limits<double>::quiet_NaN();
                       rec.slope(fmt::format("{}: truncated Omega series (N = {}) vs chi, log-log slope", label, order), slope,
                                 static_cast<double>(order) + 1.0, 0.3);
                       return rec.take();
                     }});
  }
}

// ---- magnus -------------------------------------------------------------

void magnus_tasks(std::vector<Task>& tasks, const VerifyOptions& opts) {
  for (const auto kind : kBuiltinKinds) {
    const std::string label = to_string(kind);
    tasks.push_back({"magnus", label + " printed terms", [kind, label, &opts](Rng& rng) {
                       Recorder rec("magnus", opts);
                       const auto spec2 = builtin_spec(kind, 2);
                       std::size_t nonzero = 0;
                       for (int trial = 0; trial < 5; ++trial) {
                         auto a0 = rng.rational_matrix(2);
                         a0(1, 1) = -a0(0, 0);
                         const auto printed = chi_printed_terms(spec2, a0, 3);
                         const auto series = magnus_coefficients(spec2, a0, 3);
                         nonzero += nonzero_entries(printed[1] - series[2]) + nonzero_entries(printed[2] - series[3]);
                       }
                       rec.exact(label + " sl(2): printed chi_2, chi_3 equal Omega_2, Omega_3", nonzero);

                       const auto spec3 = builtin_spec(kind, 3);
                       const auto a0 = rng.real_matrix(3);
                       const auto printed = chi_printed_terms(spec3, a0, 3);
                       const auto series = magnus_coefficients(spec3, a0, 3);
                       rec.numeric(label + " gl(3): printed chi_2, chi_3 equal Omega_2, Omega_3",
                                   std::max(frobenius_norm(printed[1] - series[2]), frobenius_norm(printed[2] - series[3])),
                                   1e-13);
                       return rec.take();
                     }});
    tasks.push_back({"magnus", label + " recursion", [kind, label, &opts](Rng& rng) {
                       Recorder rec("magnus", opts);
                       const auto spec = builtin_spec(kind, 3);
                       const std::size_t order = std::max<std::size_t>(opts.order, 2);
                       const auto a = rng.rational_matrix(3);
                       std::size_t nonzero = 0;
                       for (const auto& a0 : {spec.plus(a), spec.minus(a)}) {
                         const auto series = magnus_coefficients(spec, a0, order);
                         for (std::size_t n = 2; n <= order; ++n) nonzero += nonzero_entries(series[n]);
                       }
                       rec.exact(fmt::format("{} gl(3): Omega_2..Omega_{} vanish on g+ and g-", label, order), nonzero);

                       const auto series = magnus_coefficients(spec, a, 2);
                       auto half = post_lie(spec, a, a);
                       half *= Rational(1, 2);
                       rec.exact(label + " gl(3): Omega_1 = a0, Omega_2 = (a0 |> a0)/2",
                                 nonzero_entries(series[1] - a) + nonzero_entries(series[2] - half));

                       std::size_t moved = 0;
                       for (std::size_t n : {1u, 4u, 7u}) moved += nonzero_entries(dexp_star_inv(spec, a, a, n) - a);
                       rec.exact(label + " gl(3): dexp*^{-1}_x(x) = x", moved);

                       const auto a0 = rng.real_matrix(3);
                       const auto omega = magnus_coefficients(spec, a0, 4);
                       double worst = 0.0;
                       for (const std::vector<std::size_t>& word :
                            {std::vector<std::size_t>{1}, {2, 1}, {3, 1, 2}, {4, 4, 2, 1}}) {
                         RealMatrix star = a0, plain = spec.plus(a0);
                         for (auto it = word.rbegin(); it != word.rend(); ++it) {
                           star = double_bracket(spec, omega[*it], star);
                           plain = bracket(spec.plus(omega[*it]), plain);
                         }
                         if (word.size() % 2 == 1) plain = -plain;
                         worst = std::max(worst, frobenius_norm(spec.plus(star) - plain) / std::max(1.0, frobenius_norm(plain)));
                       }
                       rec.numeric(label + " gl(3): pi+ of [[Omega,.]] words equals signed [pi+ Omega,.] words", worst, 1e-12);
                       return rec.take();
                     }});
  }
}

// ---- hopf ---------------------------------------------------------------

RationalMatrix sl2_half_h_splitting() {
  RationalMatrix p(3);
  p(1, 1) = Rational(1, 2);
  p(2, 2) = 1;
  return p;
}

void hopf_tasks(std::vector<Task>& tasks, const VerifyOptions& opts) {
  const auto sc = std::make_shared<const StructureConstants>(StructureConstants::builtin(opts.algebra));
  const std::size_t n = sc->basis().front().dim();
  const std::size_t d = sc->dim();
  const std::size_t degree = opts.degree;
  const std::string alg = opts.algebra;
  constexpr auto Ug = AlgebraTag::U_g;
  constexpr auto Ugbar = AlgebraTag::U_gbar;

  tasks.push_back({"hopf", alg + " antipode", [sc, d, alg, &opts](Rng& rng) {
                     Recorder rec("hopf", opts);
                     const EnvelopingAlgebra u(sc, Ug);
                     std::size_t left = 0, twice = 0, mult = 0;
                     for (int trial = 0; trial < 3; ++trial) {
                       const auto a = random_element(rng, Ug, d, 4, 4), b = random_element(rng, Ug, d, 4, 2);
                       left += difference_terms(u.multiply(u.antipode_left(u.coproduct(a))), u.counit_unit(a));
                       twice += difference_terms(u.antipode(u.antipode(a)), a);
                       const auto lhs = u.coproduct(u.product(a, b));
                       const auto rhs = u.tensor_product(u.coproduct(a), u.coproduct(b));
                       if (!(lhs == rhs)) ++mult;
                     }
                     rec.exact("U(" + alg + "): mu (S (x) id) Delta = eta epsilon", left);
                     rec.exact("U(" + alg + "): S^2 = id", twice);
                     rec.exact("U(" + alg + "): Delta(AB) = Delta(A) Delta(B)", mult);
                     return rec.take();
                   }});

  std::vector<std::pair<std::string, std::function<RationalMatrix()>>> splittings;
  for (const auto kind : kBuiltinKinds)
    splittings.emplace_back(to_string(kind), [sc, kind, n] { return splitting_on_basis(*sc, builtin_spec(kind, n)); });
  if (alg == "sl2") splittings.emplace_back("half-h (not a projector)", [] { return sl2_half_h_splitting(); });

  for (const auto& [split_name, make_pi] : splittings) {
    const std::string label = fmt::format("U({}) {}", alg, split_name);
    const bool projector_only = split_name.find("half") == std::string::npos;
    tasks.push_back({"hopf", label + " star exponential", [sc, d, degree, label, make_pi, &opts](Rng& rng) {
                       Recorder rec("hopf", opts);
                       const PostLieEnveloping p(sc, make_pi());
                       const auto& u = p.algebra();
                       std::size_t terms = 0;
                       for (int trial = 0; trial < 5; ++trial) {
                         const auto v = PBWElement::lie(Ug, degree, random_lie_vector(rng, d));
                         const auto [vm, vp] = p.split(v);
                         terms += difference_terms(p.exp_star(v), u.product(u.exp_concat(vm), u.exp_concat(vp)));
                       }
                       rec.exact(fmt::format("{}: exp*(v) = exp(v-) exp(v+) through degree {}", label, degree), terms);
                       return rec.take();
                     }});
    if (!projector_only) continue;
    tasks.push_back({"hopf", label + " morphisms", [sc, d, degree, label, make_pi, &opts](Rng& rng) {
                       Recorder rec("hopf", opts);
                       const PostLieEnveloping p(sc, make_pi());
                       const auto& u = p.algebra();

                       std::size_t delta = 0;
                       for (int trial = 0; trial < 5; ++trial) {
                         const auto a = random_element(rng, Ug, d, 3, 3), b = random_element(rng, Ug, d, 3, 3);
                         if (!(u.coproduct(p.star(a, b)) == p.star_tensor(u.coproduct(a), u.coproduct(b)))) ++delta;
                       }
                       rec.exact(label + ": Delta(A * B) = Delta(A) (* (x) *) Delta(B) through degree 3", delta);

                       std::size_t assoc = 0;
                       for (int trial = 0; trial < 3; ++trial) {
                         const auto a = random_element(rng, Ug, d, 4, 2), b = random_element(rng, Ug, d, 4, 2),
                                    c = random_element(rng, Ug, d, 4, 2);
                         assoc += difference_terms(p.star(p.star(a, b), c), p.star(a, p.star(b, c)));
                       }
                       rec.exact(label + ": * is associative through degree 4", assoc);

                       std::size_t morph = 0;
                       for (int trial = 0; trial < 20; ++trial) {
                         const auto length = static_cast<std::size_t>(rng.integer(1, 4));
                         PBWElement bar = PBWElement::one(Ugbar, 4), starred = PBWElement::one(Ug, 4);
                         for (std::size_t k = 0; k < length; ++k) {
                           const auto x = random_lie_vector(rng, d);
                           bar = p.double_algebra().product(bar, PBWElement::lie(Ugbar, 4, x));
                           starred = p.star(starred, PBWElement::lie(Ug, 4, x));
                         }
                         morph += difference_terms(p.f_map(bar), starred);
                       }
                       rec.exact(label + ": F(x1...xk) = F(x1) * ... * F(xk), k <= 4", morph);

                       const std::size_t cap = std::min<std::size_t>(degree, 5);
                       std::size_t exps = 0;
                       for (int trial = 0; trial < 3; ++trial) {
                         const auto v = random_lie_vector(rng, d);
                         const auto [vm, vp] = p.split(PBWElement::lie(Ug, cap, v));
                         exps += difference_terms(p.f_map(p.exp_dot(PBWElement::lie(Ugbar, cap, v))),
                                                  u.product(u.exp_concat(vm), u.exp_concat(vp)));
                       }
                       rec.exact(fmt::format("{}: F(exp(v)) = exp(v-) exp(v+) through degree {}", label, cap), exps);
                       return rec.take();
                     }});
  }
}

// ---- star ---------------------------------------------------------------

void star_tasks(std::vector<Task>& tasks, const VerifyOptions& opts) {
  for (const auto kind : kBuiltinKinds) {
    const std::string label = fmt::format("{} gl(3), t = 0.1", to_string(kind));
    tasks.push_back({"star", label, [kind, label, &opts](Rng& rng) {
                       Recorder rec("star", opts);
                       const auto spec = builtin_spec(kind, 3);
                       StarIdentityResiduals worst;
                       for (int trial = 0; trial < 5; ++trial) {
                         const auto r =
                             star_identity_check(spec, rng.real_matrix(3), rng.real_matrix(3), rng.real_matrix(3), 0.1);
                         worst.negative_exponential = std::max(worst.negative_exponential, r.negative_exponential);
                         worst.star_action = std::max(worst.star_action, r.star_action);
                         worst.star_group_product = std::max(worst.star_group_product, r.star_group_product);
                         worst.star_inverse_right = std::max(worst.star_inverse_right, r.star_inverse_right);
                         worst.star_inverse_left = std::max(worst.star_inverse_left, r.star_inverse_left);
                       }
                       rec.numeric(label + ": exp(-tx) = exp(-pi- chi) exp(-pi+ chi)", worst.negative_exponential, 1e-10);
                       rec.numeric(label + ": exp(tx) * xi = exp(w-) xi exp(w+)", worst.star_action, 1e-10);
                       rec.numeric(label + ": exp(tx) * exp(y) = exp(w-) exp(y) exp(w+)", worst.star_group_product, 1e-10);
                       rec.numeric(label + ": exp(tx) * inverse = 1", worst.star_inverse_right, 1e-10);
                       rec.numeric(label + ": inverse * exp(tx) = 1", worst.star_inverse_left, 1e-10);
                       return rec.take();
                     }});
  }
}

// ---- flow ---------------------------------------------------------------

void flow_tasks(std::vector<Task>& tasks, const VerifyOptions& opts) {
  tasks.push_back({"flow", "toda5", [&opts](Rng&) {
                     Recorder rec("flow", opts);
                     const auto p = preset("toda5");
                     const auto traj = solve(p);
                     rec.numeric("toda5: eigenvalue drift", max_of(traj.spectral_drift), 1e-10);
                     rec.numeric("toda5: a(t) = g^{-1} a0 g", conjugation_residual(traj), 1e-11);
                     rec.numeric("toda5: symmetry", symmetry_residual(traj), 1e-11);
                     double orth = 0.0;
                     for (const auto& s : traj.samples)
                       orth = std::max(orth, frobenius_norm(s.transporter.transpose() * s.transporter - RealMatrix::identity(5)));
                     rec.numeric("toda5: transporter orthogonality", orth, 1e-10);

                     auto rk4 = p;
                     rk4.method = FlowMethod::rk4;
                     rk4.tol.rk4_step = 1e-4;
                     rec.numeric("toda5: deviation from RK4 (h = 1e-4)", max_deviation(traj, solve(rk4)), 1e-7);
                     auto magnus = p;
                     magnus.method = FlowMethod::magnus_series;
                     rec.numeric("toda5: deviation of the truncated Omega series solver", max_deviation(traj, solve(magnus)), 1e-8);
                     return rec.take();
                   }});
  tasks.push_back({"flow", "lax defect", [&opts](Rng&) {
                     Recorder rec("flow", opts);
                     auto p = preset("toda5");
                     std::vector<double> steps, defects;
                     for (double step : {0.04, 0.02, 0.01}) {
                       p.t_grid = uniform_grid(0.4, step);
                       steps.push_back(step);
                       defects.push_back(max_of(lax_defect(solve_factorized(p), p.spec)));
                     }
                     rec.slope("toda5: Lax defect order under grid refinement", least_squares_slope(steps, defects), 2.0, 0.3);
                     return rec.take();
                   }});
  for (const char* name : {"qrflow4", "triangular3"}) {
    tasks.push_back({"flow", name, [name, &opts](Rng&) {
                       Recorder rec("flow", opts);
                       const auto traj = solve(preset(name));
                       rec.numeric(fmt::format("{}: eigenvalue drift", name), max_of(traj.spectral_drift), 1e-10);
                       rec.numeric(fmt::format("{}: a(t) = g^{{-1}} a0 g", name), conjugation_residual(traj), 1e-11);
                       return rec.take();
                     }});
  }
}

using SuiteBuilder = void (*)(std::vector<Task>&, const VerifyOptions&);

const std::vector<std::pair<std::string, SuiteBuilder>>& suite_table() {
  static const std::vector<std::pair<std::string, SuiteBuilder>> table = {
      {"postlie", postlie_tasks}, {"chi", chi_tasks},   {"magnus", magnus_tasks},
      {"hopf", hopf_tasks},       {"star", star_tasks}, {"flow", flow_tasks}};
  return table;
}

}  // namespace

bool VerifyReport::passed() const { return failures() == 0 && !checks.empty(); }

std::size_t VerifyReport::failures() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.passed; }));
}

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, builder] : suite_table()) v.push_back(name);
    v.push_back("all");
    return v;
  }();
  return names;
}

unsigned thread_cap() {
  if (const char* env = std::getenv("POSTLIE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

VerifyReport run_verify(const std::string& suite, const VerifyOptions& options) {
  if (std::find(verify_suites().begin(), verify_suites().end(), suite) == verify_suites().end())
    throw ParseError("unknown verify suite '" + suite + "'");
  if (options.order < 1) throw ValidationError("order must be at least 1");
  if (options.degree < 1 || options.degree > 12) throw ValidationError("degree must be in 1..12");
  StructureConstants::builtin(options.algebra);

  VerifyReport report{suite, options, {}};
  std::vector<Task> tasks;
  std::vector<std::uint64_t> stream_ids;
  for (std::size_t s = 0; s < suite_table().size(); ++s) {
    const auto& [name, builder] = suite_table()[s];
    if (suite != "all" && suite != name) continue;
    const std::size_t first = tasks.size();
    builder(tasks, report.options);
    for (std::size_t i = first; i < tasks.size(); ++i) stream_ids.push_back(1000 * s + (i - first));
  }

  std::vector<Checks> results(tasks.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
      Rng rng = Rng::stream(options.seed, stream_ids[i]);
      try {
        results[i] = tasks[i].run(rng);
      } catch (const std::exception& e) {
        results[i] = {{tasks[i].suite, tasks[i].name + " raised: " + e.what(), false,
                       std::numeric_limits<double>::infinity(), 0.0, {}, false}};
      }
    }
  };
  const unsigned threads = std::min<unsigned>(options.threads ? options.threads : thread_cap(),
                                              static_cast<unsigned>(std::max<std::size_t>(tasks.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (auto& r : results) std::move(r.begin(), r.end(), std::back_inserter(report.checks));
  return report;
}

Json to_json(const VerifyReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json j{{"suite", c.suite}, {"name", c.name}, {"passed", c.passed}};
    if (c.exact) {
      j["exact"] = true;
      j["nonzero_terms"] = static_cast<std::uint64_t>(c.residual);
    } else if (c.target) {
      j["slope"] = c.residual;
      j["target"] = *c.target;
      j["allowed_deviation"] = c.threshold;
    } else {
      j["residual"] = c.residual;
      j["threshold"] = c.threshold;
    }
    checks.push_back(std::move(j));
  }
  const auto& o = report.options;
  return Json{{"suite", report.suite},
              {"seed", o.seed},
              {"order", o.order},
              {"degree", o.degree},
              {"algebra", o.algebra},
              {"tolerance_override", o.tol ? Json(*o.tol) : Json(nullptr)},
              {"checks_run", report.checks.size()},
              {"failures", report.failures()},
              {"passed", report.passed()},
              {"checks", checks}};
}

std::string to_text(const VerifyReport& report) {
  std::string out;
  for (const auto& c : report.checks) {
    out += fmt::format("{} {}: {}  ", c.passed ? "PASS" : "FAIL", c.suite, c.name);
    if (c.exact)
      out += fmt::format("[exact, {} nonzero terms]\n", static_cast<std::uint64_t>(c.residual));
    else if (c.target)
      out += fmt::format("[slope {:.3f}, target {:.1f} +- {:.1f}]\n", c.residual, *c.target, c.threshold);
    else
      out += fmt::format("[{:.3e} <= {:.1e}]\n", c.residual, c.threshold);
  }
  out += fmt::format("{} checks, {} failed\n", report.checks.size(), report.failures());
  return out;
}

}  // namespace postlie
