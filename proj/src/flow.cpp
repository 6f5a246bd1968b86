#include "postlie/flow.hpp"

#include <cmath>

#include "postlie/linalg.hpp"
#include "postlie/random.hpp"

namespace postlie {

std::string to_string(FlowMethod method) {
  switch (method) {
    case FlowMethod::factorized: return "factorized";
    case FlowMethod::rk4: return "rk4";
    case FlowMethod::magnus_series: return "magnus_series";
  }
  return "unknown";
}

FlowMethod parse_flow_method(const std::string& name) {
  if (name == "factorized") return FlowMethod::factorized;
  if (name == "rk4") return FlowMethod::rk4;
  if (name == "magnus_series") return FlowMethod::magnus_series;
  throw ParseError("unknown flow method '" + name + "' (expected factorized, rk4 or magnus_series)");
}

void FlowProblem::validate() const {
  if (a0.dim() != spec.dim())
    throw ValidationError("a0 has dimension " + std::to_string(a0.dim()) + " but the splitting acts on gl(" +
                          std::to_string(spec.dim()) + ")");
  if (!all_finite(a0)) throw ValidationError("a0 has non-finite entries");
  if (t_grid.empty()) throw ValidationError("t_grid is empty");
  if (t_grid.front() != 0.0) throw ValidationError("t_grid must start at 0");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]) || !std::isfinite(t_grid[i]))
      throw ValidationError("t_grid must be finite and strictly increasing (index " + std::to_string(i) + ")");
  if (!(tol.substep_norm_cap > 0.0)) throw ValidationError("substep_norm_cap must be positive");
  if (!(tol.rk4_step > 0.0)) throw ValidationError("rk4_step must be positive");
  if (!(tol.chi_tol > 0.0)) throw ValidationError("chi_tol must be positive");
  if (tol.magnus_order < 1) throw ValidationError("magnus_order must be at least 1");
}

namespace {

double orthogonality_defect(const RealMatrix& g) {
  return frobenius_norm(g.transpose() * g - RealMatrix::identity(g.dim()));
}

std::string step_context(double t, double h) {
  return " (sub-step from t = " + std::to_string(t) + " with h = " + std::to_string(h) + ")";
}

// Advances a(t) by conjugation with exp(pi+(chi)), where chi_of(a, h)
// approximates chi(h a).
template <class ChiFn>
FlowTrajectory conjugation_solve(const FlowProblem& p, ChiFn chi_of) {
  p.validate();
  const std::size_t n = p.a0.dim();
  FlowTrajectory traj;
  traj.method = p.method;
  RealMatrix a = p.a0;
  RealMatrix g_total = RealMatrix::identity(n);
  traj.samples.push_back({0.0, a, g_total});
  for (std::size_t i = 1; i < p.t_grid.size(); ++i) {
    double t = p.t_grid[i - 1];
    const double target = p.t_grid[i];
    while (t < target) {
      const double norm = frobenius_norm(a);
      double h = target - t;
      bool last = true;
      if (norm > 0.0 && h * norm > p.tol.substep_norm_cap) {
        h = p.tol.substep_norm_cap / norm;
        last = false;
      }
      RealMatrix chi;
      try {
        chi = chi_of(a, h);
      } catch (const BranchError& e) {
        throw BranchError(e.what() + step_context(t, h));
      } catch (const ConvergenceError& e) {
        throw ConvergenceError(e.what() + step_context(t, h), e.last_residual(), e.iterations());
      }
      const GroupElement g = expm(p.spec.plus(chi));
      a = g.conjugate(a);
      g_total = g_total * g.matrix();
      if (!all_finite(a)) throw BlowUpError("flow state became non-finite", t + h);
      ++traj.substeps;
      if (p.spec.kind() == SplittingKind::qr_skew && orthogonality_defect(g_total) > p.tol.orthogonality_drift) {
        g_total = orthogonal_factor(g_total);
        ++traj.reorthogonalizations;
      }
      t = last ? target : t + h;
    }
    traj.samples.push_back({target, a, g_total});
  }
  return traj;
}

// Derivative at x of the quadratic through (ts[j], fs[j]).
RealMatrix lagrange_derivative(const std::array<double, 3>& ts, const std::array<const RealMatrix*, 3>& fs, double x) {
  RealMatrix d(fs[0]->dim());
  for (std::size_t j = 0; j < 3; ++j) {
    double weight = 0.0;
    for (std::size_t m = 0; m < 3; ++m) {
      if (m == j) continue;
      double term = 1.0 / (ts[j] - ts[m]);
      for (std::size_t l = 0; l < 3; ++l)
        if (l != j && l != m) term *= (x - ts[l]) / (ts[j] - ts[l]);
      weight += term;
    }
    d.add_scaled(weight, *fs[j]);
  }
  return d;
}

// e^{s ad_w} z = exp(s w) z exp(-s w), summed as a series.
RealMatrix ad_exponential(double s, const RealMatrix& w, const RealMatrix& z) {
  RealMatrix sum = z;
  RealMatrix term = z;
  for (int k = 1; k <= 200; ++k) {
    term = (s / k) * bracket(w, term);
    sum += term;
    if (frobenius_norm(term) <= 1e-18 * std::max(1.0, frobenius_norm(sum))) return sum;
  }
  throw ConvergenceError("adjoint exponential series did not converge", frobenius_norm(term), 200);
}

}  // namespace

FlowTrajectory solve_factorized(const FlowProblem& problem) {
  ChiOptions options;
  options.tol = problem.tol.chi_tol;
  return conjugation_solve(problem, [&](const RealMatrix& a, double h) {
    return chi_fixed_point(problem.spec, a, h, options).value;
  });
}

FlowTrajectory solve_magnus_series(const FlowProblem& problem) {
  return conjugation_solve(problem, [&](const RealMatrix& a, double h) {
    return magnus_coefficients(problem.spec, a, problem.tol.magnus_order).evaluate(h);
  });
}

FlowTrajectory solve_rk4(const FlowProblem& problem) {
  problem.validate();
  const auto& spec = problem.spec;
  const std::size_t n = problem.a0.dim();
  // a' = [a, pi+(a)],  G' = G pi+(a)
  const auto rhs = [&](const RealMatrix& a, const RealMatrix& g) {
    const RealMatrix p = spec.plus(a);
    return std::pair{bracket(a, p), g * p};
  };
  FlowTrajectory traj;
  traj.method = FlowMethod::rk4;
  RealMatrix a = problem.a0;
  RealMatrix g = RealMatrix::identity(n);
  traj.samples.push_back({0.0, a, g});
  for (std::size_t i = 1; i < problem.t_grid.size(); ++i) {
    const double t0 = problem.t_grid[i - 1];
    const double span = problem.t_grid[i] - t0;
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(span / problem.tol.rk4_step - 1e-9)));
    const double h = span / static_cast<double>(steps);
    for (std::size_t s = 0; s < steps; ++s) {
      const auto [ka1, kg1] = rhs(a, g);
      const auto [ka2, kg2] = rhs(a + (h / 2) * ka1, g + (h / 2) * kg1);
      const auto [ka3, kg3] = rhs(a + (h / 2) * ka2, g + (h / 2) * kg2);
      const auto [ka4, kg4] = rhs(a + h * ka3, g + h * kg3);
      a.add_scaled(h / 6, ka1 + 2.0 * ka2 + 2.0 * ka3 + ka4);
      g.add_scaled(h / 6, kg1 + 2.0 * kg2 + 2.0 * kg3 + kg4);
      ++traj.substeps;
      if (!all_finite(a) || !all_finite(g))
        throw BlowUpError("RK4 state became non-finite", t0 + static_cast<double>(s + 1) * h);
    }
    traj.samples.push_back({problem.t_grid[i], a, g});
  }
  return traj;
}

FlowTrajectory solve(const FlowProblem& problem) {
  FlowTrajectory traj;
  switch (problem.method) {
    case FlowMethod::factorized: traj = solve_factorized(problem); break;
    case FlowMethod::rk4: traj = solve_rk4(problem); break;
    case FlowMethod::magnus_series: traj = solve_magnus_series(problem); break;
  }
  attach_diagnostics(traj, problem.spec);
  return traj;
}

std::vector<double> spectral_drift(const FlowTrajectory& traj) {
  std::vector<double> drift;
  if (traj.samples.empty()) return drift;
  const auto reference = eigenvalues(traj.samples.front().a);
  for (const auto& s : traj.samples) drift.push_back(spectrum_distance(eigenvalues(s.a), reference));
  return drift;
}

std::vector<double> lax_defect(const FlowTrajectory& traj, const SplittingSpec& spec) {
  const auto& s = traj.samples;
  if (s.size() < 3) throw ValidationError("Lax defect needs at least 3 samples");
  std::vector<double> defect;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::size_t first = i == 0 ? 0 : std::min(i - 1, s.size() - 3);
    const std::array<double, 3> ts{s[first].t, s[first + 1].t, s[first + 2].t};
    const std::array<const RealMatrix*, 3> fs{&s[first].a, &s[first + 1].a, &s[first + 2].a};
    const RealMatrix derivative = lagrange_derivative(ts, fs, s[i].t);
    defect.push_back(frobenius_norm(derivative - bracket(s[i].a, spec.plus(s[i].a))));
  }
  return defect;
}

void attach_diagnostics(FlowTrajectory& traj, const SplittingSpec& spec) {
  traj.spectral_drift = spectral_drift(traj);
  traj.lax_defect = traj.samples.size() >= 3 ? lax_defect(traj, spec) : std::vector<double>{};
}

double conjugation_residual(const FlowTrajectory& traj) {
  double worst = 0.0;
  const RealMatrix& a0 = traj.samples.front().a;
  for (const auto& s : traj.samples)
    worst = std::max(worst, frobenius_norm(s.a - solve(s.transporter, a0 * s.transporter)));
  return worst;
}

double symmetry_residual(const FlowTrajectory& traj) {
  double worst = 0.0;
  for (const auto& s : traj.samples) worst = std::max(worst, frobenius_norm(s.a - s.a.transpose()));
  return worst;
}

double max_deviation(const FlowTrajectory& a, const FlowTrajectory& b) {
  if (a.samples.size() != b.samples.size()) throw DimensionError("trajectories sampled on different grids");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    if (a.samples[i].t != b.samples[i].t) throw DimensionError("trajectories sampled on different grids");
    worst = std::max(worst, frobenius_norm(a.samples[i].a - b.samples[i].a));
  }
  return worst;
}

double StarIdentityResiduals::max() const {
  return std::max({negative_exponential, star_action, star_group_product, star_inverse_right, star_inverse_left});
}

StarIdentityResiduals star_identity_check(const SplittingSpec& spec, const RealMatrix& x, const RealMatrix& y,
                                          const RealMatrix& xi, double t, const ChiOptions& options) {
  x.require_same_dim(y);
  x.require_same_dim(xi);
  const std::size_t n = x.dim();
  const RealMatrix id = RealMatrix::identity(n);
  const RealMatrix chi_plus_t = chi_fixed_point(spec, x, t, options).value;
  const RealMatrix chi_minus_t = chi_fixed_point(spec, x, -t, options).value;
  const RealMatrix w = -chi_minus_t;
  const RealMatrix wp = spec.plus(w), wm = spec.minus(w);
  const RealMatrix e = expm(t * x).matrix();
  const RealMatrix exp_wm = expm(wm).matrix(), exp_wp = expm(wp).matrix();

  StarIdentityResiduals r;
  r.negative_exponential = frobenius_norm(expm(-t * x).matrix() - expm(-spec.minus(chi_plus_t)).matrix() *
                                                                      expm(-spec.plus(chi_plus_t)).matrix());
  r.star_action = frobenius_norm(e * ad_exponential(-1.0, wp, xi) - exp_wm * xi * exp_wp);
  r.star_group_product = frobenius_norm(e * expm(ad_exponential(-1.0, wp, y)).matrix() -
                                        exp_wm * expm(y).matrix() * exp_wp);
  const RealMatrix inv = expm(-wm).matrix() * expm(-wp).matrix();
  r.star_inverse_right = frobenius_norm(e * ad_exponential(-1.0, wp, inv) - id);
  r.star_inverse_left = frobenius_norm(inv * ad_exponential(1.0, wp, e) - id);
  return r;
}

std::vector<double> uniform_grid(double t_end, double step) {
  if (!(step > 0.0) || !(t_end >= 0.0)) throw ValidationError("grid needs step > 0 and t_end >= 0");
  const auto count = static_cast<std::size_t>(std::llround(t_end / step));
  std::vector<double> grid;
  for (std::size_t i = 0; i <= count; ++i) grid.push_back(static_cast<double>(i) * step);
  return grid;
}

std::vector<std::string> preset_names() { return {"toda5", "qrflow4", "triangular3"}; }

FlowProblem preset(const std::string& name) {
  if (name == "toda5") {
    RealMatrix a0(5);
    const double diag[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    for (std::size_t i = 0; i < 5; ++i) {
      a0(i, i) = diag[i];
      if (i + 1 < 5) a0(i, i + 1) = a0(i + 1, i) = 1.0;
    }
    return {SplittingSpec::qr_skew(5), a0, uniform_grid(2.0, 0.1), FlowMethod::factorized, {}};
  }
  if (name == "qrflow4") {
    Rng rng(4);
    const RealMatrix m = rng.real_matrix(4);
    return {SplittingSpec::qr_skew(4), 0.5 * (m + m.transpose()), uniform_grid(2.0, 0.1), FlowMethod::factorized, {}};
  }
  if (name == "triangular3") {
    Rng rng(3);
    return {SplittingSpec::lower_triangular(3), rng.real_matrix(3), uniform_grid(1.0, 0.1), FlowMethod::factorized,
            {}};
  }
  throw ParseError("unknown preset '" + name + "' (expected toda5, qrflow4 or triangular3)");
}

}  // namespace postlie
