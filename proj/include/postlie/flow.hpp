#pragma once

// Isospectral flows da/dt = [a, pi+(a)] = a |> a, solved by conjugating with
// exp(pi+(chi)) sub-step by sub-step, with an RK4 reference integrator and
// spectral / defect diagnostics.

#include <string>
#include <vector>

#include "postlie/chi_magnus.hpp"
#include "postlie/lie.hpp"
#include "postlie/splitting.hpp"

namespace postlie {

enum class FlowMethod { factorized, rk4, magnus_series };
std::string to_string(FlowMethod method);
FlowMethod parse_flow_method(const std::string& name);

struct FlowTolerances {
  double chi_tol = 1e-14;
  /// Sub-steps h satisfy |h a|_F <= substep_norm_cap.
  double substep_norm_cap = 0.2;
  double rk4_step = 1e-4;
  std::size_t magnus_order = kDefaultMagnusOrder;
  /// Re-orthogonalize the qr_skew transporter when |G^T G - I|_F exceeds this.
  double orthogonality_drift = 1e-10;
};

struct FlowProblem {
  SplittingSpec spec;
  RealMatrix a0;
  std::vector<double> t_grid;
  FlowMethod method = FlowMethod::factorized;
  FlowTolerances tol;

  /// Throws ValidationError unless t_grid starts at 0, increases strictly,
  /// and a0 is finite with the dimension of the splitting.
  void validate() const;
};

struct FlowSample {
  double t = 0.0;
  RealMatrix a;
  /// g+(t) with a(t) = g+(t)^{-1} a0 g+(t)
  RealMatrix transporter;
};

struct FlowTrajectory {
  FlowMethod method = FlowMethod::factorized;
  std::vector<FlowSample> samples;
  std::vector<double> spectral_drift;
  std::vector<double> lax_defect;
  std::size_t substeps = 0;
  std::size_t reorthogonalizations = 0;
};

FlowTrajectory solve_factorized(const FlowProblem& problem);
FlowTrajectory solve_rk4(const FlowProblem& problem);
FlowTrajectory solve_magnus_series(const FlowProblem& problem);
/// Dispatches on problem.method and fills the diagnostics.
FlowTrajectory solve(const FlowProblem& problem);

/// Optimal-matching distance between the spectra of a(t_i) and a0, per sample.
std::vector<double> spectral_drift(const FlowTrajectory& traj);
/// |da/dt - [a, pi+(a)]|_F per sample, with da/dt from three-point
/// differences (one-sided at the ends). Needs at least 3 samples.
std::vector<double> lax_defect(const FlowTrajectory& traj, const SplittingSpec& spec);
void attach_diagnostics(FlowTrajectory& traj, const SplittingSpec& spec);

/// max_i |a(t_i) - g+(t_i)^{-1} a0 g+(t_i)|_F
double conjugation_residual(const FlowTrajectory& traj);
/// max_i |a(t_i) - a(t_i)^T|_F
double symmetry_residual(const FlowTrajectory& traj);
/// max_i |a(t_i) - b(t_i)|_F over a common grid.
double max_deviation(const FlowTrajectory& a, const FlowTrajectory& b);

/// Residuals of the factorization identities in the defining matrix
/// representation, with w = -chi(-tx) and w+- = pi+-(w).
struct StarIdentityResiduals {
  /// exp(-tx) = exp(-pi- chi(tx)) exp(-pi+ chi(tx))
  double negative_exponential = 0.0;
  /// exp(tx) * xi = exp(w-) xi exp(w+)
  double star_action = 0.0;
  /// exp(tx) * exp(y) = exp(w-) exp(y) exp(w+)
  double star_group_product = 0.0;
  /// exp(tx) * inv = 1 and inv * exp(tx) = 1 for inv = exp(-w-) exp(-w+)
  double star_inverse_right = 0.0;
  double star_inverse_left = 0.0;

  double max() const;
};

/// Evaluates both sides of each identity. In the matrix image, A * B is
/// A (A |> B) for group-like A = exp*(v), and exp*(v) |> B = exp(-v+) B exp(v+).
StarIdentityResiduals star_identity_check(const SplittingSpec& spec, const RealMatrix& x, const RealMatrix& y,
                                          const RealMatrix& xi, double t, const ChiOptions& options = {});

/// toda5, qrflow4, triangular3
FlowProblem preset(const std::string& name);
std::vector<std::string> preset_names();
/// 0, step, 2 step, ... up to and including t_end.
std::vector<double> uniform_grid(double t_end, double step);

}  // namespace postlie
