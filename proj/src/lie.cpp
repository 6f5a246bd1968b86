#include "postlie/lie.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <span>

#include "postlie/linalg.hpp"

namespace postlie {

namespace {

// Pade coefficients b_0..b_m of the [m/m] approximant to exp, and the
// 1-norm bounds theta_m below which degree m is accurate to unit roundoff.
constexpr std::array<double, 4> kPade3 = {120., 60., 12., 1.};
constexpr std::array<double, 6> kPade5 = {30240., 15120., 3360., 420., 30., 1.};
constexpr std::array<double, 8> kPade7 = {17297280., 8648640., 1995840., 277200.,
                                          25200.,    1512.,    56.,      1.};
constexpr std::array<double, 10> kPade9 = {17643225600., 8821612800., 2075673600., 302702400.,
                                           30270240.,    2162160.,    110880.,     3960.,
                                           90.,          1.};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000., 32382376266240000., 7771770303897600., 1187353796428800.,
    129060195264000.,   10559470521600.,    670442572800.,     33522128640.,
    1323241920.,        40840800.,          960960.,           16380.,
    182.,               1.};
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

struct PadeParts {
  RealMatrix u;  // odd part
  RealMatrix v;  // even part
};

PadeParts pade_low(const RealMatrix& a, std::span<const double> b) {
  const std::size_t n = a.dim();
  const RealMatrix a2 = a * a;
  RealMatrix power = RealMatrix::identity(n);
  RealMatrix odd(n), even(n);
  for (std::size_t k = 0; 2 * k < b.size(); ++k) {
    even.add_scaled(b[2 * k], power);
    if (2 * k + 1 < b.size()) odd.add_scaled(b[2 * k + 1], power);
    power = power * a2;
  }
  return {a * odd, even};
}

PadeParts pade13(const RealMatrix& a) {
  const std::size_t n = a.dim();
  const auto& b = kPade13;
  const RealMatrix id = RealMatrix::identity(n);
  const RealMatrix a2 = a * a, a4 = a2 * a2, a6 = a4 * a2;
  RealMatrix inner_u = b[13] * a6;
  inner_u.add_scaled(b[11], a4).add_scaled(b[9], a2);
  RealMatrix u = a6 * inner_u;
  u.add_scaled(b[7], a6).add_scaled(b[5], a4).add_scaled(b[3], a2).add_scaled(b[1], id);
  RealMatrix inner_v = b[12] * a6;
  inner_v.add_scaled(b[10], a4).add_scaled(b[8], a2);
  RealMatrix v = a6 * inner_v;
  v.add_scaled(b[6], a6).add_scaled(b[4], a4).add_scaled(b[2], a2).add_scaled(b[0], id);
  return {a * u, v};
}

// Gauss-Legendre nodes/weights on [0, 1].
template <std::size_t M>
struct GaussLegendre {
  std::array<double, M> nodes{};
  std::array<double, M> weights{};

  GaussLegendre() {
    for (std::size_t i = 0; i < M; ++i) {
      double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                          (static_cast<double>(M) + 0.5));
      double dp = 1.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= M; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
          p0 = p1;
          p1 = p2;
        }
        dp = static_cast<double>(M) * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-17) break;
      }
      nodes[i] = 0.5 * (x + 1.0);
      weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

// [8/8] Pade of log(1+x) is accurate to unit roundoff for |X|_1 <= 0.349.
constexpr double kLogThreshold = 0.25;
const GaussLegendre<8>& log_quadrature() {
  static const GaussLegendre<8> q;
  return q;
}

void require_finite(const RealMatrix& a, const char* what) {
  if (!all_finite(a)) throw NonFiniteError(std::string(what) + ": non-finite entries");
}

void require_principal_branch(const RealMatrix& g) {
  for (const auto& ev : eigenvalues(g)) {
    const double scale = std::max(1.0, std::abs(ev));
    if (ev.real() <= 0.0 && std::abs(ev.imag()) <= 1e-14 * scale)
      throw BranchError("principal logarithm undefined: eigenvalue " + std::to_string(ev.real()) +
                        " on the closed negative real axis");
  }
}

}  // namespace

GroupElement::GroupElement(RealMatrix m, double det_floor) : m_(std::move(m)) {
  const double det = postlie::determinant(m_);
  if (!std::isfinite(det) || std::abs(det) <= det_floor)
    throw DomainError("group element is singular (|det| = " + std::to_string(std::abs(det)) + ")");
}

double GroupElement::determinant() const { return postlie::determinant(m_); }

GroupElement GroupElement::inverse() const { return GroupElement(postlie::inverse(m_), Unchecked{}); }

RealMatrix GroupElement::conjugate(const RealMatrix& a) const { return solve(m_, a * m_); }

GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  return GroupElement(a.m_ * b.m_, GroupElement::Unchecked{});
}

RealMatrix expm1(const RealMatrix& a) {
  require_finite(a, "expm");
  const std::size_t n = a.dim();
  const double norm = one_norm(a);
  if (norm == 0.0) return RealMatrix(n);

  PadeParts parts;
  int squarings = 0;
  if (norm <= kTheta3) {
    parts = pade_low(a, kPade3);
  } else if (norm <= kTheta5) {
    parts = pade_low(a, kPade5);
  } else if (norm <= kTheta7) {
    parts = pade_low(a, kPade7);
  } else if (norm <= kTheta9) {
    parts = pade_low(a, kPade9);
  } else {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
    parts = pade13(a * std::ldexp(1.0, -squarings));
  }
  // r = (V - U)^{-1} (V + U), so r - I = (V - U)^{-1} (2U).
  RealMatrix e = solve(parts.v - parts.u, 2.0 * parts.u);
  for (int s = 0; s < squarings; ++s) e = 2.0 * e + e * e;
  require_finite(e, "expm");
  return e;
}

GroupElement expm(const RealMatrix& a) {
  RealMatrix e = expm1(a);
  for (std::size_t i = 0; i < e.dim(); ++i) e(i, i) += 1.0;
  return GroupElement(std::move(e));
}

RealMatrix sqrtm(const RealMatrix& a) {
  require_finite(a, "sqrtm");
  const std::size_t n = a.dim();
  RealMatrix y = a;
  RealMatrix z = RealMatrix::identity(n);
  int polish = -1;
  for (int it = 0; it < 100; ++it) {
    const RealMatrix y_next = 0.5 * (y + inverse(z));
    const RealMatrix z_next = 0.5 * (z + inverse(y));
    const double step = one_norm(y_next - y);
    y = y_next;
    z = z_next;
    // Quadratic convergence: two more sweeps after the step drops below
    // sqrt(eps) reach full accuracy.
    if (polish < 0 && step <= 1e-8 * one_norm(y)) polish = 2;
    if (polish >= 0 && polish-- == 0) return y;
  }
  throw ConvergenceError("matrix square root did not converge", 0.0, 100);
}

RealMatrix log1pm(const RealMatrix& f) {
  require_finite(f, "logm");
  const std::size_t n = f.dim();
  const RealMatrix id = RealMatrix::identity(n);
  // |f| < 1 keeps every eigenvalue of I + f in the open right half-plane.
  if (one_norm(f) >= 1.0) require_principal_branch(id + f);

  RealMatrix x = f;
  int roots = 0;
  while (one_norm(x) > kLogThreshold) {
    if (++roots > 60) throw ConvergenceError("inverse scaling and squaring did not converge", one_norm(x), roots);
    // sqrt(I + x) - I = (sqrt(I + x) + I)^{-1} x
    const RealMatrix s = sqrtm(id + x);
    x = solve(s + id, x);
  }
  const auto& q = log_quadrature();
  RealMatrix log(n);
  for (std::size_t j = 0; j < q.nodes.size(); ++j) {
    log.add_scaled(q.weights[j], solve(id + q.nodes[j] * x, x));
  }
  return std::ldexp(1.0, roots) * log;
}

RealMatrix logm(const RealMatrix& g) {
  RealMatrix f = g;
  for (std::size_t i = 0; i < f.dim(); ++i) f(i, i) -= 1.0;
  return log1pm(f);
}

RealMatrix logm(const GroupElement& g) { return logm(g.matrix()); }

RealMatrix bch_unchecked(const RealMatrix& a, const RealMatrix& b) {
  a.require_same_dim(b);
  const RealMatrix ea = expm1(a);
  const RealMatrix eb = expm1(b);
  // exp(a) exp(b) - I = ea + eb + ea eb
  return log1pm(ea + eb + ea * eb);
}

RealMatrix bch(const RealMatrix& a, const RealMatrix& b, double radius) {
  a.require_same_dim(b);
  const double size = frobenius_norm(a) + frobenius_norm(b);
  if (!(size <= radius))
    throw DomainError("BCH radius exceeded: |a|+|b| = " + std::to_string(size) +
                      " > " + std::to_string(radius));
  return bch_unchecked(a, b);
}

RealMatrix bch_reduced(const RealMatrix& a, const RealMatrix& b, double radius) {
  return bch(a, b, radius) - a - b;
}

}  // namespace postlie
