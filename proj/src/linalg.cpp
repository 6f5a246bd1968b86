#include "postlie/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace postlie {

namespace {

Eigen::MatrixXd to_eigen(const RealMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  Eigen::MatrixXd e(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) e(i, j) = m(i, j);
  return e;
}

RealMatrix from_eigen(const Eigen::MatrixXd& e) {
  RealMatrix m(static_cast<std::size_t>(e.rows()));
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

}  // namespace

RealMatrix solve(const RealMatrix& a, const RealMatrix& b) {
  a.require_same_dim(b);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(to_eigen(a));
  const double det = lu.determinant();
  if (det == 0.0 || !std::isfinite(det)) throw DomainError("singular matrix in linear solve");
  return from_eigen(lu.solve(to_eigen(b)));
}

RealMatrix inverse(const RealMatrix& a) { return solve(a, RealMatrix::identity(a.dim())); }

double determinant(const RealMatrix& a) {
  if (a.dim() == 0) return 1.0;
  return Eigen::PartialPivLU<Eigen::MatrixXd>(to_eigen(a)).determinant();
}

RealMatrix balance(const RealMatrix& a) {
  RealMatrix b = a;
  const std::size_t n = b.dim();
  constexpr double radix = 2.0;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(b(j, i));
        r += std::abs(b(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        for (std::size_t j = 0; j < n; ++j) b(i, j) /= f;
        for (std::size_t j = 0; j < n; ++j) b(j, i) *= f;
      }
    }
  }
  return b;
}

std::vector<std::complex<double>> eigenvalues(const RealMatrix& a) {
  if (!all_finite(a)) throw NonFiniteError("eigenvalues of a non-finite matrix");
  Eigen::EigenSolver<Eigen::MatrixXd> solver(to_eigen(balance(a)), false);
  if (solver.info() != Eigen::Success) throw ConvergenceError("eigenvalue iteration failed", 0.0, 0);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double spectrum_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) throw DimensionError("spectra of different sizes");
  const auto lex = [](const std::complex<double>& x, const std::complex<double>& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  };
  std::sort(a.begin(), a.end(), lex);
  std::sort(b.begin(), b.end(), lex);
  const auto cost = [&](const std::vector<std::size_t>& perm) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[perm[i]]));
    return worst;
  };
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = cost(perm);
  if (a.size() <= 8) {
    while (std::next_permutation(perm.begin(), perm.end())) best = std::min(best, cost(perm));
  }
  return best;
}

RealMatrix orthogonal_factor(const RealMatrix& a) {
  const Eigen::MatrixXd m = to_eigen(a);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < r.rows(); ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return from_eigen(q);
}

}  // namespace postlie
