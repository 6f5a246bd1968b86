#pragma once

#include <complex>
#include <vector>

#include "postlie/matrix.hpp"

namespace postlie {

/// Solves a * x = b (partial-pivot LU). Throws DomainError if `a` is singular.
RealMatrix solve(const RealMatrix& a, const RealMatrix& b);

RealMatrix inverse(const RealMatrix& a);

double determinant(const RealMatrix& a);

/// Parlett-Reinsch diagonal balancing (radix 2); similarity-preserving.
RealMatrix balance(const RealMatrix& a);

/// Eigenvalues of a balanced, Hessenberg-reduced copy of `a`.
std::vector<std::complex<double>> eigenvalues(const RealMatrix& a);

/// Bottleneck distance between two eigenvalue multisets under the best
/// one-to-one matching. Exhaustive for n <= 8, lexicographic sort otherwise.
double spectrum_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b);

/// Orthogonal factor of the QR decomposition with positive R diagonal.
RealMatrix orthogonal_factor(const RealMatrix& a);

}  // namespace postlie
