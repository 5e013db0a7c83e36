#pragma once

// Theta-function series shared by lattice.cpp and elliptic.cpp.

#include "hartorus/arbprec.hpp"

#include <vector>

namespace hartorus::detail {

/// L = theta1'(nu)/theta1(nu) and its first two nu-derivatives:
///   L   = cot nu + 4 sum a_n sin 2n nu
///   L'  = -csc^2 nu + 8 sum n a_n cos 2n nu
///   L'' = 2 csc^2 nu cot nu - 16 sum n^2 a_n sin 2n nu
/// with a_n = q^{2n}/(1-q^{2n}). Converges for |Im nu| < pi Im tau.
struct LogThetaDerivs {
  Complex L;
  Complex L1;
  Complex L2;
};

/// `order` 0 fills only L, 1 fills L and L1, 2 fills all three.
LogThetaDerivs log_theta1_derivs(const std::vector<Complex>& lambert, const Complex& nu, int order);

/// theta1(nu) / theta1'(0) from the Gaussian series
///   sum (-1)^n q^{n(n+1)} sin((2n+1) nu) / sum (-1)^n (2n+1) q^{n(n+1)}.
Complex theta1_ratio(const std::vector<Complex>& theta_coeffs, const Complex& theta_prime0,
                     const Complex& nu);

/// Smallest N with N^2 |q|^N < 2^{-(bits + guard)}.
int lambert_terms(double abs_q, long bits);
/// Smallest N with (2N+1) |q|^{N^2 - 1/2} < 2^{-(bits + guard)}.
int theta_terms(double abs_q, long bits);

}  // namespace hartorus::detail
