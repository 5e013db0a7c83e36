#include "theta_series.hpp"

#include <cmath>

namespace hartorus::detail {

namespace {
constexpr double kGuardBits = 24.0;
}

int lambert_terms(double abs_q, long bits) {
  const double target = -(static_cast<double>(bits) + kGuardBits) * std::log(2.0);
  const double lq = std::log(abs_q);
  int n = 1;
  while (2.0 * std::log(static_cast<double>(n)) + n * lq > target) ++n;
  return n;
}

int theta_terms(double abs_q, long bits) {
  const double target = -(static_cast<double>(bits) + kGuardBits) * std::log(2.0);
  const double lq = std::log(abs_q);
  int n = 1;
  while (std::log(2.0 * n + 1.0) + (static_cast<double>(n) * n - 0.5) * lq > target) ++n;
  return n;
}

LogThetaDerivs log_theta1_derivs(const std::vector<Complex>& lambert, const Complex& nu, int order) {
  const Precision p = nu.precision();
  const Complex s = sin(nu);
  const Complex c = cos(nu);
  const Complex cot = c / s;
  const Complex csc2 = Complex(1, 0, p) / (s * s);

  // w = exp(2 i nu)
  Complex two_i_nu(ldexp(-nu.im, 1), ldexp(nu.re, 1));
  const Complex w = exp(two_i_nu);
  const Complex winv = exp(-two_i_nu);

  Complex wn = Complex(1, 0, p);
  Complex wmn = Complex(1, 0, p);
  Complex tmp(p), diff(p), sum(p), prod(p);
  Complex s0(p), s1(p), s2(p);
  Real scratch(p), scratch2(p);

  for (std::size_t k = 0; k < lambert.size(); ++k) {
    const long n = static_cast<long>(k) + 1;
    mul_into(tmp, wn, w, scratch);
    std::swap(tmp, wn);
    mul_into(tmp, wmn, winv, scratch);
    std::swap(tmp, wmn);

    mpfr_sub(diff.re.raw(), wn.re.raw(), wmn.re.raw(), MPFR_RNDN);
    mpfr_sub(diff.im.raw(), wn.im.raw(), wmn.im.raw(), MPFR_RNDN);
    mul_into(prod, lambert[k], diff, scratch);
    s0 += prod;
    if (order >= 2) {
      mpfr_mul_si(scratch.raw(), prod.re.raw(), n * n, MPFR_RNDN);
      mpfr_add(s2.re.raw(), s2.re.raw(), scratch.raw(), MPFR_RNDN);
      mpfr_mul_si(scratch.raw(), prod.im.raw(), n * n, MPFR_RNDN);
      mpfr_add(s2.im.raw(), s2.im.raw(), scratch.raw(), MPFR_RNDN);
    }
    if (order >= 1) {
      mpfr_add(sum.re.raw(), wn.re.raw(), wmn.re.raw(), MPFR_RNDN);
      mpfr_add(sum.im.raw(), wn.im.raw(), wmn.im.raw(), MPFR_RNDN);
      mul_into(prod, lambert[k], sum, scratch);
      mpfr_mul_si(scratch.raw(), prod.re.raw(), n, MPFR_RNDN);
      mpfr_add(s1.re.raw(), s1.re.raw(), scratch.raw(), MPFR_RNDN);
      mpfr_mul_si(scratch2.raw(), prod.im.raw(), n, MPFR_RNDN);
      mpfr_add(s1.im.raw(), s1.im.raw(), scratch2.raw(), MPFR_RNDN);
    }
  }

  LogThetaDerivs out{Complex(p), Complex(p), Complex(p)};
  // -2i * s0 = (2 Im s0, -2 Re s0)
  out.L = cot + Complex(ldexp(s0.im, 1), ldexp(-s0.re, 1));
  if (order >= 1) out.L1 = ldexp(s1, 2) - csc2;
  if (order >= 2) {
    // 8i * s2 = (-8 Im s2, 8 Re s2)
    out.L2 = ldexp(csc2 * cot, 1) + Complex(ldexp(-s2.im, 3), ldexp(s2.re, 3));
  }
  return out;
}

Complex theta1_ratio(const std::vector<Complex>& theta_coeffs, const Complex& theta_prime0,
                     const Complex& nu) {
  const Precision p = nu.precision();
  const Complex s = sin(nu);
  const Complex c = cos(nu);
  // 2 cos(2 nu) = 2 (c^2 - s^2)
  const Complex two_cos2 = ldexp(c * c - s * s, 1);

  Complex prev = -s;  // sin(-nu)
  Complex cur = s;    // sin(nu)
  Complex acc(p), tmp(p);
  Real scratch(p), scratch2(p);
  for (std::size_t n = 0; n < theta_coeffs.size(); ++n) {
    add_mul_into(acc, theta_coeffs[n], cur, scratch, scratch2);
    mul_into(tmp, two_cos2, cur, scratch);
    tmp -= prev;
    std::swap(prev, cur);
    std::swap(cur, tmp);
  }
  return acc / theta_prime0;
}

}  // namespace hartorus::detail
