#pragma once

#include "hartorus/arbprec.hpp"
#include "hartorus/lattice.hpp"

#include <optional>
#include <vector>

namespace hartorus {

/// Evaluation too close to a lattice point (pole of wp/zeta, zero of sigma).
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Weierstrass functions of a fixed lattice.
///
/// Arguments are reduced to the fundamental cell centred at the origin,
/// z = z_r + 2 p w1 + 2 q w2 with |s|, |t| <= 1/2 in cell coordinates, and
/// the theta-quotient series is summed at nu = pi z_r / (2 w1):
///
///   zeta(z_r) = eta1 z_r / w1 + (pi / 2w1) L(nu)
///   wp(z_r)   = -eta1 / w1 - (pi / 2w1)^2 L'(nu)
///   wp'(z_r)  = -(pi / 2w1)^3 L''(nu)
///
/// where L = theta1'/theta1. Quasi-periodicity restores zeta and sigma at
/// the original argument. Higher derivatives of wp come from
///   wp'' = 6 wp^2 - g2/2,   wp^(n+2) = 6 sum_k C(n,k) wp^(n-k) wp^(k).
class EllipticEvaluator {
 public:
  static constexpr int kDerivativeCap = 512;

  explicit EllipticEvaluator(Lattice lattice);
  EllipticEvaluator(Lattice lattice, Real pole_guard);

  const Lattice& lattice() const { return lattice_; }
  const Real& pole_guard() const { return pole_guard_; }
  Precision precision() const { return lattice_.precision(); }

  struct Reduced {
    Complex z;
    long p;
    long q;
  };
  Reduced reduce(const Complex& z) const;

  Complex wp(const Complex& z) const;
  Complex wp_prime(const Complex& z) const;
  /// [wp, wp', ..., wp^(k_max)]
  std::vector<Complex> wp_derivs(const Complex& z, int k_max) const;

  Complex zeta(const Complex& z) const;
  /// zeta(z) - gamma2 z - (pi/A) conj(z); doubly periodic.
  Complex zeta_hat(const Complex& z) const;

  Complex sigma(const Complex& z) const;
  Real log_abs_sigma(const Complex& z) const;
  /// log|sigma(z)| - Re(gamma2 z^2)/2 - pi |z|^2 / (2A); doubly periodic.
  Real log_abs_sigma_hat(const Complex& z) const;

  /// Everything the harmonic basis needs at one point, from one series pass.
  struct PointValues {
    std::vector<Complex> wp_derivs;
    Complex zeta_hat;
    std::optional<Real> log_abs_sigma_hat;
  };
  PointValues evaluate_all(const Complex& z, int k_max, bool want_log) const;

 private:
  struct SeriesAtPoint {
    Reduced red;
    Complex zeta_reduced;
    Complex wp;
    Complex wp_prime;
  };
  SeriesAtPoint series_at(const Complex& z, int order) const;
  void check_pole(const Reduced& r) const;
  Complex zeta_from_reduced(const Reduced& r, const Complex& zeta_reduced) const;
  Real log_abs_sigma_from_reduced(const Reduced& r) const;
  Complex hat_correction(const Complex& z) const;  // gamma2 z + (pi/A) conj(z)

  Lattice lattice_;
  Real pole_guard_;
  Complex half_period_scale_;  // pi / (2 w1)
  Complex eta1_over_w1_;
  Real pi_over_area_;
};

/// Extends [wp, wp'] to [wp, ..., wp^(k_max)] by the binomial recursion.
std::vector<Complex> wp_derivatives_from(const Complex& wp, const Complex& wp_prime,
                                         const Complex& g2, int k_max);

}  // namespace hartorus
