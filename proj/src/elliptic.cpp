#include "hartorus/elliptic.hpp"

#include "theta_series.hpp"

#include <stdexcept>

namespace hartorus {

EllipticEvaluator::EllipticEvaluator(Lattice lattice)
    : EllipticEvaluator(lattice, Real::exp2i(-lattice.precision().bits() / 2, lattice.precision())) {}

EllipticEvaluator::EllipticEvaluator(Lattice lattice, Real pole_guard)
    : lattice_(std::move(lattice)),
      pole_guard_(std::move(pole_guard)),
      half_period_scale_(lattice_.precision()),
      eta1_over_w1_(lattice_.precision()),
      pi_over_area_(lattice_.precision()) {
  require_same_precision(pole_guard_, lattice_.area());
  const Real pi = Real::pi(precision());
  half_period_scale_ = Complex(pi) / ldexp(lattice_.omega1(), 1);
  eta1_over_w1_ = lattice_.eta1() / lattice_.omega1();
  pi_over_area_ = pi / lattice_.area();
}

EllipticEvaluator::Reduced EllipticEvaluator::reduce(const Complex& z) const {
  auto [s, t] = lattice_.cell_coordinates(z);
  const long p = to_long(round(s));
  const long q = to_long(round(t));
  if (p == 0 && q == 0) return {z, 0, 0};
  return {z - lattice_.lattice_point(p, q), p, q};
}

void EllipticEvaluator::check_pole(const Reduced& r) const {
  if (abs(r.z) <= pole_guard_) {
    throw PoleError("argument within the pole guard of a lattice point");
  }
}

EllipticEvaluator::SeriesAtPoint EllipticEvaluator::series_at(const Complex& z, int order) const {
  Reduced red = reduce(z);
  check_pole(red);
  const Complex nu = half_period_scale_ * red.z;
  const auto lt = detail::log_theta1_derivs(lattice_.series().lambert, nu, order);
  const Precision p = precision();
  SeriesAtPoint out{std::move(red), Complex(p), Complex(p), Complex(p)};
  out.zeta_reduced = eta1_over_w1_ * out.red.z + half_period_scale_ * lt.L;
  if (order >= 1) {
    const Complex c2 = half_period_scale_ * half_period_scale_;
    out.wp = -eta1_over_w1_ - c2 * lt.L1;
    if (order >= 2) out.wp_prime = -(c2 * half_period_scale_ * lt.L2);
  }
  return out;
}

Complex EllipticEvaluator::zeta_from_reduced(const Reduced& r, const Complex& zeta_reduced) const {
  if (r.p == 0 && r.q == 0) return zeta_reduced;
  return zeta_reduced + ldexp(lattice_.eta1() * r.p + lattice_.eta2() * r.q, 1);
}

Complex EllipticEvaluator::hat_correction(const Complex& z) const {
  return lattice_.gamma2() * z + conj(z) * pi_over_area_;
}

Complex EllipticEvaluator::wp(const Complex& z) const { return series_at(z, 1).wp; }

Complex EllipticEvaluator::wp_prime(const Complex& z) const { return series_at(z, 2).wp_prime; }

std::vector<Complex> EllipticEvaluator::wp_derivs(const Complex& z, int k_max) const {
  if (k_max < 0 || k_max > kDerivativeCap) {
    throw std::invalid_argument("wp_derivs: k_max out of range [0, " +
                                std::to_string(kDerivativeCap) + "]");
  }
  auto s = series_at(z, k_max >= 1 ? 2 : 1);
  if (k_max == 0) return {std::move(s.wp)};
  return wp_derivatives_from(s.wp, s.wp_prime, lattice_.g2(), k_max);
}

Complex EllipticEvaluator::zeta(const Complex& z) const {
  auto s = series_at(z, 0);
  return zeta_from_reduced(s.red, s.zeta_reduced);
}

Complex EllipticEvaluator::zeta_hat(const Complex& z) const { return zeta(z) - hat_correction(z); }

Real EllipticEvaluator::log_abs_sigma_from_reduced(const Reduced& r) const {
  const Precision prec = precision();
  const Lattice::SeriesData& ser = lattice_.series();
  const Complex nu = half_period_scale_ * r.z;
  const Complex ratio = detail::theta1_ratio(ser.theta, ser.theta_prime0, nu);
  const Complex two_w1 = ldexp(lattice_.omega1(), 1);
  Real out = log(abs(two_w1) / Real::pi(prec));
  out += ldexp((lattice_.eta1() * r.z * r.z / lattice_.omega1()).re, -1);
  out += log(abs(ratio));
  if (r.p != 0 || r.q != 0) {
    const Complex shift = ldexp(lattice_.eta1() * r.p + lattice_.eta2() * r.q, 1);
    const Complex mid = r.z + lattice_.omega1() * r.p + lattice_.omega2() * r.q;
    out += (shift * mid).re;
  }
  return out;
}

Complex EllipticEvaluator::sigma(const Complex& z) const {
  const Precision prec = precision();
  const Reduced r = reduce(z);
  const Lattice::SeriesData& ser = lattice_.series();
  const Complex nu = half_period_scale_ * r.z;
  const Complex ratio = detail::theta1_ratio(ser.theta, ser.theta_prime0, nu);
  Complex exponent = ldexp(lattice_.eta1() * r.z * r.z / lattice_.omega1(), -1);
  if (r.p != 0 || r.q != 0) {
    const Complex shift = ldexp(lattice_.eta1() * r.p + lattice_.eta2() * r.q, 1);
    const Complex mid = r.z + lattice_.omega1() * r.p + lattice_.omega2() * r.q;
    exponent += shift * mid;
  }
  Complex out = ldexp(lattice_.omega1(), 1) / Real::pi(prec) * exp(exponent) * ratio;
  const long parity = r.p + r.q + r.p * r.q;
  if (parity % 2 != 0) out = -out;
  return out;
}

Real EllipticEvaluator::log_abs_sigma(const Complex& z) const {
  const Reduced r = reduce(z);
  if (abs(r.z) <= pole_guard_) throw PoleError("log|sigma| at a zero of sigma");
  return log_abs_sigma_from_reduced(r);
}

Real EllipticEvaluator::log_abs_sigma_hat(const Complex& z) const {
  Real out = log_abs_sigma(z);
  out -= ldexp((lattice_.gamma2() * z * z).re, -1);
  out -= ldexp(norm(z) * pi_over_area_, -1);
  return out;
}

EllipticEvaluator::PointValues EllipticEvaluator::evaluate_all(const Complex& z, int k_max,
                                                                bool want_log) const {
  if (k_max < 0 || k_max > kDerivativeCap) {
    throw std::invalid_argument("evaluate_all: k_max out of range");
  }
  auto s = series_at(z, 2);
  PointValues out{wp_derivatives_from(s.wp, s.wp_prime, lattice_.g2(), k_max),
                  zeta_from_reduced(s.red, s.zeta_reduced) - hat_correction(z), std::nullopt};
  if (want_log) {
    Real v = log_abs_sigma_from_reduced(s.red);
    v -= ldexp((lattice_.gamma2() * z * z).re, -1);
    v -= ldexp(norm(z) * pi_over_area_, -1);
    out.log_abs_sigma_hat = std::move(v);
  }
  return out;
}

std::vector<Complex> wp_derivatives_from(const Complex& wp, const Complex& wp_prime,
                                         const Complex& g2, int k_max) {
  const Precision p = wp.precision();
  std::vector<Complex> d;
  d.reserve(static_cast<std::size_t>(k_max) + 1);
  d.push_back(wp);
  if (k_max >= 1) d.push_back(wp_prime);
  if (k_max >= 2) d.push_back((wp * wp) * 6 - ldexp(g2, -1));

  // Binomial row C(n, .), starting at n = 1.
  std::vector<Real> row{Real(1L, p), Real(1L, p)};
  Complex acc(p), prod(p);
  Real scratch(p);
  for (int n = 1; n + 2 <= k_max; ++n) {
    if (n > 1) {
      row.emplace_back(1L, p);
      for (int k = n - 1; k >= 1; --k) row[static_cast<std::size_t>(k)] += row[static_cast<std::size_t>(k - 1)];
    }
    acc = Complex(p);
    // sum_k C(n,k) d[n-k] d[k] is symmetric in k <-> n-k.
    for (int k = 0; 2 * k < n; ++k) {
      mul_into(prod, d[static_cast<std::size_t>(n - k)], d[static_cast<std::size_t>(k)], scratch);
      mpfr_mul(prod.re.raw(), prod.re.raw(), row[static_cast<std::size_t>(k)].raw(), MPFR_RNDN);
      mpfr_mul(prod.im.raw(), prod.im.raw(), row[static_cast<std::size_t>(k)].raw(), MPFR_RNDN);
      acc += prod;
    }
    acc = ldexp(acc, 1);
    if (n % 2 == 0) {
      const auto h = static_cast<std::size_t>(n / 2);
      mul_into(prod, d[h], d[h], scratch);
      acc += prod * row[h];
    }
    d.push_back(acc * 6);
  }
  return d;
}

}  // namespace hartorus
