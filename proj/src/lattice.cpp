#include "hartorus/lattice.hpp"

#include "theta_series.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace hartorus {

Lattice::Data::Data(Precision p)
    : prec(p),
      omega1(p),
      omega2(p),
      tau(p),
      nome(p),
      g2(p),
      g3(p),
      gamma2(p),
      eta1(p),
      eta2(p),
      area(p),
      series{{}, {}, Complex(p)} {}

Lattice::Lattice(const Complex& omega1, const Complex& omega2, Precision prec) {
  auto d = std::make_shared<Data>(prec);
  if (omega1.precision() != prec || omega2.precision() != prec) {
    throw PrecisionMismatch("half-periods must carry the lattice precision");
  }
  if (omega1.re.is_zero() && omega1.im.is_zero()) throw GeometryError("omega1 is zero");

  d->omega1 = omega1;
  d->omega2 = omega2;
  d->tau = omega2 / omega1;
  const Real tiny = Real::exp2i(-prec.bits() / 2, prec);
  if (abs(d->tau.im) <= tiny * abs(d->tau)) {
    throw GeometryError("half-periods are colinear");
  }
  if (d->tau.im.sign() < 0) {
    d->omega2 = -d->omega2;
    d->tau = -d->tau;
  }

  const Real pi = Real::pi(prec);
  // q = exp(i pi tau)
  d->nome = exp(Complex(-(pi * d->tau.im), pi * d->tau.re));
  const double abs_q = abs(d->nome).to_double();
  if (abs_q >= 1.0 - std::ldexp(1.0, -8)) {
    throw ConditioningError("nome |q| = " + std::to_string(abs_q) + " is too close to 1");
  }

  d->area = ldexp(abs((conj(d->omega1) * d->omega2).im), 2);

  // Lambert coefficients a_n = q^{2n} / (1 - q^{2n}).
  const int n_lambert = detail::lambert_terms(abs_q, prec.bits());
  const Complex q2 = d->nome * d->nome;
  Complex q2n(1, 0, prec);
  Complex e2(prec), e4(prec), e6(prec);
  d->series.lambert.reserve(static_cast<std::size_t>(n_lambert));
  for (long n = 1; n <= n_lambert; ++n) {
    q2n *= q2;
    Complex a = q2n / (Complex(1, 0, prec) - q2n);
    e2 += a * n;
    e4 += a * (n * n * n);
    e6 += (a * (n * n * n)) * (n * n);
    d->series.lambert.push_back(std::move(a));
  }
  const Complex E2 = Complex(1, 0, prec) - e2 * 24;
  const Complex E4 = Complex(1, 0, prec) + e4 * 240;
  const Complex E6 = Complex(1, 0, prec) - e6 * 504;

  const Real pi2 = pi * pi;
  const Complex w1 = d->omega1;
  const Complex w1sq = w1 * w1;
  d->eta1 = E2 * pi2 / (w1 * 12);
  d->g2 = E4 * (pi2 * pi2) / (w1sq * w1sq * 12);
  d->g3 = E6 * (pi2 * pi2 * pi2) / (w1sq * w1sq * w1sq * 216);

  // Theta-series coefficients (-1)^n q^{n(n+1)}.
  const int n_theta = detail::theta_terms(abs_q, prec.bits());
  Complex qpow(1, 0, prec);  // q^{n(n+1)}
  Complex qstep = q2;        // q^{2(n+1)}
  Complex tp0(prec);
  for (long n = 0; n <= n_theta; ++n) {
    Complex coeff = (n % 2 == 0) ? qpow : -qpow;
    tp0 += coeff * (2 * n + 1);
    d->series.theta.push_back(std::move(coeff));
    qpow *= qstep;
    qstep *= q2;
  }
  d->series.theta_prime0 = tp0;

  // eta2 = zeta(w2) = eta1 w2 / w1 + (pi / (2 w1)) L(pi tau / 2)
  const Complex c = Complex(pi) / ldexp(w1, 1);
  const Complex nu = ldexp(d->tau * pi, -1);
  const auto lt = detail::log_theta1_derivs(d->series.lambert, nu, 0);
  d->eta2 = d->eta1 * d->omega2 / w1 + c * lt.L;

  d->gamma2 = (d->eta1 - conj(w1) * pi / d->area) / w1;
  data_ = std::move(d);
}

Lattice Lattice::square(Precision prec) {
  return Lattice(Complex(1, 0, prec), Complex(0, 1, prec), prec);
}

Lattice Lattice::equilateral(Precision prec) {
  Real half = Real::exp2i(-1, prec);
  Real h = sqrt(Real(3L, prec)) / 2;
  return Lattice(Complex(1, 0, prec), Complex(std::move(half), std::move(h)), prec);
}

Real Lattice::legendre_residual() const {
  const Precision p = precision();
  const Complex half_i_pi(Real(p), ldexp(Real::pi(p), -1));
  return abs(eta1() * omega2() - eta2() * omega1() - half_i_pi);
}

Real Lattice::quasi_period_residual() const {
  const Real pi_over_a = Real::pi(precision()) / area();
  const Real r1 = abs(eta1() - gamma2() * omega1() - conj(omega1()) * pi_over_a);
  const Real r2 = abs(eta2() - gamma2() * omega2() - conj(omega2()) * pi_over_a);
  return max(r1, r2);
}

Real Lattice::tolerance() const { return Real::exp2i(-precision().bits() + 32, precision()); }

std::pair<Real, Real> Lattice::cell_coordinates(const Complex& z) const {
  const Real s_num = (z * conj(omega2())).im;
  const Real s_den = ldexp((omega1() * conj(omega2())).im, 1);
  const Real t_num = (z * conj(omega1())).im;
  const Real t_den = ldexp((omega2() * conj(omega1())).im, 1);
  return {s_num / s_den, t_num / t_den};
}

Complex Lattice::lattice_point(long p, long q) const {
  return ldexp(omega1() * p + omega2() * q, 1);
}

Real Lattice::min_cell_width() const {
  const Real w1 = area() / ldexp(abs(omega1()), 1);
  const Real w2 = area() / ldexp(abs(omega2()), 1);
  return min(w1, w2);
}

Lattice lattice_invariants(const Complex& omega1, const Complex& omega2, Precision prec) {
  return Lattice(omega1, omega2, prec);
}

namespace {

double segment_distance(std::complex<double> a, std::complex<double> b) {
  const std::complex<double> ab = b - a;
  const double len2 = std::norm(ab);
  double t = len2 > 0 ? -(a.real() * ab.real() + a.imag() * ab.imag()) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(a + t * ab);
}

}  // namespace

EisensteinSum eisenstein_direct(const Complex& omega1, const Complex& omega2, int k, int radius) {
  if (k < 2) throw std::invalid_argument("eisenstein_direct requires k >= 2");
  if (radius < 1) throw std::invalid_argument("eisenstein_direct requires radius >= 1");
  const Precision p = omega1.precision();
  const Complex two_w1 = ldexp(omega1, 1);
  const Complex two_w2 = ldexp(omega2, 1);

  Complex total(p);
  Complex shell(p);
  Real scratch(p), scratch2(p);
  const Complex one(1, 0, p);
  auto add_point = [&](long a, long b) {
    Complex inv = one / (two_w1 * a + two_w2 * b);
    Complex sq = inv * inv;
    Complex pw = sq;
    for (int e = 1; e < k; ++e) pw *= sq;
    shell += pw;
  };
  for (long n = 1; n <= radius; ++n) {
    shell = Complex(p);
    for (long a = -n; a <= n; ++a) {
      add_point(a, n);
      add_point(a, -n);
    }
    for (long b = -n + 1; b <= n - 1; ++b) {
      add_point(n, b);
      add_point(-n, b);
    }
    total += shell;
  }

  // |l| >= 2 n d on shell n, where d is the distance from 0 to the boundary
  // of {s w1 + t w2 : max(|s|,|t|) <= 1}.
  const std::complex<double> w1(omega1.re.to_double(), omega1.im.to_double());
  const std::complex<double> w2(omega2.re.to_double(), omega2.im.to_double());
  double d = segment_distance(w1 - w2, w1 + w2);
  d = std::min(d, segment_distance(-w1 - w2, -w1 + w2));
  d = std::min(d, segment_distance(-w1 + w2, w1 + w2));
  d = std::min(d, segment_distance(-w1 - w2, w1 - w2));
  d *= 0.999;
  const double bound = 8.0 * std::pow(2.0 * d, -2.0 * k) *
                       std::pow(static_cast<double>(radius), 2.0 - 2.0 * k) / (2.0 * k - 2.0);
  return {std::move(total), Real(bound, p)};
}

}  // namespace hartorus
