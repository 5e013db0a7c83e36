#pragma once

#include "hartorus/arbprec.hpp"
#include "hartorus/geometry.hpp"
#include "hartorus/lattice.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace hartorus::testing {

inline Real num(const char* text, Precision p) { return Real::parse(text, p); }

// Decimal value as a binary64 would store it; reference eigenvalues are
// only reproducible from such inputs.
inline Real binary64(const char* text, Precision p) { return Real(std::stod(text), p); }

inline Real tol_bits(long e, Precision p) { return Real::exp2i(e, p); }

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  Real real(double lo, double hi, Precision p) { return Real(uniform(lo, hi), p); }
  // Point of the centred cell, cell coordinates in [-lim, lim].
  Complex cell_point(const Lattice& l, double lim) {
    const Real s = real(-lim, lim, l.precision());
    const Real t = real(-lim, lim, l.precision());
    return ldexp(l.omega1() * s + l.omega2() * t, 1);
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// Random lattice with |tau| >= 1 and |Re tau| <= 1/2, rotated and scaled.
inline Lattice random_lattice(Rng& rng, Precision p) {
  const Real x = rng.real(-0.5, 0.5, p);
  Real y = rng.real(0.9, 1.8, p);
  if (square(x) + square(y) < 1L) y = sqrt(Real(1L, p) - square(x)) + Real(0.05, p);
  const Complex w1 = polar(rng.real(0.7, 1.3, p), rng.real(-1.0, 1.0, p));
  return Lattice(w1, w1 * Complex(x, y), p);
}

inline Domain one_hole(const Lattice& l, const Real& r) {
  const Precision p = l.precision();
  return Domain(l, {Hole(Complex(p), Circle{r})});
}

}  // namespace hartorus::testing

#include "hartorus/elliptic.hpp"

#include <vector>

namespace hartorus::testing {

// wp(z) = 1/z^2 + sum_{k>=2} c_k z^{2k-2}, with c_2 = g2/20, c_3 = g3/28 and
// c_k = 3/((2k+1)(k-3)) sum_{m=2}^{k-2} c_m c_{k-m}. Summed until the terms
// drop below 2^-bits relative to the leading term.
struct LaurentValue {
  Complex value;
  Real last_term;
};

inline LaurentValue laurent_wp(const Lattice& l, const Complex& z, int max_terms = 400) {
  const Precision p = l.precision();
  std::vector<Complex> c(static_cast<std::size_t>(max_terms) + 1, Complex(p));
  c[2] = l.g2() / 20L;
  c[3] = l.g3() / 28L;
  const Complex z2 = square(z);
  Complex sum = Complex(1, 0, p) / z2;
  const Real lead = abs(sum);
  Complex pw = Complex(1, 0, p);  // z^{2k-2}
  pw *= z2;
  Real last(p), before(p), earlier(p);
  for (int k = 2; k <= max_terms; ++k) {
    if (k >= 4) {
      Complex acc(p);
      for (int m = 2; m <= k - 2; ++m) acc += c[m] * c[k - m];
      c[k] = acc * 3L / static_cast<long>((2 * k + 1) * (k - 3));
    }
    const Complex term = c[k] * pw;
    sum += term;
    // Symmetric lattices have every second or third coefficient vanishing,
    // so stop only after three small terms in a row.
    earlier = before;
    before = last;
    last = abs(term);
    const Real small = lead * Real::exp2i(-p.bits() - 8, p);
    if (k > 8 && last < small && before < small && earlier < small) break;
    pw *= z2;
  }
  return {sum, max(max(last, before), earlier)};
}

// Point of the centred cell whose reduced argument stays at least `gap`
// (in cell coordinates) from every lattice point.
inline Complex away_from_poles(Rng& rng, const Lattice& l, double gap) {
  for (;;) {
    const double s = rng.uniform(-0.5, 0.5);
    const double t = rng.uniform(-0.5, 0.5);
    if (std::abs(s) < gap && std::abs(t) < gap) continue;
    const Precision p = l.precision();
    return ldexp(l.omega1() * Real(s, p) + l.omega2() * Real(t, p), 1);
  }
}

}  // namespace hartorus::testing

#include "hartorus/linalg.hpp"

namespace hartorus::testing {

inline DenseMatrix random_matrix(Rng& rng, std::size_t r, std::size_t c, Precision p) {
  DenseMatrix m(r, c, p);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.real(-1, 1, p);
  return m;
}

// sup{s : D - s G is positive semidefinite}, by bisection on the smallest
// eigenvalue. For D positive definite on ker G this is the smallest
// generalized eigenvalue over G x != 0, found without any reduction.
inline Real psd_threshold(const DenseMatrix& d, const DenseMatrix& g, Real lo, Real hi, int iterations) {
  const std::size_t n = d.rows();
  const Precision p = d.precision();
  for (int it = 0; it < iterations; ++it) {
    const Real mid = ldexp(lo + hi, -1);
    DenseMatrix t(n, n, p);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) t(i, j) = d(i, j) - mid * g(i, j);
    if (jacobi_eigen(t).values.front().sign() >= 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return ldexp(lo + hi, -1);
}

inline Real rayleigh(const DenseMatrix& d, const DenseMatrix& g, const Vector& x) {
  return dot(x, d.apply(x)) / dot(x, g.apply(x));
}

}  // namespace hartorus::testing
