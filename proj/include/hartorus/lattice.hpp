#pragma once

#include "hartorus/arbprec.hpp"

#include <memory>
#include <vector>

namespace hartorus {

/// Invalid geometry: colinear periods, overlapping holes, points in holes.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The nome is too close to the unit circle for the q-series to be usable.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lattice L = 2 w1 Z + 2 w2 Z together with its invariants.
///
/// Half-periods are normalised so that Im(w2/w1) > 0 (w2 is negated if
/// needed; the lattice is unchanged). g2, g3 and eta1 come from Eisenstein
/// q-series in the nome q = exp(i pi tau); eta2 = zeta(w2) is evaluated
/// through the theta-quotient series so that the Legendre relation is a
/// genuine check rather than an identity.
class Lattice {
 public:
  Lattice(const Complex& omega1, const Complex& omega2, Precision prec);

  static Lattice square(Precision prec);       // (1, i)
  static Lattice equilateral(Precision prec);  // (1, 1/2 + i sqrt(3)/2)

  Precision precision() const { return data_->prec; }
  const Complex& omega1() const { return data_->omega1; }
  const Complex& omega2() const { return data_->omega2; }
  const Complex& tau() const { return data_->tau; }
  const Complex& nome() const { return data_->nome; }
  const Complex& g2() const { return data_->g2; }
  const Complex& g3() const { return data_->g3; }
  const Complex& gamma2() const { return data_->gamma2; }
  const Complex& eta1() const { return data_->eta1; }
  const Complex& eta2() const { return data_->eta2; }
  const Real& area() const { return data_->area; }

  /// |eta1 w2 - eta2 w1 - i pi/2|
  Real legendre_residual() const;
  /// max_i |eta_i - gamma2 w_i - pi conj(w_i)/A|
  Real quasi_period_residual() const;
  /// 2^{-bits+32}
  Real tolerance() const;

  /// Real coordinates (s, t) with z = 2 w1 s + 2 w2 t.
  std::pair<Real, Real> cell_coordinates(const Complex& z) const;
  /// 2 p w1 + 2 q w2
  Complex lattice_point(long p, long q) const;
  /// Distance between opposite sides of the fundamental parallelogram
  /// (the smaller of the two widths).
  Real min_cell_width() const;

  // Series data shared with the elliptic evaluator.
  struct SeriesData {
    /// a_n = q^{2n} / (1 - q^{2n}), n = 1..N
    std::vector<Complex> lambert;
    /// (-1)^n q^{n(n+1)}, n = 0..N_theta
    std::vector<Complex> theta;
    /// sum (-1)^n (2n+1) q^{n(n+1)}
    Complex theta_prime0;
  };
  const SeriesData& series() const { return data_->series; }

 private:
  struct Data {
    Precision prec;
    Complex omega1, omega2, tau, nome;
    Complex g2, g3, gamma2, eta1, eta2;
    Real area;
    SeriesData series;
    explicit Data(Precision p);
  };
  std::shared_ptr<const Data> data_;
};

/// Builds a Lattice; free-function form of the constructor.
Lattice lattice_invariants(const Complex& omega1, const Complex& omega2, Precision prec);

struct EisensteinSum {
  Complex value;
  /// Estimated bound on the omitted tail beyond the last shell.
  Real truncation_bound;
};

/// Shell-ordered partial sum of l^{-2k} over l = 2p w1 + 2q w2 with
/// 0 < max(|p|,|q|) <= radius. Brute force; used as an independent oracle.
EisensteinSum eisenstein_direct(const Complex& omega1, const Complex& omega2, int k, int radius);

}  // namespace hartorus
