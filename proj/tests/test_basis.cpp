#include "hartorus/basis.hpp"

#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace hartorus;
using namespace hartorus::testing;

namespace {

const Precision kP(256);

Domain two_holes(const Lattice& l) {
  return Domain(l, {Hole(Complex(num("0.4", kP), Real(kP)), Circle{num("0.2", kP)}),
                    Hole(Complex(num("-0.4", kP), num("-0.4", kP)), Circle{num("0.2", kP)})});
}

Domain three_holes_with_flower() {
  const Lattice l = Lattice::equilateral(kP);
  return Domain(l, {Hole(Complex(num("0.3", kP), Real(kP)), Circle{num("0.1", kP)}),
                    Hole(Complex(Real(kP), num("0.5", kP)), Circle{num("0.1", kP)}),
                    Hole(Complex(num("-0.5", kP), num("-0.3", kP)),
                         PolarCurve{{num("0.15", kP), Real(kP), num("0.03", kP)}, num("0.2", kP)})});
}

// Interior point at least `gap` away from every hole boundary.
Complex interior_point(Rng& rng, const Domain& d, double gap) {
  for (;;) {
    const Complex z = rng.cell_point(d.lattice(), 0.5);
    bool ok = true;
    for (const Hole& h : d.holes()) {
      if (abs(z - h.center()) < h.max_radius() + Real(gap, kP)) ok = false;
    }
    if (ok && contains(d, z)) return z;
  }
}

}  // namespace

TEST_CASE("basis size and layout", "[basis]") {
  const Domain one = one_hole(Lattice::square(kP), num("0.4", kP));
  const BasisSpec big(one, 150);
  REQUIRE(big.size() == 305);
  REQUIRE(basis_size(1, 150) == 305);
  for (std::size_t i = 0; i < big.size(); ++i) REQUIRE(big.slot(i).kind != BasisSpec::SlotKind::LogDifference);

  const BasisSpec spec(three_holes_with_flower(), 5);
  REQUIRE(spec.size() == 1 + 2 * 3 * 7 + 2);
  REQUIRE(spec.slot(0).kind == BasisSpec::SlotKind::Constant);
  REQUIRE(spec.zeta_index(0, false) == 1);
  REQUIRE(spec.zeta_index(0, true) == 2);
  REQUIRE(spec.wp_index(0, 0, false) == 3);
  REQUIRE(spec.wp_index(0, 5, true) == 14);
  REQUIRE(spec.zeta_index(1, false) == 15);
  REQUIRE(spec.log_index(0) == spec.size() - 2);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const auto s = spec.slot(i);
    switch (s.kind) {
      case BasisSpec::SlotKind::ZetaHat: REQUIRE(spec.zeta_index(s.hole, s.imag) == i); break;
      case BasisSpec::SlotKind::WpDerivative: REQUIRE(spec.wp_index(s.hole, s.order, s.imag) == i); break;
      case BasisSpec::SlotKind::LogDifference: REQUIRE(spec.log_index(s.hole) == i); break;
      case BasisSpec::SlotKind::Constant: REQUIRE(i == 0); break;
    }
    REQUIRE_FALSE(spec.slot_name(i).empty());
  }
  REQUIRE_THROWS(spec.slot(spec.size()));
  REQUIRE_THROWS(BasisSpec(one, -1));
}

TEST_CASE("coefficient expansion restores the last log coefficient", "[basis]") {
  const BasisSpec one(one_hole(Lattice::square(kP), num("0.4", kP)), 3);
  const ExpandedCoefficients e1 = expand_coefficients(one, CoefficientVector{Vector(one.size(), Real(1L, kP))});
  REQUIRE(e1.c.size() == 1);
  REQUIRE(e1.c[0].is_zero());

  const BasisSpec two(two_holes(Lattice::square(kP)), 3);
  CoefficientVector v{Vector(two.size(), Real(kP))};
  v.values[two.log_index(0)] = num("0.7", kP);
  v.values[two.wp_index(1, 2, true)] = num("5", kP);
  const ExpandedCoefficients e2 = expand_coefficients(two, v);
  REQUIRE(e2.c[1] == -num("0.7", kP));
  REQUIRE(e2.im_coeff(1, 2) == Real(5L, kP));

  const BasisSpec three(three_holes_with_flower(), 2);
  CoefficientVector w{Vector(three.size(), Real(kP))};
  w.values[three.log_index(0)] = num("0.2", kP);
  w.values[three.log_index(1)] = num("-0.5", kP);
  REQUIRE(abs(expand_coefficients(three, w).c[2] - num("0.3", kP)) < tol_bits(-250, kP));
  REQUIRE_THROWS(expand_coefficients(three, CoefficientVector{Vector(3, Real(kP))}));
}

TEST_CASE("basis values: constant slot, periodicity, hole rejection", "[basis]") {
  Rng rng(41);
  const Domain d = three_holes_with_flower();
  const BasisSpec spec(d, 6);
  const BasisEvaluator ev(spec);
  const Complex w1 = ldexp(d.lattice().omega1(), 1);
  const Complex w2 = ldexp(d.lattice().omega2(), 1);
  for (int i = 0; i < 5; ++i) {
    const Complex z = interior_point(rng, d, 0.02);
    const auto v0 = ev.values(z);
    REQUIRE(v0[0] == Real(1L, kP));
    for (const Complex& shift : {w1, w2}) {
      const auto v1 = ev.values(z + shift);
      for (std::size_t k = 0; k < v0.size(); ++k) {
        REQUIRE(abs(v1[k] - v0[k]) <= (abs(v0[k]) + Real(1L, kP)) * tol_bits(-kP.bits() + 64, kP));
      }
      const Complex n = polar(Real(1L, kP), rng.real(0, 6.28, kP));
      const auto n0 = ev.normal_derivatives(z, n);
      const auto n1 = ev.normal_derivatives(z + shift, n);
      for (std::size_t k = 0; k < n0.size(); ++k) {
        REQUIRE(abs(n1[k] - n0[k]) <= (abs(n0[k]) + Real(1L, kP)) * tol_bits(-kP.bits() + 64, kP));
      }
    }
    REQUIRE(basis_eval(spec, 5, z) == v0[5]);
  }
  REQUIRE_THROWS_AS(ev.values(d.holes()[0].center()), GeometryError);
}

TEST_CASE("normal derivatives match finite differences for every slot family", "[basis]") {
  Rng rng(42);
  for (const Domain& d : {two_holes(Lattice::square(kP)), three_holes_with_flower()}) {
    const BasisSpec spec(d, 5);
    const BasisEvaluator ev(spec);
    const Real h = Real::exp2i(-kP.bits() / 4, kP);
    const auto samples = sample_boundary(d, 60);
    for (int r = 0; r < 20; ++r) {
      const BoundarySample& s = samples[(static_cast<std::size_t>(r) * 7) % samples.size()];
      // values_and_normals at the sample equals the general routine.
      std::vector<Real> vals, nrm;
      ev.values_and_normals(s, vals, nrm);
      const auto direct = ev.normal_derivatives(s.point, s.normal);
      for (std::size_t i = 0; i < nrm.size(); ++i) {
        REQUIRE(abs(direct[i] - nrm[i]) <= (abs(nrm[i]) + Real(1L, kP)) * tol_bits(-kP.bits() + 32, kP));
        REQUIRE(abs(basis_normal_deriv(spec, i, s) - nrm[i]) <=
                (abs(nrm[i]) + Real(1L, kP)) * tol_bits(-kP.bits() + 32, kP));
      }
      REQUIRE(nrm[0].is_zero());
      // Central difference along the normal, just off the boundary on the domain side.
      const Complex z = s.point - s.normal * Real(1e-3, kP);
      const auto an = ev.normal_derivatives(z, s.normal);
      const auto plus = ev.values(z + s.normal * h);
      const auto minus = ev.values(z - s.normal * h);
      for (std::size_t i = 0; i < an.size(); ++i) {
        const Real fd = (plus[i] - minus[i]) / ldexp(h, 1);
        const Real scale = abs(an[i]) + abs(plus[i]) + Real(1L, kP);
        INFO("slot " << spec.slot_name(i));
        REQUIRE(abs(fd - an[i]) <= scale * Real(1e-20, kP));
      }
    }
  }
}

TEST_CASE("expansions are harmonic", "[basis]") {
  Rng rng(43);
  const Domain d = three_holes_with_flower();
  const BasisSpec spec(d, 4);
  const BasisEvaluator ev(spec);
  const Real h = Real::exp2i(-kP.bits() / 4, kP);
  for (int trial = 0; trial < 5; ++trial) {
    CoefficientVector v{Vector(spec.size(), Real(kP))};
    Real l1(kP);
    for (auto& x : v.values) {
      x = rng.real(-1, 1, kP);
      l1 += abs(x);
    }
    const Complex z = interior_point(rng, d, 0.1);
    const Complex dx(h, Real(kP));
    const Complex dy(Real(kP), h);
    const Real lap = (evaluate_expansion(ev, v, z + dx) + evaluate_expansion(ev, v, z - dx) +
                      evaluate_expansion(ev, v, z + dy) + evaluate_expansion(ev, v, z - dy) -
                      evaluate_expansion(ev, v, z) * 4L) /
                     square(h);
    REQUIRE(abs(lap) < l1 * Real(1e-20, kP));
  }
}
