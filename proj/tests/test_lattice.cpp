#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace hartorus;
using namespace hartorus::testing;

TEST_CASE("symmetric lattices kill one invariant", "[lattice]") {
  for (long bits : {256L, 1024L}) {
    const Precision p(bits);
    const Lattice sq = Lattice::square(p);
    const Lattice eq = Lattice::equilateral(p);
    const Real floor = Real::exp2i(-bits + 32, p);
    REQUIRE(abs(sq.g3()) < floor * abs(sq.g2()));
    REQUIRE(abs(eq.g2()) < floor * abs(eq.g3()));
    REQUIRE(sq.legendre_residual() < sq.tolerance());
    REQUIRE(eq.legendre_residual() < eq.tolerance());
  }
}

TEST_CASE("Legendre relation on random lattices", "[lattice]") {
  Rng rng(11);
  for (long bits : {256L, 1024L}) {
    const Precision p(bits);
    for (int i = 0; i < 10; ++i) {
      const Lattice l = random_lattice(rng, p);
      INFO("lattice " << i << " at " << bits << " bits");
      REQUIRE(l.legendre_residual() < l.tolerance());
      REQUIRE(l.quasi_period_residual() < l.tolerance());
    }
  }
}

TEST_CASE("g2 agrees with the shell-summed Eisenstein series", "[lattice]") {
  const Precision p(128);
  const Lattice sq = Lattice::square(p);
  const EisensteinSum s = eisenstein_direct(sq.omega1(), sq.omega2(), 2, 200);
  const Complex g2_direct = s.value * 60L;
  // The tail of sum l^{-4} beyond shell R is O(R^{-2}).
  REQUIRE(abs(g2_direct - sq.g2()) < Real(1e-4, p));
  REQUIRE(abs(g2_direct - sq.g2()) < s.truncation_bound * 60L * 4L);
}

TEST_CASE("direct shell sums converge as R^-2", "[lattice]") {
  const Precision p(128);
  const Lattice sq = Lattice::square(p);
  const Complex a = eisenstein_direct(sq.omega1(), sq.omega2(), 2, 50).value;
  const Complex b = eisenstein_direct(sq.omega1(), sq.omega2(), 2, 200).value;
  const Complex g6 = eisenstein_direct(sq.omega1(), sq.omega2(), 3, 50).value;
  REQUIRE(abs(a - b) < Real(1.0 / (50.0 * 50.0), p));
  REQUIRE(abs(g6 * 140L) < Real(1e-20, p));
  const Lattice eq = Lattice::equilateral(p);
  // Square shells are not hexagonally symmetric, so only the tail bound applies.
  const EisensteinSum e = eisenstein_direct(eq.omega1(), eq.omega2(), 2, 50);
  REQUIRE(abs(e.value) < e.truncation_bound * 4L);
  REQUIRE(abs(eq.g2()) < Real(1e-30, p));
}

TEST_CASE("invalid period pairs are rejected", "[lattice]") {
  const Precision p(128);
  REQUIRE_THROWS_AS(Lattice(Complex(1, 0, p), Complex(2, 0, p), p), GeometryError);
  REQUIRE_THROWS_AS(Lattice(Complex(1, 0, p), Complex(p), p), GeometryError);
}

TEST_CASE("cell coordinates invert lattice points", "[lattice]") {
  const Precision p(256);
  Rng rng(5);
  const Lattice l = random_lattice(rng, p);
  const Complex z = l.lattice_point(3, -2);
  const auto [s, t] = l.cell_coordinates(z);
  REQUIRE(abs(s - 3L) < Real::exp2i(-200, p));
  REQUIRE(abs(t + 2L) < Real::exp2i(-200, p));
  REQUIRE(l.area() > 0L);
}
