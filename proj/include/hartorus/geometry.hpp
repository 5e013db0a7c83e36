#pragma once

#include "hartorus/arbprec.hpp"
#include "hartorus/lattice.hpp"

#include <cstdint>
#include <variant>
#include <vector>

namespace hartorus {

struct Circle {
  Real radius;
};

/// Star-shaped hole with boundary a + rho(theta + phase) e^{i theta},
/// rho(t) = rho_0 + sum_k rho_k cos(k t).
struct PolarCurve {
  std::vector<Real> rho_cos;
  Real phase;
};

class Hole {
 public:
  Hole(Complex center, Circle shape);
  Hole(Complex center, PolarCurve shape);

  const Complex& center() const { return center_; }
  bool is_circle() const { return std::holds_alternative<Circle>(shape_); }
  const std::variant<Circle, PolarCurve>& shape() const { return shape_; }

  /// Radius of the boundary in direction theta (measured from the center).
  Real radius_at(const Real& theta) const;
  /// d/dtheta of radius_at.
  Real radius_derivative_at(const Real& theta) const;
  Complex boundary_point(const Real& theta) const;
  /// d/dtheta of boundary_point (counter-clockwise orientation).
  Complex tangent(const Real& theta) const;
  /// Upper bound on radius_at over all angles.
  Real max_radius() const;
  /// Perimeter estimate (double precision), used for sample allocation.
  double perimeter_estimate() const;
  /// True when w (relative to the center) lies strictly inside the curve,
  /// shrunk by the relative margin `shrink`.
  bool strictly_inside(const Complex& w, const Real& shrink) const;

 private:
  Complex center_;
  std::variant<Circle, PolarCurve> shape_;
};

/// Flat torus with b >= 1 holes removed.
class Domain {
 public:
  Domain(Lattice lattice, std::vector<Hole> holes);

  const Lattice& lattice() const { return lattice_; }
  const std::vector<Hole>& holes() const { return holes_; }
  std::size_t hole_count() const { return holes_.size(); }
  Precision precision() const { return lattice_.precision(); }

 private:
  Lattice lattice_;
  std::vector<Hole> holes_;
};

struct BoundarySample {
  Complex point;
  /// Unit normal pointing out of the domain, i.e. into the hole.
  Complex normal;
  std::size_t hole;
  /// Periodic trapezoid arclength weight |gamma'(theta)| * 2 pi / n.
  Real weight;
  Real theta;
};

/// Per-hole sample counts: proportional to perimeter, each >= 8, summing to S.
std::vector<std::size_t> allocate_samples(const Domain& domain, std::size_t total);

std::vector<BoundarySample> sample_boundary(const Domain& domain, std::size_t total);
/// Uniform parameter sampling with explicit per-hole counts.
std::vector<BoundarySample> sample_boundary_counts(const Domain& domain,
                                                   const std::vector<std::size_t>& counts);
/// Counts of a sample set, per hole.
std::vector<std::size_t> sample_counts(const Domain& domain, const std::vector<BoundarySample>& samples);

/// True iff z, reduced modulo the lattice, lies strictly outside every hole.
bool contains(const Domain& domain, const Complex& z);
/// True unless z lies inside a hole by more than a relative 2^{-bits/2}
/// margin; accepts boundary points.
bool in_closure(const Domain& domain, const Complex& z);

/// R uniform points of the domain by rejection sampling on the centred
/// fundamental cell; deterministic in `seed`.
std::vector<Complex> random_interior_points(const Domain& domain, std::size_t count,
                                            std::uint64_t seed);

/// Grid of the centred fundamental parallelogram, s, t in [-1/2, 1/2].
std::vector<Complex> cell_grid(const Lattice& lattice, std::size_t n);

}  // namespace hartorus
