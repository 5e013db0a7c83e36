#include "hartorus/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace hartorus {

namespace {

void validate_polar(const PolarCurve& c, Precision p) {
  if (c.rho_cos.empty()) throw GeometryError("polar hole needs at least rho_0");
  for (const Real& r : c.rho_cos) {
    if (r.precision() != p) throw PrecisionMismatch("polar coefficients must match the center precision");
  }
  if (c.phase.precision() != p) throw PrecisionMismatch("polar phase must match the center precision");
  constexpr int kGrid = 4096;
  for (int i = 0; i < kGrid; ++i) {
    const double t = 2.0 * std::numbers::pi * i / kGrid;
    double rho = c.rho_cos[0].to_double();
    for (std::size_t k = 1; k < c.rho_cos.size(); ++k) {
      rho += c.rho_cos[k].to_double() * std::cos(static_cast<double>(k) * t);
    }
    if (!(rho > 0.0)) throw GeometryError("polar hole radius is not positive everywhere");
  }
}

Complex reduce_to_cell(const Lattice& lattice, const Complex& z) {
  auto [s, t] = lattice.cell_coordinates(z);
  const long p = to_long(round(s));
  const long q = to_long(round(t));
  if (p == 0 && q == 0) return z;
  return z - lattice.lattice_point(p, q);
}

/// Calls f(w) for w = reduced(z - a) - l over the 3x3 block of images.
template <typename F>
bool any_image(const Lattice& lattice, const Complex& z, const Complex& a, F&& f) {
  const Complex d = reduce_to_cell(lattice, z - a);
  for (long p = -1; p <= 1; ++p) {
    for (long q = -1; q <= 1; ++q) {
      const Complex w = (p == 0 && q == 0) ? d : d - lattice.lattice_point(p, q);
      if (f(w)) return true;
    }
  }
  return false;
}

}  // namespace

Hole::Hole(Complex center, Circle shape) : center_(std::move(center)), shape_(std::move(shape)) {
  const Circle& c = std::get<Circle>(shape_);
  require_same_precision(c.radius, center_.re);
  if (c.radius.sign() <= 0) throw GeometryError("circle radius must be positive");
}

Hole::Hole(Complex center, PolarCurve shape) : center_(std::move(center)), shape_(std::move(shape)) {
  validate_polar(std::get<PolarCurve>(shape_), center_.precision());
}

Real Hole::radius_at(const Real& theta) const {
  if (const auto* c = std::get_if<Circle>(&shape_)) return c->radius;
  const auto& pc = std::get<PolarCurve>(shape_);
  const Real t = theta + pc.phase;
  Real r = pc.rho_cos[0];
  for (std::size_t k = 1; k < pc.rho_cos.size(); ++k) {
    if (pc.rho_cos[k].is_zero()) continue;
    r += pc.rho_cos[k] * cos(t * static_cast<long>(k));
  }
  return r;
}

Real Hole::radius_derivative_at(const Real& theta) const {
  if (is_circle()) return Real(theta.precision());
  const auto& pc = std::get<PolarCurve>(shape_);
  const Real t = theta + pc.phase;
  Real r(theta.precision());
  for (std::size_t k = 1; k < pc.rho_cos.size(); ++k) {
    if (pc.rho_cos[k].is_zero()) continue;
    r -= pc.rho_cos[k] * sin(t * static_cast<long>(k)) * static_cast<long>(k);
  }
  return r;
}

Complex Hole::boundary_point(const Real& theta) const {
  return center_ + polar(radius_at(theta), theta);
}

Complex Hole::tangent(const Real& theta) const {
  const Complex e = polar(Real(1L, theta.precision()), theta);
  return Complex(radius_derivative_at(theta), radius_at(theta)) * e;
}

Real Hole::max_radius() const {
  if (const auto* c = std::get_if<Circle>(&shape_)) return c->radius;
  const auto& pc = std::get<PolarCurve>(shape_);
  Real r = pc.rho_cos[0];
  for (std::size_t k = 1; k < pc.rho_cos.size(); ++k) r += abs(pc.rho_cos[k]);
  return r;
}

double Hole::perimeter_estimate() const {
  if (const auto* c = std::get_if<Circle>(&shape_)) {
    return 2.0 * std::numbers::pi * c->radius.to_double();
  }
  const auto& pc = std::get<PolarCurve>(shape_);
  constexpr int kGrid = 512;
  double total = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    const double t = 2.0 * std::numbers::pi * i / kGrid + pc.phase.to_double();
    double rho = pc.rho_cos[0].to_double();
    double drho = 0.0;
    for (std::size_t k = 1; k < pc.rho_cos.size(); ++k) {
      const double kk = static_cast<double>(k);
      rho += pc.rho_cos[k].to_double() * std::cos(kk * t);
      drho -= kk * pc.rho_cos[k].to_double() * std::sin(kk * t);
    }
    total += std::hypot(rho, drho);
  }
  return total * 2.0 * std::numbers::pi / kGrid;
}

bool Hole::strictly_inside(const Complex& w, const Real& shrink) const {
  const Real scale = 1L - shrink;
  if (const auto* c = std::get_if<Circle>(&shape_)) {
    const Real r = c->radius * scale;
    return norm(w) < square(r);
  }
  if (w.re.is_zero() && w.im.is_zero()) return true;
  const Real rho = radius_at(arg(w)) * scale;
  return abs(w) < rho;
}

Domain::Domain(Lattice lattice, std::vector<Hole> holes)
    : lattice_(std::move(lattice)), holes_(std::move(holes)) {
  if (holes_.empty()) throw GeometryError("domain needs at least one hole");
  const Precision p = lattice_.precision();
  const Real width = lattice_.min_cell_width();
  for (std::size_t j = 0; j < holes_.size(); ++j) {
    if (holes_[j].center().precision() != p) {
      throw PrecisionMismatch("hole precision differs from lattice precision");
    }
    if (!(ldexp(holes_[j].max_radius(), 1) < width)) {
      throw GeometryError("hole " + std::to_string(j) + " does not fit inside a fundamental cell");
    }
  }
  // Pairwise disjointness of enclosing discs over the 3x3 image block.
  for (std::size_t i = 0; i < holes_.size(); ++i) {
    for (std::size_t j = i; j < holes_.size(); ++j) {
      const Real reach = holes_[i].max_radius() + holes_[j].max_radius();
      const Real reach2 = square(reach);
      const bool overlap =
          any_image(lattice_, holes_[i].center(), holes_[j].center(), [&](const Complex& w) {
            if (i == j && w.re.is_zero() && w.im.is_zero()) return false;
            return !(reach2 < norm(w));
          });
      if (overlap) {
        throw GeometryError("holes " + std::to_string(i) + " and " + std::to_string(j) +
                            " overlap (possibly through a periodic image)");
      }
    }
  }
}

std::vector<std::size_t> allocate_samples(const Domain& domain, std::size_t total) {
  const std::size_t b = domain.hole_count();
  if (total < 8 * b) {
    throw std::invalid_argument("sample count " + std::to_string(total) + " is below 8 per hole");
  }
  std::vector<double> perim(b);
  for (std::size_t j = 0; j < b; ++j) perim[j] = domain.holes()[j].perimeter_estimate();
  const double sum = std::accumulate(perim.begin(), perim.end(), 0.0);
  std::vector<double> ideal(b);
  std::vector<std::size_t> counts(b);
  for (std::size_t j = 0; j < b; ++j) {
    ideal[j] = static_cast<double>(total) * perim[j] / sum;
    counts[j] = std::max<std::size_t>(8, static_cast<std::size_t>(std::floor(ideal[j])));
  }
  auto assigned = [&] { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); };
  while (assigned() < total) {
    std::size_t best = 0;
    double best_gap = -1e300;
    for (std::size_t j = 0; j < b; ++j) {
      const double gap = ideal[j] - static_cast<double>(counts[j]);
      if (gap > best_gap) {
        best_gap = gap;
        best = j;
      }
    }
    ++counts[best];
  }
  while (assigned() > total) {
    std::size_t best = b;
    double best_excess = -1e300;
    for (std::size_t j = 0; j < b; ++j) {
      if (counts[j] <= 8) continue;
      const double excess = static_cast<double>(counts[j]) - ideal[j];
      if (excess > best_excess) {
        best_excess = excess;
        best = j;
      }
    }
    --counts[best];
  }
  return counts;
}

std::vector<BoundarySample> sample_boundary(const Domain& domain, std::size_t total) {
  return sample_boundary_counts(domain, allocate_samples(domain, total));
}

std::vector<BoundarySample> sample_boundary_counts(const Domain& domain,
                                                   const std::vector<std::size_t>& counts) {
  if (counts.size() != domain.hole_count()) {
    throw std::invalid_argument("one sample count per hole is required");
  }
  const Precision p = domain.precision();
  const Real two_pi = ldexp(Real::pi(p), 1);
  std::vector<BoundarySample> out;
  out.reserve(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  for (std::size_t j = 0; j < counts.size(); ++j) {
    const Hole& hole = domain.holes()[j];
    const std::size_t n = counts[j];
    if (n < 8) throw std::invalid_argument("each hole needs at least 8 samples");
    const Real step = two_pi / static_cast<long>(n);
    for (std::size_t k = 0; k < n; ++k) {
      Real theta = step * static_cast<long>(k);
      Complex t = hole.tangent(theta);
      Real speed = abs(t);
      if (speed.is_zero()) throw GeometryError("degenerate hole boundary (zero tangent)");
      // i * t / |t| points into the hole for a counter-clockwise curve.
      Complex normal(-(t.im / speed), t.re / speed);
      out.push_back(BoundarySample{hole.boundary_point(theta), std::move(normal), j, speed * step,
                                   std::move(theta)});
    }
  }
  return out;
}

std::vector<std::size_t> sample_counts(const Domain& domain, const std::vector<BoundarySample>& samples) {
  std::vector<std::size_t> counts(domain.hole_count(), 0);
  for (const auto& s : samples) ++counts.at(s.hole);
  return counts;
}

bool contains(const Domain& domain, const Complex& z) {
  for (const Hole& hole : domain.holes()) {
    const bool hit = any_image(domain.lattice(), z, hole.center(), [&](const Complex& w) {
      if (hole.is_circle()) {
        return !(square(std::get<Circle>(hole.shape()).radius) < norm(w));
      }
      if (w.re.is_zero() && w.im.is_zero()) return true;
      return !(hole.radius_at(arg(w)) < abs(w));
    });
    if (hit) return false;
  }
  return true;
}

bool in_closure(const Domain& domain, const Complex& z) {
  const Real margin = Real::exp2i(-domain.precision().bits() / 2, domain.precision());
  for (const Hole& hole : domain.holes()) {
    const bool hit = any_image(domain.lattice(), z, hole.center(),
                               [&](const Complex& w) { return hole.strictly_inside(w, margin); });
    if (hit) return false;
  }
  return true;
}

std::vector<Complex> random_interior_points(const Domain& domain, std::size_t count,
                                            std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("random_interior_points requires count >= 1");
  const Precision p = domain.precision();
  const Lattice& lat = domain.lattice();
  std::mt19937_64 gen(seed);
  auto unit = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5; };
  const std::size_t max_attempts = 100 * count + 1000;
  std::vector<Complex> out;
  out.reserve(count);
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (attempts >= max_attempts) {
      throw GeometryError("rejection sampling acceptance ratio below 1%: holes nearly fill the torus");
    }
    ++attempts;
    const Real s(unit(), p);
    const Real t(unit(), p);
    Complex z = ldexp(lat.omega1() * s + lat.omega2() * t, 1);
    if (contains(domain, z)) out.push_back(std::move(z));
  }
  return out;
}

std::vector<Complex> cell_grid(const Lattice& lattice, std::size_t n) {
  if (n < 2) throw std::invalid_argument("grid size must be at least 2");
  const Precision p = lattice.precision();
  std::vector<Complex> out;
  out.reserve(n * n);
  const long last = static_cast<long>(n) - 1;
  for (std::size_t j = 0; j < n; ++j) {
    const Real t = Real(static_cast<long>(j), p) / last - Real::exp2i(-1, p);
    for (std::size_t i = 0; i < n; ++i) {
      const Real s = Real(static_cast<long>(i), p) / last - Real::exp2i(-1, p);
      out.push_back(ldexp(lattice.omega1() * s + lattice.omega2() * t, 1));
    }
  }
  return out;
}

}  // namespace hartorus
