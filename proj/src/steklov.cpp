#include "hartorus/steklov.hpp"

#include <algorithm>
#include <cmath>

namespace hartorus {

SteklovConfig::SteklovConfig(Precision p)
    : sigma_lo(p), sigma_hi(25L, p), step(Real::parse("0.05", p)), tol(Real::parse("1e-40", p)) {}

void SteklovConfig::validate() const {
  if (k_max < 0) throw std::invalid_argument("k_max must be >= 0");
  if (interior_R < 1) throw std::invalid_argument("interior_R must be >= 1");
  if (!(oversample >= 1.0)) throw std::invalid_argument("oversample must be >= 1");
  if (sigma_lo.sign() < 0) throw std::invalid_argument("sigma_lo must be >= 0");
  if (!(sigma_hi > sigma_lo)) throw std::invalid_argument("sigma_hi must exceed sigma_lo");
  if (step.sign() <= 0) throw std::invalid_argument("scan step must be positive");
  if (tol.sign() <= 0) throw std::invalid_argument("tolerance must be positive");
}

SteklovSystem assemble_steklov(const BasisEvaluator& basis, const std::vector<BoundarySample>& samples,
                               const std::vector<Complex>& interior) {
  const std::size_t m = basis.spec().size();
  const Precision p = basis.spec().precision();
  if (samples.size() < m) throw std::invalid_argument("Steklov assembly needs at least m boundary samples");
  if (interior.empty()) throw std::invalid_argument("Steklov assembly needs interior points");
  SteklovSystem out{DenseMatrix(samples.size(), m, p), DenseMatrix(samples.size(), m, p),
                    DenseMatrix(interior.size(), m, p), Vector(m, Real(1L, p))};
  std::vector<Real> values, normals;
  for (std::size_t l = 0; l < samples.size(); ++l) {
    basis.values_and_normals(samples[l], values, normals);
    std::move(values.begin(), values.end(), out.b.row(l));
    std::move(normals.begin(), normals.end(), out.a.row(l));
  }
  for (std::size_t r = 0; r < interior.size(); ++r) {
    if (!contains(basis.spec().domain(), interior[r])) {
      throw GeometryError("interior point " + std::to_string(r) + " is not in the domain");
    }
    values = basis.values(interior[r]);
    std::move(values.begin(), values.end(), out.c.row(r));
  }
  return out;
}

void scale_columns(SteklovSystem& system) {
  const std::size_t m = system.b.cols();
  const Precision p = system.b.precision();
  for (std::size_t j = 0; j < m; ++j) {
    Real mx(p);
    for (std::size_t l = 0; l < system.b.rows(); ++l) mx = max(mx, abs(system.b(l, j)));
    if (mx.is_zero()) continue;
    const Real inv = Real(1L, p) / mx;
    for (std::size_t l = 0; l < system.b.rows(); ++l) {
      system.a(l, j) *= inv;
      system.b(l, j) *= inv;
    }
    for (std::size_t r = 0; r < system.c.rows(); ++r) system.c(r, j) *= inv;
    system.scale[j] *= inv;
  }
}

SteklovPencil::SteklovPencil(const SteklovSystem& system, PencilRoute route)
    : route_(route), m_(system.a.cols()), reduction_(system.c) {
  if (route_ == PencilRoute::Gram) {
    const DenseMatrix gab = cross_gram(system.a, system.b);
    DenseMatrix sym = gab;
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < m_; ++j) sym(i, j) += gab(j, i);
    gaa_ = reduction_.rotate(gram(system.a));
    gab_sym_ = reduction_.rotate(sym);
    gbb_ = reduction_.rotate(gram(system.b));
    return;
  }
  const std::size_t rows = system.a.rows();
  if (rows < 2 * m_) throw std::invalid_argument("factored route needs at least 2m boundary samples");
  DenseMatrix both(rows, 2 * m_, system.a.precision());
  const DenseMatrix aq = reduction_.rotate_columns(system.a);
  const DenseMatrix bq = reduction_.rotate_columns(system.b);
  for (std::size_t l = 0; l < rows; ++l) {
    for (std::size_t j = 0; j < m_; ++j) {
      both(l, j) = aq(l, j);
      both(l, m_ + j) = bq(l, j);
    }
  }
  const DenseMatrix r = HouseholderQR(both, false).r(2 * m_);
  ra_ = r.block(0, 0, 2 * m_, m_);
  rb_ = r.block(0, m_, 2 * m_, m_);
}

SValue SteklovPencil::evaluate_once(const Real& sigma, std::size_t count, bool want_vectors) const {
  GenPair gp;
  if (route_ == PencilRoute::Gram) {
    DenseMatrix d = *gaa_;
    const Real sigma2 = square(sigma);
    const Real neg_sigma = -sigma;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < m_; ++j) {
        Real& e = d(i, j);
        mpfr_fma(e.raw(), neg_sigma.raw(), (*gab_sym_)(i, j).raw(), e.raw(), MPFR_RNDN);
        mpfr_fma(e.raw(), sigma2.raw(), (*gbb_)(i, j).raw(), e.raw(), MPFR_RNDN);
      }
    }
    gp = reduction_.solve_rotated(d, count, want_vectors);
  } else {
    DenseMatrix n = *ra_;
    const Real neg_sigma = -sigma;
    for (std::size_t i = 0; i < n.rows(); ++i)
      for (std::size_t j = 0; j < m_; ++j)
        mpfr_fma(n(i, j).raw(), neg_sigma.raw(), (*rb_)(i, j).raw(), n(i, j).raw(), MPFR_RNDN);
    gp = reduction_.solve_factored(n, count, want_vectors);
  }
  return {sigma, std::move(gp.values), std::move(gp.vectors)};
}

SValue SteklovPencil::evaluate(const Real& sigma, std::size_t count, bool want_vectors) const {
  try {
    return evaluate_once(sigma, count, want_vectors);
  } catch (const ReductionError&) {
    const Real h = Real::exp2i(-sigma.precision().bits() / 4, sigma.precision());
    try {
      return evaluate_once(sigma + h, count, want_vectors);
    } catch (const ReductionError&) {
      return evaluate_once(sigma - h, count, want_vectors);
    }
  }
}

ScanOutput scan_and_refine(const SteklovPencil& pencil, const SteklovConfig& cfg) {
  cfg.validate();
  const Precision p = cfg.step.precision();
  ScanOutput out;
  // One guard point below sigma_lo and above sigma_hi, so that minima at
  // the ends of the range (sigma = 0 in particular) form a triple.
  for (long i = -1;; ++i) {
    Real sigma = cfg.sigma_lo + cfg.step * i;
    if (sigma > cfg.sigma_hi + cfg.step) break;
    Real s = pencil.s(sigma);
    out.scan.push_back({std::move(sigma), std::move(s)});
  }
  const Real invphi = (sqrt(Real(5L, p)) - 1L) / 2L;
  for (std::size_t i = 1; i + 1 < out.scan.size(); ++i) {
    if (!(out.scan[i - 1].s > out.scan[i].s && out.scan[i].s < out.scan[i + 1].s)) continue;
    Real a = out.scan[i - 1].sigma;
    Real b = out.scan[i + 1].sigma;
    Real c = b - invphi * (b - a);
    Real d = a + invphi * (b - a);
    Real fc = pencil.s(c);
    Real fd = pencil.s(d);
    while (b - a > cfg.tol) {
      if (fc < fd) {
        b = std::move(d);
        d = c;
        fd = std::move(fc);
        c = b - invphi * (b - a);
        fc = pencil.s(c);
      } else {
        a = std::move(c);
        c = d;
        fc = std::move(fd);
        d = a + invphi * (b - a);
        fd = pencil.s(d);
      }
    }
    Real mid = ldexp(a + b, -1);
    out.minima.push_back({std::move(mid), std::move(a), std::move(b)});
  }
  return out;
}

std::vector<BoundarySample> coarsen_samples(const std::vector<BoundarySample>& fine,
                                            const std::vector<std::size_t>& fine_counts) {
  std::vector<BoundarySample> out;
  std::size_t offset = 0;
  for (std::size_t n : fine_counts) {
    if (n % 2 != 0) throw std::invalid_argument("coarsening needs even per-hole counts");
    for (std::size_t k = 0; k < n; k += 2) {
      BoundarySample s = fine.at(offset + k);
      s.weight = ldexp(s.weight, 1);
      out.push_back(std::move(s));
    }
    offset += n;
  }
  if (offset != fine.size()) throw std::invalid_argument("sample counts do not match the sample set");
  return out;
}

Real boundary_l2_norm(const BasisEvaluator& basis, const CoefficientVector& v,
                      const std::vector<BoundarySample>& samples) {
  Real acc(basis.spec().precision());
  for (const auto& s : samples) acc += s.weight * square(evaluate_expansion(basis, v, s.point));
  return sqrt(acc);
}

Real aposteriori_residual(const BasisEvaluator& basis, const Real& sigma, const CoefficientVector& v,
                          const std::vector<BoundarySample>& samples) {
  const Precision p = basis.spec().precision();
  if (v.values.size() != basis.spec().size()) {
    throw std::invalid_argument("coefficient vector length does not match the basis");
  }
  Real acc(p);
  std::vector<Real> values, normals;
  for (const auto& s : samples) {
    basis.values_and_normals(s, values, normals);
    Real u(p), un(p);
    for (std::size_t i = 0; i < values.size(); ++i) {
      mpfr_fma(u.raw(), values[i].raw(), v.values[i].raw(), u.raw(), MPFR_RNDN);
      mpfr_fma(un.raw(), normals[i].raw(), v.values[i].raw(), un.raw(), MPFR_RNDN);
    }
    acc += s.weight * square(un - sigma * u);
  }
  return sqrt(acc);
}

namespace {

Real log_floor(const Real& s) {
  const Precision p = s.precision();
  const Real floor = Real::exp2i(-2 * p.bits(), p);
  return log(max(s, floor));
}

}  // namespace

SteklovResult solve_steklov(const Domain& domain, const SteklovConfig& cfg) {
  cfg.validate();
  const Precision p = domain.precision();
  const BasisSpec spec(domain, cfg.k_max);
  const BasisEvaluator basis(spec);
  const std::size_t m = spec.size();
  const auto total = static_cast<std::size_t>(std::ceil(cfg.oversample * static_cast<double>(m)));
  std::vector<std::size_t> counts = allocate_samples(domain, total);
  std::vector<std::size_t> fine_counts;
  for (std::size_t n : counts) fine_counts.push_back(2 * n);
  const auto fine = sample_boundary_counts(domain, fine_counts);
  const auto interior = random_interior_points(domain, cfg.interior_R, cfg.seed);

  // The coarse set is every other fine sample, so one assembly serves both.
  const SteklovSystem fine_sys = assemble_steklov(basis, fine, interior);
  SteklovSystem sys{DenseMatrix(fine.size() / 2, m, p), DenseMatrix(fine.size() / 2, m, p), fine_sys.c,
                    Vector(m, Real(1L, p))};
  for (std::size_t l = 0; l < fine.size() / 2; ++l) {
    std::copy(fine_sys.a.row(2 * l), fine_sys.a.row(2 * l) + m, sys.a.row(l));
    std::copy(fine_sys.b.row(2 * l), fine_sys.b.row(2 * l) + m, sys.b.row(l));
  }
  if (cfg.column_scaling) scale_columns(sys);

  const SteklovPencil pencil(sys, cfg.route);
  ScanOutput scan = scan_and_refine(pencil, cfg);

  SteklovResult result;
  result.samples = sys.a.rows();
  result.samples_check = fine.size();
  result.basis_size = m;
  result.interior_rank = pencil.interior_rank();
  if (scan.minima.empty()) result.diagnostic = "no local minimum of s(sigma) in the scan range";

  std::vector<Real> scan_s;
  for (const auto& pt : scan.scan) scan_s.push_back(pt.s);
  std::sort(scan_s.begin(), scan_s.end());
  const Real log_ref = log_floor(scan_s[scan_s.size() / 2]);

  for (const auto& mn : scan.minima) {
    SValue sv = pencil.evaluate(mn.sigma, 2, true);
    const Real s1 = max(sv.values[0], Real(p));
    Real s2 = sv.values.size() > 1 ? max(sv.values[1], Real(p)) : Real(p);
    const bool multiple =
        sv.values.size() > 1 && log_floor(s2) < ldexp(log_floor(s1) + log_ref, -1);
    const int branches = multiple ? 2 : 1;
    for (int br = 0; br < branches; ++br) {
      CoefficientVector v{sv.vectors[static_cast<std::size_t>(br)]};
      for (std::size_t i = 0; i < m; ++i) v.values[i] *= sys.scale[i];
      // Normalize and measure the residual on the fine samples.
      const Vector u = fine_sys.b.apply(v.values);
      const Vector un = fine_sys.a.apply(v.values);
      Real norm2(p), res2(p);
      for (std::size_t l = 0; l < fine.size(); ++l) {
        norm2 += fine[l].weight * square(u[l]);
        res2 += fine[l].weight * square(un[l] - mn.sigma * u[l]);
      }
      if (norm2.is_zero()) throw DegenerateError("Steklov candidate has zero boundary norm");
      const Real inv = Real(1L, p) / sqrt(norm2);
      for (auto& x : v.values) x *= inv;
      SteklovCandidate cand{mn.sigma, br == 0 ? s1 : s2, std::move(v), sqrt(res2) * inv,
                            mn.lo,    mn.hi,               s2,           multiple, br};
      result.candidates.push_back(std::move(cand));
    }
  }
  result.scan = std::move(scan.scan);
  return result;
}

}  // namespace hartorus
