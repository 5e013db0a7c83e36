#include "hartorus/basis.hpp"

#include <stdexcept>

namespace hartorus {

std::size_t basis_size(std::size_t holes, int k_max) {
  return 1 + 2 * holes * (static_cast<std::size_t>(k_max) + 2) + (holes - 1);
}

BasisSpec::BasisSpec(Domain domain, int k_max) : domain_(std::move(domain)), k_max_(k_max) {
  if (k_max < 0 || k_max + 1 > EllipticEvaluator::kDerivativeCap) {
    throw std::invalid_argument("k_max must lie in [0, " +
                                std::to_string(EllipticEvaluator::kDerivativeCap - 1) + "]");
  }
  m_ = basis_size(domain_.hole_count(), k_max_);
}

BasisSpec::Slot BasisSpec::slot(std::size_t i) const {
  if (i >= m_) throw std::out_of_range("basis index " + std::to_string(i) + " out of range");
  if (i == 0) return {SlotKind::Constant, 0, 0, false};
  const std::size_t b = holes();
  const std::size_t series_end = 1 + b * per_hole();
  if (i >= series_end) return {SlotKind::LogDifference, i - series_end, 0, false};
  const std::size_t hole = (i - 1) / per_hole();
  const std::size_t offset = (i - 1) % per_hole();
  const bool imag = offset % 2 == 1;
  if (offset < 2) return {SlotKind::ZetaHat, hole, -1, imag};
  return {SlotKind::WpDerivative, hole, static_cast<int>(offset / 2) - 1, imag};
}

std::size_t BasisSpec::zeta_index(std::size_t hole, bool imag) const {
  if (hole >= holes()) throw std::out_of_range("hole index out of range");
  return 1 + hole * per_hole() + (imag ? 1 : 0);
}

std::size_t BasisSpec::wp_index(std::size_t hole, int k, bool imag) const {
  if (hole >= holes()) throw std::out_of_range("hole index out of range");
  if (k < 0 || k > k_max_) throw std::out_of_range("derivative order out of range");
  return 1 + hole * per_hole() + 2 + 2 * static_cast<std::size_t>(k) + (imag ? 1 : 0);
}

std::size_t BasisSpec::log_index(std::size_t hole) const {
  if (hole + 1 >= holes()) throw std::out_of_range("log column exists only for holes 0..b-2");
  return 1 + holes() * per_hole() + hole;
}

std::string BasisSpec::slot_name(std::size_t i) const {
  const Slot s = slot(i);
  const std::string j = std::to_string(s.hole);
  switch (s.kind) {
    case SlotKind::Constant:
      return "C";
    case SlotKind::ZetaHat:
      return std::string(s.imag ? "Im" : "Re") + " zeta_hat(z-a" + j + ")";
    case SlotKind::WpDerivative:
      return std::string(s.imag ? "Im" : "Re") + " wp^(" + std::to_string(s.order) + ")(z-a" + j + ")";
    case SlotKind::LogDifference:
      return "log|sigma_hat(z-a" + j + ")| - log|sigma_hat(z-a" + std::to_string(holes() - 1) + ")|";
  }
  return {};
}

ExpandedCoefficients expand_coefficients(const BasisSpec& spec, const CoefficientVector& v) {
  if (v.values.size() != spec.size()) {
    throw std::invalid_argument("coefficient vector has length " + std::to_string(v.values.size()) +
                                ", expected " + std::to_string(spec.size()));
  }
  const Precision p = spec.precision();
  const std::size_t b = spec.holes();
  ExpandedCoefficients out{v.values[0], {}, {}, std::vector<Real>(b, Real(p))};
  out.a.resize(b);
  out.b.resize(b);
  for (std::size_t j = 0; j < b; ++j) {
    out.a[j].push_back(v.values[spec.zeta_index(j, false)]);
    out.b[j].push_back(v.values[spec.zeta_index(j, true)]);
    for (int k = 0; k <= spec.k_max(); ++k) {
      out.a[j].push_back(v.values[spec.wp_index(j, k, false)]);
      out.b[j].push_back(v.values[spec.wp_index(j, k, true)]);
    }
  }
  Real sum(p);
  for (std::size_t j = 0; j + 1 < b; ++j) {
    out.c[j] = v.values[spec.log_index(j)];
    sum += out.c[j];
  }
  out.c[b - 1] = -sum;
  return out;
}

BasisEvaluator::BasisEvaluator(const BasisSpec& spec)
    : spec_(spec),
      elliptic_(spec.domain().lattice()),
      gamma2_(spec.domain().lattice().gamma2()),
      pi_over_area_(Real::pi(spec.precision()) / spec.domain().lattice().area()) {}

void BasisEvaluator::evaluate(const Complex& z, const Complex* normal, std::vector<Real>* values,
                              std::vector<Real>* normals) const {
  const Domain& domain = spec_.domain();
  if (z.precision() != spec_.precision()) throw PrecisionMismatch("point precision differs from basis");
  if (!in_closure(domain, z)) throw GeometryError("basis evaluated inside a hole");
  const Precision p = spec_.precision();
  const std::size_t m = spec_.size();
  const std::size_t b = spec_.holes();
  const int k_max = spec_.k_max();
  if (values) {
    values->assign(m, Real(p));
    (*values)[0] = Real(1L, p);
  }
  if (normals) normals->assign(m, Real(p));

  const bool want_log = b >= 2 && values;
  std::vector<Real> logs;
  std::vector<Real> dlogs;
  for (std::size_t j = 0; j < b; ++j) {
    const Complex w = z - domain.holes()[j].center();
    auto pv = elliptic_.evaluate_all(w, normals ? k_max + 1 : k_max, want_log);
    if (values) {
      (*values)[spec_.zeta_index(j, false)] = pv.zeta_hat.re;
      (*values)[spec_.zeta_index(j, true)] = pv.zeta_hat.im;
      for (int k = 0; k <= k_max; ++k) {
        const auto& d = pv.wp_derivs[static_cast<std::size_t>(k)];
        (*values)[spec_.wp_index(j, k, false)] = d.re;
        (*values)[spec_.wp_index(j, k, true)] = d.im;
      }
      if (want_log) logs.push_back(std::move(*pv.log_abs_sigma_hat));
    }
    if (normals) {
      const Complex& n = *normal;
      const Complex nwp = n * pv.wp_derivs[0];
      (*normals)[spec_.zeta_index(j, false)] =
          -nwp.re - ((gamma2_.re + pi_over_area_) * n.re - gamma2_.im * n.im);
      (*normals)[spec_.zeta_index(j, true)] =
          -nwp.im - (gamma2_.im * n.re + (gamma2_.re - pi_over_area_) * n.im);
      for (int k = 0; k <= k_max; ++k) {
        const Complex t = n * pv.wp_derivs[static_cast<std::size_t>(k + 1)];
        (*normals)[spec_.wp_index(j, k, false)] = t.re;
        (*normals)[spec_.wp_index(j, k, true)] = t.im;
      }
      // grad log|sigma_hat(w)| = (Re zeta_hat(w), -Im zeta_hat(w)).
      if (b >= 2) dlogs.push_back((n * pv.zeta_hat).re);
    }
  }
  for (std::size_t j = 0; j + 1 < b; ++j) {
    const std::size_t col = spec_.log_index(j);
    if (values) (*values)[col] = logs[j] - logs[b - 1];
    if (normals) (*normals)[col] = dlogs[j] - dlogs[b - 1];
  }
}

std::vector<Real> BasisEvaluator::values(const Complex& z) const {
  std::vector<Real> out;
  evaluate(z, nullptr, &out, nullptr);
  return out;
}

void BasisEvaluator::values_and_normals(const BoundarySample& sample, std::vector<Real>& values,
                                        std::vector<Real>& normals) const {
  evaluate(sample.point, &sample.normal, &values, &normals);
}

std::vector<Real> BasisEvaluator::normal_derivatives(const Complex& z, const Complex& n) const {
  std::vector<Real> out;
  evaluate(z, &n, nullptr, &out);
  return out;
}

Real basis_eval(const BasisSpec& spec, std::size_t i, const Complex& z) {
  spec.slot(i);
  return BasisEvaluator(spec).values(z)[i];
}

Real basis_normal_deriv(const BasisSpec& spec, std::size_t i, const BoundarySample& sample) {
  spec.slot(i);
  return BasisEvaluator(spec).normal_derivatives(sample.point, sample.normal)[i];
}

Real evaluate_expansion(const BasisEvaluator& basis, const CoefficientVector& v, const Complex& z) {
  if (v.values.size() != basis.spec().size()) {
    throw std::invalid_argument("coefficient vector length does not match the basis");
  }
  const std::vector<Real> phi = basis.values(z);
  Real out(basis.spec().precision());
  for (std::size_t i = 0; i < phi.size(); ++i) out += phi[i] * v.values[i];
  return out;
}

}  // namespace hartorus
