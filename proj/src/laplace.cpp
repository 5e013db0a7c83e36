#include "hartorus/laplace.hpp"

#include <cmath>

namespace hartorus {

Real FourierSeries::operator()(const Real& theta) const {
  Real out = a0;
  for (std::size_t k = 0; k < cos.size(); ++k) {
    if (!cos[k].is_zero()) out += cos[k] * hartorus::cos(theta * static_cast<long>(k + 1));
  }
  for (std::size_t k = 0; k < sin.size(); ++k) {
    if (!sin[k].is_zero()) out += sin[k] * hartorus::sin(theta * static_cast<long>(k + 1));
  }
  return out;
}

std::pair<DenseMatrix, Vector> assemble_dirichlet(const BasisEvaluator& basis,
                                                  const std::vector<BoundarySample>& samples,
                                                  const BoundaryData& data) {
  const BasisSpec& spec = basis.spec();
  if (data.holes.size() != spec.holes()) {
    throw std::invalid_argument("boundary data must give one series per hole");
  }
  const std::size_t m = spec.size();
  if (samples.size() < m) throw std::invalid_argument("Dirichlet assembly needs at least m samples");
  const Precision p = spec.precision();
  DenseMatrix b(samples.size(), m, p);
  Vector rhs;
  rhs.reserve(samples.size());
  for (std::size_t l = 0; l < samples.size(); ++l) {
    std::vector<Real> row = basis.values(samples[l].point);
    std::move(row.begin(), row.end(), b.row(l));
    rhs.push_back(data.holes[samples[l].hole](samples[l].theta));
  }
  return {std::move(b), std::move(rhs)};
}

LaplaceSolution solve_laplace(const Domain& domain, const BoundaryData& data, const LaplaceOptions& options) {
  if (!(options.oversample >= 1.0)) throw std::invalid_argument("oversample must be >= 1");
  const Precision p = domain.precision();
  BasisSpec spec(domain, options.k_max);
  const BasisEvaluator basis(spec);
  const std::size_t m = spec.size();
  const auto total = static_cast<std::size_t>(std::ceil(options.oversample * static_cast<double>(m)));
  std::vector<std::size_t> fine_counts;
  for (std::size_t n : allocate_samples(domain, total)) fine_counts.push_back(2 * n);
  const auto fine = sample_boundary_counts(domain, fine_counts);

  // Even fine samples form the fitting set; the full set checks the fit.
  auto [bf, rhs_f] = assemble_dirichlet(basis, fine, data);
  const std::size_t s = fine.size() / 2;
  DenseMatrix b(s, m, p);
  Vector rhs;
  for (std::size_t l = 0; l < s; ++l) {
    std::copy(bf.row(2 * l), bf.row(2 * l) + m, b.row(l));
    rhs.push_back(rhs_f[2 * l]);
  }

  Vector scale(m, Real(1L, p));
  if (options.column_scaling) {
    for (std::size_t j = 0; j < m; ++j) {
      Real mx(p);
      for (std::size_t l = 0; l < s; ++l) mx = max(mx, abs(b(l, j)));
      if (mx.is_zero()) continue;
      scale[j] = Real(1L, p) / mx;
      for (std::size_t l = 0; l < s; ++l) b(l, j) *= scale[j];
    }
  }
  Vector v = least_squares(b, rhs, options.method);
  for (std::size_t j = 0; j < m; ++j) v[j] *= scale[j];

  const Vector u = bf.apply(v);
  Real sup_fine(p), sup_fit(p);
  for (std::size_t l = 0; l < fine.size(); ++l) {
    const Real err = abs(u[l] - rhs_f[l]);
    sup_fine = max(sup_fine, err);
    if (l % 2 == 0) sup_fit = max(sup_fit, err);
  }
  return LaplaceSolution{std::move(spec), CoefficientVector{std::move(v)}, std::move(sup_fine),
                         std::move(sup_fit), s, fine.size()};
}

Real eval_solution(const LaplaceSolution& sol, const Complex& z) {
  if (!in_closure(sol.spec.domain(), z)) throw GeometryError("evaluation point is inside a hole");
  return evaluate_expansion(BasisEvaluator(sol.spec), sol.coefficients, z);
}

}  // namespace hartorus
