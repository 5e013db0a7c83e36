#pragma once

#include "hartorus/arbprec.hpp"
#include "hartorus/basis.hpp"
#include "hartorus/geometry.hpp"
#include "hartorus/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hartorus {

/// f(theta) = a0 + sum_k cos_k cos(k theta) + sin_k sin(k theta), k >= 1,
/// in the hole's parameter angle.
struct FourierSeries {
  Real a0;
  std::vector<Real> cos;
  std::vector<Real> sin;

  Real operator()(const Real& theta) const;
};

/// Dirichlet data, one Fourier series per hole.
struct BoundaryData {
  std::vector<FourierSeries> holes;
};

struct LaplaceOptions {
  int k_max = 60;
  double oversample = 3.0;
  bool column_scaling = true;
  LeastSquaresMethod method = LeastSquaresMethod::Householder;
};

struct LaplaceSolution {
  BasisSpec spec;
  CoefficientVector coefficients;
  /// max |u - f| over the doubled sample set.
  Real boundary_sup_error;
  /// Same maximum over the S fitting samples; the gap to the doubled value
  /// is the sampling-resolution caveat.
  Real fit_sup_error;
  std::size_t samples_used;
  std::size_t samples_check;
};

/// B(l, i) = phi_i(p_l), b_l = f_j(theta_l).
std::pair<DenseMatrix, Vector> assemble_dirichlet(const BasisEvaluator& basis,
                                                  const std::vector<BoundarySample>& samples,
                                                  const BoundaryData& data);

LaplaceSolution solve_laplace(const Domain& domain, const BoundaryData& data, const LaplaceOptions& options);

/// u(z) on the closed domain; throws GeometryError inside a hole.
Real eval_solution(const LaplaceSolution& sol, const Complex& z);

}  // namespace hartorus
