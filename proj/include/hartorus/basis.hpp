#pragma once

#include "hartorus/arbprec.hpp"
#include "hartorus/elliptic.hpp"
#include "hartorus/geometry.hpp"

#include <string>
#include <vector>

namespace hartorus {

/// Truncated series basis of harmonic functions on a domain.
///
/// Column layout, with b holes centred at a_j:
///   0                      constant 1
///   per hole j, 2 + 2(k_max + 1) columns:
///     Re, Im of zeta_hat(z - a_j)
///     Re, Im of wp^(k)(z - a_j), k = 0..k_max
///   last b - 1 columns     log|sigma_hat(z - a_j)| - log|sigma_hat(z - a_{b-1})|
///
/// The log columns are written as differences so that the coefficients of
/// log|sigma_hat| always sum to zero.
class BasisSpec {
 public:
  enum class SlotKind { Constant, ZetaHat, WpDerivative, LogDifference };
  struct Slot {
    SlotKind kind;
    std::size_t hole;  // unused for Constant
    int order;         // derivative order for WpDerivative, -1 for ZetaHat
    bool imag;         // Im part (otherwise Re); false for Constant and LogDifference
  };

  BasisSpec(Domain domain, int k_max);

  const Domain& domain() const { return domain_; }
  int k_max() const { return k_max_; }
  std::size_t holes() const { return domain_.hole_count(); }
  std::size_t size() const { return m_; }
  Precision precision() const { return domain_.precision(); }

  Slot slot(std::size_t i) const;
  std::size_t zeta_index(std::size_t hole, bool imag) const;
  std::size_t wp_index(std::size_t hole, int k, bool imag) const;
  /// Log column for hole j < b - 1.
  std::size_t log_index(std::size_t hole) const;
  std::string slot_name(std::size_t i) const;

 private:
  std::size_t per_hole() const { return 2 * (static_cast<std::size_t>(k_max_) + 2); }

  Domain domain_;
  int k_max_;
  std::size_t m_;
};

/// Closed-form basis size 1 + 2b(k_max + 2) + (b - 1).
std::size_t basis_size(std::size_t holes, int k_max);

struct CoefficientVector {
  std::vector<Real> values;
};

/// Coefficients addressed by name, including the implied c_b.
struct ExpandedCoefficients {
  Real constant;
  /// a[j][k + 1], b[j][k + 1] for k = -1..k_max (k = -1 is the zeta_hat term).
  std::vector<std::vector<Real>> a;
  std::vector<std::vector<Real>> b;
  /// One per hole, summing to zero; empty contributions for b = 1 are zero.
  std::vector<Real> c;

  const Real& re_coeff(std::size_t hole, int k) const { return a.at(hole).at(static_cast<std::size_t>(k + 1)); }
  const Real& im_coeff(std::size_t hole, int k) const { return b.at(hole).at(static_cast<std::size_t>(k + 1)); }
};

ExpandedCoefficients expand_coefficients(const BasisSpec& spec, const CoefficientVector& v);

/// Row evaluation of every basis function at once (one series pass per hole).
class BasisEvaluator {
 public:
  explicit BasisEvaluator(const BasisSpec& spec);

  const BasisSpec& spec() const { return spec_; }

  /// phi_i(z) for all i. Throws GeometryError for z inside a hole.
  std::vector<Real> values(const Complex& z) const;
  /// phi_i and d phi_i / dn at a boundary sample.
  void values_and_normals(const BoundarySample& sample, std::vector<Real>& values,
                          std::vector<Real>& normals) const;
  /// d phi_i / dn at z along the unit vector n.
  std::vector<Real> normal_derivatives(const Complex& z, const Complex& n) const;

 private:
  void evaluate(const Complex& z, const Complex* normal, std::vector<Real>* values,
                std::vector<Real>* normals) const;

  BasisSpec spec_;
  EllipticEvaluator elliptic_;
  Complex gamma2_;
  Real pi_over_area_;
};

Real basis_eval(const BasisSpec& spec, std::size_t i, const Complex& z);
Real basis_normal_deriv(const BasisSpec& spec, std::size_t i, const BoundarySample& sample);

/// sum_i v_i phi_i(z)
Real evaluate_expansion(const BasisEvaluator& basis, const CoefficientVector& v, const Complex& z);

}  // namespace hartorus
