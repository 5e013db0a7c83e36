#pragma once

#include "hartorus/arbprec.hpp"
#include "hartorus/basis.hpp"
#include "hartorus/geometry.hpp"
#include "hartorus/linalg.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hartorus {

/// How s(sigma) is evaluated from the collocation matrices.
///   Gram:     D(sigma) = (A - sigma B)^t (A - sigma B) from precomputed Gram
///             blocks; cheap per sigma.
///   Factored: works on a QR-compressed A - sigma B and never squares it;
///             costlier per sigma, better conditioned.
enum class PencilRoute { Gram, Factored };

struct SteklovConfig {
  int k_max = 60;
  std::size_t interior_R = 50;
  std::uint64_t seed = 1;
  double oversample = 3.0;
  Real sigma_lo;
  Real sigma_hi;
  Real step;
  Real tol;
  bool column_scaling = true;
  PencilRoute route = PencilRoute::Gram;

  /// Defaults: scan [0, 25] with step 0.05, tolerance 1e-40.
  explicit SteklovConfig(Precision p);
  void validate() const;
};

/// Collocation matrices of one Steklov solve.
///   A(l, i) = d phi_i / dn (p_l),  B(l, i) = phi_i(p_l),  C(r, i) = phi_i(q_r)
/// Columns may carry a common positive scaling: the true coefficient of
/// column i is scale[i] times the coefficient of the scaled system.
struct SteklovSystem {
  DenseMatrix a;
  DenseMatrix b;
  DenseMatrix c;
  Vector scale;
};

SteklovSystem assemble_steklov(const BasisEvaluator& basis, const std::vector<BoundarySample>& samples,
                               const std::vector<Complex>& interior);
/// Divides every column of A, B and C by the column's max |B|.
void scale_columns(SteklovSystem& system);

/// Values of s at one sigma, with minimizers when requested.
struct SValue {
  Real sigma;
  Vector values;              // s_1 <= s_2 ...
  std::vector<Vector> vectors;
};

/// Precomputed pencil: s(sigma) = min_x |(A - sigma B) x|^2 / |C x|^2.
class SteklovPencil {
 public:
  SteklovPencil(const SteklovSystem& system, PencilRoute route);

  PencilRoute route() const { return route_; }
  std::size_t interior_rank() const { return reduction_.rank(); }

  /// Retries at sigma +- 2^{-bits/4} if the kernel block is singular.
  SValue evaluate(const Real& sigma, std::size_t count, bool want_vectors) const;
  Real s(const Real& sigma) const { return evaluate(sigma, 1, false).values.front(); }

 private:
  SValue evaluate_once(const Real& sigma, std::size_t count, bool want_vectors) const;

  PencilRoute route_;
  std::size_t m_;
  PencilReduction reduction_;
  // Gram route, in Q coordinates.
  std::optional<DenseMatrix> gaa_;
  std::optional<DenseMatrix> gab_sym_;  // G_AB + G_AB^t
  std::optional<DenseMatrix> gbb_;
  // Factored route: [R_A R_B] from QR of [A Q, B Q].
  std::optional<DenseMatrix> ra_;
  std::optional<DenseMatrix> rb_;
};

struct SteklovCandidate {
  Real sigma;
  Real s_value;
  CoefficientVector coefficients;  // boundary L2-normalized
  Real residual_l2;
  Real bracket_lo;
  Real bracket_hi;
  /// Second smallest s at sigma, used to detect multiplicity.
  Real s_second;
  bool multiple = false;
  /// Which eigenvector of a multiple candidate this is (0 or 1).
  int branch = 0;
};

struct ScanPoint {
  Real sigma;
  Real s;
};

struct SteklovResult {
  std::vector<SteklovCandidate> candidates;
  std::vector<ScanPoint> scan;
  std::size_t samples = 0;
  std::size_t samples_check = 0;
  std::size_t basis_size = 0;
  std::size_t interior_rank = 0;
  std::string diagnostic;
};

/// Grid scan of s over [sigma_lo, sigma_hi] (plus one guard point either
/// side), golden-section refinement of every strict local minimum, and
/// multiplicity detection on the minimizers.
struct ScanOutput {
  std::vector<ScanPoint> scan;
  /// Refined minima: (sigma, bracket_lo, bracket_hi).
  struct Minimum {
    Real sigma;
    Real lo;
    Real hi;
  };
  std::vector<Minimum> minima;
};
ScanOutput scan_and_refine(const SteklovPencil& pencil, const SteklovConfig& cfg);

/// ||d_n u - sigma u||_{L2(boundary)} by periodic trapezoid over `samples`.
Real aposteriori_residual(const BasisEvaluator& basis, const Real& sigma, const CoefficientVector& v,
                          const std::vector<BoundarySample>& samples);
/// Trapezoid L2 norm of u over the boundary samples.
Real boundary_l2_norm(const BasisEvaluator& basis, const CoefficientVector& v,
                      const std::vector<BoundarySample>& samples);

/// Full pipeline on a domain.
SteklovResult solve_steklov(const Domain& domain, const SteklovConfig& cfg);

/// Every other sample of each hole with doubled weights (the nested coarse set).
std::vector<BoundarySample> coarsen_samples(const std::vector<BoundarySample>& fine,
                                            const std::vector<std::size_t>& fine_counts);

}  // namespace hartorus
