#pragma once

#include "hartorus/arbprec.hpp"

#include <stdexcept>
#include <vector>

namespace hartorus {

using Vector = std::vector<Real>;

/// Row-major dense matrix of Reals sharing one precision.
class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols, Precision p);

  static DenseMatrix identity(std::size_t n, Precision p);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Precision precision() const { return prec_; }

  Real& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Real& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  Real* row(std::size_t i) { return data_.data() + i * cols_; }
  const Real* row(std::size_t i) const { return data_.data() + i * cols_; }

  DenseMatrix transpose() const;
  DenseMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  Vector column(std::size_t j) const;

  Vector apply(const Vector& x) const;            // M x
  Vector apply_transpose(const Vector& y) const;  // M^t y

  Real max_abs() const;
  Real frobenius_norm() const;

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);

 private:
  std::size_t rows_;
  std::size_t cols_;
  Precision prec_;
  std::vector<Real> data_;
};

/// a^t b
DenseMatrix cross_gram(const DenseMatrix& a, const DenseMatrix& b);
/// a^t a
DenseMatrix gram(const DenseMatrix& a);

Real dot(const Vector& a, const Vector& b);
Real norm2(const Vector& a);

/// Least-squares matrix whose numerical rank is below its column count.
class RankDeficiencyError : public std::runtime_error {
 public:
  RankDeficiencyError(const std::string& what, std::size_t column)
      : std::runtime_error(what), column_(column) {}
  /// Index (in the caller's column order) of the first dependent column.
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

/// Cholesky factorization of a matrix that is not numerically positive definite.
class NotPositiveDefiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Kernel block of a pencil reduction is singular.
class ReductionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pencil with a zero right-hand matrix.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Householder QR, M P = Q R, optionally with column pivoting.
class HouseholderQR {
 public:
  /// Factors M (rows >= 1). With `max_steps` the factorization stops after
  /// that many reflectors.
  HouseholderQR(const DenseMatrix& m, bool pivot, std::size_t max_steps = SIZE_MAX);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t steps() const { return betas_.size(); }
  /// perm[k] = original column placed at position k.
  const std::vector<std::size_t>& permutation() const { return perm_; }

  /// |R_kk|, k < steps().
  const Real& diagonal_abs(std::size_t k) const { return rdiag_abs_[k]; }
  /// Number of leading R_kk with |R_kk| > threshold * |R_00|.
  std::size_t rank(const Real& relative_threshold) const;

  /// Rows [0, nr) of R, in pivoted column order.
  DenseMatrix r(std::size_t nr) const;

  /// x <- Q^t x or Q x using the first `count` reflectors (default all).
  void apply_qt(Vector& x, std::size_t count = SIZE_MAX) const;
  void apply_q(Vector& x, std::size_t count = SIZE_MAX) const;
  /// X <- Q^t X (on the left) and X <- X Q (on the right).
  void apply_qt_left(DenseMatrix& x, std::size_t count = SIZE_MAX) const;
  void apply_q_right(DenseMatrix& x, std::size_t count = SIZE_MAX) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  Precision prec_;
  std::vector<Vector> cols_data_;  // column-major working copy: R above, v below
  std::vector<Vector> v_;          // reflector vectors, v_[k] has length rows - k
  Vector betas_;
  Vector rdiag_abs_;
  std::vector<std::size_t> perm_;
};

enum class LeastSquaresMethod { Householder, NormalEquations };

/// Minimizer of ||M v - rhs||_2. Rank decisions use |R_kk| > 2^{-bits/2} |R_00|.
Vector least_squares(const DenseMatrix& m, const Vector& rhs,
                     LeastSquaresMethod method = LeastSquaresMethod::Householder);

/// Lower-triangular L with A = L L^t.
DenseMatrix cholesky(const DenseMatrix& a);
/// Solve L x = b or L^t x = b for lower-triangular L.
Vector solve_lower(const DenseMatrix& l, Vector b);
Vector solve_lower_transpose(const DenseMatrix& l, Vector b);

/// Singular values (descending) by one-sided Jacobi, optionally with the
/// right singular vectors as columns of v.
struct SvdResult {
  Vector singular_values;
  DenseMatrix v;
};
SvdResult jacobi_svd(const DenseMatrix& m, bool want_v);

struct ConditionReport {
  Real cond2;
  Vector singular_values;  // descending
};
ConditionReport condition_report(const DenseMatrix& m);

/// Eigenvalues ascending, eigenvectors as columns.
struct SymmetricEigen {
  Vector values;
  DenseMatrix vectors;
};
SymmetricEigen jacobi_eigen(const DenseMatrix& a);

/// The `count` smallest eigenvalues of symmetric A (ascending), by Householder
/// tridiagonalization and Sturm bisection.
Vector smallest_eigenvalues(const DenseMatrix& a, std::size_t count);

/// Smallest eigenvalues s_1 <= s_2 <= ... of D x = s G x restricted to
/// G x != 0, with eigenvectors when requested.
struct GenPair {
  Vector values;
  std::vector<Vector> vectors;
  const Real& s() const { return values.front(); }
  const Vector& x() const { return vectors.front(); }
};

/// Splits R^m into the row space of C (rank r) and its kernel with an
/// orthogonal Q = [Q1 Q2] from pivoted Householder QR of C^t. In these
/// coordinates G = C^t C becomes diag(L L^t, 0).
///
/// For D in Q coordinates, minimizing the Rayleigh quotient over the kernel
/// block leaves the Schur complement D11 - D12 D22^{-1} D21, and the reduced
/// r x r pencil is symmetric-definite.
class PencilReduction {
 public:
  explicit PencilReduction(const DenseMatrix& c);

  std::size_t size() const { return m_; }
  std::size_t rank() const { return r_; }
  const HouseholderQR& rotation() const { return qr_; }
  const DenseMatrix& l() const { return l_; }

  /// Q^t X Q for symmetric X.
  DenseMatrix rotate(const DenseMatrix& x) const;
  /// X Q (columns mapped into Q coordinates).
  DenseMatrix rotate_columns(const DenseMatrix& x) const;
  /// x = Q y.
  Vector lift(Vector y) const;

  /// Pencil (Q^t D Q, diag(L L^t, 0)); `count` smallest eigenvalues.
  GenPair solve_rotated(const DenseMatrix& dq, std::size_t count, bool want_vectors) const;
  /// Same pencil with D = N^t N given by the factor N = M Q (rows >= m);
  /// never forms N^t N.
  GenPair solve_factored(const DenseMatrix& nq, std::size_t count, bool want_vectors) const;

 private:
  std::size_t m_;
  std::size_t r_;
  HouseholderQR qr_;
  DenseMatrix l_;  // r x r lower, L L^t = R_top R_top^t
};

/// Smallest generalized eigenpair of D x = s C^t C x over C x != 0.
GenPair smallest_genpair(const DenseMatrix& d, const DenseMatrix& c);

}  // namespace hartorus
