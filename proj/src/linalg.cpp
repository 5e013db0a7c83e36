#include "hartorus/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace hartorus {

namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;

// acc += sum_i a[i] b[i]
void fma_dot(Real& acc, const Real* a, const Real* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) mpfr_fma(acc.raw(), a[i].raw(), b[i].raw(), acc.raw(), kRnd);
}

// y += alpha x
void axpy(Real* y, const Real& alpha, const Real* x, std::size_t n) {
  if (alpha.is_zero()) return;
  for (std::size_t i = 0; i < n; ++i) mpfr_fma(y[i].raw(), alpha.raw(), x[i].raw(), y[i].raw(), kRnd);
}

// Householder vector for x: v (length n, v[0] != 0 unless x = 0), beta and
// the resulting leading entry alpha, so that (I - beta v v^t) x = alpha e1.
void householder(const Real* x, std::size_t n, Vector& v, Real& beta, Real& alpha) {
  const Precision p = x[0].precision();
  Real sigma2(p);
  fma_dot(sigma2, x, x, n);
  v.assign(x, x + n);
  if (sigma2.is_zero()) {
    beta = Real(p);
    alpha = Real(p);
    return;
  }
  const Real sigma = sqrt(sigma2);
  const bool neg = x[0].sign() < 0;
  if (neg) {
    v[0] -= sigma;
    alpha = sigma;
  } else {
    v[0] += sigma;
    alpha = -sigma;
  }
  beta = Real(1L, p) / (sigma * (sigma + abs(x[0])));
}

Real threshold_half(Precision p) { return Real::exp2i(-p.bits() / 2, p); }

// Forward substitution on the rows of B: returns L^{-1} B (B is n x k).
DenseMatrix lower_solve_rows(const DenseMatrix& l, const DenseMatrix& b) {
  const std::size_t n = l.rows();
  DenseMatrix w = b;
  const Precision p = b.precision();
  Real neg(p);
  for (std::size_t i = 0; i < n; ++i) {
    Real* wi = w.row(i);
    for (std::size_t k = 0; k < i; ++k) {
      mpfr_neg(neg.raw(), l(i, k).raw(), kRnd);
      axpy(wi, neg, w.row(k), w.cols());
    }
    for (std::size_t j = 0; j < w.cols(); ++j) mpfr_div(wi[j].raw(), wi[j].raw(), l(i, i).raw(), kRnd);
  }
  return w;
}

// Cholesky; returns the failing pivot index or SIZE_MAX on success.
std::size_t cholesky_into(const DenseMatrix& a, DenseMatrix& l) {
  const std::size_t n = a.rows();
  const Precision p = a.precision();
  const Real tiny = Real::exp2i(-(p.bits() - 8), p);
  Real acc(p);
  for (std::size_t j = 0; j < n; ++j) {
    acc = a(j, j);
    mpfr_neg(acc.raw(), acc.raw(), kRnd);
    fma_dot(acc, l.row(j), l.row(j), j);
    mpfr_neg(acc.raw(), acc.raw(), kRnd);
    if (acc.sign() <= 0 || acc <= tiny * abs(a(j, j))) return j;
    l(j, j) = sqrt(acc);
    for (std::size_t i = j + 1; i < n; ++i) {
      acc = a(i, j);
      mpfr_neg(acc.raw(), acc.raw(), kRnd);
      fma_dot(acc, l.row(i), l.row(j), j);
      mpfr_neg(acc.raw(), acc.raw(), kRnd);
      mpfr_div(l(i, j).raw(), acc.raw(), l(j, j).raw(), kRnd);
    }
  }
  return SIZE_MAX;
}

void symmetrize(DenseMatrix& h) {
  for (std::size_t i = 0; i < h.rows(); ++i) {
    for (std::size_t j = i + 1; j < h.cols(); ++j) {
      Real avg = ldexp(h(i, j) + h(j, i), -1);
      h(j, i) = avg;
      h(i, j) = std::move(avg);
    }
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, Precision p)
    : rows_(rows), cols_(cols), prec_(p), data_(rows * cols, Real(p)) {}

DenseMatrix DenseMatrix::identity(std::size_t n, Precision p) {
  DenseMatrix out(n, n, p);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = Real(1L, p);
  return out;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix out(cols_, rows_, prec_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

DenseMatrix DenseMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("matrix block out of range");
  DenseMatrix out(nr, nc, prec_);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
  return out;
}

Vector DenseMatrix::column(std::size_t j) const {
  Vector out;
  out.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out.push_back((*this)(i, j));
  return out;
}

Vector DenseMatrix::apply(const Vector& x) const {
  if (x.size() != cols_) throw std::invalid_argument("matrix-vector size mismatch");
  Vector out(rows_, Real(prec_));
  for (std::size_t i = 0; i < rows_; ++i) fma_dot(out[i], row(i), x.data(), cols_);
  return out;
}

Vector DenseMatrix::apply_transpose(const Vector& y) const {
  if (y.size() != rows_) throw std::invalid_argument("matrix-vector size mismatch");
  Vector out(cols_, Real(prec_));
  for (std::size_t i = 0; i < rows_; ++i) axpy(out.data(), y[i], row(i), cols_);
  return out;
}

Real DenseMatrix::max_abs() const {
  Real out(prec_);
  for (const Real& v : data_) {
    if (mpfr_cmpabs(v.raw(), out.raw()) > 0) mpfr_abs(out.raw(), v.raw(), kRnd);
  }
  return out;
}

Real DenseMatrix::frobenius_norm() const {
  Real acc(prec_);
  fma_dot(acc, data_.data(), data_.data(), data_.size());
  return sqrt(acc);
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product size mismatch");
  DenseMatrix out(a.rows(), b.cols(), a.precision());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) axpy(out.row(i), a(i, k), b.row(k), b.cols());
  return out;
}

DenseMatrix cross_gram(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("cross_gram row mismatch");
  DenseMatrix out(a.cols(), b.cols(), a.precision());
  for (std::size_t l = 0; l < a.rows(); ++l) {
    const Real* ar = a.row(l);
    for (std::size_t i = 0; i < a.cols(); ++i) axpy(out.row(i), ar[i], b.row(l), b.cols());
  }
  return out;
}

DenseMatrix gram(const DenseMatrix& a) {
  const std::size_t n = a.cols();
  DenseMatrix out(n, n, a.precision());
  for (std::size_t l = 0; l < a.rows(); ++l) {
    const Real* ar = a.row(l);
    for (std::size_t i = 0; i < n; ++i) axpy(out.row(i) + i, ar[i], ar + i, n - i);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) out(i, j) = out(j, i);
  return out;
}

Real dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot size mismatch");
  Real acc(a.empty() ? Precision() : a[0].precision());
  fma_dot(acc, a.data(), b.data(), a.size());
  return acc;
}

Real norm2(const Vector& a) { return sqrt(dot(a, a)); }

// ---------------------------------------------------------------------------

HouseholderQR::HouseholderQR(const DenseMatrix& m, bool pivot, std::size_t max_steps)
    : rows_(m.rows()), cols_(m.cols()), prec_(m.precision()), perm_(m.cols()) {
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  cols_data_.resize(cols_);
  for (std::size_t j = 0; j < cols_; ++j) cols_data_[j] = m.column(j);

  const std::size_t steps = std::min({rows_, cols_, max_steps});
  Vector norms, ref;
  const Real recompute = Real::exp2i(-prec_.bits() / 2, prec_);
  if (pivot) {
    for (std::size_t j = 0; j < cols_; ++j) {
      Real acc(prec_);
      fma_dot(acc, cols_data_[j].data(), cols_data_[j].data(), rows_);
      norms.push_back(acc);
    }
    ref = norms;
  }

  Real beta(prec_), alpha(prec_), w(prec_);
  Vector v;
  for (std::size_t k = 0; k < steps; ++k) {
    if (pivot) {
      std::size_t best = k;
      for (std::size_t j = k + 1; j < cols_; ++j)
        if (norms[j] > norms[best]) best = j;
      if (best != k) {
        std::swap(cols_data_[k], cols_data_[best]);
        std::swap(perm_[k], perm_[best]);
        std::swap(norms[k], norms[best]);
        std::swap(ref[k], ref[best]);
      }
    }
    const std::size_t n = rows_ - k;
    householder(cols_data_[k].data() + k, n, v, beta, alpha);
    for (std::size_t j = k + 1; j < cols_; ++j) {
      Real* col = cols_data_[j].data() + k;
      w = Real(prec_);
      fma_dot(w, v.data(), col, n);
      mpfr_mul(w.raw(), w.raw(), beta.raw(), kRnd);
      mpfr_neg(w.raw(), w.raw(), kRnd);
      axpy(col, w, v.data(), n);
      if (pivot) {
        mpfr_fms(norms[j].raw(), col[0].raw(), col[0].raw(), norms[j].raw(), kRnd);
        mpfr_neg(norms[j].raw(), norms[j].raw(), kRnd);
        if (norms[j] < ref[j] * recompute) {
          Real acc(prec_);
          fma_dot(acc, col + 1, col + 1, n - 1);
          norms[j] = acc;
          ref[j] = std::move(acc);
        }
      }
    }
    cols_data_[k][k] = alpha;
    for (std::size_t i = k + 1; i < rows_; ++i) cols_data_[k][i] = Real(prec_);
    rdiag_abs_.push_back(abs(alpha));
    betas_.push_back(beta);
    v_.push_back(v);
  }
}

std::size_t HouseholderQR::rank(const Real& relative_threshold) const {
  if (rdiag_abs_.empty() || rdiag_abs_[0].is_zero()) return 0;
  const Real cut = rdiag_abs_[0] * relative_threshold;
  std::size_t r = 0;
  while (r < rdiag_abs_.size() && rdiag_abs_[r] > cut) ++r;
  return r;
}

DenseMatrix HouseholderQR::r(std::size_t nr) const {
  if (nr > rows_) throw std::out_of_range("R row count out of range");
  DenseMatrix out(nr, cols_, prec_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < nr && (i <= j || i >= steps()); ++i) out(i, j) = cols_data_[j][i];
  return out;
}

void HouseholderQR::apply_qt(Vector& x, std::size_t count) const {
  if (x.size() != rows_) throw std::invalid_argument("apply_qt size mismatch");
  count = std::min(count, steps());
  Real w(prec_);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t n = rows_ - k;
    w = Real(prec_);
    fma_dot(w, v_[k].data(), x.data() + k, n);
    mpfr_mul(w.raw(), w.raw(), betas_[k].raw(), kRnd);
    mpfr_neg(w.raw(), w.raw(), kRnd);
    axpy(x.data() + k, w, v_[k].data(), n);
  }
}

void HouseholderQR::apply_q(Vector& x, std::size_t count) const {
  if (x.size() != rows_) throw std::invalid_argument("apply_q size mismatch");
  count = std::min(count, steps());
  Real w(prec_);
  for (std::size_t k = count; k-- > 0;) {
    const std::size_t n = rows_ - k;
    w = Real(prec_);
    fma_dot(w, v_[k].data(), x.data() + k, n);
    mpfr_mul(w.raw(), w.raw(), betas_[k].raw(), kRnd);
    mpfr_neg(w.raw(), w.raw(), kRnd);
    axpy(x.data() + k, w, v_[k].data(), n);
  }
}

void HouseholderQR::apply_qt_left(DenseMatrix& x, std::size_t count) const {
  if (x.rows() != rows_) throw std::invalid_argument("apply_qt_left size mismatch");
  count = std::min(count, steps());
  const std::size_t nc = x.cols();
  Vector w(nc, Real(prec_));
  Real coef(prec_);
  for (std::size_t k = 0; k < count; ++k) {
    for (auto& e : w) mpfr_set_zero(e.raw(), 1);
    const Vector& v = v_[k];
    for (std::size_t i = 0; i < v.size(); ++i) axpy(w.data(), v[i], x.row(k + i), nc);
    for (std::size_t i = 0; i < v.size(); ++i) {
      mpfr_mul(coef.raw(), v[i].raw(), betas_[k].raw(), kRnd);
      mpfr_neg(coef.raw(), coef.raw(), kRnd);
      axpy(x.row(k + i), coef, w.data(), nc);
    }
  }
}

void HouseholderQR::apply_q_right(DenseMatrix& x, std::size_t count) const {
  if (x.cols() != rows_) throw std::invalid_argument("apply_q_right size mismatch");
  count = std::min(count, steps());
  Real w(prec_);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    Real* row = x.row(r);
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t n = rows_ - k;
      w = Real(prec_);
      fma_dot(w, v_[k].data(), row + k, n);
      mpfr_mul(w.raw(), w.raw(), betas_[k].raw(), kRnd);
      mpfr_neg(w.raw(), w.raw(), kRnd);
      axpy(row + k, w, v_[k].data(), n);
    }
  }
}

// ---------------------------------------------------------------------------

Vector least_squares(const DenseMatrix& m, const Vector& rhs, LeastSquaresMethod method) {
  const std::size_t nc = m.cols();
  if (m.rows() < nc) throw std::invalid_argument("least_squares requires rows >= cols");
  if (rhs.size() != m.rows()) throw std::invalid_argument("least_squares rhs size mismatch");
  const Precision p = m.precision();

  if (method == LeastSquaresMethod::NormalEquations) {
    const DenseMatrix g = gram(m);
    DenseMatrix l(nc, nc, p);
    const std::size_t fail = cholesky_into(g, l);
    if (fail != SIZE_MAX) {
      throw RankDeficiencyError("normal equations are not positive definite at column " +
                                    std::to_string(fail),
                                fail);
    }
    return solve_lower_transpose(l, solve_lower(l, m.apply_transpose(rhs)));
  }

  const HouseholderQR qr(m, true);
  const std::size_t r = qr.rank(threshold_half(p));
  if (r < nc) {
    const std::size_t col = qr.permutation()[r];
    throw RankDeficiencyError("matrix has numerical rank " + std::to_string(r) + " < " +
                                  std::to_string(nc) + "; column " + std::to_string(col) +
                                  " is dependent",
                              col);
  }
  Vector y = rhs;
  qr.apply_qt(y);
  const DenseMatrix rr = qr.r(nc);
  Vector z(nc, Real(p));
  for (std::size_t k = nc; k-- > 0;) {
    Real acc = y[k];
    mpfr_neg(acc.raw(), acc.raw(), kRnd);
    fma_dot(acc, rr.row(k) + k + 1, z.data() + k + 1, nc - k - 1);
    mpfr_neg(acc.raw(), acc.raw(), kRnd);
    z[k] = acc / rr(k, k);
  }
  Vector out(nc, Real(p));
  for (std::size_t k = 0; k < nc; ++k) out[qr.permutation()[k]] = std::move(z[k]);
  return out;
}

DenseMatrix cholesky(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("cholesky requires a square matrix");
  DenseMatrix l(a.rows(), a.cols(), a.precision());
  const std::size_t fail = cholesky_into(a, l);
  if (fail != SIZE_MAX) {
    throw NotPositiveDefiniteError("matrix is not numerically positive definite (pivot " +
                                   std::to_string(fail) + ")");
  }
  return l;
}

Vector solve_lower(const DenseMatrix& l, Vector b) {
  const std::size_t n = l.rows();
  if (b.size() != n) throw std::invalid_argument("solve_lower size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    mpfr_neg(b[i].raw(), b[i].raw(), kRnd);
    fma_dot(b[i], l.row(i), b.data(), i);
    mpfr_neg(b[i].raw(), b[i].raw(), kRnd);
    mpfr_div(b[i].raw(), b[i].raw(), l(i, i).raw(), kRnd);
  }
  return b;
}

Vector solve_lower_transpose(const DenseMatrix& l, Vector b) {
  const std::size_t n = l.rows();
  if (b.size() != n) throw std::invalid_argument("solve_lower_transpose size mismatch");
  const Precision p = l.precision();
  Real neg(p);
  for (std::size_t i = n; i-- > 0;) {
    mpfr_div(b[i].raw(), b[i].raw(), l(i, i).raw(), kRnd);
    mpfr_neg(neg.raw(), b[i].raw(), kRnd);
    axpy(b.data(), neg, l.row(i), i);
  }
  return b;
}

// ---------------------------------------------------------------------------

SvdResult jacobi_svd(const DenseMatrix& m, bool want_v) {
  const Precision p = m.precision();
  const std::size_t n = m.cols();
  if (m.rows() < n) {
    if (want_v) throw std::invalid_argument("jacobi_svd: right vectors need rows >= cols");
    return jacobi_svd(m.transpose(), false);
  }
  // Reduce to the n x n triangle first; M P = Q R shares singular values with R.
  const HouseholderQR qr(m, true);
  const DenseMatrix r = qr.r(n);
  std::vector<Vector> a(n);
  for (std::size_t j = 0; j < n; ++j) a[j] = r.column(j);
  std::vector<Vector> v;
  if (want_v) {
    v.assign(n, Vector(n, Real(p)));
    for (std::size_t j = 0; j < n; ++j) v[j][j] = Real(1L, p);
  }

  const Real eps = Real::exp2i(-(p.bits() - 8), p);
  Real alpha(p), beta(p), gamma(p), zeta(p), t(p), c(p), s(p), tmp(p), tmp2(p);
  for (int sweep = 0; sweep < 120; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        alpha = Real(p);
        beta = Real(p);
        gamma = Real(p);
        fma_dot(alpha, a[i].data(), a[i].data(), n);
        fma_dot(beta, a[j].data(), a[j].data(), n);
        fma_dot(gamma, a[i].data(), a[j].data(), n);
        if (gamma.is_zero()) continue;
        if (abs(gamma) <= eps * sqrt(alpha * beta)) continue;
        rotated = true;
        zeta = (beta - alpha) / ldexp(gamma, 1);
        t = Real(1L, p) / (abs(zeta) + sqrt(1L + square(zeta)));
        if (zeta.sign() < 0) t = -t;
        c = Real(1L, p) / sqrt(1L + square(t));
        s = c * t;
        auto rotate = [&](Vector& x, Vector& y) {
          for (std::size_t k = 0; k < x.size(); ++k) {
            // x' = c x - s y ; y' = s x + c y
            mpfr_mul(tmp.raw(), c.raw(), x[k].raw(), kRnd);
            mpfr_mul(tmp2.raw(), s.raw(), y[k].raw(), kRnd);
            mpfr_sub(tmp.raw(), tmp.raw(), tmp2.raw(), kRnd);
            mpfr_mul(tmp2.raw(), s.raw(), x[k].raw(), kRnd);
            mpfr_fma(y[k].raw(), c.raw(), y[k].raw(), tmp2.raw(), kRnd);
            mpfr_swap(x[k].raw(), tmp.raw());
          }
        };
        rotate(a[i], a[j]);
        if (want_v) rotate(v[i], v[j]);
      }
    }
    if (!rotated) break;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Vector sv;
  for (std::size_t j = 0; j < n; ++j) {
    Real acc(p);
    fma_dot(acc, a[j].data(), a[j].data(), n);
    sv.push_back(sqrt(acc));
  }
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sv[x] > sv[y]; });
  SvdResult out{{}, DenseMatrix(want_v ? n : 0, want_v ? n : 0, p)};
  for (std::size_t k = 0; k < n; ++k) {
    out.singular_values.push_back(sv[order[k]]);
    if (want_v) {
      // Right vectors of M are P times those of R.
      const Vector& col = v[order[k]];
      for (std::size_t i = 0; i < n; ++i) out.v(qr.permutation()[i], k) = col[i];
    }
  }
  return out;
}

ConditionReport condition_report(const DenseMatrix& m) {
  SvdResult svd = jacobi_svd(m, false);
  const Precision p = m.precision();
  Real cond(p);
  if (svd.singular_values.back().is_zero()) {
    mpfr_set_inf(cond.raw(), 1);
  } else {
    cond = svd.singular_values.front() / svd.singular_values.back();
  }
  return {std::move(cond), std::move(svd.singular_values)};
}

SymmetricEigen jacobi_eigen(const DenseMatrix& input) {
  const std::size_t n = input.rows();
  if (input.cols() != n) throw std::invalid_argument("jacobi_eigen requires a square matrix");
  const Precision p = input.precision();
  DenseMatrix a = input;
  symmetrize(a);
  DenseMatrix v = DenseMatrix::identity(n, p);
  const Real eps = Real::exp2i(-(p.bits() - 8), p);
  const Real tiny = Real::exp2i(-2 * p.bits(), p) * a.frobenius_norm();
  Real theta(p), t(p), c(p), s(p), tau(p), x(p), y(p);

  auto rot = [&](Real& g, Real& h) {
    // g' = g - s (h + g tau) ; h' = h + s (g - h tau)
    x = g;
    y = h;
    g = x - s * (y + x * tau);
    h = y + s * (x - y * tau);
  };
  for (int sweep = 0; sweep < 120; ++sweep) {
    bool rotated = false;
    for (std::size_t pi = 0; pi + 1 < n; ++pi) {
      for (std::size_t q = pi + 1; q < n; ++q) {
        const Real& apq = a(pi, q);
        if (apq.is_zero()) continue;
        if (abs(apq) <= tiny || abs(apq) <= eps * sqrt(abs(a(pi, pi) * a(q, q)))) {
          continue;
        }
        rotated = true;
        theta = (a(q, q) - a(pi, pi)) / ldexp(apq, 1);
        t = Real(1L, p) / (abs(theta) + sqrt(1L + square(theta)));
        if (theta.sign() < 0) t = -t;
        c = Real(1L, p) / sqrt(1L + square(t));
        s = t * c;
        tau = s / (1L + c);
        const Real h = t * apq;
        a(pi, pi) -= h;
        a(q, q) += h;
        a(pi, q) = Real(p);
        a(q, pi) = Real(p);
        for (std::size_t r = 0; r < n; ++r) {
          if (r == pi || r == q) continue;
          rot(a(r, pi), a(r, q));
          a(pi, r) = a(r, pi);
          a(q, r) = a(r, q);
        }
        for (std::size_t r = 0; r < n; ++r) rot(v(r, pi), v(r, q));
      }
    }
    if (!rotated) break;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymmetricEigen out{{}, DenseMatrix(n, n, p)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values.push_back(a(order[k], order[k]));
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

Vector smallest_eigenvalues(const DenseMatrix& input, std::size_t count) {
  const std::size_t n = input.rows();
  if (input.cols() != n) throw std::invalid_argument("smallest_eigenvalues requires a square matrix");
  if (count == 0 || count > n) throw std::invalid_argument("eigenvalue count out of range");
  const Precision p = input.precision();
  DenseMatrix a = input;
  symmetrize(a);

  // Householder tridiagonalization; only d and e are kept.
  Vector d(n, Real(p)), e(n > 1 ? n - 1 : 0, Real(p));
  Vector v, pv, w;
  Real beta(p), alpha(p), k(p), coef(p);
  for (std::size_t j = 0; j + 2 < n; ++j) {
    const std::size_t m = n - j - 1;
    Vector x;
    x.reserve(m);
    for (std::size_t i = j + 1; i < n; ++i) x.push_back(a(i, j));
    householder(x.data(), m, v, beta, alpha);
    e[j] = alpha;
    if (beta.is_zero()) continue;
    pv.assign(m, Real(p));
    for (std::size_t i = 0; i < m; ++i) {
      fma_dot(pv[i], a.row(j + 1 + i) + j + 1, v.data(), m);
      pv[i] *= beta;
    }
    k = Real(p);
    fma_dot(k, pv.data(), v.data(), m);
    k = ldexp(k * beta, -1);
    w = pv;
    mpfr_neg(coef.raw(), k.raw(), kRnd);
    axpy(w.data(), coef, v.data(), m);
    for (std::size_t i = 0; i < m; ++i) {
      Real* row = a.row(j + 1 + i) + j + 1;
      mpfr_neg(coef.raw(), v[i].raw(), kRnd);
      axpy(row, coef, w.data(), m);
      mpfr_neg(coef.raw(), w[i].raw(), kRnd);
      axpy(row, coef, v.data(), m);
    }
  }
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
  if (n >= 2) e[n - 2] = a(n - 1, n - 2);

  Vector e2;
  for (const Real& x : e) e2.push_back(square(x));
  Real lo = d[0], hi = d[0];
  for (std::size_t i = 0; i < n; ++i) {
    Real rad(p);
    if (i > 0) rad += abs(e[i - 1]);
    if (i + 1 < n) rad += abs(e[i]);
    lo = min(lo, d[i] - rad);
    hi = max(hi, d[i] + rad);
  }
  const Real scale = max(abs(lo), abs(hi));
  const Real pivmin = Real::exp2i(-2 * p.bits(), p) * (scale.is_zero() ? Real(1L, p) : scale);
  const Real rel = Real::exp2i(-p.bits(), p);
  const Real abs_tol = Real::exp2i(-2 * p.bits(), p) * scale;

  Real q(p), tq(p);
  auto count_below = [&](const Real& x) {
    std::size_t cnt = 0;
    mpfr_sub(q.raw(), d[0].raw(), x.raw(), kRnd);
    for (std::size_t i = 0;; ++i) {
      if (mpfr_cmpabs(q.raw(), pivmin.raw()) < 0) {
        q = -pivmin;
      }
      if (q.sign() < 0) ++cnt;
      if (i + 1 == n) break;
      mpfr_div(tq.raw(), e2[i].raw(), q.raw(), kRnd);
      mpfr_sub(q.raw(), d[i + 1].raw(), x.raw(), kRnd);
      mpfr_sub(q.raw(), q.raw(), tq.raw(), kRnd);
    }
    return cnt;
  };

  Vector out;
  const long max_iter = 4 * p.bits() + 64;
  for (std::size_t j = 0; j < count; ++j) {
    Real a_lo = lo - abs_tol, a_hi = hi + abs_tol;
    if (!out.empty()) a_lo = max(a_lo, out.back() - abs_tol);
    for (long it = 0; it < max_iter; ++it) {
      const Real width = a_hi - a_lo;
      if (width <= abs_tol || width <= rel * max(abs(a_lo), abs(a_hi))) break;
      Real mid = ldexp(a_lo + a_hi, -1);
      if (count_below(mid) > j) {
        a_hi = std::move(mid);
      } else {
        a_lo = std::move(mid);
      }
    }
    out.push_back(ldexp(a_lo + a_hi, -1));
  }
  return out;
}

// ---------------------------------------------------------------------------

PencilReduction::PencilReduction(const DenseMatrix& c)
    : m_(c.cols()),
      r_(0),
      qr_(c.transpose(), true),
      l_(0, 0, c.precision()) {
  const Precision p = c.precision();
  r_ = qr_.rank(threshold_half(p));
  if (r_ == 0) throw DegenerateError("interior matrix has rank zero");
  // G restricted to the range block is R_top R_top^t; L comes from the
  // triangle of R_top^t instead of a Cholesky of the product.
  const DenseMatrix rtop_t = qr_.r(r_).transpose();
  const HouseholderQR lq(rtop_t, false);
  l_ = lq.r(r_).transpose();
  for (std::size_t j = 0; j < r_; ++j) {
    if (l_(j, j).sign() < 0) {
      for (std::size_t i = j; i < r_; ++i) l_(i, j) = -l_(i, j);
    }
  }
}

DenseMatrix PencilReduction::rotate(const DenseMatrix& x) const {
  DenseMatrix out = x;
  qr_.apply_qt_left(out, r_);
  qr_.apply_q_right(out, r_);
  return out;
}

DenseMatrix PencilReduction::rotate_columns(const DenseMatrix& x) const {
  DenseMatrix out = x;
  qr_.apply_q_right(out, r_);
  return out;
}

Vector PencilReduction::lift(Vector y) const {
  qr_.apply_q(y, r_);
  return y;
}

GenPair PencilReduction::solve_rotated(const DenseMatrix& dq, std::size_t count,
                                       bool want_vectors) const {
  if (dq.rows() != m_ || dq.cols() != m_) throw std::invalid_argument("pencil size mismatch");
  count = std::min(count, r_);
  const Precision p = dq.precision();
  const std::size_t n2 = m_ - r_;
  DenseMatrix dt = dq.block(0, 0, r_, r_);
  DenseMatrix l22(n2, n2, p);
  DenseMatrix w(n2, r_, p);
  if (n2 > 0) {
    const std::size_t fail = cholesky_into(dq.block(r_, r_, n2, n2), l22);
    if (fail != SIZE_MAX) {
      throw ReductionError("kernel block of the pencil is numerically singular (pivot " +
                           std::to_string(fail) + ")");
    }
    w = lower_solve_rows(l22, dq.block(r_, 0, n2, r_));
    const DenseMatrix wtw = gram(w);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < r_; ++j) mpfr_sub(dt(i, j).raw(), dt(i, j).raw(), wtw(i, j).raw(), kRnd);
  }
  symmetrize(dt);
  // H = L^{-1} Dt L^{-t}
  const DenseMatrix x = lower_solve_rows(l_, dt);
  DenseMatrix h = lower_solve_rows(l_, x.transpose());
  symmetrize(h);

  GenPair out;
  if (!want_vectors) {
    out.values = smallest_eigenvalues(h, count);
    return out;
  }
  const SymmetricEigen eig = jacobi_eigen(h);
  for (std::size_t k = 0; k < count; ++k) {
    out.values.push_back(eig.values[k]);
    Vector y1 = solve_lower_transpose(l_, eig.vectors.column(k));
    Vector y(m_, Real(p));
    for (std::size_t i = 0; i < r_; ++i) y[i] = y1[i];
    if (n2 > 0) {
      Vector y2 = solve_lower_transpose(l22, w.apply(y1));
      for (std::size_t i = 0; i < n2; ++i) y[r_ + i] = -y2[i];
    }
    out.vectors.push_back(lift(std::move(y)));
  }
  return out;
}

GenPair PencilReduction::solve_factored(const DenseMatrix& nq, std::size_t count,
                                        bool want_vectors) const {
  if (nq.cols() != m_ || nq.rows() < m_) throw std::invalid_argument("factored pencil size mismatch");
  count = std::min(count, r_);
  const Precision p = nq.precision();
  const std::size_t n2 = m_ - r_;
  const std::size_t rows = nq.rows();
  // Kernel block first, so that its QR projects it out of the range block.
  DenseMatrix reordered(rows, m_, p);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < n2; ++j) reordered(i, j) = nq(i, r_ + j);
    for (std::size_t j = 0; j < r_; ++j) reordered(i, n2 + j) = nq(i, j);
  }
  const HouseholderQR qr(reordered, false, n2);
  if (n2 > 0) {
    const Real cut = qr.diagonal_abs(0) * Real::exp2i(-(p.bits() - 8), p);
    for (std::size_t k = 0; k < n2; ++k) {
      if (!(qr.diagonal_abs(k) > cut)) {
        throw ReductionError("kernel block of the pencil is numerically singular");
      }
    }
  }
  const DenseMatrix full = qr.r(rows);
  DenseMatrix t(rows - n2, r_, p);
  for (std::size_t i = 0; i < rows - n2; ++i)
    for (std::size_t j = 0; j < r_; ++j) t(i, j) = full(n2 + i, n2 + j);
  // K = T L^{-t}
  const DenseMatrix k = lower_solve_rows(l_, t.transpose()).transpose();
  const SvdResult svd = jacobi_svd(k, want_vectors);

  GenPair out;
  const std::size_t nsv = svd.singular_values.size();
  for (std::size_t c = 0; c < count; ++c) {
    out.values.push_back(square(svd.singular_values[nsv - 1 - c]));
    if (!want_vectors) continue;
    Vector y1 = solve_lower_transpose(l_, svd.v.column(nsv - 1 - c));
    Vector y(m_, Real(p));
    for (std::size_t i = 0; i < r_; ++i) y[i] = y1[i];
    if (n2 > 0) {
      // R22 y2 = -R12 y1, R22 upper triangular.
      Vector rhs(n2, Real(p));
      for (std::size_t i = 0; i < n2; ++i) fma_dot(rhs[i], full.row(i) + n2, y1.data(), r_);
      Vector y2(n2, Real(p));
      for (std::size_t i = n2; i-- > 0;) {
        Real acc = rhs[i];
        fma_dot(acc, full.row(i) + i + 1, y2.data() + i + 1, n2 - i - 1);
        y2[i] = -(acc / full(i, i));
      }
      for (std::size_t i = 0; i < n2; ++i) y[r_ + i] = y2[i];
    }
    out.vectors.push_back(lift(std::move(y)));
  }
  return out;
}

GenPair smallest_genpair(const DenseMatrix& d, const DenseMatrix& c) {
  if (d.rows() != d.cols() || d.cols() != c.cols()) {
    throw std::invalid_argument("smallest_genpair size mismatch");
  }
  const PencilReduction red(c);
  return red.solve_rotated(red.rotate(d), std::min<std::size_t>(2, red.rank()), true);
}

}  // namespace hartorus
