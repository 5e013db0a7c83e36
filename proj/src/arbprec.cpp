#include "hartorus/arbprec.hpp"

#include <cctype>
#include <cmath>
#include <memory>

namespace hartorus {

namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;

void check(const Real& a, const Real& b) { require_same_precision(a, b); }

}  // namespace

Precision::Precision(long bits) : bits_(bits) {
  if (bits < kMinBits) {
    throw std::invalid_argument("precision must be at least " + std::to_string(kMinBits) +
                                " bits, got " + std::to_string(bits));
  }
  if (bits > static_cast<long>(MPFR_PREC_MAX)) {
    throw std::invalid_argument("precision exceeds MPFR_PREC_MAX");
  }
}

int Precision::decimal_digits() const noexcept {
  return static_cast<int>(std::ceil(static_cast<double>(bits_) * 0.30102999566398120));
}

void require_same_precision(const Real& a, const Real& b) {
  if (mpfr_get_prec(a.raw()) != mpfr_get_prec(b.raw())) {
    throw PrecisionMismatch("operands carry different precisions (" +
                            std::to_string(mpfr_get_prec(a.raw())) + " vs " +
                            std::to_string(mpfr_get_prec(b.raw())) + " bits)");
  }
}

Real::Real(Precision p) {
  mpfr_init2(v_, p.bits());
  mpfr_set_zero(v_, 1);
}

Real::Real(long value, Precision p) {
  mpfr_init2(v_, p.bits());
  mpfr_set_si(v_, value, kRnd);
}

Real::Real(unsigned long value, Precision p) {
  mpfr_init2(v_, p.bits());
  mpfr_set_ui(v_, value, kRnd);
}

Real::Real(double value, Precision p) {
  mpfr_init2(v_, p.bits());
  mpfr_set_d(v_, value, kRnd);
}

Real::Real(const Real& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, kRnd);
}

// A moved-from Real has a null limb pointer; it may only be destroyed or
// assigned to.
Real::Real(Real&& other) noexcept {
  *v_ = *other.v_;
  other.v_->_mpfr_d = nullptr;
}

Real& Real::operator=(const Real& other) {
  if (this == &other) return *this;
  if (v_->_mpfr_d == nullptr) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
  } else if (mpfr_get_prec(v_) != mpfr_get_prec(other.v_)) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
  }
  mpfr_set(v_, other.v_, kRnd);
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this == &other) return *this;
  if (v_->_mpfr_d != nullptr) mpfr_clear(v_);
  *v_ = *other.v_;
  other.v_->_mpfr_d = nullptr;
  return *this;
}

Real::~Real() {
  if (v_->_mpfr_d != nullptr) mpfr_clear(v_);
}

Real Real::parse(std::string_view text, Precision p) {
  std::size_t i = 0;
  const std::size_t n = text.size();
  if (n == 0) throw ParseError("empty decimal literal", 0);
  if (text[i] == '+' || text[i] == '-') ++i;
  std::size_t mantissa_digits = 0;
  while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
    ++i;
    ++mantissa_digits;
  }
  if (i < n && text[i] == '.') {
    ++i;
    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
      ++i;
      ++mantissa_digits;
    }
  }
  if (mantissa_digits == 0) throw ParseError("decimal literal has no digits", i);
  if (i < n && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    if (i < n && (text[i] == '+' || text[i] == '-')) ++i;
    std::size_t exp_digits = 0;
    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
      ++i;
      ++exp_digits;
    }
    if (exp_digits == 0) throw ParseError("exponent has no digits", i);
  }
  if (i != n) throw ParseError("unexpected character in decimal literal", i);

  Real r(p);
  const std::string owned(text);
  if (mpfr_set_str(r.v_, owned.c_str(), 10, kRnd) != 0) {
    throw ParseError("malformed decimal literal", 0);
  }
  return r;
}

Real Real::pi(Precision p) {
  Real r(p);
  mpfr_const_pi(r.v_, kRnd);
  return r;
}

Real Real::ln2(Precision p) {
  Real r(p);
  mpfr_const_log2(r.v_, kRnd);
  return r;
}

Real Real::exp2i(long e, Precision p) {
  Real r(1L, p);
  mpfr_mul_2si(r.v_, r.v_, e, kRnd);
  return r;
}

std::string Real::to_string(int digits) const {
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
  if (mpfr_zero_p(v_)) return "0";
  if (digits <= 0) digits = precision().decimal_digits();
  mpfr_exp_t e10 = 0;
  std::unique_ptr<char, void (*)(char*)> raw_digits(
      mpfr_get_str(nullptr, &e10, 10, static_cast<std::size_t>(digits), v_, kRnd), mpfr_free_str);
  std::string d(raw_digits.get());
  std::string sign;
  if (!d.empty() && d[0] == '-') {
    sign = "-";
    d.erase(0, 1);
  }
  while (d.size() > 1 && d.back() == '0') d.pop_back();
  std::string out = sign + d.substr(0, 1);
  if (d.size() > 1) out += "." + d.substr(1);
  const long exponent = static_cast<long>(e10) - 1;
  if (exponent != 0) out += "e" + std::to_string(exponent);
  return out;
}

long Real::exponent2() const {
  if (!mpfr_regular_p(v_)) return 0;
  return static_cast<long>(mpfr_get_exp(v_));
}

Real& Real::operator+=(const Real& o) {
  check(*this, o);
  mpfr_add(v_, v_, o.v_, kRnd);
  return *this;
}
Real& Real::operator-=(const Real& o) {
  check(*this, o);
  mpfr_sub(v_, v_, o.v_, kRnd);
  return *this;
}
Real& Real::operator*=(const Real& o) {
  check(*this, o);
  mpfr_mul(v_, v_, o.v_, kRnd);
  return *this;
}
Real& Real::operator/=(const Real& o) {
  check(*this, o);
  if (mpfr_zero_p(o.v_)) throw DomainError("division by zero");
  mpfr_div(v_, v_, o.v_, kRnd);
  return *this;
}
Real& Real::operator+=(long o) {
  mpfr_add_si(v_, v_, o, kRnd);
  return *this;
}
Real& Real::operator-=(long o) {
  mpfr_sub_si(v_, v_, o, kRnd);
  return *this;
}
Real& Real::operator*=(long o) {
  mpfr_mul_si(v_, v_, o, kRnd);
  return *this;
}
Real& Real::operator/=(long o) {
  if (o == 0) throw DomainError("division by zero");
  mpfr_div_si(v_, v_, o, kRnd);
  return *this;
}
Real& Real::operator*=(double o) {
  mpfr_mul_d(v_, v_, o, kRnd);
  return *this;
}

Real Real::operator-() const {
  Real r(*this);
  mpfr_neg(r.v_, r.v_, kRnd);
  return r;
}

Real operator-(long a, const Real& b) {
  Real r(b.precision());
  mpfr_si_sub(r.v_, a, b.v_, kRnd);
  return r;
}

Real operator/(long a, const Real& b) {
  if (mpfr_zero_p(b.v_)) throw DomainError("division by zero");
  Real r(b.precision());
  mpfr_si_div(r.v_, a, b.v_, kRnd);
  return r;
}

bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

bool Real::identical(const Real& o) const {
  if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) return false;
  if (mpfr_nan_p(v_) || mpfr_nan_p(o.v_)) return mpfr_nan_p(v_) && mpfr_nan_p(o.v_);
  return mpfr_equal_p(v_, o.v_) && mpfr_signbit(v_) == mpfr_signbit(o.v_);
}

Real abs(Real x) {
  mpfr_abs(x.raw(), x.raw(), kRnd);
  return x;
}
Real sqrt(Real x) {
  if (x.sign() < 0) throw DomainError("sqrt of negative real");
  mpfr_sqrt(x.raw(), x.raw(), kRnd);
  return x;
}
Real exp(Real x) {
  mpfr_exp(x.raw(), x.raw(), kRnd);
  return x;
}
Real log(Real x) {
  if (x.sign() <= 0) throw DomainError("log of non-positive real");
  mpfr_log(x.raw(), x.raw(), kRnd);
  return x;
}
Real log10(Real x) {
  if (x.sign() <= 0) throw DomainError("log10 of non-positive real");
  mpfr_log10(x.raw(), x.raw(), kRnd);
  return x;
}
Real sin(Real x) {
  mpfr_sin(x.raw(), x.raw(), kRnd);
  return x;
}
Real cos(Real x) {
  mpfr_cos(x.raw(), x.raw(), kRnd);
  return x;
}
Real atan2(const Real& y, const Real& x) {
  require_same_precision(y, x);
  Real r(y.precision());
  mpfr_atan2(r.raw(), y.raw(), x.raw(), kRnd);
  return r;
}
Real floor(Real x) {
  mpfr_floor(x.raw(), x.raw());
  return x;
}
Real round(Real x) {
  mpfr_round(x.raw(), x.raw());
  return x;
}
Real ldexp(Real x, long e) {
  mpfr_mul_2si(x.raw(), x.raw(), e, kRnd);
  return x;
}
Real square(const Real& x) {
  Real r(x.precision());
  mpfr_sqr(r.raw(), x.raw(), kRnd);
  return r;
}
Real max(const Real& a, const Real& b) { return a < b ? b : a; }
Real min(const Real& a, const Real& b) { return b < a ? b : a; }
long to_long(const Real& x) { return mpfr_get_si(x.raw(), MPFR_RNDN); }

Complex::Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {
  require_same_precision(re, im);
}

Complex::Complex(Real r) : re(std::move(r)), im(re.precision()) {}

Complex Complex::parse(std::string_view re_text, std::string_view im_text, Precision p) {
  return Complex(Real::parse(re_text, p), Real::parse(im_text, p));
}

Complex& Complex::operator+=(const Complex& o) {
  re += o.re;
  im += o.im;
  return *this;
}
Complex& Complex::operator-=(const Complex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}
Complex& Complex::operator*=(const Complex& o) {
  require_same_precision(re, o.re);
  Real t(re.precision());
  Real new_re(re.precision());
  mpfr_mul(new_re.raw(), re.raw(), o.re.raw(), kRnd);
  mpfr_mul(t.raw(), im.raw(), o.im.raw(), kRnd);
  mpfr_sub(new_re.raw(), new_re.raw(), t.raw(), kRnd);
  mpfr_mul(t.raw(), re.raw(), o.im.raw(), kRnd);
  mpfr_mul(im.raw(), im.raw(), o.re.raw(), kRnd);
  mpfr_add(im.raw(), im.raw(), t.raw(), kRnd);
  re = std::move(new_re);
  return *this;
}
Complex& Complex::operator/=(const Complex& o) {
  const Real den = norm(o);
  if (den.is_zero()) throw DomainError("complex division by zero");
  Complex num = *this * conj(o);
  re = num.re / den;
  im = num.im / den;
  return *this;
}
Complex& Complex::operator*=(const Real& o) {
  re *= o;
  im *= o;
  return *this;
}
Complex& Complex::operator/=(const Real& o) {
  re /= o;
  im /= o;
  return *this;
}
Complex& Complex::operator*=(long o) {
  re *= o;
  im *= o;
  return *this;
}
Complex& Complex::operator/=(long o) {
  re /= o;
  im /= o;
  return *this;
}
Complex& Complex::operator+=(const Real& o) {
  re += o;
  return *this;
}
Complex& Complex::operator-=(const Real& o) {
  re -= o;
  return *this;
}

Complex conj(Complex z) {
  mpfr_neg(z.im.raw(), z.im.raw(), kRnd);
  return z;
}

Real abs(const Complex& z) {
  Real r(z.precision());
  mpfr_hypot(r.raw(), z.re.raw(), z.im.raw(), kRnd);
  return r;
}

Real norm(const Complex& z) {
  Real r = square(z.re);
  Real t = square(z.im);
  r += t;
  return r;
}

Real arg(const Complex& z) { return atan2(z.im, z.re); }

Complex exp(const Complex& z) {
  const Precision p = z.precision();
  Real s(p), c(p), m(p);
  mpfr_sin_cos(s.raw(), c.raw(), z.im.raw(), kRnd);
  mpfr_exp(m.raw(), z.re.raw(), kRnd);
  return Complex(c * m, s * m);
}

Complex log(const Complex& z) {
  if (z.re.is_zero() && z.im.is_zero()) throw DomainError("log of zero");
  return Complex(log(abs(z)), arg(z));
}

Complex sqrt(const Complex& z) {
  const Precision p = z.precision();
  if (z.re.is_zero() && z.im.is_zero()) return Complex(p);
  const Real r = abs(z);
  if (z.re.sign() >= 0) {
    Real t = sqrt(ldexp(r + z.re, -1));
    Real i = z.im / ldexp(t, 1);
    return Complex(std::move(t), std::move(i));
  }
  Real t = sqrt(ldexp(r - z.re, -1));
  Real re_part = abs(z.im) / ldexp(t, 1);
  if (z.im.sign() < 0) t = -t;
  return Complex(std::move(re_part), std::move(t));
}

Complex sin(const Complex& z) {
  const Precision p = z.precision();
  Real s(p), c(p), sh(p), ch(p);
  mpfr_sin_cos(s.raw(), c.raw(), z.re.raw(), kRnd);
  mpfr_sinh_cosh(sh.raw(), ch.raw(), z.im.raw(), kRnd);
  return Complex(s * ch, c * sh);
}

Complex cos(const Complex& z) {
  const Precision p = z.precision();
  Real s(p), c(p), sh(p), ch(p);
  mpfr_sin_cos(s.raw(), c.raw(), z.re.raw(), kRnd);
  mpfr_sinh_cosh(sh.raw(), ch.raw(), z.im.raw(), kRnd);
  return Complex(c * ch, -(s * sh));
}

Complex polar(const Real& r, const Real& theta) {
  const Precision p = theta.precision();
  Real s(p), c(p);
  mpfr_sin_cos(s.raw(), c.raw(), theta.raw(), kRnd);
  return Complex(c * r, s * r);
}

Complex square(const Complex& z) { return z * z; }

Complex ldexp(Complex z, long e) {
  mpfr_mul_2si(z.re.raw(), z.re.raw(), e, kRnd);
  mpfr_mul_2si(z.im.raw(), z.im.raw(), e, kRnd);
  return z;
}

void mul_into(Complex& out, const Complex& a, const Complex& b, Real& scratch) {
  mpfr_mul(out.re.raw(), a.re.raw(), b.re.raw(), kRnd);
  mpfr_mul(scratch.raw(), a.im.raw(), b.im.raw(), kRnd);
  mpfr_sub(out.re.raw(), out.re.raw(), scratch.raw(), kRnd);
  mpfr_mul(out.im.raw(), a.re.raw(), b.im.raw(), kRnd);
  mpfr_mul(scratch.raw(), a.im.raw(), b.re.raw(), kRnd);
  mpfr_add(out.im.raw(), out.im.raw(), scratch.raw(), kRnd);
}

void add_mul_into(Complex& acc, const Complex& a, const Complex& b, Real& s1, Real& s2) {
  mpfr_mul(s1.raw(), a.re.raw(), b.re.raw(), kRnd);
  mpfr_mul(s2.raw(), a.im.raw(), b.im.raw(), kRnd);
  mpfr_sub(s1.raw(), s1.raw(), s2.raw(), kRnd);
  mpfr_add(acc.re.raw(), acc.re.raw(), s1.raw(), kRnd);
  mpfr_mul(s1.raw(), a.re.raw(), b.im.raw(), kRnd);
  mpfr_mul(s2.raw(), a.im.raw(), b.re.raw(), kRnd);
  mpfr_add(s1.raw(), s1.raw(), s2.raw(), kRnd);
  mpfr_add(acc.im.raw(), acc.im.raw(), s1.raw(), kRnd);
}

}  // namespace hartorus
