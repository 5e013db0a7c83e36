#pragma once

// Arbitrary-precision real and complex scalars on top of MPFR.
//
// Every value carries the binary precision it was created with. Binary
// operations require both operands to share that precision; mixing is a
// programming error and throws PrecisionMismatch. Integer and double
// operands are exact and may be mixed freely.

#include <mpfr.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace hartorus {

class PrecisionMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::invalid_argument(what + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Raised for log(0), division by zero and similar out-of-domain arguments.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Working precision in bits. Threaded explicitly through every constructor.
class Precision {
 public:
  static constexpr long kMinBits = 64;
  static constexpr long kDefaultBits = 1024;

  explicit Precision(long bits = kDefaultBits);

  long bits() const noexcept { return bits_; }
  /// ceil(bits * log10 2): digit count used for lossless decimal I/O.
  int decimal_digits() const noexcept;

  friend bool operator==(Precision a, Precision b) noexcept { return a.bits_ == b.bits_; }
  friend bool operator!=(Precision a, Precision b) noexcept { return a.bits_ != b.bits_; }

 private:
  long bits_;
};

class Real {
 public:
  explicit Real(Precision p);
  Real(long value, Precision p);
  Real(int value, Precision p) : Real(static_cast<long>(value), p) {}
  Real(unsigned long value, Precision p);
  Real(double value, Precision p);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  /// Decimal literal: [+-]digits[.digits][(e|E)[+-]digits], correctly rounded.
  static Real parse(std::string_view text, Precision p);
  static Real pi(Precision p);
  static Real ln2(Precision p);
  /// 2^e exactly.
  static Real exp2i(long e, Precision p);

  Precision precision() const { return Precision(static_cast<long>(mpfr_get_prec(v_))); }

  mpfr_ptr raw() noexcept { return v_; }
  mpfr_srcptr raw() const noexcept { return v_; }

  /// Scientific notation with `digits` significant digits; default is the
  /// precision's lossless digit count.
  std::string to_string(int digits = 0) const;
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long exponent2() const;  // floor(log2|x|)+1 for x != 0

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);
  Real& operator+=(long o);
  Real& operator-=(long o);
  Real& operator*=(long o);
  Real& operator/=(long o);
  Real& operator*=(double o);

  Real operator-() const;

  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }
  friend Real operator+(Real a, long b) { return a += b; }
  friend Real operator-(Real a, long b) { return a -= b; }
  friend Real operator*(Real a, long b) { return a *= b; }
  friend Real operator/(Real a, long b) { return a /= b; }
  friend Real operator*(long a, Real b) { return b *= a; }
  friend Real operator+(long a, Real b) { return b += a; }
  friend Real operator-(long a, const Real& b);
  friend Real operator/(long a, const Real& b);

  friend bool operator<(const Real& a, const Real& b);
  friend bool operator>(const Real& a, const Real& b) { return b < a; }
  friend bool operator<=(const Real& a, const Real& b) { return !(b < a); }
  friend bool operator>=(const Real& a, const Real& b) { return !(a < b); }
  friend bool operator==(const Real& a, const Real& b);
  friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }
  friend bool operator<(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) < 0; }
  friend bool operator>(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) > 0; }

  /// Bitwise identical (same precision, same value, same sign of zero).
  bool identical(const Real& o) const;

 private:
  mpfr_t v_;
};

void require_same_precision(const Real& a, const Real& b);

Real abs(Real x);
Real sqrt(Real x);
Real exp(Real x);
Real log(Real x);
Real sin(Real x);
Real cos(Real x);
Real atan2(const Real& y, const Real& x);
Real floor(Real x);
Real round(Real x);  // ties away from zero
Real ldexp(Real x, long e);
Real square(const Real& x);
Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);
Real log10(Real x);
long to_long(const Real& x);  // rounds to nearest

/// Pair of Reals sharing one precision.
struct Complex {
  Real re;
  Real im;

  explicit Complex(Precision p) : re(p), im(p) {}
  Complex(Real r, Real i);
  explicit Complex(Real r);
  Complex(long r, long i, Precision p) : re(r, p), im(i, p) {}

  static Complex parse(std::string_view re_text, std::string_view im_text, Precision p);
  static Complex i_unit(Precision p) { return Complex(0, 1, p); }

  Precision precision() const { return re.precision(); }

  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);
  Complex& operator*=(const Real& o);
  Complex& operator/=(const Real& o);
  Complex& operator*=(long o);
  Complex& operator/=(long o);
  Complex& operator+=(const Real& o);
  Complex& operator-=(const Real& o);

  Complex operator-() const { return Complex(-re, -im); }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend Complex operator*(Complex a, const Real& b) { return a *= b; }
  friend Complex operator*(const Real& b, Complex a) { return a *= b; }
  friend Complex operator/(Complex a, const Real& b) { return a /= b; }
  friend Complex operator*(Complex a, long b) { return a *= b; }
  friend Complex operator*(long b, Complex a) { return a *= b; }
  friend Complex operator/(Complex a, long b) { return a /= b; }
  friend Complex operator+(Complex a, const Real& b) { return a += b; }
  friend Complex operator-(Complex a, const Real& b) { return a -= b; }

  bool identical(const Complex& o) const { return re.identical(o.re) && im.identical(o.im); }
};

Complex conj(Complex z);
Real abs(const Complex& z);
Real norm(const Complex& z);  // |z|^2
Real arg(const Complex& z);
Complex exp(const Complex& z);
Complex log(const Complex& z);  // principal branch
Complex sqrt(const Complex& z);  // principal branch
Complex sin(const Complex& z);
Complex cos(const Complex& z);
Complex polar(const Real& r, const Real& theta);
Complex square(const Complex& z);
Complex ldexp(Complex z, long e);

// Allocation-free kernels for hot loops. `out` must not alias the inputs.
void mul_into(Complex& out, const Complex& a, const Complex& b, Real& scratch);
void add_mul_into(Complex& acc, const Complex& a, const Complex& b, Real& s1, Real& s2);

}  // namespace hartorus
