// Exact scalars: arbitrary-precision integers, reduced rationals and
// Gaussian rationals, plus the binomial conventions used everywhere else.
#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace multisum {

using BigInt = mpz_class;

/// Rational number kept in lowest terms with a positive denominator.
/// Equality is structural on that canonical form.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(const BigInt& value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  /// Throws std::domain_error for a zero denominator.
  Rational(const BigInt& numerator, const BigInt& denominator);

  /// Parses "p/q" or "p" (optional leading '-').
  static Rational parse(std::string_view text);

  BigInt numerator() const { return value_.get_num(); }
  BigInt denominator() const { return value_.get_den(); }
  bool is_zero() const { return sgn(value_) == 0; }
  bool is_integer() const { return value_.get_den() == 1; }
  int sign() const { return sgn(value_); }

  /// "p/q", or "p" when the denominator is 1.
  std::string to_string() const;

  Rational inverse() const;
  /// Integer power; negative exponents require a nonzero base.
  Rational pow(long exponent) const;

  Rational operator-() const {
    Rational r;
    mpq_neg(r.value_.get_mpq_t(), value_.get_mpq_t());
    return r;
  }
  Rational& operator+=(const Rational& o) {
    mpq_add(value_.get_mpq_t(), value_.get_mpq_t(), o.value_.get_mpq_t());
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    mpq_sub(value_.get_mpq_t(), value_.get_mpq_t(), o.value_.get_mpq_t());
    return *this;
  }
  Rational& operator*=(const Rational& o) {
    mpq_mul(value_.get_mpq_t(), value_.get_mpq_t(), o.value_.get_mpq_t());
    return *this;
  }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational l, const Rational& r) { return l += r; }
  friend Rational operator-(Rational l, const Rational& r) { return l -= r; }
  friend Rational operator*(Rational l, const Rational& r) { return l *= r; }
  friend Rational operator/(Rational l, const Rational& r) { return l /= r; }

  friend bool operator==(const Rational& l, const Rational& r) {
    return mpq_equal(l.value_.get_mpq_t(), r.value_.get_mpq_t()) != 0;
  }
  friend std::strong_ordering operator<=>(const Rational& l, const Rational& r) {
    const int c = mpq_cmp(l.value_.get_mpq_t(), r.value_.get_mpq_t());
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  const mpq_class& raw() const { return value_; }

 private:
  mpq_class value_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// Complex number with rational real and imaginary parts.
struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() = default;
  GaussianRational(long value) : re(value) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(const BigInt& value) : re(value) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(Rational real) : re(std::move(real)) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(Rational real, Rational imag) : re(std::move(real)), im(std::move(imag)) {}

  static GaussianRational i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_real() const { return im.is_zero(); }

  GaussianRational operator-() const { return {-re, -im}; }
  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    if (!o.im.is_zero()) im += o.im;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re -= o.re;
    if (!o.im.is_zero()) im -= o.im;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator*=(const Rational& o) {
    re *= o;
    if (!im.is_zero()) im *= o;
    return *this;
  }
  /// Throws std::domain_error when dividing by zero.
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational l, const GaussianRational& r) { return l += r; }
  friend GaussianRational operator-(GaussianRational l, const GaussianRational& r) { return l -= r; }
  friend GaussianRational operator*(GaussianRational l, const GaussianRational& r) { return l *= r; }
  friend GaussianRational operator*(GaussianRational l, const Rational& r) { return l *= r; }
  friend GaussianRational operator*(const Rational& l, GaussianRational r) { return r *= l; }
  friend GaussianRational operator/(GaussianRational l, const GaussianRational& r) { return l /= r; }
  friend bool operator==(const GaussianRational& l, const GaussianRational& r) = default;

  GaussianRational inverse() const;
  GaussianRational pow(unsigned exponent) const;
};

std::ostream& operator<<(std::ostream& os, const GaussianRational& z);

inline GaussianRational conj(const GaussianRational& z) { return {z.re, -z.im}; }

/// re(z)^2 + im(z)^2.
inline Rational abs_squared(const GaussianRational& z) {
  Rational r = z.re * z.re;
  if (!z.im.is_zero()) r += z.im * z.im;
  return r;
}

/// C(t, k) by the multiplicative formula. Zero outside 0 <= k <= t.
/// Negative t is rejected with std::domain_error: callers drop
/// zero-coefficient terms before asking for a binomial.
BigInt binomial(const BigInt& t, const BigInt& k);
BigInt binomial(std::int64_t t, std::int64_t k);

/// t (t-1) ... (t-s+1); empty product for s = 0.
BigInt falling_factorial(const BigInt& t, unsigned s);

/// 2^exponent as an exact rational, any sign of exponent.
Rational power_of_two(long exponent);

}  // namespace multisum
