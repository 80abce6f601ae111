#include "multisum/exact.hpp"

#include <algorithm>
#include <stdexcept>

namespace multisum {

namespace {

BigInt parse_integer(std::string_view text, std::string_view whole) {
  std::string digits(text);
  if (digits.empty()) throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
  std::size_t start = (digits[0] == '-' || digits[0] == '+') ? 1 : 0;
  if (start == digits.size() ||
      !std::all_of(digits.begin() + static_cast<long>(start), digits.end(),
                   [](char ch) { return ch >= '0' && ch <= '9'; })) {
    throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
  }
  if (digits[0] == '+') digits.erase(0, 1);
  return BigInt(digits, 10);
}

}  // namespace

Rational::Rational(const BigInt& numerator, const BigInt& denominator) {
  if (denominator == 0) throw std::domain_error("rational with zero denominator");
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, text));
  const BigInt denominator = parse_integer(text.substr(slash + 1), text);
  if (denominator == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return Rational(parse_integer(text.substr(0, slash), text), denominator);
}

std::string Rational::to_string() const {
  if (is_integer()) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational Rational::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  Rational r;
  mpq_inv(r.value_.get_mpq_t(), value_.get_mpq_t());
  return r;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  mpq_div(value_.get_mpq_t(), value_.get_mpq_t(), o.value_.get_mpq_t());
  return *this;
}

Rational Rational::pow(long exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  Rational r;
  mpz_pow_ui(r.value_.get_num_mpz_t(), value_.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(r.value_.get_den_mpz_t(), value_.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  return r;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (o.im.is_zero()) return *this *= o.re;
  if (im.is_zero()) {
    Rational real = re;
    re = real * o.re;
    im = real * o.im;
    return *this;
  }
  Rational real = re * o.re - im * o.im;
  im = re * o.im + im * o.re;
  re = std::move(real);
  return *this;
}

GaussianRational GaussianRational::inverse() const {
  const Rational norm = abs_squared(*this);
  if (norm.is_zero()) throw std::domain_error("inverse of zero");
  return {re / norm, -im / norm};
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) { return *this *= o.inverse(); }

GaussianRational GaussianRational::pow(unsigned exponent) const {
  GaussianRational result(1);
  for (unsigned e = 0; e < exponent; ++e) result *= *this;
  return result;
}

std::ostream& operator<<(std::ostream& os, const GaussianRational& z) {
  if (z.im.is_zero()) return os << z.re;
  return os << z.re << (z.im.sign() < 0 ? " - " : " + ") << (z.im.sign() < 0 ? -z.im : z.im) << "i";
}

BigInt binomial(const BigInt& t, const BigInt& k) {
  if (t < 0) throw std::domain_error("binomial with negative top " + t.get_str());
  if (k < 0 || k > t) return 0;
  const BigInt lower = std::min(BigInt(k), BigInt(t - k));
  BigInt result = 1;
  BigInt factor = t - lower;
  for (BigInt i = 1; i <= lower; ++i) {
    ++factor;
    result *= factor;
    mpz_divexact(result.get_mpz_t(), result.get_mpz_t(), i.get_mpz_t());
  }
  return result;
}

BigInt binomial(std::int64_t t, std::int64_t k) {
  if (t < 0) throw std::domain_error("binomial with negative top " + std::to_string(t));
  if (k < 0 || k > t) return 0;
  const std::int64_t lower = std::min(k, t - k);
  BigInt result = 1;
  for (std::int64_t i = 1; i <= lower; ++i) {
    result *= static_cast<long>(t - lower + i);
    mpz_divexact_ui(result.get_mpz_t(), result.get_mpz_t(), static_cast<unsigned long>(i));
  }
  return result;
}

BigInt falling_factorial(const BigInt& t, unsigned s) {
  BigInt result = 1;
  for (unsigned j = 0; j < s; ++j) result *= t - j;
  return result;
}

Rational power_of_two(long exponent) {
  BigInt magnitude;
  mpz_ui_pow_ui(magnitude.get_mpz_t(), 2, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  return exponent < 0 ? Rational(BigInt(1), magnitude) : Rational(magnitude);
}

}  // namespace multisum
