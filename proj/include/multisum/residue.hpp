// Univariate formal-series kernel: polynomials and truncated series over the
// rationals, residues at zero and at movable poles, and the geometric-series
// family sum k^s w^k used to evaluate every moment.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "multisum/exact.hpp"

namespace multisum {

/// Dense polynomial in w; no trailing zero coefficients.
class RationalPolynomial {
 public:
  static constexpr long kZeroDegree = -1;

  RationalPolynomial() = default;
  explicit RationalPolynomial(std::vector<Rational> coefficients);

  static RationalPolynomial monomial(const Rational& coefficient, std::size_t power);
  /// (1 + w)^exponent.
  static RationalPolynomial one_plus_w_power(std::size_t exponent);

  long degree() const { return static_cast<long>(coefficients_.size()) - 1; }
  bool is_zero() const { return coefficients_.empty(); }
  /// Zero past the degree.
  Rational coefficient(std::size_t power) const;
  std::span<const Rational> coefficients() const { return coefficients_; }

  Rational evaluate(const Rational& at) const;
  RationalPolynomial derivative() const;

  RationalPolynomial& operator+=(const RationalPolynomial& o);
  RationalPolynomial& operator-=(const RationalPolynomial& o);
  friend RationalPolynomial operator+(RationalPolynomial l, const RationalPolynomial& r) { return l += r; }
  friend RationalPolynomial operator-(RationalPolynomial l, const RationalPolynomial& r) { return l -= r; }
  friend RationalPolynomial operator*(const RationalPolynomial& l, const RationalPolynomial& r);
  friend RationalPolynomial operator*(const Rational& s, const RationalPolynomial& p);
  friend bool operator==(const RationalPolynomial&, const RationalPolynomial&) = default;

 private:
  void trim();
  std::vector<Rational> coefficients_;
};

/// Power series known through w^order. Arithmetic keeps the smaller order.
class TruncatedSeries {
 public:
  TruncatedSeries(std::vector<Rational> coefficients, std::size_t order);
  static TruncatedSeries from_polynomial(const RationalPolynomial& p, std::size_t order);

  std::size_t order() const { return order_; }
  /// Throws std::out_of_range beyond the order.
  const Rational& coefficient(std::size_t power) const;
  std::span<const Rational> coefficients() const { return coefficients_; }

  /// Throws std::domain_error when the constant term is zero.
  TruncatedSeries inverse() const;
  /// Multiplies by w^power, staying at the same order.
  TruncatedSeries shifted(std::size_t power) const;

  friend TruncatedSeries operator+(const TruncatedSeries& l, const TruncatedSeries& r);
  friend TruncatedSeries operator-(const TruncatedSeries& l, const TruncatedSeries& r);
  friend TruncatedSeries operator*(const TruncatedSeries& l, const TruncatedSeries& r);
  friend TruncatedSeries operator*(const Rational& s, const TruncatedSeries& t);
  friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

 private:
  std::vector<Rational> coefficients_;  // size order_ + 1
  std::size_t order_;
};

/// w^lowest_power * (c_0 + c_1 w + ...). Coefficients are known through
/// `known_through` (a power of w); std::nullopt means the tail is exactly
/// zero. Principal parts are always explicit.
class LaurentSeries {
 public:
  LaurentSeries(long lowest_power, std::vector<Rational> coefficients, std::optional<long> known_through = std::nullopt);
  /// numerator / w^power, exact.
  static LaurentSeries over_power_of_w(const RationalPolynomial& numerator, long power);
  /// series * w^shift, known through shift + order.
  static LaurentSeries from_series(const TruncatedSeries& series, long shift);

  long lowest_power() const { return lowest_; }
  std::optional<long> known_through() const { return known_through_; }
  /// Throws std::domain_error when the power lies beyond the known range.
  Rational coefficient(long power) const;

  friend LaurentSeries operator*(const LaurentSeries& l, const LaurentSeries& r);

 private:
  long lowest_;
  std::vector<Rational> coefficients_;
  std::optional<long> known_through_;
};

/// Coefficient of w^-1.
Rational residue_at_zero(const LaurentSeries& series);

/// C(n, k) as the residue of (1+w)^n / w^(k+1).
BigInt binomial_via_residue(std::int64_t n, std::int64_t k);

/// sum_k k^s w^k = sum_j g_j w^j / (1-w)^(j+1); returns g for s in 0..3.
/// `perturb` bumps the w^2/(1-w)^3 weight of s = 3 by one.
std::vector<Rational> geometric_coefficients(unsigned s, bool perturb = false);

/// The closed form of sum k^s w^k expanded through w^order by inverting (1-w).
TruncatedSeries geometric_family(unsigned s, std::size_t order, bool perturb = false);
/// sum_{k <= order} k^s w^k computed term by term.
TruncatedSeries power_sum_series(unsigned s, std::size_t order);

/// Residue of f(w) / (w - pole)^pole_order for polynomial f:
/// D^(pole_order-1) f (pole) / (pole_order-1)!.
Rational derivative_residue(const RationalPolynomial& f, const Rational& pole, unsigned pole_order);

/// (residue computed by derivatives, the product-rule closed form) for
/// (order-1)! (1+w)^(a-c) w^c / (w - pole)^order, order in 2..4.
std::pair<Rational, Rational> resquad_family_check(std::int64_t a, std::int64_t c, const Rational& pole,
                                                   unsigned order);

/// sum_k C(a-c, k-c) k^s through residues at the pole w = 1. Zero for c > a.
Rational inner_sum_via_residue(std::int64_t a, std::int64_t c, unsigned s, bool perturb = false);
/// The same sum, term by term.
Rational inner_sum_direct(std::int64_t a, std::int64_t c, unsigned s);
/// 2^(a-c), 2^(a-c-1)(a+c), 2^(a-c-2)[(a+c)^2+a-c], 2^(a-c-3)(a+c)[(a+c)^2+3(a-c)].
Rational inner_sum_closed_form(std::int64_t a, std::int64_t c, unsigned s);

struct SelftestOptions {
  std::size_t order = 32;
  std::uint64_t seed = 20180101;
  bool perturb_geometric = false;
};

struct SuiteResult {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::vector<std::string> failure_samples;  // first few
  bool passed() const { return failures == 0 && checks > 0; }
};

struct SelftestReport {
  std::vector<SuiteResult> suites;
  bool passed() const;
};

/// Runs every residue-engine property at the given truncation order.
/// Throws std::invalid_argument for order < 8.
SelftestReport residue_selftest(const SelftestOptions& options);

}  // namespace multisum
