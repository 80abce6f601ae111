#include "multisum/residue.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "multisum/instance.hpp"

namespace multisum {

// ---------------------------------------------------------------------------
// RationalPolynomial

RationalPolynomial::RationalPolynomial(std::vector<Rational> coefficients) : coefficients_(std::move(coefficients)) {
  trim();
}

void RationalPolynomial::trim() {
  while (!coefficients_.empty() && coefficients_.back().is_zero()) coefficients_.pop_back();
}

RationalPolynomial RationalPolynomial::monomial(const Rational& coefficient, std::size_t power) {
  std::vector<Rational> coeffs(power + 1);
  coeffs[power] = coefficient;
  return RationalPolynomial(std::move(coeffs));
}

RationalPolynomial RationalPolynomial::one_plus_w_power(std::size_t exponent) {
  std::vector<Rational> coeffs(exponent + 1);
  BigInt entry = 1;
  for (std::size_t k = 0; k <= exponent; ++k) {
    coeffs[k] = Rational(entry);
    entry *= static_cast<unsigned long>(exponent - k);
    mpz_divexact_ui(entry.get_mpz_t(), entry.get_mpz_t(), static_cast<unsigned long>(k + 1));
  }
  return RationalPolynomial(std::move(coeffs));
}

Rational RationalPolynomial::coefficient(std::size_t power) const {
  return power < coefficients_.size() ? coefficients_[power] : Rational();
}

Rational RationalPolynomial::evaluate(const Rational& at) const {
  Rational result;
  for (std::size_t i = coefficients_.size(); i-- > 0;) {
    result *= at;
    result += coefficients_[i];
  }
  return result;
}

RationalPolynomial RationalPolynomial::derivative() const {
  if (coefficients_.size() <= 1) return {};
  std::vector<Rational> out(coefficients_.size() - 1);
  for (std::size_t i = 1; i < coefficients_.size(); ++i) {
    out[i - 1] = coefficients_[i] * Rational(static_cast<long>(i));
  }
  return RationalPolynomial(std::move(out));
}

RationalPolynomial& RationalPolynomial::operator+=(const RationalPolynomial& o) {
  if (o.coefficients_.size() > coefficients_.size()) coefficients_.resize(o.coefficients_.size());
  for (std::size_t i = 0; i < o.coefficients_.size(); ++i) coefficients_[i] += o.coefficients_[i];
  trim();
  return *this;
}

RationalPolynomial& RationalPolynomial::operator-=(const RationalPolynomial& o) {
  if (o.coefficients_.size() > coefficients_.size()) coefficients_.resize(o.coefficients_.size());
  for (std::size_t i = 0; i < o.coefficients_.size(); ++i) coefficients_[i] -= o.coefficients_[i];
  trim();
  return *this;
}

RationalPolynomial operator*(const RationalPolynomial& l, const RationalPolynomial& r) {
  if (l.is_zero() || r.is_zero()) return {};
  std::vector<Rational> out(l.coefficients_.size() + r.coefficients_.size() - 1);
  for (std::size_t i = 0; i < l.coefficients_.size(); ++i) {
    for (std::size_t j = 0; j < r.coefficients_.size(); ++j) out[i + j] += l.coefficients_[i] * r.coefficients_[j];
  }
  return RationalPolynomial(std::move(out));
}

RationalPolynomial operator*(const Rational& s, const RationalPolynomial& p) {
  std::vector<Rational> out(p.coefficients_.begin(), p.coefficients_.end());
  for (auto& v : out) v *= s;
  return RationalPolynomial(std::move(out));
}

// ---------------------------------------------------------------------------
// TruncatedSeries

TruncatedSeries::TruncatedSeries(std::vector<Rational> coefficients, std::size_t order)
    : coefficients_(std::move(coefficients)), order_(order) {
  coefficients_.resize(order_ + 1);
}

TruncatedSeries TruncatedSeries::from_polynomial(const RationalPolynomial& p, std::size_t order) {
  std::vector<Rational> coeffs(order + 1);
  for (std::size_t k = 0; k <= order; ++k) coeffs[k] = p.coefficient(k);
  return {std::move(coeffs), order};
}

const Rational& TruncatedSeries::coefficient(std::size_t power) const {
  if (power > order_) {
    throw std::out_of_range("coefficient of w^" + std::to_string(power) + " beyond truncation order " +
                            std::to_string(order_));
  }
  return coefficients_[power];
}

TruncatedSeries TruncatedSeries::inverse() const {
  if (coefficients_[0].is_zero()) throw std::domain_error("series with zero constant term has no inverse");
  const Rational lead_inverse = coefficients_[0].inverse();
  std::vector<Rational> out(order_ + 1);
  out[0] = lead_inverse;
  for (std::size_t k = 1; k <= order_; ++k) {
    Rational acc;
    for (std::size_t j = 1; j <= k; ++j) acc += coefficients_[j] * out[k - j];
    out[k] = -acc * lead_inverse;
  }
  return {std::move(out), order_};
}

TruncatedSeries TruncatedSeries::shifted(std::size_t power) const {
  std::vector<Rational> out(order_ + 1);
  for (std::size_t k = power; k <= order_; ++k) out[k] = coefficients_[k - power];
  return {std::move(out), order_};
}

TruncatedSeries operator+(const TruncatedSeries& l, const TruncatedSeries& r) {
  const std::size_t order = std::min(l.order_, r.order_);
  std::vector<Rational> out(order + 1);
  for (std::size_t k = 0; k <= order; ++k) out[k] = l.coefficients_[k] + r.coefficients_[k];
  return {std::move(out), order};
}

TruncatedSeries operator-(const TruncatedSeries& l, const TruncatedSeries& r) {
  return l + Rational(-1) * r;
}

TruncatedSeries operator*(const TruncatedSeries& l, const TruncatedSeries& r) {
  const std::size_t order = std::min(l.order_, r.order_);
  std::vector<Rational> out(order + 1);
  for (std::size_t i = 0; i <= order; ++i) {
    if (l.coefficients_[i].is_zero()) continue;
    for (std::size_t j = 0; i + j <= order; ++j) out[i + j] += l.coefficients_[i] * r.coefficients_[j];
  }
  return {std::move(out), order};
}

TruncatedSeries operator*(const Rational& s, const TruncatedSeries& t) {
  std::vector<Rational> out = t.coefficients_;
  for (auto& v : out) v *= s;
  return {std::move(out), t.order_};
}

// ---------------------------------------------------------------------------
// LaurentSeries

LaurentSeries::LaurentSeries(long lowest_power, std::vector<Rational> coefficients, std::optional<long> known_through)
    : lowest_(lowest_power), coefficients_(std::move(coefficients)), known_through_(known_through) {
  if (known_through_) coefficients_.resize(static_cast<std::size_t>(std::max(0L, *known_through_ - lowest_ + 1)));
}

LaurentSeries LaurentSeries::over_power_of_w(const RationalPolynomial& numerator, long power) {
  return {-power, std::vector<Rational>(numerator.coefficients().begin(), numerator.coefficients().end())};
}

LaurentSeries LaurentSeries::from_series(const TruncatedSeries& series, long shift) {
  return {shift, std::vector<Rational>(series.coefficients().begin(), series.coefficients().end()),
          shift + static_cast<long>(series.order())};
}

Rational LaurentSeries::coefficient(long power) const {
  if (known_through_ && power > *known_through_) {
    throw std::domain_error("coefficient of w^" + std::to_string(power) + " lies beyond the truncation at w^" +
                            std::to_string(*known_through_));
  }
  const long index = power - lowest_;
  if (index < 0 || index >= static_cast<long>(coefficients_.size())) return {};
  return coefficients_[static_cast<std::size_t>(index)];
}

LaurentSeries operator*(const LaurentSeries& l, const LaurentSeries& r) {
  std::optional<long> known;
  if (l.known_through_) known = *l.known_through_ + r.lowest_;
  if (r.known_through_) {
    const long bound = *r.known_through_ + l.lowest_;
    known = known ? std::min(*known, bound) : bound;
  }
  std::vector<Rational> out(l.coefficients_.size() + r.coefficients_.size());
  for (std::size_t i = 0; i < l.coefficients_.size(); ++i) {
    if (l.coefficients_[i].is_zero()) continue;
    for (std::size_t j = 0; j < r.coefficients_.size(); ++j) out[i + j] += l.coefficients_[i] * r.coefficients_[j];
  }
  return {l.lowest_ + r.lowest_, std::move(out), known};
}

Rational residue_at_zero(const LaurentSeries& series) { return series.coefficient(-1); }

BigInt binomial_via_residue(std::int64_t n, std::int64_t k) {
  if (n < 0) throw std::domain_error("binomial_via_residue: negative n");
  const auto series = LaurentSeries::over_power_of_w(RationalPolynomial::one_plus_w_power(static_cast<std::size_t>(n)),
                                                     static_cast<long>(k + 1));
  const Rational residue = residue_at_zero(series);
  if (!residue.is_integer()) throw std::logic_error("binomial_via_residue: non-integer residue");
  return residue.numerator();
}

// ---------------------------------------------------------------------------
// Geometric family

std::vector<Rational> geometric_coefficients(unsigned s, bool perturb) {
  switch (s) {
    case 0: return {Rational(1)};
    case 1: return {Rational(0), Rational(1)};
    case 2: return {Rational(0), Rational(1), Rational(2)};
    case 3: return {Rational(0), Rational(1), Rational(perturb ? 7 : 6), Rational(6)};
    default: throw std::invalid_argument("geometric family is defined for s in 0..3");
  }
}

TruncatedSeries geometric_family(unsigned s, std::size_t order, bool perturb) {
  if (order < 1) throw std::invalid_argument("geometric_family: order must be >= 1");
  const TruncatedSeries one_minus_w({Rational(1), Rational(-1)}, order);
  const TruncatedSeries inverse = one_minus_w.inverse();
  const std::vector<Rational> weights = geometric_coefficients(s, perturb);
  TruncatedSeries total({}, order);
  TruncatedSeries inverse_power = inverse;  // (1-w)^-(j+1)
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (!weights[j].is_zero()) total = total + weights[j] * inverse_power.shifted(j);
    inverse_power = inverse_power * inverse;
  }
  return total;
}

TruncatedSeries power_sum_series(unsigned s, std::size_t order) {
  std::vector<Rational> coeffs(order + 1);
  for (std::size_t k = 0; k <= order; ++k) coeffs[k] = Rational(static_cast<long>(k)).pow(static_cast<long>(s));
  return {std::move(coeffs), order};
}

// ---------------------------------------------------------------------------
// Residues at movable poles

Rational derivative_residue(const RationalPolynomial& f, const Rational& pole, unsigned pole_order) {
  if (pole_order < 1) throw std::invalid_argument("derivative_residue: pole order must be >= 1");
  RationalPolynomial g = f;
  BigInt factorial = 1;
  for (unsigned j = 1; j < pole_order; ++j) {
    g = g.derivative();
    factorial *= j;
  }
  return g.evaluate(pole) / Rational(factorial);
}

namespace {

RationalPolynomial inner_polynomial(std::int64_t a, std::int64_t c) {
  return RationalPolynomial::one_plus_w_power(static_cast<std::size_t>(a - c)) *
         RationalPolynomial::monomial(Rational(1), static_cast<std::size_t>(c));
}

/// coefficient (1+w)^(d-j) w^(c-l) at w, skipped when the coefficient is zero.
Rational term(const BigInt& coefficient, const Rational& w, long d_power, long c_power) {
  if (coefficient == 0) return {};
  return Rational(coefficient) * (Rational(1) + w).pow(d_power) * w.pow(c_power);
}

Rational resquad_closed_form(std::int64_t a, std::int64_t c, const Rational& w, unsigned order) {
  const BigInt d(static_cast<long>(a - c));
  const BigInt cc(static_cast<long>(c));
  const long dl = static_cast<long>(a - c);
  const long cl = static_cast<long>(c);
  switch (order) {
    case 2:
      return term(d, w, dl - 1, cl) + term(cc, w, dl, cl - 1);
    case 3:
      return term(BigInt(d * (d - 1)), w, dl - 2, cl) + term(BigInt(2 * d * cc), w, dl - 1, cl - 1) +
             term(BigInt(cc * (cc - 1)), w, dl, cl - 2);
    case 4:
      return term(BigInt(d * (d - 1) * (d - 2)), w, dl - 3, cl) + term(BigInt(3 * d * (d - 1) * cc), w, dl - 2, cl - 1) +
             term(BigInt(3 * d * cc * (cc - 1)), w, dl - 1, cl - 2) +
             term(BigInt(cc * (cc - 1) * (cc - 2)), w, dl, cl - 3);
    default: throw std::invalid_argument("resquad family is defined for orders 2..4");
  }
}

}  // namespace

std::pair<Rational, Rational> resquad_family_check(std::int64_t a, std::int64_t c, const Rational& pole,
                                                   unsigned order) {
  if (c < 0 || c > a) throw std::invalid_argument("resquad_family_check: need 0 <= c <= a");
  if (pole.is_zero()) throw std::invalid_argument("resquad_family_check: pole must be nonzero");
  BigInt scale = 1;
  for (unsigned j = 2; j < order; ++j) scale *= j;
  const Rational by_derivatives = derivative_residue(Rational(scale) * inner_polynomial(a, c), pole, order);
  return {by_derivatives, resquad_closed_form(a, c, pole, order)};
}

Rational inner_sum_via_residue(std::int64_t a, std::int64_t c, unsigned s, bool perturb) {
  if (c > a) return {};
  // sum_k k^s w^-k = sum_j g_j w / (w-1)^(j+1), so the sum becomes
  // sum_j g_j res_{w=1} (1+w)^(a-c) w^c / (w-1)^(j+1).
  const RationalPolynomial f = inner_polynomial(a, c);
  const std::vector<Rational> weights = geometric_coefficients(s, perturb);
  Rational total;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (weights[j].is_zero()) continue;
    total += weights[j] * derivative_residue(f, Rational(1), static_cast<unsigned>(j + 1));
  }
  return total;
}

Rational inner_sum_direct(std::int64_t a, std::int64_t c, unsigned s) {
  if (c > a) return {};
  Rational total;
  for (std::int64_t k = c; k <= a; ++k) {
    total += Rational(binomial(a - c, k - c)) * Rational(static_cast<long>(k)).pow(static_cast<long>(s));
  }
  return total;
}

Rational inner_sum_closed_form(std::int64_t a, std::int64_t c, unsigned s) {
  if (c > a) return {};
  const long d = static_cast<long>(a - c);
  const Rational sum(static_cast<long>(a + c));
  const Rational diff(d);
  switch (s) {
    case 0: return power_of_two(d);
    case 1: return power_of_two(d - 1) * sum;
    case 2: return power_of_two(d - 2) * (sum * sum + diff);
    case 3: return power_of_two(d - 3) * sum * (sum * sum + Rational(3) * diff);
    default: throw std::invalid_argument("inner_sum_closed_form: s must be 0..3");
  }
}

// ---------------------------------------------------------------------------
// Self-test

bool SelftestReport::passed() const {
  return !suites.empty() && std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed(); });
}

namespace {

class SuiteRecorder {
 public:
  explicit SuiteRecorder(std::string name) { result_.name = std::move(name); }

  template <typename Describe>
  void check(bool ok, Describe&& describe) {
    ++result_.checks;
    if (ok) return;
    ++result_.failures;
    if (result_.failure_samples.size() < 5) result_.failure_samples.push_back(describe());
  }

  SuiteResult take() { return std::move(result_); }

 private:
  SuiteResult result_;
};

}  // namespace

SelftestReport residue_selftest(const SelftestOptions& options) {
  if (options.order < 8) throw std::invalid_argument("residue self-test needs order >= 8");
  SelftestReport report;

  {
    SuiteRecorder suite("binomial-via-residue");
    for (std::int64_t n = 0; n <= 20; ++n) {
      for (std::int64_t k = -2; k <= n + 2; ++k) {
        suite.check(binomial_via_residue(n, k) == binomial(n, k),
                    [&] { return "C(" + std::to_string(n) + "," + std::to_string(k) + ")"; });
      }
    }
    report.suites.push_back(suite.take());
  }

  {
    SuiteRecorder suite("geometric-family");
    for (unsigned s = 0; s <= 3; ++s) {
      const TruncatedSeries closed = geometric_family(s, options.order, options.perturb_geometric);
      const TruncatedSeries direct = power_sum_series(s, options.order);
      for (std::size_t k = 0; k <= options.order; ++k) {
        suite.check(closed.coefficient(k) == direct.coefficient(k), [&] {
          return "s=" + std::to_string(s) + " w^" + std::to_string(k) + ": " + closed.coefficient(k).to_string() +
                 " vs " + direct.coefficient(k).to_string();
        });
      }
    }
    report.suites.push_back(suite.take());
  }

  {
    SuiteRecorder suite("resquad-family");
    const std::vector<Rational> poles = {Rational(1), Rational(2), Rational(BigInt(-1), BigInt(2)),
                                         Rational(BigInt(3), BigInt(5))};
    for (std::int64_t a = 0; a <= 8; ++a) {
      for (std::int64_t c = 0; c <= a; ++c) {
        for (const auto& pole : poles) {
          for (unsigned order = 2; order <= 4; ++order) {
            const auto [by_derivatives, closed] = resquad_family_check(a, c, pole, order);
            suite.check(by_derivatives == closed, [&] {
              std::ostringstream os;
              os << "a=" << a << " c=" << c << " pole=" << pole << " order=" << order;
              return os.str();
            });
          }
        }
      }
    }
    report.suites.push_back(suite.take());
  }

  {
    SuiteRecorder suite("inner-sum");
    for (std::int64_t a = 0; a <= 10; ++a) {
      for (std::int64_t c = 0; c <= a; ++c) {
        for (unsigned s = 0; s <= 3; ++s) {
          const Rational via_residue = inner_sum_via_residue(a, c, s, options.perturb_geometric);
          const Rational direct = inner_sum_direct(a, c, s);
          const Rational closed = inner_sum_closed_form(a, c, s);
          suite.check(via_residue == direct && direct == closed, [&] {
            std::ostringstream os;
            os << "a=" << a << " c=" << c << " s=" << s << ": " << via_residue << " / " << direct << " / " << closed;
            return os.str();
          });
        }
      }
    }
    report.suites.push_back(suite.take());
  }

  {
    SuiteRecorder suite("series-inversion");
    SeededStream stream(options.seed);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Rational> coeffs(options.order + 1);
      for (auto& v : coeffs) v = stream.weight(WeightKind::Rational).re;
      if (coeffs[0].is_zero()) coeffs[0] = Rational(1);
      const TruncatedSeries u(std::move(coeffs), options.order);
      const TruncatedSeries product = u * u.inverse();
      const TruncatedSeries one({Rational(1)}, options.order);
      suite.check(product == one, [&] { return "trial " + std::to_string(trial); });
    }
    report.suites.push_back(suite.take());
  }
  return report;
}

}  // namespace multisum
