#include "multisum/closed_form.hpp"

#include <array>
#include <string>

namespace multisum {

namespace {

constexpr std::array<std::string_view, kCoefficientCount> kCoefficientNames = {
    "base",         "resquad.d",    "resquad.c",    "second.dd",   "second.dc", "second.cc",
    "third.ddd",    "third.ddc",    "third.dcc",    "third.ccc",   "cube.series", "simple1.sum",
    "simple2.diff", "simple3.diff", "expand.pair",  "r2.c1",       "r3.cross",  "r4.cross",
    "r5.cross",     "r6.s11",       "r7.three",     "r8.three",    "u1.power",  "u2.c1",
    "u3.diff",      "u4.diff",      "u5.diff",      "u6.s11",      "u7.three",  "u8.three"};

Rational q(long value) { return Rational(value); }

BigInt binomial_product(const ProblemInstance& inst) {
  BigInt product = 1;
  for (std::size_t i = 0; i < inst.size(); ++i) product *= binomial(inst.a[i], inst.c[i]);
  return product;
}

std::vector<BigInt> add_layers(const std::vector<BigInt>& l, const std::vector<BigInt>& r) {
  std::vector<BigInt> out(std::max(l.size(), r.size()), BigInt(0));
  for (std::size_t j = 0; j < l.size(); ++j) out[j] += l[j];
  for (std::size_t j = 0; j < r.size(); ++j) out[j] += r[j];
  return out;
}

std::vector<BigInt> convolve(const std::vector<BigInt>& l, const std::vector<BigInt>& r) {
  std::vector<BigInt> out(l.size() + r.size() - 1, BigInt(0));
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (l[i] == 0) continue;
    for (std::size_t j = 0; j < r.size(); ++j) out[i + j] += l[i] * r[j];
  }
  return out;
}

/// C(D - J, u - J) for J = 0..3 wherever D - J >= 0.
struct LayerBinomials {
  std::int64_t top = 0;
  std::array<std::optional<BigInt>, 4> values;

  LayerBinomials(std::int64_t d, std::int64_t u) : top(d) {
    for (std::int64_t j = 0; j < 4; ++j) {
      if (d - j >= 0) values[static_cast<std::size_t>(j)] = binomial(d - j, u - j);
    }
  }

  BigInt apply(const std::vector<BigInt>& layers) const {
    BigInt total = 0;
    for (std::size_t j = 0; j < layers.size(); ++j) {
      if (layers[j] == 0) continue;
      if (j >= values.size() || !values[j]) {
        throw std::logic_error("absorption layer " + std::to_string(j) + " has nonzero weight but negative top " +
                               std::to_string(top - static_cast<std::int64_t>(j)));
      }
      total += layers[j] * *values[j];
    }
    return total;
  }
};

std::vector<BigInt> moment_layers(const MomentLabel& label, const ProblemInstance& inst, const EvalOptions& opts) {
  constexpr std::array<std::array<unsigned, 3>, 6> kPowers = {{{1, 0, 0}, {2, 0, 0}, {3, 0, 0},
                                                               {1, 1, 0}, {1, 2, 0}, {1, 1, 1}}};
  const auto& powers = kPowers[static_cast<std::size_t>(label.kind)];
  std::vector<BigInt> layers{BigInt(1)};
  for (std::size_t j = 0; j < arity(label.kind); ++j) {
    const std::size_t i = label.indices[j];
    layers = convolve(layers, coordinate_layers(powers[j], inst.a[i], inst.c[i], opts));
  }
  return layers;
}

/// One coordinate's unrestricted sum  sum_k C(a-c, k-c) k^power.
Rational coordinate_sum(unsigned power, std::int64_t a, std::int64_t c, const EvalOptions& opts) {
  const long d = static_cast<long>(a - c);
  const Rational sum(static_cast<long>(a + c));
  const Rational diff(d);
  switch (power) {
    case 0: return power_of_two(d);
    case 1: return power_of_two(d - 1) * sum * q(opts.factor(Coefficient::Simple1Sum));
    case 2: return power_of_two(d - 2) * (sum * sum + diff * q(opts.factor(Coefficient::Simple2Diff)));
    case 3:
      return power_of_two(d - 3) * sum * (sum * sum + q(3 * opts.factor(Coefficient::Simple3Diff)) * diff);
    default: throw std::invalid_argument("coordinate_sum: power must be 0..3");
  }
}

void require_valid(const ProblemInstance& inst, std::optional<IdentityLabel> label) {
  validate(inst, label).throw_if_invalid();
}

void require_moment(const MomentLabel& label, const ProblemInstance& inst) {
  require_valid(inst, std::nullopt);
  if (label.restricted && !inst.n) throw StructuralError(label.name() + " is restricted and needs n");
  check_moment_label(label, inst.size());
}

}  // namespace

std::string_view to_string(Coefficient id) { return kCoefficientNames[static_cast<std::size_t>(id)]; }

std::optional<Coefficient> parse_coefficient(std::string_view text) {
  for (std::size_t i = 0; i < kCoefficientNames.size(); ++i) {
    if (kCoefficientNames[i] == text) return static_cast<Coefficient>(i);
  }
  return std::nullopt;
}

std::vector<Coefficient> all_coefficients() {
  std::vector<Coefficient> out;
  for (std::size_t i = 0; i < kCoefficientCount; ++i) out.push_back(static_cast<Coefficient>(i));
  return out;
}

unsigned literal_degree(IdentityLabel label) {
  if (!is_restricted(label)) return 0;
  return weight_degree(weight_form(label));
}

bool literal_is_degenerate(IdentityLabel label, const ProblemInstance& inst) {
  if (!is_restricted(label) || inst.is_zero_instance()) return false;
  return falling_factorial(BigInt(static_cast<long>(inst.total_a() - inst.total_c())), literal_degree(label)) == 0;
}

GaussianRational rhs_literal(IdentityLabel label, const ProblemInstance& inst, const EvalOptions& opts) {
  require_valid(inst, label);
  if (inst.is_zero_instance()) return {};
  return rhs_literal(label, inst, compute_aggregates(inst), opts);
}

GaussianRational rhs_literal(IdentityLabel label, const ProblemInstance& inst, const Aggregates& agg,
                             const EvalOptions& opts) {
  require_valid(inst, label);
  if (inst.is_zero_instance()) return {};
  const std::int64_t d = agg.A0() - agg.C0();
  const Rational product(binomial_product(inst));
  const auto f = [&](Coefficient id) { return q(opts.factor(id)); };
  const GaussianRational& A1 = agg.A(1);
  const GaussianRational& C1 = agg.C(1);

  if (!is_restricted(label)) {
    const WeightForm form = weight_form(label);
    const Rational scale = power_of_two(static_cast<long>(d) - static_cast<long>(weight_degree(form))) * product;
    const GaussianRational sum = A1 + C1;
    switch (form) {
      case WeightForm::Unit: return GaussianRational(scale * f(Coefficient::U1Power));
      case WeightForm::Linear: return scale * (A1 + f(Coefficient::U2C1) * C1);
      case WeightForm::Square: return scale * (f(Coefficient::U3Diff) * (agg.A(2) - agg.C(2)) + sum * sum);
      case WeightForm::AbsSquare:
        return scale * GaussianRational(f(Coefficient::U4Diff) * (agg.Aabs() - agg.Cabs()) + abs_squared(sum));
      case WeightForm::Mixed:
        return scale * (f(Coefficient::U5Diff) * (agg.Astar(1, 1) - agg.Cstar(1, 1)) +
                        sum * (agg.Astar(1) + agg.Cstar(1)));
      case WeightForm::LinearSquare:
        return scale * (A1 - C1 + agg.A(1, 2) + agg.C(1, 2) + q(2) * f(Coefficient::U6S11) * agg.S(1, 1));
      case WeightForm::Cube:
        return scale * (sum * (sum * sum + q(3) * f(Coefficient::U7Three) * (agg.A(2) - agg.C(2))));
      case WeightForm::LinearCube:
        return scale * (agg.A(1, 3) + agg.C(1, 3) +
                        q(3) * f(Coefficient::U8Three) *
                            (agg.A(1, 2) - agg.C(1, 2) + agg.S(1, 2) + agg.S(2, 1)));
    }
    return {};
  }

  const unsigned degree = literal_degree(label);
  const BigInt denominator = falling_factorial(BigInt(static_cast<long>(d)), degree);
  if (denominator == 0) {
    throw DegenerateDenominator(std::string(to_string(label)) + ": A0 - C0 = " + std::to_string(d) +
                                " makes the printed denominator vanish");
  }
  const std::int64_t n = *inst.n;
  const Rational lead = Rational(binomial(d, n - agg.C0())) * product / Rational(denominator);
  const Rational u(static_cast<long>(n - agg.C0()));
  const Rational v(static_cast<long>(agg.A0() - n));
  const Rational one(1);

  switch (weight_form(label)) {
    case WeightForm::Unit: return GaussianRational(lead * f(Coefficient::Base));
    case WeightForm::Linear: return lead * (u * A1 + v * f(Coefficient::R2C1) * C1);
    case WeightForm::Square:
      return lead * (u * ((u - one) * (A1 * A1) + v * (agg.A(2) - agg.C(2) + q(2) * f(Coefficient::R3Cross) * A1 * C1)) +
                     v * (v - one) * (C1 * C1));
    case WeightForm::AbsSquare: {
      const GaussianRational cross = A1 * conj(C1) + conj(A1) * C1;
      return lead * (u * ((u - one) * GaussianRational(abs_squared(A1)) +
                          v * (GaussianRational(agg.Aabs() - agg.Cabs()) + f(Coefficient::R4Cross) * cross)) +
                     v * (v - one) * GaussianRational(abs_squared(C1)));
    }
    case WeightForm::Mixed: {
      const GaussianRational& As1 = agg.Astar(1);
      const GaussianRational& Cs1 = agg.Cstar(1);
      return lead * (u * ((u - one) * (A1 * As1) +
                          v * (agg.Astar(1, 1) - agg.Cstar(1, 1) + f(Coefficient::R5Cross) * (A1 * Cs1 + As1 * C1))) +
                     v * (v - one) * (C1 * Cs1));
    }
    case WeightForm::LinearSquare:
      return lead * (u * ((u - one) * agg.A(1, 2) + v * (A1 - C1 + q(2) * f(Coefficient::R6S11) * agg.S(1, 1))) +
                     v * (v - one) * agg.C(1, 2));
    case WeightForm::Cube: {
      const Rational three = q(3) * f(Coefficient::R7Three);
      const GaussianRational inner = agg.A(2) - agg.C(2) + A1 * C1;
      return lead * (u * (u - one) * ((u - q(2)) * (A1 * A1 * A1) + v * (agg.C(3) - agg.A(3) + three * A1 * inner)) +
                     v * (v - one) * ((v - q(2)) * (C1 * C1 * C1) + u * (agg.A(3) - agg.C(3) + three * C1 * inner)));
    }
    case WeightForm::LinearCube: {
      const Rational three = q(3) * f(Coefficient::R8Three);
      return lead *
             (u * (u - one) *
                  ((u - q(2)) * agg.A(1, 3) + v * (C1 - A1 + three * (agg.S(2, 1) + agg.A(1, 2) - agg.S(1, 1)))) +
              v * (v - one) *
                  ((v - q(2)) * agg.C(1, 3) + u * (A1 - C1 + three * (agg.S(1, 2) - agg.C(1, 2) + agg.S(1, 1)))));
    }
  }
  return {};
}

GaussianRational rhs_unrestricted(IdentityLabel label, const ProblemInstance& inst, const EvalOptions& opts) {
  if (is_restricted(label)) throw std::invalid_argument("rhs_unrestricted needs a U-label");
  require_valid(inst, label);
  if (inst.is_zero_instance()) return {};
  const std::int64_t d = inst.total_a() - inst.total_c();
  if (d >= static_cast<std::int64_t>(weight_degree(weight_form(label)))) return rhs_literal(label, inst, opts);
  return rhs_by_moments(label, inst, opts);
}

GaussianRational rhs_unrestricted(IdentityLabel label, const ProblemInstance& inst, const Aggregates& agg,
                                  const MomentTable& table, const EvalOptions& opts) {
  if (is_restricted(label)) throw std::invalid_argument("rhs_unrestricted needs a U-label");
  if (inst.is_zero_instance()) return {};
  const std::int64_t d = agg.A0() - agg.C0();
  if (d >= static_cast<std::int64_t>(weight_degree(weight_form(label)))) return rhs_literal(label, inst, agg, opts);
  return rhs_by_moments(label, inst, table, opts);
}

std::vector<BigInt> coordinate_layers(unsigned power, std::int64_t a, std::int64_t c, const EvalOptions& opts) {
  if (c > a) return {BigInt(0)};
  const BigInt d(static_cast<long>(a - c));
  const BigInt cc(static_cast<long>(c));
  const auto f = [&](Coefficient id) { return opts.factor(id); };

  // Residue of (1+w)^d w^c / (w - w_m)^2 (first derivative).
  const std::vector<BigInt> first = {cc * f(Coefficient::ResquadC), d * f(Coefficient::ResquadD)};
  // Residue of 2 (1+w)^d w^c / (w - w_m)^3 (second derivative).
  const std::vector<BigInt> second = {cc * (cc - 1) * f(Coefficient::SecondCC),
                                      2 * d * cc * f(Coefficient::SecondDC),
                                      d * (d - 1) * f(Coefficient::SecondDD)};
  // Residue of 6 (1+w)^d w^c / (w - w_m)^4 (third derivative).
  const std::vector<BigInt> third = {cc * (cc - 1) * (cc - 2) * f(Coefficient::ThirdCCC),
                                     3 * d * cc * (cc - 1) * f(Coefficient::ThirdDCC),
                                     3 * d * (d - 1) * cc * f(Coefficient::ThirdDDC),
                                     d * (d - 1) * (d - 2) * f(Coefficient::ThirdDDD)};

  // sum k^s w^k = w/(1-w)^2 [+ 2w^2/(1-w)^3 or 6w^2/(1-w)^3 + 6w^3/(1-w)^4]
  switch (power) {
    case 0: return {BigInt(1)};
    case 1: return first;
    case 2: return add_layers(first, second);
    case 3: {
      std::vector<BigInt> scaled = second;
      for (auto& v : scaled) v *= 3 * f(Coefficient::CubeSeries);
      return add_layers(add_layers(first, scaled), third);
    }
    default: throw std::invalid_argument("coordinate_layers: power must be 0..3");
  }
}

Rational base_sum(const ProblemInstance& inst, bool restricted, const EvalOptions& opts) {
  require_valid(inst, std::nullopt);
  if (inst.is_zero_instance()) return {};
  const std::int64_t d = inst.total_a() - inst.total_c();
  const Rational product(binomial_product(inst));
  if (!restricted) return power_of_two(static_cast<long>(d)) * product;
  if (!inst.n) throw StructuralError("restricted sum needs n");
  return Rational(binomial(d, *inst.n - inst.total_c())) * product * q(opts.factor(Coefficient::Base));
}

MomentResult moment_restricted(const MomentLabel& label, const ProblemInstance& inst, const EvalOptions& opts) {
  if (!label.restricted) throw std::invalid_argument("moment_restricted needs a restricted label");
  require_moment(label, inst);
  if (inst.is_zero_instance()) return {Rational(0), label};
  const LayerBinomials binomials(inst.total_a() - inst.total_c(), *inst.n - inst.total_c());
  const BigInt value = binomials.apply(moment_layers(label, inst, opts)) * binomial_product(inst);
  return {Rational(value), label};
}

MomentResult moment_unrestricted(const MomentLabel& label, const ProblemInstance& inst, const EvalOptions& opts) {
  if (label.restricted) throw std::invalid_argument("moment_unrestricted needs an unrestricted label");
  require_moment(label, inst);
  if (inst.is_zero_instance()) return {Rational(0), label};
  constexpr std::array<std::array<unsigned, 3>, 6> kPowers = {{{1, 0, 0}, {2, 0, 0}, {3, 0, 0},
                                                               {1, 1, 0}, {1, 2, 0}, {1, 1, 1}}};
  std::vector<unsigned> power(inst.size(), 0);
  for (std::size_t j = 0; j < arity(label.kind); ++j) {
    power[label.indices[j]] = kPowers[static_cast<std::size_t>(label.kind)][j];
  }
  Rational value(binomial_product(inst));
  for (std::size_t i = 0; i < inst.size(); ++i) value *= coordinate_sum(power[i], inst.a[i], inst.c[i], opts);
  return {value, label};
}

Rational moment_restricted_printed(const MomentLabel& label, const ProblemInstance& inst) {
  if (!label.restricted) throw std::invalid_argument("printed moment ratio forms are restricted");
  require_moment(label, inst);
  if (inst.is_zero_instance()) return {};
  const std::int64_t d = inst.total_a() - inst.total_c();
  const unsigned degree = label.kind == MomentKind::P1 ? 1
                          : (label.kind == MomentKind::P2 || label.kind == MomentKind::P11) ? 2
                                                                                              : 3;
  const BigInt denominator = falling_factorial(BigInt(static_cast<long>(d)), degree);
  if (denominator == 0) throw DegenerateDenominator(label.name() + ": printed denominator vanishes");

  const std::int64_t n = *inst.n;
  const Rational lead = Rational(binomial(d, n - inst.total_c())) * Rational(binomial_product(inst)) / Rational(denominator);
  const Rational u(static_cast<long>(n - inst.total_c()));
  const Rational v(static_cast<long>(inst.total_a() - n));
  const Rational one(1), two(2), three(3);
  const auto a_at = [&](std::size_t j) { return Rational(static_cast<long>(inst.a[label.indices[j]])); };
  const auto c_at = [&](std::size_t j) { return Rational(static_cast<long>(inst.c[label.indices[j]])); };
  const Rational ap = a_at(0), cp = c_at(0);

  switch (label.kind) {
    case MomentKind::P1: return lead * (u * ap + v * cp);
    case MomentKind::P2:
      return lead * (u * ((u - one) * ap * ap + v * (ap - cp + two * ap * cp)) + v * (v - one) * cp * cp);
    case MomentKind::P3:
      return lead * (u * (u - one) *
                         ((u - two) * ap * ap * ap + v * (three * ap * ap * cp + three * ap * ap - three * ap * cp - ap + cp)) +
                     v * (v - one) *
                         ((v - two) * cp * cp * cp + u * (three * ap * cp * cp - three * cp * cp + three * ap * cp + ap - cp)));
    case MomentKind::P11: {
      const Rational aq = a_at(1), cq = c_at(1);
      return lead * (u * ((u - one) * ap * aq + v * (ap * cq + cp * aq)) + v * (v - one) * cp * cq);
    }
    case MomentKind::P12: {
      const Rational aq = a_at(1), cq = c_at(1);
      return lead * (u * (u - one) *
                         ((u - two) * ap * aq * aq + v * (cp * aq * aq + ap * aq - ap * cq + two * ap * aq * cq)) +
                     v * (v - one) *
                         ((v - two) * cp * cq * cq + u * (ap * cq * cq - cp * cq + cp * aq + two * cp * aq * cq)));
    }
    case MomentKind::P111: {
      const Rational aq = a_at(1), cq = c_at(1), ar = a_at(2), cr = c_at(2);
      return lead * (u * (u - one) *
                         ((u - two) * ap * aq * ar + v * (ap * aq * cr + ap * cq * ar + cp * aq * ar)) +
                     v * (v - one) *
                         ((v - two) * cp * cq * cr + u * (cp * cq * ar + cp * aq * cr + ap * cq * cr)));
    }
  }
  return {};
}

MomentTable MomentTable::build(const ProblemInstance& inst, bool restricted, const EvalOptions& opts) {
  require_valid(inst, std::nullopt);
  if (restricted && !inst.n) throw StructuralError("restricted moment table needs n");
  MomentTable table;
  table.restricted_ = restricted;
  table.m_ = inst.size();
  table.a_ = inst.a;
  table.c_ = inst.c;
  if (restricted) table.n_ = inst.n;
  const std::size_t m = table.m_;
  table.p1_.assign(m, Rational());
  table.p2_.assign(m, Rational());
  table.p3_.assign(m, Rational());
  table.p11_.assign(m * m, Rational());
  table.p12_.assign(m * m, Rational());
  table.p111_.assign(m * m * m, Rational());
  if (inst.is_zero_instance()) return table;

  table.base_ = base_sum(inst, restricted, opts);
  const auto eval = [&](MomentKind kind, std::size_t p, std::size_t qi, std::size_t r) {
    const MomentLabel label{kind, restricted, {p, qi, r}};
    return restricted ? moment_restricted(label, inst, opts).value : moment_unrestricted(label, inst, opts).value;
  };
  for (std::size_t p = 0; p < m; ++p) {
    table.p1_[p] = eval(MomentKind::P1, p, 0, 0);
    table.p2_[p] = eval(MomentKind::P2, p, 0, 0);
    table.p3_[p] = eval(MomentKind::P3, p, 0, 0);
    for (std::size_t qi = 0; qi < m; ++qi) {
      if (qi == p) continue;
      table.p11_[p * m + qi] = eval(MomentKind::P11, p, qi, 0);
      table.p12_[p * m + qi] = eval(MomentKind::P12, p, qi, 0);
      for (std::size_t r = 0; r < m; ++r) {
        if (r == p || r == qi) continue;
        table.p111_[(p * m + qi) * m + r] = eval(MomentKind::P111, p, qi, r);
      }
    }
  }
  return table;
}

bool MomentTable::matches(const ProblemInstance& inst) const {
  return inst.a == a_ && inst.c == c_ && (!restricted_ || inst.n == n_);
}

GaussianRational rhs_by_moments(IdentityLabel label, const ProblemInstance& inst, const EvalOptions& opts) {
  require_valid(inst, label);
  if (inst.is_zero_instance()) return {};
  return rhs_by_moments(label, inst, MomentTable::build(inst, is_restricted(label), opts), opts);
}

MomentExpansion MomentExpansion::build(IdentityLabel label, const ProblemInstance& inst, const EvalOptions& opts) {
  // n plays no part in the weight half.
  require_valid(inst, unrestricted_label(weight_form(label)));
  const std::size_t m = inst.size();
  const auto& x = inst.x;
  MomentExpansion e;
  e.form_ = weight_form(label);
  e.m_ = m;
  e.p1_.assign(m, GaussianRational());
  e.p2_.assign(m, GaussianRational());
  e.p3_.assign(m, GaussianRational());
  e.p11_.assign(m * m, GaussianRational());
  e.p12_.assign(m * m, GaussianRational());
  e.p111_.assign(m * m * m, GaussianRational());

  // (sum x k)(sum z k) = sum_{p != q} x_p z_q k_p k_q + sum_p x_p z_p k_p^2
  const auto pair_expansion = [&](const auto& z_at) {
    for (std::size_t p = 0; p < m; ++p) {
      for (std::size_t qi = 0; qi < m; ++qi) {
        if (qi != p) e.p11_[p * m + qi] = x[p] * z_at(qi);
      }
      e.p2_[p] = x[p] * z_at(p);
    }
  };

  switch (e.form_) {
    case WeightForm::Unit: e.base_ = GaussianRational(1); break;
    case WeightForm::Linear: e.p1_ = x; break;
    case WeightForm::Square: pair_expansion([&](std::size_t i) { return x[i]; }); break;
    case WeightForm::AbsSquare: pair_expansion([&](std::size_t i) { return conj(x[i]); }); break;
    case WeightForm::Mixed: pair_expansion([&](std::size_t i) { return (*inst.y)[i]; }); break;
    case WeightForm::LinearSquare: e.p2_ = x; break;
    case WeightForm::Cube: {
      // (sum x k)^3 = sum_{p,q,r distinct} x_p x_q x_r k_p k_q k_r
      //             + 3 sum_{p != q} x_p x_q^2 k_p k_q^2 + sum_p x_p^3 k_p^3
      const Rational pair_multiplicity(3L * opts.factor(Coefficient::ExpandPair));
      for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t qi = 0; qi < m; ++qi) {
          if (qi == p) continue;
          const GaussianRational xpq = x[p] * x[qi];
          for (std::size_t r = 0; r < m; ++r) {
            if (r != p && r != qi) e.p111_[(p * m + qi) * m + r] = xpq * x[r];
          }
          e.p12_[p * m + qi] = xpq * x[qi] * pair_multiplicity;
        }
        e.p3_[p] = x[p] * x[p] * x[p];
      }
      break;
    }
    case WeightForm::LinearCube: e.p3_ = x; break;
  }
  return e;
}

GaussianRational MomentExpansion::evaluate(const MomentTable& table) const {
  if (table.size() != m_) throw std::invalid_argument("MomentExpansion: table has a different m");
  GaussianRational total;
  const auto add = [&total](const GaussianRational& coefficient, const Rational& moment) {
    if (coefficient.is_zero() || moment.is_zero()) return;
    total += coefficient * moment;
  };
  add(base_, table.base());
  for (std::size_t p = 0; p < m_; ++p) {
    add(p1_[p], table.p1(p));
    add(p2_[p], table.p2(p));
    add(p3_[p], table.p3(p));
    for (std::size_t qi = 0; qi < m_; ++qi) {
      add(p11_[p * m_ + qi], table.p11(p, qi));
      add(p12_[p * m_ + qi], table.p12(p, qi));
      for (std::size_t r = 0; r < m_; ++r) add(p111_[(p * m_ + qi) * m_ + r], table.p111(p, qi, r));
    }
  }
  return total;
}

GaussianRational rhs_by_moments(IdentityLabel label, const ProblemInstance& inst, const MomentTable& table,
                                const EvalOptions& opts) {
  require_valid(inst, label);
  if (table.restricted() != is_restricted(label) || !table.matches(inst)) {
    throw std::invalid_argument("rhs_by_moments: moment table was built for a different instance");
  }
  if (inst.is_zero_instance()) return {};
  return MomentExpansion::build(label, inst, opts).evaluate(table);
}

GaussianRational rhs_abs_squared(IdentityLabel label, const ProblemInstance& inst, const EvalOptions& opts) {
  if (weight_form(label) != WeightForm::AbsSquare) throw std::invalid_argument("rhs_abs_squared needs R4 or U4");
  require_valid(inst, label);
  std::vector<GaussianRational> real_parts, imag_parts;
  for (const auto& w : inst.x) {
    real_parts.emplace_back(w.re);
    imag_parts.emplace_back(w.im);
  }
  const IdentityLabel square = is_restricted(label) ? IdentityLabel::R3 : IdentityLabel::U3;
  return rhs_by_moments(square, inst.with_x(std::move(real_parts)), opts) +
         rhs_by_moments(square, inst.with_x(std::move(imag_parts)), opts);
}

}  // namespace multisum
