#include "multisum/enumeration.hpp"

#include <algorithm>

namespace multisum {

CompositionCursor::CompositionCursor(std::int64_t n, std::vector<std::int64_t> caps)
    : target_(n), caps_(std::move(caps)), suffix_caps_(caps_.size() + 1, 0), k_(caps_.size(), 0) {
  for (std::size_t i = caps_.size(); i-- > 0;) suffix_caps_[i] = suffix_caps_[i + 1] + caps_[i];
  done_ = target_ < 0 || target_ > suffix_caps_[0];
}

void CompositionCursor::fill_from(std::size_t position, std::int64_t remaining) {
  for (std::size_t i = position; i < k_.size(); ++i) {
    k_[i] = std::max<std::int64_t>(0, remaining - suffix_caps_[i + 1]);
    remaining -= k_[i];
  }
}

bool CompositionCursor::next() {
  if (done_) return false;
  if (!started_) {
    started_ = true;
    fill_from(0, target_);
    return true;
  }
  if (k_.size() < 2) {
    done_ = true;
    return false;
  }
  std::int64_t tail = k_.back();
  for (std::size_t i = k_.size() - 1; i-- > 0;) {
    if (tail >= 1 && k_[i] < caps_[i]) {
      ++k_[i];
      fill_from(i + 1, tail - 1);
      return true;
    }
    tail += k_[i];
  }
  done_ = true;
  return false;
}

BoxCursor::BoxCursor(std::vector<std::int64_t> caps) : caps_(std::move(caps)), k_(caps_.size(), 0) {
  done_ = std::any_of(caps_.begin(), caps_.end(), [](std::int64_t cap) { return cap < 0; });
}

bool BoxCursor::next() {
  if (done_) return false;
  if (!started_) {
    started_ = true;
    return true;
  }
  for (std::size_t i = k_.size(); i-- > 0;) {
    if (k_[i] < caps_[i]) {
      ++k_[i];
      return true;
    }
    k_[i] = 0;
  }
  done_ = true;
  return false;
}

std::vector<std::vector<std::int64_t>> enumerate_compositions(std::int64_t n, const std::vector<std::int64_t>& caps) {
  std::vector<std::vector<std::int64_t>> out;
  CompositionCursor cursor(n, caps);
  while (cursor.next()) out.emplace_back(cursor.current().begin(), cursor.current().end());
  return out;
}

std::vector<std::vector<std::int64_t>> enumerate_box(const std::vector<std::int64_t>& caps) {
  std::vector<std::vector<std::int64_t>> out;
  BoxCursor cursor(caps);
  while (cursor.next()) out.emplace_back(cursor.current().begin(), cursor.current().end());
  return out;
}

PascalTable::PascalTable(std::int64_t max_top) : max_top_(max_top) {
  rows_.reserve(static_cast<std::size_t>(max_top + 1));
  for (std::int64_t t = 0; t <= max_top; ++t) {
    std::vector<BigInt> row(static_cast<std::size_t>(t + 1), BigInt(1));
    for (std::int64_t k = 1; k < t; ++k) {
      row[static_cast<std::size_t>(k)] = rows_.back()[static_cast<std::size_t>(k - 1)] + rows_.back()[static_cast<std::size_t>(k)];
    }
    rows_.push_back(std::move(row));
  }
}

const BigInt& PascalTable::operator()(std::int64_t t, std::int64_t k) const {
  if (t < 0 || t > max_top_) throw std::out_of_range("PascalTable: top " + std::to_string(t) + " outside table");
  if (k < 0 || k > t) return zero_;
  return rows_[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];
}

GaussianRational evaluate_weight(IdentityLabel label, std::span<const std::int64_t> k, const ProblemInstance& inst) {
  const auto linear = [&](const std::vector<GaussianRational>& w, int power) {
    GaussianRational sum;
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (k[i] == 0) continue;
      long term = 1;
      for (int e = 0; e < power; ++e) term *= static_cast<long>(k[i]);
      sum += w[i] * Rational(term);
    }
    return sum;
  };

  switch (weight_form(label)) {
    case WeightForm::Unit: return GaussianRational(1);
    case WeightForm::Linear: return linear(inst.x, 1);
    case WeightForm::Square: {
      const GaussianRational s = linear(inst.x, 1);
      return s * s;
    }
    case WeightForm::AbsSquare: return GaussianRational(abs_squared(linear(inst.x, 1)));
    case WeightForm::Mixed:
      if (!inst.y) throw StructuralError(std::string(to_string(label)) + " needs the second weight vector y");
      return linear(inst.x, 1) * linear(*inst.y, 1);
    case WeightForm::LinearSquare: return linear(inst.x, 2);
    case WeightForm::Cube: {
      const GaussianRational s = linear(inst.x, 1);
      return s * s * s;
    }
    case WeightForm::LinearCube: return linear(inst.x, 3);
  }
  return {};
}

namespace {

/// Calls visit(k, weight) for every tuple of the label's domain whose
/// binomial product prod C(a_i, k_i) C(k_i, c_i) is nonzero.
template <typename Visit>
void for_each_term(bool restricted, const ProblemInstance& inst, Visit&& visit) {
  const std::int64_t max_a = inst.a.empty() ? 0 : *std::max_element(inst.a.begin(), inst.a.end());
  const PascalTable pascal(max_a);
  BigInt product;
  const auto emit = [&](std::span<const std::int64_t> k) {
    product = 1;
    for (std::size_t i = 0; i < k.size(); ++i) {
      product *= pascal(inst.a[i], k[i]);
      product *= pascal(k[i], inst.c[i]);
      if (product == 0) return;
    }
    visit(k, product);
  };
  if (restricted) {
    CompositionCursor cursor(*inst.n, inst.a);
    while (cursor.next()) emit(cursor.current());
  } else {
    BoxCursor cursor(inst.a);
    while (cursor.next()) emit(cursor.current());
  }
}

}  // namespace

GaussianRational brute_force_lhs(IdentityLabel label, const ProblemInstance& inst) {
  validate(inst, label).throw_if_invalid();
  GaussianRational total;
  for_each_term(is_restricted(label), inst, [&](std::span<const std::int64_t> k, const BigInt& product) {
    total += evaluate_weight(label, k, inst) * Rational(product);
  });
  return total;
}

Rational brute_force_moment(const MomentLabel& label, const ProblemInstance& inst) {
  validate(inst).throw_if_invalid();
  if (label.restricted && !inst.n) throw StructuralError("restricted moment needs n");
  check_moment_label(label, inst.size());
  constexpr std::array<std::array<int, 3>, 6> kExponents = {{{1, 0, 0}, {2, 0, 0}, {3, 0, 0},
                                                              {1, 1, 0}, {1, 2, 0}, {1, 1, 1}}};
  const auto& exponents = kExponents[static_cast<std::size_t>(label.kind)];
  BigInt total = 0;
  for_each_term(label.restricted, inst, [&](std::span<const std::int64_t> k, const BigInt& product) {
    BigInt term = product;
    for (std::size_t j = 0; j < arity(label.kind); ++j) {
      for (int e = 0; e < exponents[j]; ++e) term *= static_cast<long>(k[label.indices[j]]);
    }
    total += term;
  });
  return Rational(total);
}

GaussianRational FormSums::restricted(WeightForm form, std::int64_t n) const {
  if (n < 0 || n >= static_cast<std::int64_t>(by_total.size())) return {};
  return by_total[static_cast<std::size_t>(n)][static_cast<std::size_t>(form)];
}

FormSums brute_force_all_forms(const ProblemInstance& inst) {
  validate(inst, IdentityLabel::U5).throw_if_invalid();
  FormSums sums;
  sums.by_total.resize(static_cast<std::size_t>(inst.total_a() + 1));
  const auto& y = *inst.y;
  for_each_term(false, inst, [&](std::span<const std::int64_t> k, const BigInt& product) {
    GaussianRational lin, mixed_y, lin2, lin3;
    std::int64_t total = 0;
    for (std::size_t i = 0; i < k.size(); ++i) {
      total += k[i];
      if (k[i] == 0) continue;
      const long ki = static_cast<long>(k[i]);
      lin += inst.x[i] * Rational(ki);
      mixed_y += y[i] * Rational(ki);
      lin2 += inst.x[i] * Rational(ki * ki);
      lin3 += inst.x[i] * Rational(ki * ki * ki);
    }
    const Rational weight(product);
    const GaussianRational square = lin * lin;
    const std::array<GaussianRational, 8> values = {
        GaussianRational(1), lin, square, GaussianRational(abs_squared(lin)), lin * mixed_y, lin2, square * lin, lin3};
    auto& bucket = sums.by_total[static_cast<std::size_t>(total)];
    for (std::size_t f = 0; f < values.size(); ++f) {
      const GaussianRational term = values[f] * weight;
      sums.unrestricted[f] += term;
      bucket[f] += term;
    }
  });
  return sums;
}

Rational MomentSums::value(const MomentLabel& label, std::optional<std::int64_t> n) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].kind != label.kind || labels[i].indices != label.indices) continue;
    if (!label.restricted) return Rational(unrestricted[i]);
    if (!n) throw StructuralError("restricted moment needs n");
    if (*n < 0 || *n >= static_cast<std::int64_t>(by_total.size())) return {};
    return Rational(by_total[static_cast<std::size_t>(*n)][i]);
  }
  throw std::out_of_range("moment " + label.name() + " is not defined for this m");
}

MomentSums brute_force_all_moments(const ProblemInstance& inst) {
  validate(inst).throw_if_invalid();
  MomentSums sums;
  sums.labels = all_moment_labels(inst.size(), false);
  sums.unrestricted.assign(sums.labels.size(), BigInt(0));
  sums.by_total.assign(static_cast<std::size_t>(inst.total_a() + 1), sums.unrestricted);
  constexpr std::array<std::array<int, 3>, 6> kExponents = {{{1, 0, 0}, {2, 0, 0}, {3, 0, 0},
                                                              {1, 1, 0}, {1, 2, 0}, {1, 1, 1}}};
  BigInt term;
  for_each_term(false, inst, [&](std::span<const std::int64_t> k, const BigInt& product) {
    std::int64_t total = 0;
    for (const auto ki : k) total += ki;
    auto& bucket = sums.by_total[static_cast<std::size_t>(total)];
    for (std::size_t i = 0; i < sums.labels.size(); ++i) {
      const MomentLabel& label = sums.labels[i];
      const auto& exponents = kExponents[static_cast<std::size_t>(label.kind)];
      long monomial = 1;
      for (std::size_t j = 0; j < arity(label.kind); ++j) {
        for (int e = 0; e < exponents[j]; ++e) monomial *= static_cast<long>(k[label.indices[j]]);
      }
      if (monomial == 0) continue;
      term = product * monomial;
      sums.unrestricted[i] += term;
      bucket[i] += term;
    }
  });
  return sums;
}

}  // namespace multisum
