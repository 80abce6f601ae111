#include "multisum/instance.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace multisum {

namespace {

constexpr std::array<std::string_view, 16> kIdentityNames = {
    "R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8", "U1", "U2", "U3", "U4", "U5", "U6", "U7", "U8"};

constexpr std::array<std::string_view, 6> kMomentSuffix = {"1", "2", "3", "11", "12", "111"};

AggregateTable zero_table() { return {}; }

}  // namespace

std::string_view to_string(IdentityLabel label) { return kIdentityNames[static_cast<std::size_t>(label)]; }

std::optional<IdentityLabel> parse_identity(std::string_view text) {
  for (std::size_t i = 0; i < kIdentityNames.size(); ++i) {
    if (kIdentityNames[i] == text) return static_cast<IdentityLabel>(i);
  }
  return std::nullopt;
}

std::string MomentLabel::name() const {
  std::string out = restricted ? "M" : "N";
  out += kMomentSuffix[static_cast<std::size_t>(kind)];
  out += '(';
  for (std::size_t j = 0; j < arity(kind); ++j) {
    if (j) out += ',';
    out += std::to_string(indices[j] + 1);
  }
  return out + ')';
}

void check_moment_label(const MomentLabel& label, std::size_t m) {
  const std::size_t count = arity(label.kind);
  for (std::size_t j = 0; j < count; ++j) {
    if (label.indices[j] >= m) {
      throw std::out_of_range(label.name() + ": index out of range for m = " + std::to_string(m));
    }
    for (std::size_t l = 0; l < j; ++l) {
      if (label.indices[l] == label.indices[j]) {
        throw std::out_of_range(label.name() + ": indices must be mutually distinct");
      }
    }
  }
}

std::vector<MomentLabel> all_moment_labels(std::size_t m, bool restricted) {
  std::vector<MomentLabel> out;
  for (const MomentKind kind : kAllMomentKinds) {
    const std::size_t k = arity(kind);
    if (k > m) continue;
    for (std::size_t p = 0; p < m; ++p) {
      for (std::size_t q = 0; q < (k >= 2 ? m : 1); ++q) {
        for (std::size_t r = 0; r < (k >= 3 ? m : 1); ++r) {
          if (k >= 2 && q == p) continue;
          if (k >= 3 && (r == p || r == q)) continue;
          out.push_back({kind, restricted, {p, q, r}});
        }
      }
    }
  }
  return out;
}

bool ProblemInstance::is_zero_instance() const {
  const std::size_t count = std::min(a.size(), c.size());
  for (std::size_t i = 0; i < count; ++i) {
    if (c[i] > a[i]) return true;
  }
  return false;
}

std::int64_t ProblemInstance::total_a() const { return std::accumulate(a.begin(), a.end(), std::int64_t{0}); }
std::int64_t ProblemInstance::total_c() const { return std::accumulate(c.begin(), c.end(), std::int64_t{0}); }

ProblemInstance ProblemInstance::with_n(std::optional<std::int64_t> value) const {
  ProblemInstance copy = *this;
  copy.n = value;
  return copy;
}

ProblemInstance ProblemInstance::with_x(std::vector<GaussianRational> weights) const {
  ProblemInstance copy = *this;
  copy.x = std::move(weights);
  return copy;
}

ProblemInstance ProblemInstance::with_y(std::optional<std::vector<GaussianRational>> weights) const {
  ProblemInstance copy = *this;
  copy.y = std::move(weights);
  return copy;
}

void ValidationReport::throw_if_invalid() const {
  if (ok()) return;
  std::ostringstream os;
  os << "invalid instance:";
  for (const auto& e : errors) os << ' ' << e << ';';
  throw StructuralError(os.str());
}

ValidationReport validate(const ProblemInstance& inst, std::optional<IdentityLabel> label) {
  ValidationReport report;
  if (inst.m < 1) report.errors.push_back("m must be >= 1");
  const auto expect_length = [&](std::string_view field, std::size_t length) {
    if (static_cast<std::int64_t>(length) != inst.m) {
      std::ostringstream os;
      os << "length of " << field << " is " << length << ", expected m = " << inst.m;
      report.errors.push_back(os.str());
    }
  };
  expect_length("a", inst.a.size());
  expect_length("c", inst.c.size());
  expect_length("x", inst.x.size());
  if (inst.y) expect_length("y", inst.y->size());

  const auto expect_nonnegative = [&](std::string_view field, const std::vector<std::int64_t>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] < 0) {
        std::ostringstream os;
        os << field << "[" << i + 1 << "] = " << values[i] << " is negative";
        report.errors.push_back(os.str());
      }
    }
  };
  expect_nonnegative("a", inst.a);
  expect_nonnegative("c", inst.c);
  if (inst.n && *inst.n < 0) report.errors.push_back("n = " + std::to_string(*inst.n) + " is negative");

  if (label) {
    if (is_restricted(*label) && !inst.n) {
      report.errors.push_back(std::string(to_string(*label)) + " is a restricted identity and needs n");
    }
    if (needs_y(*label) && !inst.y) {
      report.errors.push_back(std::string(to_string(*label)) + " needs the second weight vector y");
    }
  }
  report.zero_instance = inst.is_zero_instance();
  return report;
}

const GaussianRational& Aggregates::Astar(int p, int q) const {
  if (!astar_table_) throw StructuralError("starred aggregates need y");
  return astar_table_->at(p).at(q);
}

const GaussianRational& Aggregates::Cstar(int p, int q) const {
  if (!cstar_table_) throw StructuralError("starred aggregates need y");
  return cstar_table_->at(p).at(q);
}

Aggregates compute_aggregates(const ProblemInstance& inst) {
  validate(inst).throw_if_invalid();
  Aggregates agg;
  agg.a_table_ = zero_table();
  agg.c_table_ = zero_table();
  agg.s_table_ = zero_table();
  if (inst.y) {
    agg.astar_table_ = zero_table();
    agg.cstar_table_ = zero_table();
  }
  agg.a0_ = inst.total_a();
  agg.c0_ = inst.total_c();

  for (std::size_t i = 0; i < inst.size(); ++i) {
    std::array<GaussianRational, 4> x_pow{GaussianRational(1)};
    std::array<GaussianRational, 4> y_pow{GaussianRational(1)};
    std::array<Rational, 4> a_pow{Rational(1)}, c_pow{Rational(1)};
    for (std::size_t p = 1; p < 4; ++p) {
      x_pow[p] = x_pow[p - 1] * inst.x[i];
      if (inst.y) y_pow[p] = y_pow[p - 1] * (*inst.y)[i];
      a_pow[p] = a_pow[p - 1] * Rational(inst.a[i]);
      c_pow[p] = c_pow[p - 1] * Rational(inst.c[i]);
    }
    for (std::size_t p = 0; p < 4; ++p) {
      for (std::size_t q = 0; q < 4; ++q) {
        agg.a_table_[p][q] += x_pow[p] * a_pow[q];
        agg.c_table_[p][q] += x_pow[p] * c_pow[q];
        agg.s_table_[p][q] += inst.x[i] * (a_pow[p] * c_pow[q]);
        if (inst.y) {
          const GaussianRational xy = x_pow[p] * y_pow[q];
          (*agg.astar_table_)[p][q] += xy * a_pow[1];
          (*agg.cstar_table_)[p][q] += xy * c_pow[1];
        }
      }
    }
    const Rational norm = abs_squared(inst.x[i]);
    agg.a_abs_ += norm * a_pow[1];
    agg.c_abs_ += norm * c_pow[1];
  }
  return agg;
}

std::string_view to_string(WeightKind kind) { return kind == WeightKind::Rational ? "rational" : "gaussian"; }

std::optional<WeightKind> parse_weight_kind(std::string_view text) {
  if (text == "rational") return WeightKind::Rational;
  if (text == "gaussian") return WeightKind::Gaussian;
  return std::nullopt;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::int64_t SeededStream::uniform(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(engine_() % span);
}

GaussianRational SeededStream::weight(WeightKind kind) {
  const auto component = [this] {
    const std::int64_t num = uniform(-4, 4);
    const std::int64_t den = uniform(1, 4);
    return Rational(BigInt(static_cast<long>(num)), BigInt(static_cast<long>(den)));
  };
  Rational re = component();
  if (kind == WeightKind::Rational) return GaussianRational(std::move(re));
  Rational im = component();
  return {std::move(re), std::move(im)};
}

std::vector<GaussianRational> SeededStream::weights(std::size_t count, WeightKind kind) {
  std::vector<GaussianRational> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(weight(kind));
  return out;
}

ProblemInstance random_instance(std::uint64_t seed, const InstanceBounds& bounds) {
  if (bounds.m_max < 1 || bounds.a_max < 0) throw std::invalid_argument("random_instance: bad bounds");
  SeededStream stream(seed);
  ProblemInstance inst;
  inst.m = stream.uniform(1, bounds.m_max);
  for (std::int64_t i = 0; i < inst.m; ++i) {
    const std::int64_t a = stream.uniform(0, bounds.a_max);
    const bool over_range = stream.uniform(0, 7) == 0;
    const std::int64_t c = over_range ? a + 1 : stream.uniform(0, a);
    inst.a.push_back(a);
    inst.c.push_back(c);
  }
  inst.n = stream.uniform(0, inst.total_a() + 1);
  const auto count = static_cast<std::size_t>(inst.m);
  inst.x = stream.weights(count, bounds.weight_kind);
  inst.y = stream.weights(count, bounds.weight_kind);
  return inst;
}

}  // namespace multisum
