// Problem instances, their aggregate statistics, and the closed catalogs of
// identities and moments.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "multisum/exact.hpp"

namespace multisum {

/// Thrown for malformed instances (length mismatches, negative entries,
/// missing y or n where the identity needs them).
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Identity catalog

enum class IdentityLabel { R1, R2, R3, R4, R5, R6, R7, R8, U1, U2, U3, U4, U5, U6, U7, U8 };

/// The summand weight shared by R_j and U_j.
enum class WeightForm {
  Unit,          // 1
  Linear,        // sum x_i k_i
  Square,        // (sum x_i k_i)^2
  AbsSquare,     // |sum x_i k_i|^2
  Mixed,         // (sum x_i k_i)(sum y_i k_i)
  LinearSquare,  // sum x_i k_i^2
  Cube,          // (sum x_i k_i)^3
  LinearCube,    // sum x_i k_i^3
};

inline constexpr std::array<IdentityLabel, 16> kAllIdentities = {
    IdentityLabel::R1, IdentityLabel::R2, IdentityLabel::R3, IdentityLabel::R4,
    IdentityLabel::R5, IdentityLabel::R6, IdentityLabel::R7, IdentityLabel::R8,
    IdentityLabel::U1, IdentityLabel::U2, IdentityLabel::U3, IdentityLabel::U4,
    IdentityLabel::U5, IdentityLabel::U6, IdentityLabel::U7, IdentityLabel::U8};

constexpr bool is_restricted(IdentityLabel label) {
  return static_cast<int>(label) < static_cast<int>(IdentityLabel::U1);
}
constexpr WeightForm weight_form(IdentityLabel label) {
  return static_cast<WeightForm>(static_cast<int>(label) % 8);
}
/// Polynomial degree of the weight in k.
constexpr unsigned weight_degree(WeightForm form) {
  constexpr std::array<unsigned, 8> degrees = {0, 1, 2, 2, 2, 2, 3, 3};
  return degrees[static_cast<std::size_t>(form)];
}
constexpr bool needs_y(IdentityLabel label) { return weight_form(label) == WeightForm::Mixed; }
constexpr IdentityLabel restricted_label(WeightForm form) {
  return static_cast<IdentityLabel>(static_cast<int>(form));
}
constexpr IdentityLabel unrestricted_label(WeightForm form) {
  return static_cast<IdentityLabel>(static_cast<int>(form) + 8);
}

std::string_view to_string(IdentityLabel label);
std::optional<IdentityLabel> parse_identity(std::string_view text);

// ---------------------------------------------------------------------------
// Moment catalog

/// Monomials in the summation indices: k_p, k_p^2, k_p^3, k_p k_q,
/// k_p k_q^2 and k_p k_q k_r with mutually distinct indices.
enum class MomentKind { P1, P2, P3, P11, P12, P111 };

inline constexpr std::array<MomentKind, 6> kAllMomentKinds = {
    MomentKind::P1, MomentKind::P2, MomentKind::P3, MomentKind::P11, MomentKind::P12, MomentKind::P111};

constexpr std::size_t arity(MomentKind kind) {
  switch (kind) {
    case MomentKind::P1:
    case MomentKind::P2:
    case MomentKind::P3: return 1;
    case MomentKind::P11:
    case MomentKind::P12: return 2;
    case MomentKind::P111: return 3;
  }
  return 0;
}

/// Restricted moments print as M1..M111, unrestricted as N1..N111.
/// Indices are zero-based in code and one-based when printed.
struct MomentLabel {
  MomentKind kind = MomentKind::P1;
  bool restricted = true;
  std::array<std::size_t, 3> indices{};

  std::string name() const;
  friend bool operator==(const MomentLabel&, const MomentLabel&) = default;
};

/// Throws std::out_of_range when indices are not mutually distinct or not
/// below m.
void check_moment_label(const MomentLabel& label, std::size_t m);

/// Every moment label for m coordinates: each kind with every ordered tuple
/// of mutually distinct indices. Kinds needing more indices than m are absent.
std::vector<MomentLabel> all_moment_labels(std::size_t m, bool restricted);

// ---------------------------------------------------------------------------
// Instances

struct ProblemInstance {
  std::int64_t m = 0;
  std::optional<std::int64_t> n;
  std::vector<std::int64_t> a;
  std::vector<std::int64_t> c;
  std::vector<GaussianRational> x;
  std::optional<std::vector<GaussianRational>> y;

  std::size_t size() const { return a.size(); }
  /// Some c_i > a_i: every summand, hence both sides, vanish.
  bool is_zero_instance() const;
  std::int64_t total_a() const;
  std::int64_t total_c() const;

  ProblemInstance with_n(std::optional<std::int64_t> value) const;
  ProblemInstance with_x(std::vector<GaussianRational> weights) const;
  ProblemInstance with_y(std::optional<std::vector<GaussianRational>> weights) const;

  friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;
};

struct ValidationReport {
  std::vector<std::string> errors;
  bool zero_instance = false;

  bool ok() const { return errors.empty(); }
  /// Throws StructuralError listing every error.
  void throw_if_invalid() const;
};

/// Structural checks; `label` adds the identity-specific requirements
/// (n for restricted labels, y for R5/U5).
ValidationReport validate(const ProblemInstance& inst, std::optional<IdentityLabel> label = std::nullopt);

// ---------------------------------------------------------------------------
// Aggregates

using AggregateTable = std::array<std::array<GaussianRational, 4>, 4>;

/// A_{p,q} = sum x^p a^q, A*_{p,q} = sum x^p y^q a, Aabs = sum |x|^2 a,
/// the same C-family over c, and S_{p,q} = sum x a^p c^q; p, q in 0..3.
class Aggregates {
 public:
  const GaussianRational& A(int p, int q) const { return a_table_.at(p).at(q); }
  const GaussianRational& A(int p) const { return A(p, 1); }
  const GaussianRational& C(int p, int q) const { return c_table_.at(p).at(q); }
  const GaussianRational& C(int p) const { return C(p, 1); }
  const GaussianRational& S(int p, int q) const { return s_table_.at(p).at(q); }
  /// Starred values throw StructuralError when the instance has no y.
  const GaussianRational& Astar(int p, int q) const;
  const GaussianRational& Astar(int p) const { return Astar(0, p); }
  const GaussianRational& Cstar(int p, int q) const;
  const GaussianRational& Cstar(int p) const { return Cstar(0, p); }
  bool has_starred() const { return astar_table_.has_value(); }
  const Rational& Aabs() const { return a_abs_; }
  const Rational& Cabs() const { return c_abs_; }
  std::int64_t A0() const { return a0_; }
  std::int64_t C0() const { return c0_; }

  friend Aggregates compute_aggregates(const ProblemInstance& inst);

 private:
  AggregateTable a_table_, c_table_, s_table_;
  std::optional<AggregateTable> astar_table_, cstar_table_;
  Rational a_abs_, c_abs_;
  std::int64_t a0_ = 0, c0_ = 0;
};

Aggregates compute_aggregates(const ProblemInstance& inst);

// ---------------------------------------------------------------------------
// Seeded generation
//
// Draw order for random_instance: m, then (a_i, c_i) per coordinate, then n,
// then x_i (re, im) per coordinate, then y_i likewise. A weight component is
// num/den with num uniform in [-4, 4] and den uniform in [1, 4]; real weights
// skip the imaginary draw.

enum class WeightKind { Rational, Gaussian };

std::string_view to_string(WeightKind kind);
std::optional<WeightKind> parse_weight_kind(std::string_view text);

/// splitmix64 finalizer; derives child seeds from (campaign seed, index).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

class SeededStream {
 public:
  explicit SeededStream(std::uint64_t seed) : engine_(seed) {}
  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  GaussianRational weight(WeightKind kind);
  std::vector<GaussianRational> weights(std::size_t count, WeightKind kind);

 private:
  std::mt19937_64 engine_;
};

struct InstanceBounds {
  std::int64_t m_max = 3;
  std::int64_t a_max = 4;
  WeightKind weight_kind = WeightKind::Gaussian;
};

/// Deterministic for a given seed. Always fills n and y.
ProblemInstance random_instance(std::uint64_t seed, const InstanceBounds& bounds);

}  // namespace multisum
