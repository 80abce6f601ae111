// Right-hand sides: the printed identity formulas, the moment closed forms,
// and the moment decomposition that rebuilds every identity from moments.
//
// Restricted moments are evaluated in absorption form,
//
//   prod C(a_i, c_i) * sum_J L_J * C(A0 - C0 - J, n - C0 - J),
//
// where the layer polynomial L is the product of one residue expansion per
// index of the moment. The layers never divide, so they stay defined when
// A0 - C0 is smaller than the moment degree and the printed ratio forms are
// 0/0. Unrestricted moments are products of per-coordinate sums.
#pragma once

#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "multisum/exact.hpp"
#include "multisum/instance.hpp"

namespace multisum {

/// The printed formula divides by a vanishing falling factorial of A0 - C0.
class DegenerateDenominator : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Named closed-form coefficients that can be perturbed (doubled) to prove
/// the verification harness is able to fail.
enum class Coefficient {
  Base,            // C(A0 - C0, n - C0) prod C(a_i, c_i)
  ResquadD,        // first-order residue, (a - c) layer
  ResquadC,        // first-order residue, c layer
  SecondDD,        // second-derivative residue, (a-c)(a-c-1)
  SecondDC,        // 2 (a-c) c
  SecondCC,        // c (c-1)
  ThirdDDD,        // third-derivative residue, (a-c)(a-c-1)(a-c-2)
  ThirdDDC,        // 3 (a-c)(a-c-1) c
  ThirdDCC,        // 3 (a-c) c (c-1)
  ThirdCCC,        // c (c-1)(c-2)
  CubeSeries,      // the 6 w^2/(1-w)^3 term of sum k^3 w^k
  Simple1Sum,      // (a + c) in the unrestricted first moment
  Simple2Diff,     // (a - c) in the unrestricted second moment
  Simple3Diff,     // 3 (a - c) in the unrestricted third moment
  ExpandPair,      // multiplicity 3 of k_p k_q^2 in the cube expansion
  R2C1,            // (A0 - n) C1 in R2
  R3Cross,         // 2 A1 C1 in R3
  R4Cross,         // A1 conj(C1) + conj(A1) C1 in R4
  R5Cross,         // A1 C1* + A1* C1 in R5
  R6S11,           // 2 S11 in R6
  R7Three,         // 3 A1 (...) in R7
  R8Three,         // 3 (S21 + A12 - S11) in R8
  U1Power,         // 2^(A0 - C0) in U1
  U2C1,            // C1 in U2
  U3Diff,          // A2 - C2 in U3
  U4Diff,          // Aabs - Cabs in U4
  U5Diff,          // A*11 - C*11 in U5
  U6S11,           // 2 S11 in U6
  U7Three,         // 3 (A2 - C2) in U7
  U8Three,         // 3 (...) in U8
};

inline constexpr std::size_t kCoefficientCount = static_cast<std::size_t>(Coefficient::U8Three) + 1;

std::string_view to_string(Coefficient id);
std::optional<Coefficient> parse_coefficient(std::string_view text);
std::vector<Coefficient> all_coefficients();

struct EvalOptions {
  std::optional<Coefficient> mutate;

  /// 2 when `id` is the mutated coefficient, 1 otherwise.
  long factor(Coefficient id) const { return mutate == id ? 2 : 1; }
};

struct MomentResult {
  Rational value;
  MomentLabel label;
};

/// Degree of the denominator falling factorial in the printed formula.
unsigned literal_degree(IdentityLabel label);
/// True when rhs_literal would throw DegenerateDenominator.
bool literal_is_degenerate(IdentityLabel label, const ProblemInstance& inst);

/// The printed formula for any of the sixteen identities. Zero-instances
/// return 0 before any arithmetic. Restricted labels throw
/// DegenerateDenominator when (A0 - C0)^(falling d) vanishes; unrestricted
/// labels use exact rational powers of two and never throw.
GaussianRational rhs_literal(IdentityLabel label, const ProblemInstance& inst, const EvalOptions& opts = {});
GaussianRational rhs_literal(IdentityLabel label, const ProblemInstance& inst, const Aggregates& agg,
                             const EvalOptions& opts = {});

/// Total evaluator for U-labels: the printed form when A0 - C0 >= degree,
/// the per-coordinate product form otherwise.
GaussianRational rhs_unrestricted(IdentityLabel label, const ProblemInstance& inst, const EvalOptions& opts = {});
class MomentTable;
/// Same, reusing this instance's aggregates and unrestricted moment table.
GaussianRational rhs_unrestricted(IdentityLabel label, const ProblemInstance& inst, const Aggregates& agg,
                                  const MomentTable& table, const EvalOptions& opts = {});

/// Residue-expansion layers of one coordinate raised to `power` (0..3):
/// entry j multiplies C(A0 - C0 - j, n - C0 - j).
std::vector<BigInt> coordinate_layers(unsigned power, std::int64_t a, std::int64_t c, const EvalOptions& opts = {});

MomentResult moment_restricted(const MomentLabel& label, const ProblemInstance& inst, const EvalOptions& opts = {});
MomentResult moment_unrestricted(const MomentLabel& label, const ProblemInstance& inst, const EvalOptions& opts = {});

/// The restricted moments in their printed ratio form. Throws
/// DegenerateDenominator where the absorption form must be used instead.
Rational moment_restricted_printed(const MomentLabel& label, const ProblemInstance& inst);

/// Base sums: C(A0-C0, n-C0) prod C(a_i,c_i), or 2^(A0-C0) prod C(a_i,c_i).
Rational base_sum(const ProblemInstance& inst, bool restricted, const EvalOptions& opts = {});

/// Every moment an identity of degree <= 3 can need, for one (a, c, n).
/// Weight-independent, so one table serves any number of weight vectors.
class MomentTable {
 public:
  static MomentTable build(const ProblemInstance& inst, bool restricted, const EvalOptions& opts = {});

  bool restricted() const { return restricted_; }
  std::size_t size() const { return m_; }
  /// Same a, c (and n when restricted).
  bool matches(const ProblemInstance& inst) const;

  const Rational& base() const { return base_; }
  const Rational& p1(std::size_t p) const { return p1_[p]; }
  const Rational& p2(std::size_t p) const { return p2_[p]; }
  const Rational& p3(std::size_t p) const { return p3_[p]; }
  const Rational& p11(std::size_t p, std::size_t q) const { return p11_[p * m_ + q]; }
  const Rational& p12(std::size_t p, std::size_t q) const { return p12_[p * m_ + q]; }
  const Rational& p111(std::size_t p, std::size_t q, std::size_t r) const { return p111_[(p * m_ + q) * m_ + r]; }

 private:
  bool restricted_ = true;
  std::size_t m_ = 0;
  std::vector<std::int64_t> a_, c_;
  std::optional<std::int64_t> n_;
  Rational base_;
  std::vector<Rational> p1_, p2_, p3_, p11_, p12_, p111_;
};

/// The weight half of the moment decomposition: one coefficient per moment
/// of a MomentTable, so that rhs = sum coefficient * moment. Depends on x
/// (and y) but not on n, so one expansion serves every n and both the
/// restricted and unrestricted tables.
class MomentExpansion {
 public:
  static MomentExpansion build(IdentityLabel label, const ProblemInstance& inst, const EvalOptions& opts = {});
  GaussianRational evaluate(const MomentTable& table) const;
  WeightForm form() const { return form_; }

 private:
  WeightForm form_ = WeightForm::Unit;
  std::size_t m_ = 0;
  GaussianRational base_;
  std::vector<GaussianRational> p1_, p2_, p3_, p11_, p12_, p111_;
};

/// Expands the label's weight into moments over mutually distinct indices
/// and sums their closed forms. Total on every valid instance.
GaussianRational rhs_by_moments(IdentityLabel label, const ProblemInstance& inst, const EvalOptions& opts = {});
/// Same, reusing a table built for this instance's (a, c, n).
GaussianRational rhs_by_moments(IdentityLabel label, const ProblemInstance& inst, const MomentTable& table,
                                const EvalOptions& opts = {});

/// R4/U4 as (R3 at re(x)) + (R3 at im(x)), or the U3 analogue.
GaussianRational rhs_abs_squared(IdentityLabel label, const ProblemInstance& inst, const EvalOptions& opts = {});

}  // namespace multisum
