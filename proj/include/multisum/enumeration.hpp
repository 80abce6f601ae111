// Ground truth by direct enumeration. Nothing here may depend on the closed
// forms: this module is the independent side of every equivalence check.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "multisum/exact.hpp"
#include "multisum/instance.hpp"

namespace multisum {

/// Capped compositions k_1 + ... + k_m = n with 0 <= k_i <= caps_i, in
/// lexicographic order. Prefixes that cannot be completed are never visited.
///
///   CompositionCursor cur(n, caps);
///   while (cur.next()) use(cur.current());
class CompositionCursor {
 public:
  CompositionCursor(std::int64_t n, std::vector<std::int64_t> caps);

  /// Advances to the next tuple; false once exhausted.
  bool next();
  std::span<const std::int64_t> current() const { return k_; }

 private:
  void fill_from(std::size_t position, std::int64_t remaining);

  std::int64_t target_;
  std::vector<std::int64_t> caps_;
  std::vector<std::int64_t> suffix_caps_;  // suffix_caps_[i] = caps_[i] + ... + caps_[m-1]
  std::vector<std::int64_t> k_;
  bool started_ = false;
  bool done_ = false;
};

/// Every tuple of the box 0 <= k_i <= caps_i, lexicographically.
class BoxCursor {
 public:
  explicit BoxCursor(std::vector<std::int64_t> caps);

  bool next();
  std::span<const std::int64_t> current() const { return k_; }

 private:
  std::vector<std::int64_t> caps_;
  std::vector<std::int64_t> k_;
  bool started_ = false;
  bool done_ = false;
};

/// All tuples at once, for tests and small inspections.
std::vector<std::vector<std::int64_t>> enumerate_compositions(std::int64_t n, const std::vector<std::int64_t>& caps);
std::vector<std::vector<std::int64_t>> enumerate_box(const std::vector<std::int64_t>& caps);

/// Rows 0..max_top of Pascal's triangle.
class PascalTable {
 public:
  explicit PascalTable(std::int64_t max_top);
  /// C(t, k) for 0 <= t <= max_top; zero when k is out of range.
  const BigInt& operator()(std::int64_t t, std::int64_t k) const;

 private:
  std::int64_t max_top_;
  std::vector<std::vector<BigInt>> rows_;
  BigInt zero_;
};

/// The label's weight at tuple k. Throws StructuralError for R5/U5 without y.
GaussianRational evaluate_weight(IdentityLabel label, std::span<const std::int64_t> k, const ProblemInstance& inst);

/// Sum over the label's domain of prod C(a_i, k_i) C(k_i, c_i) times the
/// weight: capped compositions of n for R-labels, the full box for U-labels.
GaussianRational brute_force_lhs(IdentityLabel label, const ProblemInstance& inst);

/// The same sum with the monomial of a moment as the weight.
Rational brute_force_moment(const MomentLabel& label, const ProblemInstance& inst);

/// All eight weight forms from a single walk over the box, indexed by
/// WeightForm. Restricted sums are bucketed by the tuple total.
struct FormSums {
  std::array<GaussianRational, 8> unrestricted;
  std::vector<std::array<GaussianRational, 8>> by_total;  // index n = 0..sum a

  /// Zero for totals outside 0..sum a.
  GaussianRational restricted(WeightForm form, std::int64_t n) const;
};

/// Needs y (the Mixed form uses it).
FormSums brute_force_all_forms(const ProblemInstance& inst);

/// Every moment monomial from a single walk over the box.
struct MomentSums {
  std::vector<MomentLabel> labels;                 // all_moment_labels(m, false)
  std::vector<BigInt> unrestricted;                // per label
  std::vector<std::vector<BigInt>> by_total;       // [n][label], n = 0..sum a

  /// The restricted sum at n when label.restricted, else the unrestricted
  /// one. Zero for n outside 0..sum a. Throws std::out_of_range for labels
  /// not valid for this m.
  Rational value(const MomentLabel& label, std::optional<std::int64_t> n = std::nullopt) const;
};

MomentSums brute_force_all_moments(const ProblemInstance& inst);

}  // namespace multisum
