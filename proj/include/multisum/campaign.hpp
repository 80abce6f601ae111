// Verification campaigns: every (m, a, c) grid point crossed with seeded
// weight vectors, each identity's right side checked against the oracle.
//
// Records come out in grid order whatever the worker count: grid point,
// then weight index, then identity (R-labels once per n = 0..sum a + 1).
#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "multisum/closed_form.hpp"
#include "multisum/instance.hpp"
#include "multisum/serialize.hpp"

namespace multisum {

enum class Strategy { Literal, Moments };

std::string_view to_string(Strategy strategy);
std::optional<Strategy> parse_strategy(std::string_view text);

struct CampaignConfig {
  std::vector<IdentityLabel> identities{kAllIdentities.begin(), kAllIdentities.end()};
  std::int64_t m_max = 3;
  std::int64_t a_max = 4;
  WeightKind weight_kind = WeightKind::Gaussian;
  std::uint64_t seed = 1;
  std::size_t random_count = 25;
  std::vector<Strategy> strategies{Strategy::Literal, Strategy::Moments};
  std::size_t jobs = 1;
  EvalOptions eval;
  /// Stop handing out grid points after the first mismatch.
  bool fail_fast = false;

  /// Throws std::invalid_argument.
  void check() const;
};

/// One right-hand side. `rhs` is empty when the literal form is degenerate.
struct StrategyOutcome {
  std::string name;  // "literal", "moments" or "unrestricted"
  std::optional<GaussianRational> rhs;
  bool degenerate = false;
  bool match = false;
};

struct VerificationRecord {
  IdentityLabel identity = IdentityLabel::R1;
  std::size_t grid_index = 0;
  std::size_t weight_index = 0;
  std::shared_ptr<const ProblemInstance> instance;  // n unset; see `n`
  std::optional<std::int64_t> n;
  GaussianRational lhs;
  std::vector<StrategyOutcome> outcomes;
  bool zero_instance = false;
  std::optional<std::string> error;
  std::int64_t elapsed_us = 0;

  bool degenerate() const;
  /// Every computed strategy matches, and a degenerate literal form is
  /// covered by a matching total strategy.
  bool passed() const;
  Json to_json() const;
};

struct CampaignSummary {
  std::size_t grid_points = 0;
  std::size_t records = 0;
  std::size_t passed = 0;
  std::size_t mismatches = 0;
  std::size_t degenerate = 0;
  std::size_t zero_instances = 0;
  std::size_t structural_errors = 0;
  std::map<std::string, std::size_t> mismatches_by_identity;
  bool stopped_early = false;
  std::int64_t elapsed_ms = 0;

  bool ok() const { return mismatches == 0 && structural_errors == 0; }
  Json to_json() const;
};

using RecordSink = std::function<void(const VerificationRecord&)>;

/// (m, a, c) for every grid point, in campaign order.
struct GridPoint {
  std::vector<std::int64_t> a;
  std::vector<std::int64_t> c;
};
std::vector<GridPoint> campaign_grid(std::int64_t m_max, std::int64_t a_max);

/// Weight vectors x and y of one (grid point, weight index).
ProblemInstance seeded_instance(const GridPoint& point, std::uint64_t seed, std::size_t grid_index,
                                std::size_t weight_index, WeightKind kind);

/// Checks one identity on one instance against the oracle. The instance
/// must carry n for R-labels.
VerificationRecord verify_instance(IdentityLabel label, const ProblemInstance& inst,
                                   const std::vector<Strategy>& strategies, const EvalOptions& opts = {});

/// Runs the campaign, handing records to `sink` in grid order.
CampaignSummary run_campaign(const CampaignConfig& config, const RecordSink& sink = {});

}  // namespace multisum
