#include "multisum/campaign.hpp"

#include <array>
#include <atomic>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "multisum/enumeration.hpp"

namespace multisum {

std::string_view to_string(Strategy strategy) {
  return strategy == Strategy::Literal ? "literal" : "moments";
}

std::optional<Strategy> parse_strategy(std::string_view text) {
  if (text == "literal") return Strategy::Literal;
  if (text == "moments" || text == "moment" || text == "absorption") return Strategy::Moments;
  return std::nullopt;
}

void CampaignConfig::check() const {
  if (identities.empty()) throw std::invalid_argument("campaign needs at least one identity");
  if (strategies.empty()) throw std::invalid_argument("campaign needs at least one strategy");
  if (m_max < 1) throw std::invalid_argument("m_max must be >= 1");
  if (a_max < 0) throw std::invalid_argument("a_max must be >= 0");
  if (random_count < 1) throw std::invalid_argument("random_count must be >= 1");
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
}

// ---------------------------------------------------------------------------
// Records

bool VerificationRecord::degenerate() const {
  return std::any_of(outcomes.begin(), outcomes.end(), [](const StrategyOutcome& o) { return o.degenerate; });
}

bool VerificationRecord::passed() const {
  if (error || outcomes.empty()) return false;
  bool any_match = false;
  for (const auto& o : outcomes) {
    if (o.degenerate) continue;
    if (!o.match) return false;
    any_match = true;
  }
  return any_match;
}

Json VerificationRecord::to_json() const {
  Json out = Json::object();
  out["identity"] = std::string(multisum::to_string(identity));
  out["grid"] = grid_index;
  out["weight"] = weight_index;
  Json echo = multisum::to_json(*instance);
  if (n) {
    Json with_n = Json::object();
    for (auto it = echo.begin(); it != echo.end(); ++it) {
      with_n[it.key()] = it.value();
      if (it.key() == "m") with_n["n"] = *n;
    }
    echo = std::move(with_n);
  }
  out["instance"] = std::move(echo);
  if (error) {
    out["error"] = *error;
  } else {
    out["lhs"] = multisum::to_json(lhs);
    Json rhs = Json::object();
    Json match = Json::object();
    for (const auto& o : outcomes) {
      rhs[o.name] = o.rhs ? multisum::to_json(*o.rhs) : Json(nullptr);
      match[o.name] = o.match;
    }
    out["rhs"] = std::move(rhs);
    out["match"] = std::move(match);
  }
  out["degenerate"] = degenerate();
  out["zero_instance"] = zero_instance;
  out["elapsed_us"] = elapsed_us;
  return out;
}

Json CampaignSummary::to_json() const {
  Json out = Json::object();
  out["summary"] = true;
  out["grid_points"] = grid_points;
  out["records"] = records;
  out["passed"] = passed;
  out["mismatches"] = mismatches;
  out["degenerate"] = degenerate;
  out["zero_instances"] = zero_instances;
  out["structural_errors"] = structural_errors;
  Json by_identity = Json::object();
  for (const auto& [label, count] : mismatches_by_identity) by_identity[label] = count;
  out["mismatches_by_identity"] = std::move(by_identity);
  out["stopped_early"] = stopped_early;
  out["ok"] = ok();
  out["elapsed_ms"] = elapsed_ms;
  return out;
}

// ---------------------------------------------------------------------------
// Grid

std::vector<GridPoint> campaign_grid(std::int64_t m_max, std::int64_t a_max) {
  std::vector<GridPoint> grid;
  for (std::int64_t m = 1; m <= m_max; ++m) {
    BoxCursor a_cursor(std::vector<std::int64_t>(static_cast<std::size_t>(m), a_max));
    while (a_cursor.next()) {
      std::vector<std::int64_t> a(a_cursor.current().begin(), a_cursor.current().end());
      std::vector<std::int64_t> c_caps = a;
      for (auto& cap : c_caps) cap += 1;
      BoxCursor c_cursor(c_caps);
      while (c_cursor.next()) grid.push_back({a, {c_cursor.current().begin(), c_cursor.current().end()}});
    }
  }
  return grid;
}

ProblemInstance seeded_instance(const GridPoint& point, std::uint64_t seed, std::size_t grid_index,
                                std::size_t weight_index, WeightKind kind) {
  SeededStream stream(mix_seed(mix_seed(seed, grid_index), weight_index));
  ProblemInstance inst;
  inst.m = static_cast<std::int64_t>(point.a.size());
  inst.a = point.a;
  inst.c = point.c;
  inst.x = stream.weights(point.a.size(), kind);
  inst.y = stream.weights(point.a.size(), kind);
  return inst;
}

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t micros_since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start).count();
}

/// Precomputed pieces shared by every identity of one instance.
struct Context {
  const MomentTable* restricted_table = nullptr;
  const MomentTable* unrestricted_table = nullptr;
  const Aggregates* aggregates = nullptr;
  const MomentExpansion* expansion = nullptr;
};

StrategyOutcome outcome(std::string name, GaussianRational rhs, const GaussianRational& lhs) {
  StrategyOutcome o;
  o.name = std::move(name);
  o.match = rhs == lhs;
  o.rhs = std::move(rhs);
  return o;
}

void fill_outcomes(VerificationRecord& record, const ProblemInstance& inst, const std::vector<Strategy>& strategies,
                   const EvalOptions& opts, const Context& ctx) {
  const IdentityLabel label = record.identity;
  const bool restricted = is_restricted(label);
  const auto moments = [&] {
    const MomentTable* table = restricted ? ctx.restricted_table : ctx.unrestricted_table;
    if (table && ctx.expansion) return ctx.expansion->evaluate(*table);
    return table ? rhs_by_moments(label, inst, *table, opts) : rhs_by_moments(label, inst, opts);
  };
  bool literal_degenerate = false;
  bool moments_done = false;
  for (const Strategy strategy : strategies) {
    if (strategy == Strategy::Literal) {
      try {
        GaussianRational rhs = ctx.aggregates ? rhs_literal(label, inst, *ctx.aggregates, opts)
                                              : rhs_literal(label, inst, opts);
        record.outcomes.push_back(outcome("literal", std::move(rhs), record.lhs));
      } catch (const DegenerateDenominator&) {
        StrategyOutcome o;
        o.name = "literal";
        o.degenerate = true;
        record.outcomes.push_back(std::move(o));
        literal_degenerate = true;
      }
    } else {
      record.outcomes.push_back(outcome("moments", moments(), record.lhs));
      moments_done = true;
    }
  }
  // A degenerate literal form is only excused by a matching total strategy.
  if (literal_degenerate && !moments_done) record.outcomes.push_back(outcome("moments", moments(), record.lhs));
  if (!restricted) {
    GaussianRational rhs = ctx.aggregates && ctx.unrestricted_table
                               ? rhs_unrestricted(label, inst, *ctx.aggregates, *ctx.unrestricted_table, opts)
                               : rhs_unrestricted(label, inst, opts);
    record.outcomes.push_back(outcome("unrestricted", std::move(rhs), record.lhs));
  }
}

}  // namespace

VerificationRecord verify_instance(IdentityLabel label, const ProblemInstance& inst,
                                   const std::vector<Strategy>& strategies, const EvalOptions& opts) {
  const auto start = Clock::now();
  VerificationRecord record;
  record.identity = label;
  ProblemInstance echo = inst;
  record.n = is_restricted(label) ? inst.n : std::nullopt;
  echo.n.reset();
  record.instance = std::make_shared<const ProblemInstance>(std::move(echo));
  try {
    const ValidationReport report = validate(inst, label);
    report.throw_if_invalid();
    record.zero_instance = report.zero_instance;
    record.lhs = brute_force_lhs(label, inst);
    fill_outcomes(record, inst, strategies, opts, {});
  } catch (const StructuralError& e) {
    record.error = e.what();
  }
  record.elapsed_us = micros_since(start);
  return record;
}

namespace {

/// Every record of one grid point, in campaign order.
std::vector<VerificationRecord> process_point(const CampaignConfig& config, const GridPoint& point,
                                              std::size_t grid_index) {
  std::vector<VerificationRecord> records;
  const bool any_restricted = std::any_of(config.identities.begin(), config.identities.end(), is_restricted);
  const bool any_unrestricted =
      std::any_of(config.identities.begin(), config.identities.end(), [](IdentityLabel l) { return !is_restricted(l); });

  ProblemInstance shape;
  shape.m = static_cast<std::int64_t>(point.a.size());
  shape.a = point.a;
  shape.c = point.c;
  shape.x.assign(point.a.size(), GaussianRational(0));
  const std::int64_t n_max = shape.total_a() + 1;
  const bool zero_instance = shape.is_zero_instance();

  // Weight-independent tables, built once per grid point.
  std::vector<MomentTable> restricted_tables;
  if (any_restricted) {
    for (std::int64_t n = 0; n <= n_max; ++n) {
      restricted_tables.push_back(MomentTable::build(shape.with_n(n), true, config.eval));
    }
  }
  std::optional<MomentTable> unrestricted_table;
  if (any_unrestricted) unrestricted_table = MomentTable::build(shape, false, config.eval);

  for (std::size_t w = 0; w < config.random_count; ++w) {
    auto base = std::make_shared<const ProblemInstance>(
        seeded_instance(point, config.seed, grid_index, w, config.weight_kind));
    const FormSums oracle = brute_force_all_forms(*base);
    // Zero-instances short-circuit before touching aggregates.
    std::optional<Aggregates> aggregates;
    if (!zero_instance) aggregates = compute_aggregates(*base);
    std::array<std::optional<MomentExpansion>, 8> expansions;
    ProblemInstance work = *base;

    const auto emit = [&](IdentityLabel label, std::optional<std::int64_t> n) {
      const auto start = Clock::now();
      VerificationRecord record;
      record.identity = label;
      record.grid_index = grid_index;
      record.weight_index = w;
      record.instance = base;
      record.n = n;
      record.zero_instance = zero_instance;
      work.n = n;
      Context ctx;
      if (aggregates) ctx.aggregates = &*aggregates;
      auto& expansion = expansions[static_cast<std::size_t>(weight_form(label))];
      if (!expansion) expansion = MomentExpansion::build(label, *base, config.eval);
      ctx.expansion = &*expansion;
      if (n) {
        ctx.restricted_table = &restricted_tables[static_cast<std::size_t>(*n)];
        record.lhs = oracle.restricted(weight_form(label), *n);
      } else {
        ctx.unrestricted_table = &*unrestricted_table;
        record.lhs = oracle.unrestricted[static_cast<std::size_t>(weight_form(label))];
      }
      try {
        fill_outcomes(record, work, config.strategies, config.eval, ctx);
      } catch (const StructuralError& e) {
        record.error = e.what();
      }
      record.elapsed_us = micros_since(start);
      records.push_back(std::move(record));
    };

    for (const IdentityLabel label : config.identities) {
      if (is_restricted(label)) {
        for (std::int64_t n = 0; n <= n_max; ++n) emit(label, n);
      } else {
        emit(label, std::nullopt);
      }
    }
  }
  return records;
}

}  // namespace

CampaignSummary run_campaign(const CampaignConfig& config, const RecordSink& sink) {
  config.check();
  const auto start = Clock::now();
  const std::vector<GridPoint> grid = campaign_grid(config.m_max, config.a_max);

  CampaignSummary summary;
  std::mutex mutex;
  std::vector<std::optional<std::vector<VerificationRecord>>> slots(grid.size());
  std::size_t emit_next = 0;
  std::atomic<std::size_t> next_point{0};
  std::atomic<bool> stop{false};
  std::exception_ptr failure;

  // Called with the mutex held: hands finished points to the sink in order.
  const auto deliver = [&] {
    while (emit_next < slots.size() && slots[emit_next]) {
      for (const auto& record : *slots[emit_next]) {
        ++summary.records;
        if (record.zero_instance) ++summary.zero_instances;
        if (record.degenerate()) ++summary.degenerate;
        if (record.error) {
          ++summary.structural_errors;
        } else if (record.passed()) {
          ++summary.passed;
        } else {
          ++summary.mismatches;
          ++summary.mismatches_by_identity[std::string(to_string(record.identity))];
        }
        if (sink) sink(record);
      }
      slots[emit_next].reset();
      ++summary.grid_points;
      ++emit_next;
    }
    if (config.fail_fast && !summary.ok()) stop = true;
  };

  const auto worker = [&] {
    while (!stop) {
      const std::size_t g = next_point++;
      if (g >= grid.size()) return;
      try {
        auto records = process_point(config, grid[g], g);
        std::lock_guard lock(mutex);
        slots[g] = std::move(records);
        deliver();
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
        stop = true;
        return;
      }
    }
  };

  if (config.jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < config.jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  summary.stopped_early = emit_next < grid.size();
  summary.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
  return summary;
}

}  // namespace multisum
