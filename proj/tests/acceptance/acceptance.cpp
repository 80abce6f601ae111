// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance <path to the multisum CLI> <scratch directory>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "multisum/campaign.hpp"
#include "multisum/closed_form.hpp"
#include "multisum/enumeration.hpp"
#include "multisum/residue.hpp"

namespace {

using namespace multisum;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Counts checks and keeps the first few failure descriptions.
struct Tally {
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::vector<std::string> samples;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    ++failures;
    if (samples.size() < 5) samples.push_back(what);
  }
  template <class F>
  void expect_lazy(bool ok, F describe) {
    ++checks;
    if (ok) return;
    ++failures;
    if (samples.size() < 5) samples.push_back(describe());
  }
};

int failed_criteria = 0;

void report(const std::string& name, bool ok, const std::string& detail, const Tally* tally = nullptr) {
  if (!ok) ++failed_criteria;
  std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
  if (tally)
    for (const auto& s : tally->samples) std::cout << "    " << s << '\n';
  std::cout.flush();
}

std::string describe(const VerificationRecord& r) {
  std::ostringstream os;
  os << to_string(r.identity) << " grid " << r.grid_index << " weight " << r.weight_index;
  if (r.n) os << " n=" << *r.n;
  return os.str();
}

const StrategyOutcome* find_outcome(const VerificationRecord& r, const std::string& name) {
  for (const auto& o : r.outcomes)
    if (o.name == name) return &o;
  return nullptr;
}

/// A nonzero instance whose literal denominator (A0-C0)^(degree falling) vanishes.
bool expect_degenerate(const VerificationRecord& r) {
  if (!is_restricted(r.identity) || r.zero_instance) return false;
  const std::int64_t gap = r.instance->total_a() - r.instance->total_c();
  const auto degree = static_cast<std::int64_t>(weight_degree(weight_form(r.identity)));
  return gap >= 0 && gap < degree;
}

// ---------------------------------------------------------------------------

void exhaustive_and_literal() {
  CampaignConfig config;  // m <= 3, a_i <= 4, 25 Gaussian weight vectors, one worker
  Tally total, literal;
  std::size_t degenerate = 0;
  const auto start = Clock::now();
  const CampaignSummary summary = run_campaign(config, [&](const VerificationRecord& r) {
    total.expect_lazy(!r.error.has_value(), [&] { return describe(r) + ": " + *r.error; });
    if (r.error) return;
    const StrategyOutcome* moments = find_outcome(r, "moments");
    total.expect_lazy(moments && moments->match, [&] { return describe(r) + ": moments differ from oracle"; });
    if (!is_restricted(r.identity)) {
      const StrategyOutcome* closed = find_outcome(r, "unrestricted");
      total.expect_lazy(closed && closed->match, [&] { return describe(r) + ": unrestricted differs from oracle"; });
    }

    const StrategyOutcome* lit = find_outcome(r, "literal");
    const bool should_degenerate = expect_degenerate(r);
    if (!lit) {
      literal.expect(false, describe(r) + ": no literal outcome");
      return;
    }
    if (lit->degenerate) {
      ++degenerate;
      literal.expect_lazy(should_degenerate, [&] { return describe(r) + ": unexpected DegenerateDenominator"; });
      literal.expect_lazy(moments && moments->match, [&] { return describe(r) + ": degenerate and total differs"; });
    } else {
      literal.expect_lazy(!should_degenerate, [&] { return describe(r) + ": denominator vanishes but no error"; });
      literal.expect_lazy(lit->match, [&] { return describe(r) + ": literal differs from oracle"; });
    }
  });
  const double elapsed = seconds_since(start);

  std::ostringstream os;
  os << summary.grid_points << " grid points, " << summary.records << " records, " << summary.mismatches
     << " mismatches, " << total.failures << " failed checks, " << elapsed << " s single-threaded (limit 600 s)";
  report("exhaustive identity suite", total.failures == 0 && summary.ok() && summary.grid_points == 8420 &&
                                          elapsed < 600.0,
         os.str(), &total);

  std::ostringstream ls;
  ls << literal.checks << " checks over " << summary.records << " records, " << degenerate
     << " degenerate literal forms, " << literal.failures << " failures";
  report("literal-form suite", literal.failures == 0 && degenerate > 0, ls.str(), &literal);
}

// ---------------------------------------------------------------------------

bool symmetric_partner_matches(const MomentLabel& label, const ProblemInstance& inst,
                               const std::optional<std::int64_t>& n, const MomentSums& sums) {
  std::vector<std::size_t> idx(arity(label.kind));
  std::copy_n(label.indices.begin(), idx.size(), idx.begin());
  const Rational value = sums.value(label, n);
  std::sort(idx.begin(), idx.end());
  do {
    MomentLabel other = label;
    std::copy(idx.begin(), idx.end(), other.indices.begin());
    const ProblemInstance at = n ? inst.with_n(*n) : inst;
    const Rational closed = label.restricted ? moment_restricted(other, at).value : moment_unrestricted(other, at).value;
    if (closed != value) return false;
  } while (std::next_permutation(idx.begin(), idx.end()));
  return true;
}

void moment_suite() {
  Tally tally;
  std::size_t printed = 0, symmetric = 0;
  const auto start = Clock::now();
  for (const GridPoint& point : campaign_grid(3, 4)) {
    ProblemInstance inst;
    inst.m = static_cast<std::int64_t>(point.a.size());
    inst.a = point.a;
    inst.c = point.c;
    inst.x.assign(point.a.size(), GaussianRational(1));
    const MomentSums sums = brute_force_all_moments(inst);
    const auto where = [&](std::optional<MomentLabel> l, std::optional<std::int64_t> n) {
      std::ostringstream os;
      if (l) os << l->name();
      os << " a=" << to_json(inst)["a"].dump() << " c=" << to_json(inst)["c"].dump();
      if (n) os << " n=" << *n;
      return os.str();
    };

    for (const auto& label : all_moment_labels(inst.size(), false)) {
      tally.expect_lazy(moment_unrestricted(label, inst).value == sums.value(label), [&] { return where(label, {}); });
      if (label.kind == MomentKind::P11 || label.kind == MomentKind::P111) {
        ++symmetric;
        tally.expect_lazy(symmetric_partner_matches(label, inst, std::nullopt, sums),
                          [&] { return where(label, {}) + " (permuted)"; });
      }
    }
    const MomentTable unrestricted_table = MomentTable::build(inst, false);
    tally.expect_lazy(GaussianRational(unrestricted_table.base()) == brute_force_lhs(IdentityLabel::U1, inst),
                      [&] { return "unrestricted base sum " + where({}, {}); });

    for (std::int64_t n = 0; n <= inst.total_a() + 1; ++n) {
      const ProblemInstance at = inst.with_n(n);
      const MomentTable table = MomentTable::build(at, true);
      tally.expect_lazy(GaussianRational(table.base()) == brute_force_lhs(IdentityLabel::R1, at),
                        [&] { return "restricted base sum " + where({}, n); });
      for (const auto& label : all_moment_labels(inst.size(), true)) {
        const Rational expected = sums.value(label, n);
        tally.expect_lazy(moment_restricted(label, at).value == expected, [&] { return where(label, n); });
        const std::size_t p = label.indices[0], q = label.indices[1], r = label.indices[2];
        Rational from_table;
        switch (label.kind) {
          case MomentKind::P1: from_table = table.p1(p); break;
          case MomentKind::P2: from_table = table.p2(p); break;
          case MomentKind::P3: from_table = table.p3(p); break;
          case MomentKind::P11: from_table = table.p11(p, q); break;
          case MomentKind::P12: from_table = table.p12(p, q); break;
          case MomentKind::P111: from_table = table.p111(p, q, r); break;
        }
        tally.expect_lazy(from_table == expected, [&] { return where(label, n) + " (table)"; });
        try {
          const Rational value = moment_restricted_printed(label, at);
          ++printed;
          tally.expect_lazy(value == expected, [&] { return where(label, n) + " (printed ratio form)"; });
        } catch (const DegenerateDenominator&) {
        }
        if (label.kind == MomentKind::P11 || label.kind == MomentKind::P111) {
          ++symmetric;
          tally.expect_lazy(symmetric_partner_matches(label, inst, n, sums),
                            [&] { return where(label, n) + " (permuted)"; });
        }
      }
    }
  }
  std::ostringstream os;
  os << tally.checks << " checks (" << printed << " printed ratio forms, " << symmetric
     << " permutation groups), " << tally.failures << " failures, " << seconds_since(start) << " s";
  report("moment suite", tally.failures == 0, os.str(), &tally);
}

// ---------------------------------------------------------------------------

std::vector<GaussianRational> conjugated(const std::vector<GaussianRational>& x) {
  std::vector<GaussianRational> out;
  for (const auto& w : x) out.push_back(conj(w));
  return out;
}

Rational coefficient_product(const ProblemInstance& inst) {
  BigInt product(1);
  for (std::size_t i = 0; i < inst.size(); ++i) product *= binomial(inst.a[i], inst.c[i]);
  return Rational(product);
}

void cross_identity() {
  Tally starred, sums, reduced, split;
  std::size_t starred_n = 0, sums_n = 0, reduced_n = 0, split_n = 0;

  // R3 = R5 at y = x, R4 = R5 at y = conj(x), and the same for U.
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    ProblemInstance inst = random_instance(mix_seed(2024, seed), {3, 4, WeightKind::Gaussian});
    ++starred_n;
    const ProblemInstance same = inst.with_y(inst.x), conj_y = inst.with_y(conjugated(inst.x));
    for (const bool restricted : {true, false}) {
      const auto label = [&](WeightForm f) { return restricted ? restricted_label(f) : unrestricted_label(f); };
      const auto r3 = label(WeightForm::Square), r4 = label(WeightForm::AbsSquare), r5 = label(WeightForm::Mixed);
      const std::string tag = std::string(restricted ? "R" : "U") + " seed " + std::to_string(seed);
      starred.expect(brute_force_lhs(r3, same) == brute_force_lhs(r5, same), tag + ": oracle 3 vs 5 at y = x");
      starred.expect(rhs_by_moments(r3, same) == rhs_by_moments(r5, same), tag + ": closed 3 vs 5 at y = x");
      starred.expect(brute_force_lhs(r4, conj_y) == brute_force_lhs(r5, conj_y), tag + ": oracle 4 vs 5 at y = conj x");
      starred.expect(rhs_by_moments(r4, conj_y) == rhs_by_moments(r5, conj_y), tag + ": closed 4 vs 5 at y = conj x");
      starred.expect(rhs_abs_squared(r4, inst) == brute_force_lhs(r4, inst), tag + ": |.|^2 form");
    }
  }

  // Sum over n of every restricted closed form is its unrestricted partner.
  const auto grid = campaign_grid(3, 4);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const ProblemInstance inst = seeded_instance(grid[g], 77, g, 0, WeightKind::Gaussian);
    if (inst.is_zero_instance()) continue;
    ++sums_n;
    std::vector<MomentTable> tables;
    for (std::int64_t n = 0; n <= inst.total_a(); ++n) tables.push_back(MomentTable::build(inst.with_n(n), true));
    for (int j = 0; j < 8; ++j) {
      const auto form = static_cast<WeightForm>(j);
      const auto expansion = MomentExpansion::build(restricted_label(form), inst);
      GaussianRational total;
      for (const auto& t : tables) total += expansion.evaluate(t);
      sums.expect_lazy(total == rhs_unrestricted(unrestricted_label(form), inst), [&] {
        return "grid " + std::to_string(g) + " form " + std::string(to_string(unrestricted_label(form)));
      });
    }
  }

  // All c_i = 0: the C and S aggregates drop out of the closed forms.
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto& point = grid[g];
    if (std::any_of(point.c.begin(), point.c.end(), [](std::int64_t c) { return c != 0; })) continue;
    for (std::size_t w = 0; w < 3; ++w) {
      const ProblemInstance base = seeded_instance(point, 88, g, w, WeightKind::Gaussian);
      const Aggregates agg = compute_aggregates(base);
      bool c_free = agg.Cabs().is_zero();
      for (int p = 0; p <= 3; ++p)
        for (int q = 1; q <= 3; ++q) c_free &= agg.C(p, q).is_zero() && agg.Cstar(p, q).is_zero() && agg.S(p, q).is_zero();
      reduced.expect(c_free, "grid " + std::to_string(g) + ": C aggregates nonzero");
      const std::int64_t A0 = base.total_a();
      for (std::int64_t n = 0; n <= A0; ++n) {
        const ProblemInstance inst = base.with_n(n);
        ++reduced_n;
        const Rational top(binomial(A0, n));
        const std::string tag = "grid " + std::to_string(g) + " n=" + std::to_string(n);
        std::vector<std::pair<IdentityLabel, GaussianRational>> expected = {{IdentityLabel::R1, GaussianRational(top)}};
        if (A0 >= 1) expected.emplace_back(IdentityLabel::R2, agg.A(1) * (top * Rational(n) / Rational(A0)));
        if (A0 >= 2) {
          const Rational r4 = top * Rational(n) *
                              (Rational(n - 1) * abs_squared(agg.A(1)) + Rational(A0 - n) * agg.Aabs()) /
                              Rational(A0 * (A0 - 1));
          expected.emplace_back(IdentityLabel::R4, GaussianRational(r4));
        }
        for (const auto& [label, value] : expected) {
          const std::string which = tag + " " + std::string(to_string(label));
          reduced.expect(brute_force_lhs(label, inst) == value, which + ": oracle");
          reduced.expect(rhs_by_moments(label, inst) == value, which + ": moments");
          if (!literal_is_degenerate(label, inst)) reduced.expect(rhs_literal(label, inst) == value, which + ": literal");
        }
      }
    }
  }

  // m = 2, x = (1, 0): splitting the zero-weight coordinate in two keeps the
  // normalized sums, since only a1, c1, A0 and C0 reach the closed forms.
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto& point = grid[g];
    if (point.a.size() != 2 || point.a[1] < 1 || point.c[0] > point.a[0] || point.c[1] > point.a[1]) continue;
    ProblemInstance pair = seeded_instance(point, 99, g, 0, WeightKind::Gaussian);
    pair.x = {GaussianRational(1), GaussianRational(0)};
    pair.y.reset();
    ProblemInstance triple = pair;
    const std::int64_t a_left = (point.a[1] + 1) / 2, c_left = std::min(point.c[1], a_left);
    triple.m = 3;
    triple.a = {point.a[0], a_left, point.a[1] - a_left};
    triple.c = {point.c[0], c_left, point.c[1] - c_left};
    triple.x = {GaussianRational(1), GaussianRational(0), GaussianRational(0)};
    const Rational pair_norm = coefficient_product(pair), triple_norm = coefficient_product(triple);
    for (std::int64_t n = 0; n <= pair.total_a() + 1; ++n) {
      ++split_n;
      const ProblemInstance p = pair.with_n(n), t = triple.with_n(n);
      for (const auto label : {IdentityLabel::R2, IdentityLabel::R3, IdentityLabel::R7}) {
        const std::string tag = "grid " + std::to_string(g) + " n=" + std::to_string(n) + " " + std::string(to_string(label));
        const GaussianRational lhs_pair = brute_force_lhs(label, p) * pair_norm.inverse();
        split.expect(brute_force_lhs(label, t) * triple_norm.inverse() == lhs_pair, tag + ": oracle");
        split.expect(rhs_by_moments(label, t) * triple_norm.inverse() == lhs_pair, tag + ": moments");
      }
    }
  }

  const std::size_t fails = starred.failures + sums.failures + reduced.failures + split.failures;
  std::ostringstream os;
  os << "y = x / conj x on " << starred_n << " instances (" << starred.failures << " failures); sum over n on "
     << sums_n << " grid instances (" << sums.failures << "); all c = 0 on " << reduced_n << " instances ("
     << reduced.failures << "); split zero-weight coordinate on " << split_n << " instances (" << split.failures
     << ")";
  Tally all;
  for (const Tally* t : {&starred, &sums, &reduced, &split}) all.samples.insert(all.samples.end(), t->samples.begin(), t->samples.end());
  report("cross-identity consistency",
         fails == 0 && starred_n >= 100 && sums_n >= 100 && reduced_n >= 100 && split_n >= 100, os.str(), &all);
}

// ---------------------------------------------------------------------------

void residue_suite() {
  const auto start = Clock::now();
  const SelftestReport result = residue_selftest({32, 20180101, false});
  const double elapsed = seconds_since(start);
  std::ostringstream os;
  Tally samples;
  for (const auto& s : result.suites) {
    os << s.name << " " << s.checks - s.failures << "/" << s.checks << "; ";
    samples.samples.insert(samples.samples.end(), s.failure_samples.begin(), s.failure_samples.end());
  }
  os << elapsed << " s at order 32 (limit 10 s)";
  report("residue self-test", result.passed() && elapsed < 10.0, os.str(), &samples);
}

// ---------------------------------------------------------------------------

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& command) {
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return result;
  char buffer[4096];
  std::size_t got;
  while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) result.output.append(buffer, got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

void falsifiability(const std::string& cli) {
  Tally tally;
  std::size_t caught = 0;
  const auto start = Clock::now();
  for (const Coefficient id : all_coefficients()) {
    const std::string name(to_string(id));
    const RunResult r = run("'" + cli + "' verify --mutate " + name + " --fail-fast --quiet 2>&1");
    std::size_t mismatches = 0;
    try {
      const auto newline = r.output.find_last_of('\n', r.output.size() - 2);
      const Json summary = Json::parse(r.output.substr(newline == std::string::npos ? 0 : newline + 1));
      mismatches = summary.at("mismatches").get<std::size_t>();
    } catch (const std::exception&) {
    }
    const bool ok = r.exit_code == 1 && mismatches >= 1;
    caught += ok;
    tally.expect(ok, name + ": exit " + std::to_string(r.exit_code) + ", " + std::to_string(mismatches) + " mismatches");
  }
  std::ostringstream os;
  os << caught << "/" << all_coefficients().size() << " single-coefficient mutations caught by the exhaustive run, "
     << seconds_since(start) << " s";
  report("falsifiability", tally.failures == 0, os.str(), &tally);
}

std::vector<std::string> stripped_report(const std::string& path) {
  std::vector<std::string> lines;
  std::ifstream in(path);
  for (std::string line; std::getline(in, line);) {
    Json j = Json::parse(line);
    j.erase("elapsed_us");
    j.erase("elapsed_ms");
    lines.push_back(j.dump());
  }
  return lines;
}

void determinism(const std::string& cli, const std::string& scratch) {
  const std::string args = " verify --m-max 3 --a-max 2 --random-count 3 --seed 11 --jobs 2 --out ";
  const std::string first = scratch + "/determinism_1.jsonl", second = scratch + "/determinism_2.jsonl";
  const RunResult a = run("'" + cli + "'" + args + "'" + first + "' 2>/dev/null");
  const RunResult b = run("'" + cli + "'" + args + "'" + second + "' 2>/dev/null");
  const auto left = stripped_report(first), right = stripped_report(second);
  std::size_t differing = left.size() == right.size() ? 0 : 1;
  for (std::size_t i = 0; i < std::min(left.size(), right.size()); ++i) differing += left[i] != right[i];
  std::ostringstream os;
  os << left.size() << " vs " << right.size() << " report lines, " << differing
     << " differ after dropping timing fields; exit codes " << a.exit_code << ", " << b.exit_code;
  report("determinism", a.exit_code == 0 && b.exit_code == 0 && !left.empty() && differing == 0, os.str());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <multisum cli> <scratch dir>\n";
    return 2;
  }
  const std::string cli = argv[1], scratch = argv[2];
  residue_suite();
  moment_suite();
  cross_identity();
  determinism(cli, scratch);
  falsifiability(cli);
  exhaustive_and_literal();
  std::cout << (failed_criteria == 0 ? "all criteria passed" : std::to_string(failed_criteria) + " criteria failed")
            << '\n';
  return failed_criteria == 0 ? 0 : 1;
}
