// multisum: verification campaigns, single-instance evaluation, the residue
// self-test, and random instance generation.
//
// Exit status: 0 on success, 1 when any check fails, 2 on usage, parse or
// structural errors.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "multisum/campaign.hpp"
#include "multisum/enumeration.hpp"
#include "multisum/residue.hpp"
#include "multisum/serialize.hpp"

namespace {

using namespace multisum;

constexpr int kFailure = 1;
constexpr int kUsage = 2;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<IdentityLabel> parse_identities(const std::string& text) {
  if (text == "all") return {kAllIdentities.begin(), kAllIdentities.end()};
  std::vector<IdentityLabel> out;
  for (const auto& item : split_list(text)) {
    if (item == "R") {
      for (auto l : kAllIdentities) if (is_restricted(l)) out.push_back(l);
    } else if (item == "U") {
      for (auto l : kAllIdentities) if (!is_restricted(l)) out.push_back(l);
    } else if (auto label = parse_identity(item)) {
      out.push_back(*label);
    } else {
      throw std::invalid_argument("unknown identity '" + item + "'");
    }
  }
  return out;
}

std::vector<Strategy> parse_strategies(const std::string& text) {
  std::vector<Strategy> out;
  for (const auto& item : split_list(text)) {
    auto strategy = parse_strategy(item);
    if (!strategy) throw std::invalid_argument("unknown strategy '" + item + "'");
    out.push_back(*strategy);
  }
  return out;
}

std::optional<Coefficient> parse_mutation(const std::string& text) {
  if (text.empty()) return std::nullopt;
  auto id = parse_coefficient(text);
  if (!id) {
    std::string known;
    for (auto c : all_coefficients()) known += " " + std::string(to_string(c));
    throw std::invalid_argument("unknown coefficient '" + text + "'; known:" + known);
  }
  return id;
}

/// Owns the output file when PATH is not "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path == "-" || path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw std::runtime_error("cannot open output file " + path);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct VerifyArgs {
  std::string identities = "all";
  std::int64_t m_max = 3;
  std::int64_t a_max = 4;
  std::string weights = "gaussian";
  std::uint64_t seed = 1;
  std::size_t random_count = 25;
  std::string strategies = "literal,moments";
  std::size_t jobs = 1;
  std::string out = "-";
  std::string mutate;
  bool fail_fast = false;
  bool quiet = false;
};

int run_verify(const VerifyArgs& args) {
  CampaignConfig config;
  config.identities = parse_identities(args.identities);
  config.m_max = args.m_max;
  config.a_max = args.a_max;
  auto kind = parse_weight_kind(args.weights);
  if (!kind) throw std::invalid_argument("weights must be rational or gaussian");
  config.weight_kind = *kind;
  config.seed = args.seed;
  config.random_count = args.random_count;
  config.strategies = parse_strategies(args.strategies);
  config.jobs = args.jobs;
  config.eval.mutate = parse_mutation(args.mutate);
  config.fail_fast = args.fail_fast;
  config.check();

  Output output(args.quiet ? std::string("-") : args.out);
  std::ostream* records = args.quiet ? nullptr : &output.stream();
  const CampaignSummary summary = run_campaign(config, [&](const VerificationRecord& record) {
    if (records) *records << record.to_json().dump() << '\n';
  });
  const std::string line = summary.to_json().dump();
  if (records) *records << line << '\n';
  if (!records || args.out != "-") std::cerr << line << '\n';
  return summary.ok() ? 0 : kFailure;
}

int run_eval(const std::string& instance_path, const std::string& identity, const std::string& strategies,
             const std::string& mutate) {
  const auto label = parse_identity(identity);
  if (!label) throw std::invalid_argument("unknown identity '" + identity + "'");
  const ProblemInstance inst = load_instance(instance_path);
  EvalOptions opts;
  opts.mutate = parse_mutation(mutate);
  const VerificationRecord record = verify_instance(*label, inst, parse_strategies(strategies), opts);
  Json out = record.to_json();
  if (!record.error) out["aggregates"] = to_json(compute_aggregates(inst));
  std::cout << out.dump(2) << '\n';
  if (record.error) {
    std::cerr << "structural error: " << *record.error << '\n';
    return kUsage;
  }
  if (record.zero_instance) std::cerr << "zero-instance: some c_i exceeds a_i\n";
  for (const auto& o : record.outcomes) {
    std::cerr << o.name << ": " << (o.degenerate ? "degenerate" : o.match ? "match" : "MISMATCH") << '\n';
  }
  return record.passed() ? 0 : kFailure;
}

int run_selftest(std::size_t order, std::uint64_t seed, bool perturb) {
  SelftestOptions options;
  options.order = order;
  options.seed = seed;
  options.perturb_geometric = perturb;
  const SelftestReport report = residue_selftest(options);
  for (const auto& suite : report.suites) {
    std::cout << (suite.passed() ? "PASS " : "FAIL ") << suite.name << "  checks=" << suite.checks
              << " failures=" << suite.failures << '\n';
    for (const auto& sample : suite.failure_samples) std::cout << "  " << sample << '\n';
  }
  std::cout << (report.passed() ? "residue self-test passed" : "residue self-test FAILED") << " (order " << order
            << ")\n";
  return report.passed() ? 0 : kFailure;
}

int run_gen(std::uint64_t seed, const std::string& out_path, std::int64_t m_max, std::int64_t a_max,
            const std::string& weights) {
  InstanceBounds bounds;
  bounds.m_max = m_max;
  bounds.a_max = a_max;
  auto kind = parse_weight_kind(weights);
  if (!kind) throw std::invalid_argument("weights must be rational or gaussian");
  bounds.weight_kind = *kind;
  Output output(out_path);
  output.stream() << to_json(random_instance(seed, bounds)).dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification of weighted multi-binomial summation identities"};
  app.require_subcommand(1);

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification campaign over the exhaustive grid");
  verify_cmd->add_option("--identities", verify.identities, "Comma list of R1..R8, U1..U8, R, U or all");
  verify_cmd->add_option("--m-max", verify.m_max, "Largest number of coordinates")->check(CLI::Range(1, 8));
  verify_cmd->add_option("--a-max", verify.a_max, "Largest a_i")->check(CLI::Range(0, 16));
  verify_cmd->add_option("--weights", verify.weights, "rational or gaussian");
  verify_cmd->add_option("--seed", verify.seed, "Campaign seed");
  verify_cmd->add_option("--random-count", verify.random_count, "Weight vectors per grid point")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--strategies", verify.strategies, "Comma list of literal, moments");
  verify_cmd->add_option("--jobs", verify.jobs, "Worker threads")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--out", verify.out, "Report path, - for stdout");
  verify_cmd->add_option("--mutate", verify.mutate, "Double one named closed-form coefficient");
  verify_cmd->add_flag("--fail-fast", verify.fail_fast, "Stop after the first failing grid point");
  verify_cmd->add_flag("--quiet", verify.quiet, "Print only the summary");

  std::string instance_path, identity, eval_strategies = "literal,moments", eval_mutate;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate one instance file against one identity");
  eval_cmd->add_option("--instance", instance_path, "Instance document")->required();
  eval_cmd->add_option("--identity", identity, "R1..R8 or U1..U8")->required();
  eval_cmd->add_option("--strategies", eval_strategies, "Comma list of literal, moments");
  eval_cmd->add_option("--mutate", eval_mutate, "Double one named closed-form coefficient");

  std::size_t order = 32;
  std::uint64_t selftest_seed = SelftestOptions{}.seed;
  bool perturb = false;
  auto* selftest_cmd = app.add_subcommand("residue-selftest", "Run the residue-engine property suites");
  selftest_cmd->add_option("--order", order, "Truncation order, at least 8")->check(CLI::Range(8, 4096));
  selftest_cmd->add_option("--seed", selftest_seed, "Seed for the random inversion cases");
  selftest_cmd->add_flag("--mutate", perturb, "Perturb one geometric-series weight");

  std::uint64_t gen_seed = 1;
  std::string gen_out = "-", gen_weights = "gaussian";
  std::int64_t gen_m_max = 3, gen_a_max = 4;
  auto* gen_cmd = app.add_subcommand("gen", "Write a seeded random instance document");
  gen_cmd->add_option("--seed", gen_seed, "Seed")->required();
  gen_cmd->add_option("--out", gen_out, "Output path, - for stdout");
  gen_cmd->add_option("--m-max", gen_m_max, "Largest number of coordinates")->check(CLI::Range(1, 8));
  gen_cmd->add_option("--a-max", gen_a_max, "Largest a_i")->check(CLI::Range(0, 16));
  gen_cmd->add_option("--weights", gen_weights, "rational or gaussian");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify_cmd) return run_verify(verify);
    if (*eval_cmd) return run_eval(instance_path, identity, eval_strategies, eval_mutate);
    if (*selftest_cmd) return run_selftest(order, selftest_seed, perturb);
    if (*gen_cmd) return run_gen(gen_seed, gen_out, gen_m_max, gen_a_max, gen_weights);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
