// qzsg: generate, solve, compare and verify quantum zero-sum games.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qzsg/error.hpp"
#include "qzsg/harness.hpp"
#include "qzsg/solvers.hpp"

namespace fs = std::filesystem;
using namespace qzsg;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << content;
  if (!out) throw UsageError("failed writing '" + path + "'");
}

std::optional<double> parse_step_size(const std::string& s) {
  if (s == "auto") return std::nullopt;
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos == s.size() && v > 0.0) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError("step size must be a positive number or \"auto\"");
}

struct GenerateArgs {
  std::size_t alice = 1;
  std::size_t bob = 1;
  std::optional<std::size_t> outcomes;
  std::uint64_t seed = 0;
  std::string output;
};

int cmd_generate(const GenerateArgs& a) {
  if (a.outcomes && *a.outcomes < 2) throw ValidationError("outcomes must be ≥ 2");
  const std::size_t outcomes = a.outcomes.value_or(default_outcome_count(a.alice, a.bob));
  const QuantumGame game = random_game(a.alice, a.bob, outcomes, a.seed);
  const std::string text = game_to_json(game).dump() + "\n";
  if (a.output.empty()) {
    std::cout << text;
    std::cerr << game_summary(game).dump(2) << "\n";
  } else {
    write_file(a.output, text);
    std::cout << game_summary(game).dump(2) << "\n";
  }
  return kExitOk;
}

struct SolveArgs {
  std::string game;
  std::string config;
  std::string algorithm = "ommwu";
  std::string step_size = "auto";
  std::size_t max_iters = 1000;
  double target_gap = 0.0;
  std::size_t gap_check_interval = 50;
  std::string schedule;
  std::uint64_t seed = 0;
  std::string output;
  std::string summary;
  std::string format = "csv";
  bool record_timings = false;
};

int cmd_solve(const SolveArgs& a, const CLI::App& sub) {
  const QuantumGame game = load_game(a.game);

  SolverConfig cfg;
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw ValidationError("cannot open config '" + a.config + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    cfg = config_from_json(j);
  } else {
    cfg = SolverConfig::from_alias(a.algorithm);
  }
  auto given = [&](const char* name) { return sub.count(name) > 0; };
  if (a.config.empty() || given("--algorithm")) {
    const SolverConfig alias_cfg = SolverConfig::from_alias(a.algorithm);
    cfg.algorithm = alias_cfg.algorithm;
    cfg.regularizer = alias_cfg.regularizer;
    cfg.decay = alias_cfg.decay;
  }
  if (a.config.empty() || given("--step-size")) cfg.step_size = parse_step_size(a.step_size);
  if (a.config.empty() || given("--max-iters")) cfg.max_iters = a.max_iters;
  if (a.config.empty() || given("--target-gap")) cfg.target_gap = a.target_gap;
  if (a.config.empty() || given("--gap-check-interval")) cfg.gap_check_interval = a.gap_check_interval;
  if (a.config.empty() || given("--seed")) cfg.seed = a.seed;
  if (!a.schedule.empty()) cfg.checkpoints = parse_schedule(a.schedule, cfg.max_iters);
  cfg.record_timings = a.record_timings;
  cfg.validate();

  RunResult result;
  try {
    result = run(game, cfg);
  } catch (const SolverFailure& e) {
    std::cerr << "numerical failure at iteration " << e.iteration() << ": " << e.what() << "\n";
    return kExitNumerical;
  }

  const std::string trace =
      a.format == "json" ? result.trace.to_json().dump(2) + "\n" : result.trace.to_csv();
  nlohmann::json summary;
  summary["algorithm"] = cfg.alias();
  summary["regularizer"] = std::string(cfg.regularizer.id());
  summary["step_size"] = result.step_size;
  summary["iterations"] = result.iterations;
  summary["gradient_calls"] = result.gradient_calls;
  summary["final_gap_avg"] = result.trace.rows.back().gap_avg;
  summary["final_gap_last"] = result.trace.rows.back().gap_last;
  summary["reached_target"] = result.reached_target;
  summary["u_inf_norm"] = game.u_inf_norm();
  summary["config"] = config_to_json(cfg);
  const std::string summary_text = summary.dump(2) + "\n";

  if (a.output.empty()) {
    std::cout << trace;
  } else {
    write_file(a.output, trace);
  }
  std::string summary_path = a.summary;
  if (summary_path.empty() && !a.output.empty()) summary_path = a.output + ".summary.json";
  if (summary_path.empty()) {
    std::cerr << summary_text;
  } else {
    write_file(summary_path, summary_text);
  }
  return kExitOk;
}

struct CompareArgs {
  std::size_t alice = 1;
  std::size_t bob = 1;
  std::size_t games = 10;
  std::uint64_t seed = 0;
  std::vector<std::string> algorithms = {"mmwu", "mmwu-sd", "ommwu"};
  std::size_t iters = 1000;
  std::string schedule = "every-50";
  std::optional<std::size_t> outcomes;
  std::string step_size = "auto";
  std::string output;
  bool record_timings = false;
};

int cmd_compare(const CompareArgs& a) {
  ExperimentSpec spec;
  spec.alice_qubits = a.alice;
  spec.bob_qubits = a.bob;
  spec.games = a.games;
  spec.master_seed = a.seed;
  spec.algorithms = a.algorithms;
  spec.iters = a.iters;
  spec.checkpoints = parse_schedule(a.schedule, a.iters);
  spec.outcomes = a.outcomes;
  spec.step_size = parse_step_size(a.step_size);
  spec.record_timings = a.record_timings;
  spec.validate();

  const ComparisonReport report = run_comparison(spec, threads_from_environment());
  const std::string text = report.to_json().dump(2) + "\n";
  if (a.output.empty()) {
    std::cout << text;
  } else {
    const fs::path dir(a.output);
    std::error_code ec;
    fs::create_directories(dir / "runs", ec);
    if (ec) throw UsageError("cannot create output directory '" + a.output + "'");
    write_file((dir / "report.json").string(), text);
    for (const auto& r : report.runs) {
      if (!r.ok) continue;
      char name[64];
      std::snprintf(name, sizeof name, "game%03zu_%s.csv", r.game_index, r.algorithm.c_str());
      write_file((dir / "runs" / name).string(), r.result.trace.to_csv());
    }
  }
  for (const auto& r : report.runs) {
    if (!r.ok) std::cerr << "run failed (game " << r.game_index << ", " << r.algorithm << "): " << r.error << "\n";
  }
  return report.failed_runs() > 0 ? kExitPartialFailure : kExitOk;
}

struct VerifyArgs {
  std::string property = "all";
  std::size_t samples = 100;
  std::size_t seeds = 10;
  std::size_t dims = 3;
  std::optional<std::size_t> outcomes;
  std::uint64_t seed = 0;
  std::string output;
};

int cmd_verify(const VerifyArgs& a) {
  VerifyOptions opts;
  if (a.property != "all") opts.properties = {a.property};
  opts.samples = a.samples;
  opts.seeds = a.seeds;
  opts.max_qubits = a.dims;
  opts.outcomes = a.outcomes;
  opts.seed_offset = a.seed;
  opts.validate();
  const VerifyReport report = run_verify(opts);
  const std::string text = report.to_json().dump(2) + "\n";
  if (a.output.empty()) {
    std::cout << text;
  } else {
    write_file(a.output, text);
  }
  return report.all_passed() ? kExitOk : kExitPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nash equilibria of two-player quantum zero-sum games"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a random full-rank POVM game as JSON");
  generate->add_option("--alice-qubits,-n", gen.alice, "Alice's qubit count")->required();
  generate->add_option("--bob-qubits,-m", gen.bob, "Bob's qubit count")->required();
  generate->add_option("--outcomes", gen.outcomes, "POVM outcome count (default 4^(n+m))");
  generate->add_option("--seed", gen.seed, "RNG seed");
  generate->add_option("--output,-o", gen.output, "Game file (default stdout)");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Run one solver on one game");
  solve_cmd->add_option("--game,-g", solve.game, "Game file or builtin:matching-pennies|builtin:zero")
      ->required();
  solve_cmd->add_option("--config,-c", solve.config, "Solver config JSON");
  solve_cmd->add_option("--algorithm,-a", solve.algorithm, "Algorithm alias")
      ->check(CLI::IsMember(algorithm_aliases()));
  solve_cmd->add_option("--step-size", solve.step_size, "Step size or \"auto\"");
  solve_cmd->add_option("--max-iters", solve.max_iters, "Iteration count");
  solve_cmd->add_option("--target-gap", solve.target_gap, "Stop once the average gap is below this");
  solve_cmd->add_option("--gap-check-interval", solve.gap_check_interval, "Checkpoint spacing");
  solve_cmd->add_option("--schedule", solve.schedule, "every-K, paper-exp2 or a comma list of checkpoints");
  solve_cmd->add_option("--seed", solve.seed, "Seed for sampled step-size estimates");
  solve_cmd->add_option("--output,-o", solve.output, "Trace file (default stdout)");
  solve_cmd->add_option("--summary", solve.summary, "Summary JSON (default <output>.summary.json)");
  solve_cmd->add_option("--format", solve.format, "Trace format")->check(CLI::IsMember({"csv", "json"}));
  solve_cmd->add_flag("--record-timings", solve.record_timings, "Fill the wall_time_ns column");

  CompareArgs cmp;
  auto* compare = app.add_subcommand("compare", "Run several algorithms over a random game suite");
  compare->add_option("--alice-qubits,-n", cmp.alice, "Alice's qubit count");
  compare->add_option("--bob-qubits,-m", cmp.bob, "Bob's qubit count");
  compare->add_option("--games", cmp.games, "Suite size");
  compare->add_option("--seed", cmp.seed, "Master seed");
  compare->add_option("--algorithms", cmp.algorithms, "Algorithm aliases")
      ->delimiter(',')
      ->check(CLI::IsMember(algorithm_aliases()));
  compare->add_option("--iters", cmp.iters, "Iterations per run");
  compare->add_option("--schedule", cmp.schedule, "every-K, paper-exp2 or a comma list of checkpoints");
  compare->add_option("--outcomes", cmp.outcomes, "POVM outcome count (default 4^(n+m))");
  compare->add_option("--step-size", cmp.step_size, "Step size or \"auto\"");
  compare->add_option("--output,-o", cmp.output, "Output directory (default: report to stdout)");
  compare->add_flag("--record-timings", cmp.record_timings, "Record wall-clock times");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Check operator properties on random games");
  std::vector<std::string> property_choices = verify_property_names();
  property_choices.push_back("all");
  verify->add_option("--property", ver.property, "Property to check")
      ->check(CLI::IsMember(property_choices));
  verify->add_option("--samples", ver.samples, "Samples per game");
  verify->add_option("--seeds", ver.seeds, "Number of game seeds");
  verify->add_option("--dims", ver.dims, "Maximum qubits per player");
  verify->add_option("--outcomes", ver.outcomes, "POVM outcome count (default min(4^(n+m), 64))");
  verify->add_option("--seed", ver.seed, "First game seed");
  verify->add_option("--output,-o", ver.output, "Report file (default stdout)");
  std::string verify_format = "json";
  verify->add_option("--format", verify_format, "Report format")->check(CLI::IsMember({"json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*generate) return cmd_generate(gen);
    if (*solve_cmd) return cmd_solve(solve, *solve_cmd);
    if (*compare) return cmd_compare(cmp);
    if (*verify) return cmd_verify(ver);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
