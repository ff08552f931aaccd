#ifndef QZSG_HARNESS_HPP
#define QZSG_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qzsg/game.hpp"
#include "qzsg/solvers.hpp"

namespace qzsg {

/// Process exit codes shared by every command.
enum ExitCode : int {
  kExitOk = 0,
  kExitPropertyFailure = 1,
  kExitUsage = 2,
  kExitNumerical = 3,
  kExitPartialFailure = 4,
};

/// "builtin:matching-pennies", "builtin:zero", or a path to a game JSON file.
QuantumGame load_game(const std::string& source);

/// ||U||_inf and POVM rank information printed by `generate`.
nlohmann::json game_summary(const QuantumGame& game);

/// Ten-point checkpoint preset {1, 3, 13, 51, 189, 703, 2610, 9687, 35949, 49999}.
const std::vector<std::size_t>& preset_schedule();

/// Parses "every-K", "paper-exp2" or a comma-separated list of positive
/// integers. Returns the explicit checkpoint list for a run of `iters`.
std::vector<std::size_t> parse_schedule(const std::string& schedule, std::size_t iters);

struct ExperimentSpec {
  std::size_t alice_qubits = 1;
  std::size_t bob_qubits = 1;
  std::size_t games = 1;
  std::uint64_t master_seed = 0;
  std::vector<std::string> algorithms;
  std::size_t iters = 1000;
  std::vector<std::size_t> checkpoints;  // empty: every 50 iterations
  std::optional<std::size_t> outcomes;   // default 4^(n+m)
  std::optional<double> step_size;       // default "auto"
  bool record_timings = false;

  void validate() const;
};

struct RunRecord {
  std::size_t game_index = 0;
  std::uint64_t game_seed = 0;
  std::string algorithm;
  bool ok = false;
  std::string error;
  RunResult result;
};

struct CheckpointAggregate {
  std::size_t t = 0;
  std::size_t count = 0;
  double mean_gap_avg = 0.0;
  double ci_low_gap_avg = 0.0;
  double ci_high_gap_avg = 0.0;
  double mean_gap_last = 0.0;
  double mean_ln_gap_avg = 0.0;
  double ci_low_ln_gap_avg = 0.0;
  double ci_high_ln_gap_avg = 0.0;
  double mean_wall_time_ns = 0.0;
};

struct AlgorithmAggregate {
  std::string algorithm;
  std::size_t successful_runs = 0;
  std::size_t gradient_calls = 0;  // summed over successful runs
  std::size_t iterations = 0;      // summed over successful runs
  std::vector<CheckpointAggregate> checkpoints;
  double final_mean_gap_avg = 0.0;
  /// Least-squares slope of ln(mean gap_avg) against ln(t) over checkpoints with t >= 10.
  double loglog_slope = 0.0;
};

struct ComparisonReport {
  ExperimentSpec spec;
  std::vector<RunRecord> runs;  // sorted by game index, then by position in spec.algorithms
  std::vector<AlgorithmAggregate> aggregates;

  std::size_t failed_runs() const;
  nlohmann::json to_json() const;
};

/// Mean and two-sided 95% Student-t interval (df = n - 1); the interval
/// collapses to the mean when n == 1.
struct MeanCi {
  double mean = 0.0;
  double low = 0.0;
  double high = 0.0;
};
MeanCi mean_ci95(const std::vector<double>& values);

/// Least-squares slope of ln(y) on ln(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Generates the suite deterministically from master_seed and runs every
/// (game, algorithm) pair on up to `threads` workers. Results do not depend
/// on the thread count or completion order. Single-run failures are recorded.
ComparisonReport run_comparison(const ExperimentSpec& spec, std::size_t threads);

/// Worker count from QZSG_THREADS, defaulting to the hardware concurrency.
std::size_t threads_from_environment();

struct VerifyOptions {
  std::vector<std::string> properties;  // empty: all
  std::size_t samples = 100;            // per game and property
  std::size_t seeds = 10;               // seeds 0..seeds-1
  std::size_t max_qubits = 3;           // per player
  std::optional<std::size_t> outcomes;  // default min(4^(n+m), 64)
  std::uint64_t seed_offset = 0;

  void validate() const;
};

struct PropertyResult {
  std::string name;
  bool passed = true;
  double worst = 0.0;
  double threshold = 0.0;
  std::size_t checks = 0;
};

struct VerifyReport {
  VerifyOptions options;
  std::vector<PropertyResult> properties;
  bool all_passed() const;
  nlohmann::json to_json() const;
};

const std::vector<std::string>& verify_property_names();

/// Runs the operator-property oracles (monotonicity, gradient finite
/// differences, Lipschitz bound, linearity, Pauli reconstruction and the
/// Pauli-form gradient) over a grid of random games.
VerifyReport run_verify(const VerifyOptions& options);

/// Worst deviation between the partial-trace gradient F_alice(beta) and
/// 2^m sum_{P,Q} conj(U^(P,Q)) beta^(Q) P^dagger.
double pauli_gradient_deviation(const QuantumGame& game, const DensityMatrix& beta);

/// Worst relative error between central differences of the expected utility
/// (step h) and the payoff gradients, in one random traceless direction per player.
double finite_difference_error(const QuantumGame& game, const JointState& s, CounterRng& rng,
                               double h = 1e-6);

}  // namespace qzsg

#endif  // QZSG_HARNESS_HPP
