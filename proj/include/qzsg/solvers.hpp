#ifndef QZSG_SOLVERS_HPP
#define QZSG_SOLVERS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qzsg/error.hpp"
#include "qzsg/game.hpp"
#include "qzsg/geometry.hpp"

namespace qzsg {

enum class Algorithm {
  MatrixDualAveraging,  // MDA; MMWU with the entropy regularizer
  MirrorProx,           // MMP; two gradient calls per iteration
  OptimisticMirrorProx  // OMMP; OMMWU (entropy) or OMEG (Frobenius)
};

enum class StepDecay {
  None,
  InverseSqrt  // the step producing iterate k uses eta / sqrt(k)
};

struct SolverConfig {
  Algorithm algorithm = Algorithm::OptimisticMirrorProx;
  Regularizer regularizer = Regularizer::entropy();
  std::optional<double> step_size;  // empty means "auto"
  StepDecay decay = StepDecay::None;
  std::size_t max_iters = 1000;
  double target_gap = 0.0;  // 0 runs all iterations
  std::size_t gap_check_interval = 50;
  std::vector<std::size_t> checkpoints;  // overrides the interval when non-empty
  std::uint64_t seed = 0;
  bool record_timings = false;

  /// Throws ValidationError describing the first invalid field.
  void validate() const;

  /// ommwu, mmwu, mmwu-sd, omeg, mmp-entropy, mmp-frobenius, mda-frobenius.
  static SolverConfig from_alias(std::string_view alias);
  /// Inverse of from_alias; throws if the triple has no alias.
  std::string alias() const;
};

const std::vector<std::string>& algorithm_aliases();

nlohmann::json config_to_json(const SolverConfig& cfg);
SolverConfig config_from_json(const nlohmann::json& j);

/// mu_h / (2 gamma_F). Throws ValidationError if gamma_F <= 0.
double default_step_size(const Regularizer& reg, double gamma_f);

/// Resolves "auto": gamma_F = ||U||_inf for entropy, 1.1 x a 500-sample
/// Frobenius Lipschitz estimate for the Frobenius regularizer. A game with
/// identically zero feedback gets step size 1.
double resolve_step_size(const QuantumGame& game, const SolverConfig& cfg);

struct SolverState {
  JointState iterate;        // Psi_t
  JointState momentum;       // Phi_t (MMP/OMMP); equals iterate for MDA
  DualVector dual;           // MDA: cumulative feedback W; entropy MMP/OMMP: log-domain momentum
  std::optional<GradientPair> last_gradient;  // OMMP: F(Psi_t), reused by the next step
  std::size_t t = 0;
  std::size_t gradient_calls = 0;
};

SolverState initial_state(const QuantumGame& game);

/// Step size used for the step that produces iterate k (k >= 1).
double step_size_at(double eta, StepDecay decay, std::size_t k);

/// W <- W + F(Psi_t); Psi_{t+1} = Q(eta_{t+1} W).
SolverState mda_step(const QuantumGame& game, SolverState state, const SolverConfig& cfg,
                     double eta);
/// Phi_{t+1} = prox(Psi_t, F(Psi_t)); Psi_{t+1} = prox(Psi_t, F(Phi_{t+1})).
SolverState mmp_step(const QuantumGame& game, SolverState state, const SolverConfig& cfg,
                     double eta);
/// Psi_{t+1} = prox(Phi_t, F(Psi_t)) with the cached gradient;
/// Phi_{t+1} = prox(Phi_t, F(Psi_{t+1})) with the single fresh gradient.
SolverState ommp_step(const QuantumGame& game, SolverState state, const SolverConfig& cfg,
                      double eta);

SolverState solver_step(const QuantumGame& game, SolverState state, const SolverConfig& cfg,
                        double eta);

struct TraceRow {
  std::size_t t = 0;  // number of iterates in the average
  double gap_avg = 0.0;
  double gap_last = 0.0;
  std::int64_t wall_time_ns = 0;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct IterationTrace {
  std::vector<TraceRow> rows;

  /// Columns t,gap_avg,gap_last,wall_time_ns; reals with 17 significant digits.
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

struct RunResult {
  JointState average;  // (1/N) sum_{t<N} Psi_t
  JointState last;     // Psi_{N-1}
  IterationTrace trace;
  std::size_t iterations = 0;  // N
  std::size_t gradient_calls = 0;
  double step_size = 0.0;
  bool reached_target = false;
};

/// Thrown when a numerical routine fails mid-run.
class SolverFailure : public NumericalError {
 public:
  SolverFailure(std::size_t iteration, const std::string& what)
      : NumericalError("iteration " + std::to_string(iteration) + ": " + what),
        iteration_(iteration) {}
  std::size_t iteration() const { return iteration_; }

 private:
  std::size_t iteration_;
};

/// Starts from the maximally mixed joint state and iterates until max_iters
/// or until gap_avg <= target_gap at a checkpoint. The last iteration is
/// always a checkpoint.
RunResult run(const QuantumGame& game, const SolverConfig& cfg);

}  // namespace qzsg

#endif  // QZSG_SOLVERS_HPP
