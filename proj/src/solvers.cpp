#include "qzsg/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>

namespace qzsg {
namespace {

struct AliasEntry {
  const char* alias;
  Algorithm algorithm;
  RegularizerKind regularizer;
  StepDecay decay;
};

constexpr AliasEntry kAliases[] = {
    {"ommwu", Algorithm::OptimisticMirrorProx, RegularizerKind::VonNeumannEntropy, StepDecay::None},
    {"omeg", Algorithm::OptimisticMirrorProx, RegularizerKind::FrobeniusSquared, StepDecay::None},
    {"mmwu", Algorithm::MatrixDualAveraging, RegularizerKind::VonNeumannEntropy, StepDecay::None},
    {"mmwu-sd", Algorithm::MatrixDualAveraging, RegularizerKind::VonNeumannEntropy,
     StepDecay::InverseSqrt},
    {"mda-frobenius", Algorithm::MatrixDualAveraging, RegularizerKind::FrobeniusSquared,
     StepDecay::None},
    {"mmp-entropy", Algorithm::MirrorProx, RegularizerKind::VonNeumannEntropy, StepDecay::None},
    {"mmp-frobenius", Algorithm::MirrorProx, RegularizerKind::FrobeniusSquared, StepDecay::None},
};

bool uses_entropy(const SolverConfig& cfg) {
  return cfg.regularizer.kind == RegularizerKind::VonNeumannEntropy;
}

GradientPair counted_gradient(const QuantumGame& game, const JointState& s, SolverState& state) {
  ++state.gradient_calls;
  return payoff_gradient(game, s);
}

JointState average_of(const HermitianPair& sum, std::size_t count) {
  const double w = 1.0 / static_cast<double>(count);
  return {DensityMatrix::unchecked(sum.alice * w), DensityMatrix::unchecked(sum.bob * w)};
}

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void SolverConfig::validate() const {
  if (step_size && !(*step_size > 0.0 && std::isfinite(*step_size))) {
    throw ValidationError("step_size must be positive or \"auto\"");
  }
  if (max_iters < 1) throw ValidationError("max_iters must be >= 1");
  if (!(target_gap >= 0.0)) throw ValidationError("target_gap must be >= 0");
  if (gap_check_interval < 1) throw ValidationError("gap_check_interval must be >= 1");
  for (std::size_t c : checkpoints) {
    if (c < 1) throw ValidationError("checkpoints must be >= 1");
  }
}

SolverConfig SolverConfig::from_alias(std::string_view alias) {
  for (const auto& e : kAliases) {
    if (alias == e.alias) {
      SolverConfig cfg;
      cfg.algorithm = e.algorithm;
      cfg.regularizer = {e.regularizer};
      cfg.decay = e.decay;
      return cfg;
    }
  }
  throw ValidationError("unknown algorithm '" + std::string(alias) + "'");
}

std::string SolverConfig::alias() const {
  for (const auto& e : kAliases) {
    if (e.algorithm == algorithm && e.regularizer == regularizer.kind && e.decay == decay) {
      return e.alias;
    }
  }
  throw ValidationError("configuration has no algorithm alias");
}

const std::vector<std::string>& algorithm_aliases() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& e : kAliases) v.emplace_back(e.alias);
    return v;
  }();
  return names;
}

nlohmann::json config_to_json(const SolverConfig& cfg) {
  nlohmann::json j;
  j["algorithm"] = cfg.alias();
  if (cfg.step_size) {
    j["step_size"] = *cfg.step_size;
  } else {
    j["step_size"] = "auto";
  }
  j["max_iters"] = cfg.max_iters;
  j["target_gap"] = cfg.target_gap;
  j["gap_check_interval"] = cfg.gap_check_interval;
  if (!cfg.checkpoints.empty()) j["checkpoints"] = cfg.checkpoints;
  j["seed"] = cfg.seed;
  return j;
}

SolverConfig config_from_json(const nlohmann::json& j) {
  try {
    SolverConfig cfg = SolverConfig::from_alias(j.at("algorithm").get<std::string>());
    if (j.contains("step_size")) {
      const auto& s = j.at("step_size");
      if (s.is_string()) {
        if (s.get<std::string>() != "auto") throw ValidationError("step_size must be a number or \"auto\"");
      } else {
        cfg.step_size = s.get<double>();
      }
    }
    if (j.contains("max_iters")) cfg.max_iters = j.at("max_iters").get<std::size_t>();
    if (j.contains("target_gap")) cfg.target_gap = j.at("target_gap").get<double>();
    if (j.contains("gap_check_interval")) {
      cfg.gap_check_interval = j.at("gap_check_interval").get<std::size_t>();
    }
    if (j.contains("checkpoints")) cfg.checkpoints = j.at("checkpoints").get<std::vector<std::size_t>>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.validate();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed solver config: ") + e.what());
  }
}

double default_step_size(const Regularizer& reg, double gamma_f) {
  if (!(gamma_f > 0.0)) throw ValidationError("Lipschitz constant must be positive");
  return reg.strong_convexity_modulus() / (2.0 * gamma_f);
}

double resolve_step_size(const QuantumGame& game, const SolverConfig& cfg) {
  if (cfg.step_size) return *cfg.step_size;
  double gamma = 0.0;
  if (uses_entropy(cfg)) {
    gamma = game.u_inf_norm();
  } else {
    gamma = 1.1 * lipschitz_estimate(game, NormPair::Frobenius, 500, cfg.seed);
  }
  if (gamma <= 0.0) return 1.0;
  return default_step_size(cfg.regularizer, gamma);
}

SolverState initial_state(const QuantumGame& game) {
  SolverState s;
  s.iterate = JointState::maximally_mixed(game.alice_dim(), game.bob_dim());
  s.momentum = s.iterate;
  s.dual = {HermitianMatrix::zero(game.alice_dim()), HermitianMatrix::zero(game.bob_dim())};
  return s;
}

double step_size_at(double eta, StepDecay decay, std::size_t k) {
  if (decay == StepDecay::InverseSqrt) return eta / std::sqrt(static_cast<double>(k));
  return eta;
}

SolverState mda_step(const QuantumGame& game, SolverState state, const SolverConfig& cfg,
                     double eta) {
  state.dual += counted_gradient(game, state.iterate, state);
  ++state.t;
  const double eta_t = step_size_at(eta, cfg.decay, state.t);
  state.iterate = mirror_map(cfg.regularizer, eta_t * state.dual);
  state.momentum = state.iterate;
  return state;
}

SolverState mmp_step(const QuantumGame& game, SolverState state, const SolverConfig& cfg,
                     double eta) {
  const double eta_t = step_size_at(eta, cfg.decay, state.t + 1);
  const GradientPair g = counted_gradient(game, state.iterate, state);
  if (uses_entropy(cfg)) {
    // state.dual is a logarithm of Psi_t (up to a multiple of the identity).
    state.momentum = mirror_map(cfg.regularizer, dual_proximal_accumulate(state.dual, g, eta_t));
    const GradientPair g_mid = counted_gradient(game, state.momentum, state);
    state.dual = dual_proximal_accumulate(state.dual, g_mid, eta_t);
    state.iterate = mirror_map(cfg.regularizer, state.dual);
  } else {
    state.momentum = proximal_map(cfg.regularizer, state.iterate, g, eta_t);
    const GradientPair g_mid = counted_gradient(game, state.momentum, state);
    state.iterate = proximal_map(cfg.regularizer, state.iterate, g_mid, eta_t);
  }
  ++state.t;
  return state;
}

SolverState ommp_step(const QuantumGame& game, SolverState state, const SolverConfig& cfg,
                      double eta) {
  const double eta_t = step_size_at(eta, cfg.decay, state.t + 1);
  if (!state.last_gradient) state.last_gradient = counted_gradient(game, state.iterate, state);
  if (uses_entropy(cfg)) {
    // state.dual is a logarithm of the momentum Phi_t.
    state.iterate =
        mirror_map(cfg.regularizer, dual_proximal_accumulate(state.dual, *state.last_gradient, eta_t));
    state.last_gradient = counted_gradient(game, state.iterate, state);
    state.dual = dual_proximal_accumulate(state.dual, *state.last_gradient, eta_t);
    state.momentum = mirror_map(cfg.regularizer, state.dual);
  } else {
    state.iterate = proximal_map(cfg.regularizer, state.momentum, *state.last_gradient, eta_t);
    state.last_gradient = counted_gradient(game, state.iterate, state);
    state.momentum = proximal_map(cfg.regularizer, state.momentum, *state.last_gradient, eta_t);
  }
  ++state.t;
  return state;
}

SolverState solver_step(const QuantumGame& game, SolverState state, const SolverConfig& cfg,
                        double eta) {
  switch (cfg.algorithm) {
    case Algorithm::MatrixDualAveraging: return mda_step(game, std::move(state), cfg, eta);
    case Algorithm::MirrorProx: return mmp_step(game, std::move(state), cfg, eta);
    case Algorithm::OptimisticMirrorProx: return ommp_step(game, std::move(state), cfg, eta);
  }
  return state;
}

std::string IterationTrace::to_csv() const {
  std::string out = "t,gap_avg,gap_last,wall_time_ns\n";
  for (const auto& r : rows) {
    out += std::to_string(r.t);
    out += ',';
    out += format_real(r.gap_avg);
    out += ',';
    out += format_real(r.gap_last);
    out += ',';
    out += std::to_string(r.wall_time_ns);
    out += '\n';
  }
  return out;
}

nlohmann::json IterationTrace::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    rows_json.push_back(
        {{"t", r.t}, {"gap_avg", r.gap_avg}, {"gap_last", r.gap_last}, {"wall_time_ns", r.wall_time_ns}});
  }
  return rows_json;
}

RunResult run(const QuantumGame& game, const SolverConfig& cfg) {
  cfg.validate();
  const double eta = resolve_step_size(game, cfg);
  const std::set<std::size_t> checkpoints(cfg.checkpoints.begin(), cfg.checkpoints.end());
  auto is_checkpoint = [&](std::size_t t) {
    if (t == cfg.max_iters) return true;
    if (!checkpoints.empty()) return checkpoints.count(t) > 0;
    return t % cfg.gap_check_interval == 0;
  };

  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  result.step_size = eta;
  SolverState state = initial_state(game);
  HermitianPair running_sum = {HermitianMatrix::zero(game.alice_dim()),
                               HermitianMatrix::zero(game.bob_dim())};

  for (std::size_t count = 1;; ++count) {
    running_sum += HermitianPair::of(state.iterate);
    try {
      if (is_checkpoint(count)) {
        TraceRow row;
        row.t = count;
        row.gap_avg = duality_gap(game, average_of(running_sum, count));
        row.gap_last = duality_gap(game, state.iterate);
        if (cfg.record_timings) {
          row.wall_time_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
        }
        result.trace.rows.push_back(row);
        if (cfg.target_gap > 0.0 && row.gap_avg <= cfg.target_gap) {
          result.reached_target = true;
          result.iterations = count;
          break;
        }
      }
      if (count == cfg.max_iters) {
        result.iterations = count;
        break;
      }
      state = solver_step(game, std::move(state), cfg, eta);
    } catch (const NumericalError& e) {
      throw SolverFailure(count, e.what());
    }
  }

  result.average = average_of(running_sum, result.iterations);
  result.last = state.iterate;
  result.gradient_calls = state.gradient_calls;
  return result;
}

}  // namespace qzsg
