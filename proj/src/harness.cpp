#include "qzsg/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "qzsg/error.hpp"
#include "qzsg/pauli.hpp"
#include "qzsg/spectral.hpp"

namespace qzsg {
namespace {

constexpr std::size_t kMaxQubitsPerPlayer = 4;

// Fans `count` independent tasks out over `threads` workers.
template <typename Task>
void parallel_for(std::size_t count, std::size_t threads, Task task) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
  }
  for (auto& t : pool) t.join();
}

double safe_ln(double gap) { return std::log(std::max(std::abs(gap), 1e-300)); }

}  // namespace

QuantumGame load_game(const std::string& source) {
  if (source == "builtin:matching-pennies") return matching_pennies_game();
  if (source == "builtin:zero") return zero_game();
  if (source.rfind("builtin:", 0) == 0) throw ValidationError("unknown builtin game '" + source + "'");
  std::ifstream in(source);
  if (!in) throw ValidationError("cannot open game file '" + source + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("game file '" + source + "' is not valid JSON: " + e.what());
  }
  return game_from_json(j);
}

nlohmann::json game_summary(const QuantumGame& game) {
  double min_eig = std::numeric_limits<double>::infinity();
  std::size_t full_rank = 0;
  for (const auto& p : game.povm().elements()) {
    const double lo = hermitian_eig(p).min();
    min_eig = std::min(min_eig, lo);
    if (lo > 0.0) ++full_rank;
  }
  nlohmann::json j;
  j["alice_qubits"] = game.alice_qubits();
  j["bob_qubits"] = game.bob_qubits();
  j["outcomes"] = game.povm().size();
  j["u_inf_norm"] = game.u_inf_norm();
  j["povm_min_eigenvalue"] = min_eig;
  j["povm_full_rank_elements"] = full_rank;
  return j;
}

const std::vector<std::size_t>& preset_schedule() {
  static const std::vector<std::size_t> schedule = {1, 3, 13, 51, 189, 703, 2610, 9687, 35949, 49999};
  return schedule;
}

std::vector<std::size_t> parse_schedule(const std::string& schedule, std::size_t iters) {
  std::vector<std::size_t> out;
  if (schedule == "paper-exp2") {
    for (std::size_t t : preset_schedule())
      if (t <= iters) out.push_back(t);
    return out;
  }
  if (schedule.rfind("every-", 0) == 0) {
    std::size_t k = 0;
    try {
      k = std::stoul(schedule.substr(6));
    } catch (const std::exception&) {
      throw ValidationError("bad schedule '" + schedule + "'");
    }
    if (k == 0) throw ValidationError("schedule interval must be >= 1");
    for (std::size_t t = k; t <= iters; t += k) out.push_back(t);
    return out;
  }
  std::stringstream ss(schedule);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &pos);
    } catch (const std::exception&) {
      throw ValidationError("bad schedule entry '" + item + "'");
    }
    if (pos != item.size() || v == 0) throw ValidationError("bad schedule entry '" + item + "'");
    if (v <= iters) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// -- compare -------------------------------------------------------------------

void ExperimentSpec::validate() const {
  if (alice_qubits < 1 || bob_qubits < 1 || alice_qubits > kMaxQubitsPerPlayer ||
      bob_qubits > kMaxQubitsPerPlayer) {
    throw ValidationError("qubit counts must be in [1, " + std::to_string(kMaxQubitsPerPlayer) + "]");
  }
  if (games < 1) throw ValidationError("games must be >= 1");
  if (iters < 1) throw ValidationError("iters must be >= 1");
  if (algorithms.empty()) throw ValidationError("at least one algorithm is required");
  for (const auto& a : algorithms) (void)SolverConfig::from_alias(a);
  if (outcomes && *outcomes < 2) throw ValidationError("outcomes must be >= 2");
  if (step_size && !(*step_size > 0.0)) throw ValidationError("step_size must be positive");
}

std::size_t ComparisonReport::failed_runs() const {
  return static_cast<std::size_t>(
      std::count_if(runs.begin(), runs.end(), [](const RunRecord& r) { return !r.ok; }));
}

MeanCi mean_ci95(const std::vector<double>& values) {
  MeanCi out;
  const std::size_t n = values.size();
  if (n == 0) return out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  out.low = out.high = out.mean;
  if (n < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const boost::math::students_t dist(static_cast<double>(n - 1));
  const double q = boost::math::quantile(boost::math::complement(dist, 0.025));
  const double half = q * sd / std::sqrt(static_cast<double>(n));
  out.low = out.mean - half;
  out.high = out.mean + half;
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += safe_ln(y[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (safe_ln(y[i]) - my);
    sxx += dx * dx;
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

namespace {

AlgorithmAggregate aggregate(const std::string& alias, const std::vector<RunRecord>& runs) {
  AlgorithmAggregate agg;
  agg.algorithm = alias;
  std::vector<const RunRecord*> ok;
  for (const auto& r : runs) {
    if (r.algorithm != alias || !r.ok) continue;
    ok.push_back(&r);
    agg.gradient_calls += r.result.gradient_calls;
    agg.iterations += r.result.iterations;
  }
  agg.successful_runs = ok.size();
  if (ok.empty()) return agg;

  // Checkpoints present in every successful run (runs stopping early on a
  // target gap can have shorter traces).
  std::vector<std::size_t> ts;
  for (const auto& row : ok.front()->result.trace.rows) ts.push_back(row.t);
  for (const auto* r : ok) {
    std::vector<std::size_t> mine;
    for (const auto& row : r->result.trace.rows) mine.push_back(row.t);
    std::vector<std::size_t> common;
    std::set_intersection(ts.begin(), ts.end(), mine.begin(), mine.end(), std::back_inserter(common));
    ts = std::move(common);
  }

  std::vector<double> slope_t, slope_gap;
  for (std::size_t t : ts) {
    std::vector<double> avg, last, ln_avg, wall;
    for (const auto* r : ok) {
      for (const auto& row : r->result.trace.rows) {
        if (row.t != t) continue;
        avg.push_back(row.gap_avg);
        last.push_back(row.gap_last);
        ln_avg.push_back(safe_ln(row.gap_avg));
        wall.push_back(static_cast<double>(row.wall_time_ns));
      }
    }
    CheckpointAggregate c;
    c.t = t;
    c.count = avg.size();
    const MeanCi a = mean_ci95(avg);
    c.mean_gap_avg = a.mean;
    c.ci_low_gap_avg = a.low;
    c.ci_high_gap_avg = a.high;
    c.mean_gap_last = mean_ci95(last).mean;
    const MeanCi l = mean_ci95(ln_avg);
    c.mean_ln_gap_avg = l.mean;
    c.ci_low_ln_gap_avg = l.low;
    c.ci_high_ln_gap_avg = l.high;
    c.mean_wall_time_ns = mean_ci95(wall).mean;
    agg.checkpoints.push_back(c);
    if (t >= 10) {
      slope_t.push_back(static_cast<double>(t));
      slope_gap.push_back(c.mean_gap_avg);
    }
  }
  if (!agg.checkpoints.empty()) agg.final_mean_gap_avg = agg.checkpoints.back().mean_gap_avg;
  agg.loglog_slope = loglog_slope(slope_t, slope_gap);
  return agg;
}

}  // namespace

ComparisonReport run_comparison(const ExperimentSpec& spec, std::size_t threads) {
  spec.validate();
  ComparisonReport report;
  report.spec = spec;
  const std::size_t outcomes =
      spec.outcomes.value_or(default_outcome_count(spec.alice_qubits, spec.bob_qubits));

  std::vector<std::optional<QuantumGame>> games(spec.games);
  std::vector<std::string> game_errors(spec.games);
  parallel_for(spec.games, threads, [&](std::size_t g) {
    try {
      games[g] = random_game(spec.alice_qubits, spec.bob_qubits, outcomes,
                             derive_seed(spec.master_seed, g));
    } catch (const std::exception& e) {
      game_errors[g] = e.what();
    }
  });

  const std::size_t n_alg = spec.algorithms.size();
  report.runs.resize(spec.games * n_alg);
  parallel_for(report.runs.size(), threads, [&](std::size_t idx) {
    RunRecord& rec = report.runs[idx];
    rec.game_index = idx / n_alg;
    rec.game_seed = derive_seed(spec.master_seed, rec.game_index);
    rec.algorithm = spec.algorithms[idx % n_alg];
    if (!games[rec.game_index]) {
      rec.error = "game generation failed: " + game_errors[rec.game_index];
      return;
    }
    try {
      SolverConfig cfg = SolverConfig::from_alias(rec.algorithm);
      cfg.max_iters = spec.iters;
      cfg.step_size = spec.step_size;
      cfg.checkpoints = spec.checkpoints;
      cfg.seed = derive_seed(rec.game_seed, 0x5EED + idx % n_alg);
      cfg.record_timings = spec.record_timings;
      rec.result = run(*games[rec.game_index], cfg);
      rec.ok = true;
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
  });

  for (const auto& alias : spec.algorithms) report.aggregates.push_back(aggregate(alias, report.runs));
  return report;
}

nlohmann::json ComparisonReport::to_json() const {
  nlohmann::json j;
  j["format_version"] = 1;
  nlohmann::json s;
  s["alice_qubits"] = spec.alice_qubits;
  s["bob_qubits"] = spec.bob_qubits;
  s["games"] = spec.games;
  s["master_seed"] = spec.master_seed;
  s["algorithms"] = spec.algorithms;
  s["iters"] = spec.iters;
  s["checkpoints"] = spec.checkpoints;
  s["outcomes"] = spec.outcomes.value_or(default_outcome_count(spec.alice_qubits, spec.bob_qubits));
  if (spec.step_size) {
    s["step_size"] = *spec.step_size;
  } else {
    s["step_size"] = "auto";
  }
  j["experiment"] = s;
  j["ci_method"] =
      "two-sided 95% Student-t interval, df = count - 1; ln_* fields use natural logs of |gap|";

  nlohmann::json runs_json = nlohmann::json::array();
  for (const auto& r : runs) {
    nlohmann::json rj;
    rj["game_index"] = r.game_index;
    rj["game_seed"] = r.game_seed;
    rj["algorithm"] = r.algorithm;
    rj["status"] = r.ok ? "ok" : "failed";
    if (r.ok) {
      rj["step_size"] = r.result.step_size;
      rj["iterations"] = r.result.iterations;
      rj["gradient_calls"] = r.result.gradient_calls;
      rj["final_gap_avg"] = r.result.trace.rows.back().gap_avg;
      rj["final_gap_last"] = r.result.trace.rows.back().gap_last;
      rj["trace"] = r.result.trace.to_json();
    } else {
      rj["error"] = r.error;
    }
    runs_json.push_back(std::move(rj));
  }
  j["runs"] = std::move(runs_json);

  nlohmann::json aggs = nlohmann::json::array();
  for (const auto& a : aggregates) {
    nlohmann::json aj;
    aj["algorithm"] = a.algorithm;
    aj["successful_runs"] = a.successful_runs;
    aj["gradient_calls"] = a.gradient_calls;
    aj["iterations"] = a.iterations;
    aj["final_mean_gap_avg"] = a.final_mean_gap_avg;
    aj["loglog_slope"] = a.loglog_slope;
    nlohmann::json cps = nlohmann::json::array();
    for (const auto& c : a.checkpoints) {
      cps.push_back({{"t", c.t},
                     {"count", c.count},
                     {"mean_gap_avg", c.mean_gap_avg},
                     {"ci95_gap_avg", {c.ci_low_gap_avg, c.ci_high_gap_avg}},
                     {"mean_gap_last", c.mean_gap_last},
                     {"mean_ln_gap_avg", c.mean_ln_gap_avg},
                     {"ci95_ln_gap_avg", {c.ci_low_ln_gap_avg, c.ci_high_ln_gap_avg}},
                     {"mean_wall_time_ns", c.mean_wall_time_ns}});
    }
    aj["checkpoints"] = std::move(cps);
    aggs.push_back(std::move(aj));
  }
  j["aggregates"] = std::move(aggs);
  j["failed_runs"] = failed_runs();
  return j;
}

std::size_t threads_from_environment() {
  if (const char* env = std::getenv("QZSG_THREADS")) {
    try {
      const unsigned long v = std::stoul(env);
      if (v >= 1) return v;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// -- verify ----------------------------------------------------------------------

const std::vector<std::string>& verify_property_names() {
  static const std::vector<std::string> names = {"monotonicity", "gradient", "lipschitz",
                                                 "linearity", "pauli"};
  return names;
}

void VerifyOptions::validate() const {
  if (max_qubits < 1 || max_qubits > kMaxQubitsPerPlayer) {
    throw ValidationError("dims must be in [1, " + std::to_string(kMaxQubitsPerPlayer) + "]");
  }
  if (samples < 1) throw ValidationError("samples must be >= 1");
  if (seeds < 1) throw ValidationError("seeds must be >= 1");
  if (outcomes && *outcomes < 2) throw ValidationError("outcomes must be >= 2");
  for (const auto& p : properties) {
    const auto& known = verify_property_names();
    if (std::find(known.begin(), known.end(), p) == known.end()) {
      throw ValidationError("unknown property '" + p + "'");
    }
  }
}

bool VerifyReport::all_passed() const {
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyResult& p) { return p.passed; });
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json j;
  j["seeds"] = options.seeds;
  j["max_qubits"] = options.max_qubits;
  j["samples"] = options.samples;
  nlohmann::json props = nlohmann::json::array();
  for (const auto& p : properties) {
    props.push_back({{"name", p.name},
                     {"passed", p.passed},
                     {"worst_residual", p.worst},
                     {"threshold", p.threshold},
                     {"checks", p.checks}});
  }
  j["properties"] = std::move(props);
  j["all_passed"] = all_passed();
  return j;
}

double pauli_gradient_deviation(const QuantumGame& game, const DensityMatrix& beta) {
  const std::size_t n = game.alice_qubits(), m = game.bob_qubits();
  const PauliCoefficients u_hat = pauli_decompose(game.payoff_observable().matrix(), n + m);
  const PauliCoefficients beta_hat = pauli_decompose(beta.matrix().matrix(), m);
  ComplexMatrix f(game.alice_dim());
  const double scale = static_cast<double>(game.bob_dim());
  for (const auto& [word, coeff] : u_hat) {
    if (coeff == Complex{}) continue;
    const Complex b = beta_hat.at(word.substr(n));
    f += pauli_matrix(word.substr(0, n)).adjoint() * (scale * std::conj(coeff) * b);
  }
  return (f - payoff_gradient_alice(game, beta).matrix()).max_abs();
}

double finite_difference_error(const QuantumGame& game, const JointState& s, CounterRng& rng,
                               double h) {
  auto traceless_direction = [&](std::size_t dim) {
    HermitianMatrix d = random_hermitian(dim, rng);
    d -= HermitianMatrix::identity(dim) * (d.trace() / static_cast<double>(dim));
    d *= 1.0 / frobenius_norm(d.matrix());
    return d;
  };
  // Floor on the denominator so a vanishing directional derivative does not
  // turn rounding noise into a large relative error.
  const double floor = std::max(1e-3 * game.u_inf_norm(), 1e-300);
  auto rel = [&](double fd, double exact) {
    return std::abs(fd - exact) / std::max(std::abs(exact), floor);
  };

  const HermitianMatrix& a = s.alice.matrix();
  const HermitianMatrix& b = s.bob.matrix();
  const HermitianMatrix da = traceless_direction(game.alice_dim());
  const double fd_a =
      (expected_utility(game, a + da * h, b) - expected_utility(game, a - da * h, b)) / (2.0 * h);
  const double exact_a = trace_inner(da, payoff_gradient_alice(game, s.bob));

  const HermitianMatrix db = traceless_direction(game.bob_dim());
  const double fd_b =
      (expected_utility(game, a, b + db * h) - expected_utility(game, a, b - db * h)) / (2.0 * h);
  // Bob's gradient is the negative utility gradient.
  const double exact_b = -trace_inner(db, payoff_gradient_bob(game, s.alice));

  if (game.u_inf_norm() == 0.0) return std::max(std::abs(fd_a - exact_a), std::abs(fd_b - exact_b));
  return std::max(rel(fd_a, exact_a), rel(fd_b, exact_b));
}

VerifyReport run_verify(const VerifyOptions& options) {
  options.validate();
  VerifyReport report;
  report.options = options;
  const std::vector<std::string> wanted =
      options.properties.empty() ? verify_property_names() : options.properties;

  std::vector<PropertyResult> results;
  for (const auto& name : wanted) {
    PropertyResult p;
    p.name = name;
    if (name == "monotonicity") p.threshold = 1e-9;
    if (name == "gradient") p.threshold = 1e-5;
    if (name == "lipschitz") p.threshold = 1e-9;  // slack above ||U||_inf
    if (name == "linearity") p.threshold = 1e-10;
    if (name == "pauli") p.threshold = 1e-9;
    results.push_back(p);
  }

  for (std::size_t seed = 0; seed < options.seeds; ++seed) {
    for (std::size_t n = 1; n <= options.max_qubits; ++n) {
      for (std::size_t m = 1; m <= options.max_qubits; ++m) {
        const std::uint64_t game_seed = options.seed_offset + seed;
        const std::size_t outcomes =
            options.outcomes.value_or(std::min<std::size_t>(default_outcome_count(n, m), 64));
        const QuantumGame game = random_game(n, m, outcomes, game_seed);
        CounterRng rng(game_seed, 100 + 10 * n + m);
        for (auto& p : results) {
          double worst = 0.0;
          if (p.name == "lipschitz") {
            const double est =
                lipschitz_estimate(game, NormPair::SpectralTrace, options.samples, game_seed);
            worst = std::max(0.0, est - game.u_inf_norm());
            p.checks += options.samples;
          } else if (p.name == "pauli") {
            const auto coeffs = pauli_decompose(game.payoff_observable().matrix(), n + m);
            double imag = 0.0;
            for (const auto& [w, c] : coeffs) imag = std::max(imag, std::abs(c.imag()));
            const double recon =
                (pauli_reconstruct(coeffs) - game.payoff_observable().matrix()).max_abs();
            worst = std::max({imag, recon,
                              pauli_gradient_deviation(game, random_density(game.bob_dim(), rng))});
            p.checks += 1;
          } else {
            for (std::size_t k = 0; k < options.samples; ++k) {
              const JointState x = random_joint_state(game, rng);
              if (p.name == "monotonicity") {
                const JointState y = random_joint_state(game, rng);
                worst = std::max(worst, std::abs(monotonicity_residual(game, x, y)));
              } else if (p.name == "gradient") {
                worst = std::max(worst, finite_difference_error(game, x, rng));
              } else if (p.name == "linearity") {
                const JointState y = random_joint_state(game, rng);
                const double lambda = (k == 0) ? 0.3 : rng.uniform();
                worst = std::max(worst, linearity_check(game, x, y, lambda));
              }
              ++p.checks;
            }
          }
          p.worst = std::max(p.worst, worst);
        }
      }
    }
  }
  for (auto& p : results) p.passed = p.worst < p.threshold;
  report.properties = std::move(results);
  return report;
}

}  // namespace qzsg
