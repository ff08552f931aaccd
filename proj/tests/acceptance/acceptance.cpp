// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails. argv[1] is the path to the CLI binary.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "../support/oracles.hpp"
#include "qzsg/game.hpp"
#include "qzsg/geometry.hpp"
#include "qzsg/harness.hpp"
#include "qzsg/rng.hpp"
#include "qzsg/solvers.hpp"

using namespace qzsg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;
  std::function<Outcome()> body;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double joint_diff(const JointState& a, const JointState& b) {
  return std::max(oracle::max_abs_diff(a.alice.matrix().matrix(), b.alice.matrix().matrix()),
                  oracle::max_abs_diff(a.bob.matrix().matrix(), b.bob.matrix().matrix()));
}

HermitianMatrix unit_traceless(std::size_t dim, CounterRng& rng) {
  HermitianMatrix h = random_hermitian(dim, rng);
  h -= HermitianMatrix::identity(dim) * (h.trace() / static_cast<double>(dim));
  return h * (1.0 / frobenius_norm(h.matrix()));
}

std::size_t outcomes_for(std::size_t n, std::size_t m) {
  return std::min<std::size_t>(default_outcome_count(n, m), 64);
}

// -- 1 ------------------------------------------------------------------------

Outcome monotonicity() {
  double worst = 0.0;
  std::size_t triples = 0;
  for (std::size_t q : {1u, 2u}) {
    for (std::uint64_t g = 0; g < 20; ++g) {
      const QuantumGame game = random_game(q, q, outcomes_for(q, q), 1000 + 100 * q + g);
      CounterRng rng(derive_seed(77, 100 * q + g), 0);
      for (int k = 0; k < 50; ++k, ++triples) {
        const JointState x = random_joint_state(game, rng), y = random_joint_state(game, rng);
        const GradientPair fx = payoff_gradient(game, x), fy = payoff_gradient(game, y);
        const HermitianPair dx = HermitianPair::of(x) - HermitianPair::of(y);
        worst = std::max(worst, std::abs(pair_inner(fx - fy, dx)));
      }
    }
  }
  return {worst < 1e-9, fmt("max |<F(X)-F(Y),X-Y>| = %.3e over %.0f triples", worst, double(triples))};
}

// -- 2 ------------------------------------------------------------------------

Outcome gradient_fd() {
  const double h = 1e-6;
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 1 + k % 3, m = 1 + (k / 3) % 2;
    const QuantumGame game = random_game(n, m, outcomes_for(n, m), 2000 + k);
    CounterRng rng(derive_seed(78, k), 0);
    const JointState s = random_joint_state(game, rng);
    const HermitianMatrix a = s.alice.matrix(), b = s.bob.matrix();
    const HermitianMatrix da = unit_traceless(game.alice_dim(), rng);
    const HermitianMatrix db = unit_traceless(game.bob_dim(), rng);
    const double fd_a = (oracle::utility_via_kron(game, (a + da * h).matrix(), b.matrix()) -
                         oracle::utility_via_kron(game, (a - da * h).matrix(), b.matrix())) / (2 * h);
    const double fd_b = -(oracle::utility_via_kron(game, a.matrix(), (b + db * h).matrix()) -
                          oracle::utility_via_kron(game, a.matrix(), (b - db * h).matrix())) / (2 * h);
    const double an_a = trace_inner(payoff_gradient_alice(game, s.bob), da);
    const double an_b = trace_inner(payoff_gradient_bob(game, s.alice), db);
    const double floor = 1e-3 * game.u_inf_norm();
    worst = std::max(worst, std::abs(fd_a - an_a) / std::max(std::abs(an_a), floor));
    worst = std::max(worst, std::abs(fd_b - an_b) / std::max(std::abs(an_b), floor));
  }
  return {worst < 1e-5, fmt("worst relative error %.3e over 50 directions per player", worst)};
}

// -- 3 ------------------------------------------------------------------------

Outcome lipschitz() {
  double worst_excess = -1e300, worst_ratio = 0.0;
  for (std::uint64_t g = 0; g < 20; ++g) {
    const std::size_t n = 1 + g % 3, m = 1 + (g / 3) % 3;
    const QuantumGame game = random_game(n, m, outcomes_for(n, m), 3000 + g);
    const double ratio = lipschitz_estimate(game, NormPair::SpectralTrace, 1000, g);
    worst_excess = std::max(worst_excess, ratio - game.u_inf_norm());
    worst_ratio = std::max(worst_ratio, ratio / game.u_inf_norm());
  }
  return {worst_excess <= 1e-9,
          fmt("max (ratio - ||U||_inf) = %.3e, max ratio/||U||_inf = %.4f, 20 games up to 3+3",
              worst_excess, worst_ratio)};
}

// -- 4 ------------------------------------------------------------------------

Outcome closed_forms() {
  CounterRng rng(79, 0);
  double shift = 0.0, idem = 0.0, prox0 = 0.0, mwu = 0.0, three = 0.0;
  for (int k = 0; k < 500; ++k) {
    const std::size_t d = std::size_t{2} << (k % 3);
    const HermitianMatrix y = random_hermitian(d, rng);
    const double c = rng.uniform(-50.0, 50.0);
    shift = std::max(shift, oracle::max_abs_diff(logit_map(y).matrix().matrix(),
                                                 logit_map(y + HermitianMatrix::identity(d) * c).matrix().matrix()));

    const DensityMatrix p = orth_project_spectraplex(y);
    idem = std::max(idem, oracle::max_abs_diff(orth_project_spectraplex(p.matrix()).matrix().matrix(),
                                               p.matrix().matrix()));

    const DensityMatrix x = random_density(d, rng);
    for (const auto reg : {Regularizer::entropy(), Regularizer::frobenius()})
      prox0 = std::max(prox0, oracle::max_abs_diff(proximal_map(reg, x, y, 0.0).matrix().matrix(),
                                                   x.matrix().matrix()));

    std::vector<double> probs(d), g(d);
    double z = 0.0;
    for (auto& v : probs) z += v = rng.uniform(0.05, 1.0);
    for (auto& v : probs) v /= z;
    for (auto& v : g) v = rng.uniform(-1.0, 1.0);
    const double eta = rng.uniform(0.0, 2.0);
    const auto expected = oracle::mwu(probs, g, eta);
    const DensityMatrix got = proximal_map(Regularizer::entropy(),
                                           DensityMatrix::checked(HermitianMatrix::diagonal(probs)),
                                           HermitianMatrix::diagonal(g), eta);
    for (std::size_t i = 0; i < d; ++i) mwu = std::max(mwu, std::abs(got.matrix()(i, i).real() - expected[i]));

    const DensityMatrix u = random_density(d, rng), v = random_density(d, rng), w = random_density(d, rng);
    const auto e = Regularizer::entropy();
    const double lhs_e = bregman(e, w, u) - bregman(e, w, v) - bregman(e, v, u);
    const double rhs_e = trace_inner(matrix_log(v.matrix()) - matrix_log(u.matrix()), w.matrix() - v.matrix());
    const auto f = Regularizer::frobenius();
    const double lhs_f = bregman(f, w, u) - bregman(f, w, v) - bregman(f, v, u);
    const double rhs_f = trace_inner(v.matrix() - u.matrix(), w.matrix() - v.matrix());
    three = std::max({three, std::abs(lhs_e - rhs_e), std::abs(lhs_f - rhs_f)});
  }
  const bool ok = shift < 1e-10 && idem < 1e-10 && prox0 < 1e-10 && mwu < 1e-12 && three < 1e-9;
  std::ostringstream os;
  os << "shift " << shift << ", idempotence " << idem << ", zero-step " << prox0 << ", mwu " << mwu
     << ", three-point " << three << " (500 instances each)";
  return {ok, os.str()};
}

// -- 5 ------------------------------------------------------------------------

Outcome rate_envelope() {
  double worst_ratio = 0.0;
  bool ok = true;
  for (std::uint64_t g = 0; g < 20; ++g) {
    const QuantumGame game = random_game(1, 1, default_outcome_count(1, 1), 5000 + g);
    SolverConfig cfg = SolverConfig::from_alias("ommwu");
    cfg.step_size = 1.0 / (2.0 * game.u_inf_norm());
    cfg.max_iters = 5000;
    cfg.checkpoints = {100, 500, 1000, 5000};
    const RunResult r = run(game, cfg);
    if (r.trace.rows.size() != 4) ok = false;
    for (const auto& row : r.trace.rows) {
      const double bound = 2.0 * (std::log(2.0) + std::log(2.0)) / (*cfg.step_size * double(row.t));
      worst_ratio = std::max(worst_ratio, row.gap_avg / bound);
      if (!(row.gap_avg <= bound)) ok = false;
    }
  }
  return {ok, fmt("max gap_avg / bound = %.4f over 20 games x 4 checkpoints", worst_ratio)};
}

// -- 6 ------------------------------------------------------------------------

Outcome matching_pennies() {
  const QuantumGame game = matching_pennies_game();
  SolverConfig om = SolverConfig::from_alias("ommwu");
  om.max_iters = 5000;
  om.target_gap = 1e-3 * (1 - 1e-12);
  const RunResult a = run(game, om);
  SolverConfig sd = SolverConfig::from_alias("mmwu-sd");
  sd.max_iters = 50000;
  sd.target_gap = 1e-2 * (1 - 1e-12);
  const RunResult b = run(game, sd);
  const double ga = a.trace.rows.back().gap_avg, gb = b.trace.rows.back().gap_avg;
  std::ostringstream os;
  os << "ommwu gap_avg " << ga << " at t=" << a.iterations << "; mmwu-sd gap_avg " << gb
     << " at t=" << b.iterations << " (the maximally mixed start is already the equilibrium)";
  return {ga < 1e-3 && gb < 1e-2, os.str()};
}

// -- 7 ------------------------------------------------------------------------

Outcome hierarchy() {
  double worst_ommp = 0.0, worst_mda_indep = 0.0;
  bool mda_exact = true;
  for (std::uint64_t g = 0; g < 10; ++g) {
    const std::size_t n = 1 + g % 2, m = 1 + (g / 2) % 2;
    const QuantumGame game = random_game(n, m, default_outcome_count(n, m), 7000 + g);
    const double eta = 1.0 / (2.0 * game.u_inf_norm());

    const SolverConfig ommwu = SolverConfig::from_alias("ommwu");
    SolverState s = initial_state(game);
    oracle::DirectOmmwu direct(game, eta);
    for (int t = 0; t < 100; ++t) {
      s = ommp_step(game, std::move(s), ommwu, eta);
      direct.step();
      worst_ommp = std::max({worst_ommp, joint_diff(s.iterate, direct.state), joint_diff(s.momentum, direct.hat)});
    }

    const SolverConfig mmwu = SolverConfig::from_alias("mmwu");
    SolverState d = initial_state(game);
    HermitianMatrix wa = HermitianMatrix::zero(game.alice_dim()), wb = HermitianMatrix::zero(game.bob_dim());
    for (int t = 0; t < 100; ++t) {
      wa += payoff_gradient_alice(game, d.iterate.bob);
      wb += payoff_gradient_bob(game, d.iterate.alice);
      d = mda_step(game, std::move(d), mmwu, eta);
      const JointState closed{logit_map(wa * eta), logit_map(wb * eta)};
      if (!(closed == d.iterate)) mda_exact = false;
      const JointState indep{oracle::DirectOmmwu::dm(oracle::DirectOmmwu::logit((wa * eta).matrix())),
                             oracle::DirectOmmwu::dm(oracle::DirectOmmwu::logit((wb * eta).matrix()))};
      worst_mda_indep = std::max(worst_mda_indep, joint_diff(indep, d.iterate));
    }
  }
  std::ostringstream os;
  os << "OMMP vs direct OMMWU max deviation " << worst_ommp << "; MDA vs logit(eta W) "
     << (mda_exact ? "bit-identical" : "NOT identical") << " (independent logit " << worst_mda_indep << ")";
  return {worst_ommp < 1e-9 && mda_exact && worst_mda_indep < 1e-12, os.str()};
}

// -- 8 ------------------------------------------------------------------------

Outcome experiment_shape() {
  ExperimentSpec spec;
  spec.alice_qubits = 2;
  spec.bob_qubits = 2;
  spec.games = 10;
  spec.master_seed = 2024;
  spec.algorithms = {"mmwu-sd", "ommwu"};
  spec.iters = 20000;
  spec.checkpoints = {100, 200, 500, 1000, 2000, 5000, 10000, 20000};
  const ComparisonReport rep = run_comparison(spec, threads_from_environment());
  const auto& sd = rep.aggregates[0];
  const auto& om = rep.aggregates[1];
  const bool ok = rep.failed_runs() == 0 && om.final_mean_gap_avg < sd.final_mean_gap_avg &&
                  om.loglog_slope < sd.loglog_slope;
  std::ostringstream os;
  os << "mean final gap ommwu " << om.final_mean_gap_avg << " vs mmwu-sd " << sd.final_mean_gap_avg
     << "; slope ommwu " << om.loglog_slope << " vs mmwu-sd " << sd.loglog_slope;
  return {ok, os.str()};
}

// -- 9 ------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string slurp_tree(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) all += fs::relative(f, dir).string() + "\n" + slurp(f) + "\n";
  return all;
}

Outcome determinism(const std::string& cli) {
  const fs::path root = fs::temp_directory_path() / ("qzsg_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  auto sh = [&](const std::string& env, const std::string& args) {
    const std::string cmd = env + " '" + cli + "' " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  std::vector<std::string> mismatches;
  int failures = 0;
  for (int rep = 0; rep < 2; ++rep) {
    const fs::path d = root / std::to_string(rep);
    fs::create_directories(d);
    const std::string q = "'" + d.string() + "/";
    failures += sh("", "generate -n 2 -m 1 --seed 11 -o " + q + "game.json'") != 0;
    failures += sh("", "solve -g " + q + "game.json' -a ommwu --max-iters 2000 -o " + q + "trace.csv'") != 0;
    failures += sh("", "solve -g " + q + "game.json' -a omeg --max-iters 500 --format json -o " + q +
                           "trace.json'") != 0;
    failures += sh("", "solve -g builtin:matching-pennies -a mmwu-sd --max-iters 1000 --schedule paper-exp2 -o " +
                           q + "mp.csv'") != 0;
    failures += sh("QZSG_THREADS=1", "compare -n 1 -m 1 --games 6 --seed 5 --iters 600 -o " + q + "cmp1'") != 0;
    failures += sh("QZSG_THREADS=4", "compare -n 1 -m 1 --games 6 --seed 5 --iters 600 -o " + q + "cmp4'") != 0;
    failures += sh("", "verify --samples 10 --seeds 2 --dims 2 -o " + q + "verify.json'") != 0;
  }
  const fs::path a = root / "0", b = root / "1";
  for (const char* f : {"game.json", "trace.csv", "trace.csv.summary.json", "trace.json", "mp.csv", "verify.json"}) {
    if (!fs::exists(a / f) || slurp(a / f) != slurp(b / f)) mismatches.push_back(f);
  }
  for (const char* dname : {"cmp1", "cmp4"})
    if (!fs::exists(a / dname) || slurp_tree(a / dname) != slurp_tree(b / dname)) mismatches.push_back(dname);
  if (!fs::exists(a / "cmp1") || slurp_tree(a / "cmp1") != slurp_tree(a / "cmp4"))
    mismatches.push_back("cmp1 vs cmp4 (QZSG_THREADS 1 vs 4)");
  fs::remove_all(root);

  std::string detail = std::to_string(failures) + " non-zero exits; ";
  if (mismatches.empty()) {
    detail += "generate/solve/compare/verify outputs byte-identical across reruns and thread counts";
  } else {
    detail += "mismatched:";
    for (const auto& m : mismatches) detail += " " + m;
  }
  return {failures == 0 && mismatches.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-qzsg-cli>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];
  const std::vector<Criterion> criteria = {
      {1, "monotonicity identity", 10, monotonicity},
      {2, "gradient finite differences", 5, gradient_fd},
      {3, "Lipschitz bound", 60, lipschitz},
      {4, "closed-form maps", 30, closed_forms},
      {5, "rate envelope", 120, rate_envelope},
      {6, "matching pennies convergence", 120, matching_pennies},
      {7, "hierarchy equivalence", 30, hierarchy},
      {8, "experiment shape (2+2 qubits)", 600, experiment_shape},
      {9, "determinism", 60, [&] { return determinism(cli); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.time_limit_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("%s criterion %d (%s): %s [%.2f s, limit %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), o.detail.c_str(), secs, c.time_limit_s, in_time ? "" : ", EXCEEDED");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
