#include "qzsg/game.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qzsg/error.hpp"
#include "qzsg/serialize.hpp"
#include "qzsg/spectral.hpp"

namespace qzsg {
namespace {

constexpr std::size_t kMaxTotalQubits = 8;

void require_dim(const HermitianMatrix& h, std::size_t dim, const char* what) {
  if (h.dim() != dim) {
    throw DimensionError(std::string(what) + ": expected dim " + std::to_string(dim) + ", got " +
                         std::to_string(h.dim()));
  }
}

// Stream offsets under a game seed.
constexpr std::uint64_t kPovmStream = 1;
constexpr std::uint64_t kUtilityStream = 2;

}  // namespace

// -- DensityMatrix / Povm ---------------------------------------------------

DensityMatrix DensityMatrix::checked(HermitianMatrix h) {
  const double tr = h.trace();
  if (std::abs(tr - 1.0) > 1e-9) {
    throw ValidationError("density matrix trace is " + std::to_string(tr) + ", expected 1");
  }
  const Spectrum s = hermitian_eig(h);
  if (s.min() < -kPsdTolerance) {
    throw ValidationError("density matrix has negative eigenvalue " + std::to_string(s.min()));
  }
  return DensityMatrix(std::move(h));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  if (dim == 0) throw DimensionError("maximally_mixed: dim must be positive");
  return DensityMatrix(HermitianMatrix::identity(dim) * (1.0 / static_cast<double>(dim)));
}

double pair_inner(const HermitianPair& a, const HermitianPair& b) {
  return trace_inner(a.alice, b.alice) + trace_inner(a.bob, b.bob);
}

Povm Povm::checked(std::vector<HermitianMatrix> elements) {
  if (elements.empty()) throw ValidationError("POVM has no elements");
  const std::size_t d = elements.front().dim();
  ComplexMatrix sum(d);
  for (std::size_t w = 0; w < elements.size(); ++w) {
    if (elements[w].dim() != d) throw DimensionError("POVM elements differ in dimension");
    const Spectrum s = hermitian_eig(elements[w]);
    if (s.min() < -kPsdTolerance) {
      throw ValidationError("POVM element " + std::to_string(w) + " is not PSD (eigenvalue " +
                            std::to_string(s.min()) + ")");
    }
    sum += elements[w].matrix();
  }
  sum -= ComplexMatrix::identity(d);
  if (sum.max_abs() > 1e-8) {
    throw ValidationError("POVM elements do not sum to the identity (deviation " +
                          std::to_string(sum.max_abs()) + ")");
  }
  return Povm(std::move(elements));
}

HermitianMatrix build_payoff_observable(const Povm& povm, const std::vector<double>& utilities) {
  if (utilities.size() != povm.size()) {
    throw ValidationError("utility count " + std::to_string(utilities.size()) +
                          " does not match POVM size " + std::to_string(povm.size()));
  }
  HermitianMatrix u = HermitianMatrix::zero(povm.dim());
  for (std::size_t w = 0; w < utilities.size(); ++w) {
    const double uw = utilities[w];
    if (!std::isfinite(uw) || std::abs(uw) > 1.0) {
      throw ValidationError("utility " + std::to_string(uw) + " outside [-1, 1]");
    }
    if (uw != 0.0) u += povm.elements()[w] * uw;
  }
  return u;
}

// -- QuantumGame ------------------------------------------------------------

QuantumGame::QuantumGame(std::size_t n, std::size_t m, Povm povm, std::vector<double> utilities,
                         std::optional<std::uint64_t> seed)
    : n_(n), m_(m), povm_(std::move(povm)), utilities_(std::move(utilities)), seed_(seed) {
  if (n_ == 0 || m_ == 0 || n_ + m_ > kMaxTotalQubits) {
    throw ValidationError("qubit counts must be >= 1 with n + m <= " +
                          std::to_string(kMaxTotalQubits));
  }
  if (povm_.dim() != (std::size_t{1} << (n_ + m_))) {
    throw DimensionError("POVM dimension " + std::to_string(povm_.dim()) + " does not match 2^" +
                         std::to_string(n_ + m_));
  }
  payoff_ = build_payoff_observable(povm_, utilities_);
  u_inf_norm_ = norms(payoff_).spectral;
}

nlohmann::json game_to_json(const QuantumGame& game) {
  nlohmann::json povm = nlohmann::json::array();
  for (const auto& p : game.povm().elements()) povm.push_back(matrix_to_json(p.matrix()));
  nlohmann::json j;
  j["format_version"] = kGameFormatVersion;
  j["n"] = game.alice_qubits();
  j["m"] = game.bob_qubits();
  j["utilities"] = game.utilities();
  j["povm"] = std::move(povm);
  if (game.seed()) {
    j["seed"] = *game.seed();
  } else {
    j["seed"] = nullptr;
  }
  return j;
}

QuantumGame game_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw ValidationError("game file must be a JSON object");
    if (j.at("format_version").get<int>() != kGameFormatVersion) {
      throw ValidationError("unsupported game format_version");
    }
    const auto n = j.at("n").get<std::size_t>();
    const auto m = j.at("m").get<std::size_t>();
    auto utilities = j.at("utilities").get<std::vector<double>>();
    std::vector<HermitianMatrix> elements;
    for (const auto& pj : j.at("povm")) {
      elements.push_back(HermitianMatrix::checked(matrix_from_json(pj)));
    }
    std::optional<std::uint64_t> seed;
    if (j.contains("seed") && !j.at("seed").is_null()) seed = j.at("seed").get<std::uint64_t>();
    return QuantumGame(n, m, Povm::checked(std::move(elements)), std::move(utilities), seed);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed game file: ") + e.what());
  }
}

namespace {

QuantumGame basis_game(std::vector<double> utilities) {
  std::vector<HermitianMatrix> elements;
  for (std::size_t w = 0; w < 4; ++w) {
    std::vector<double> diag(4, 0.0);
    diag[w] = 1.0;
    elements.push_back(HermitianMatrix::diagonal(diag));
  }
  return QuantumGame(1, 1, Povm::checked(std::move(elements)), std::move(utilities));
}

}  // namespace

QuantumGame matching_pennies_game() { return basis_game({1.0, -1.0, -1.0, 1.0}); }

QuantumGame zero_game() { return basis_game({0.0, 0.0, 0.0, 0.0}); }

std::size_t default_outcome_count(std::size_t n, std::size_t m) {
  return std::size_t{1} << (2 * (n + m));
}

QuantumGame random_game(std::size_t n, std::size_t m, std::size_t outcomes, std::uint64_t seed) {
  if (outcomes < 2) throw ValidationError("outcomes must be >= 2");
  if (n == 0 || m == 0 || n + m > kMaxTotalQubits) {
    throw ValidationError("qubit counts must be >= 1 with n + m <= " +
                          std::to_string(kMaxTotalQubits));
  }
  const std::size_t d = std::size_t{1} << (n + m);
  CounterRng povm_rng(seed, kPovmStream);

  std::vector<HermitianMatrix> a;
  a.reserve(outcomes);
  HermitianMatrix s = HermitianMatrix::zero(d);
  for (std::size_t w = 0; w < outcomes; ++w) {
    ComplexMatrix g(d);
    for (auto& z : g.entries()) z = povm_rng.complex_normal();
    HermitianMatrix aw = HermitianMatrix::hermitian_part(g.adjoint() * g);
    aw += HermitianMatrix::identity(d) * 1e-6;
    s += aw;
    a.push_back(std::move(aw));
  }
  const HermitianMatrix s_inv_sqrt = spectral_fn(s, [](double x) { return 1.0 / std::sqrt(x); });

  std::vector<HermitianMatrix> elements;
  elements.reserve(outcomes);
  for (auto& aw : a) {
    elements.push_back(HermitianMatrix::hermitian_part(s_inv_sqrt.matrix() * aw.matrix() *
                                                       s_inv_sqrt.matrix()));
    aw = HermitianMatrix();
  }

  CounterRng utility_rng(seed, kUtilityStream);
  std::vector<double> utilities(outcomes);
  for (auto& u : utilities) u = utility_rng.uniform(-1.0, 1.0);

  return QuantumGame(n, m, Povm::unchecked(std::move(elements)), std::move(utilities), seed);
}

// -- evaluation ---------------------------------------------------------------

double expected_utility(const QuantumGame& game, const HermitianMatrix& alpha,
                        const HermitianMatrix& beta) {
  const std::size_t da = game.alice_dim(), db = game.bob_dim();
  require_dim(alpha, da, "expected_utility (alice)");
  require_dim(beta, db, "expected_utility (bob)");
  // tr(U^dagger (a (x) b)) = sum conj(U[(i,k),(j,l)]) a[i,j] b[k,l]
  const ComplexMatrix& u = game.payoff_observable().matrix();
  Complex s = 0.0;
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) {
      const Complex aij = alpha(i, j);
      Complex inner = 0.0;
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) inner += std::conj(u(i * db + k, j * db + l)) * beta(k, l);
      s += aij * inner;
    }
  return s.real();
}

double expected_utility(const QuantumGame& game, const JointState& s) {
  return expected_utility(game, s.alice.matrix(), s.bob.matrix());
}

// U is Hermitian, so U^dagger = U in the gradient formulas below.
HermitianMatrix payoff_gradient_alice(const QuantumGame& game, const HermitianMatrix& beta) {
  const std::size_t da = game.alice_dim(), db = game.bob_dim();
  require_dim(beta, db, "payoff_gradient_alice");
  const ComplexMatrix& u = game.payoff_observable().matrix();
  // F[i,j] = sum_{k,l} U[(i,k),(j,l)] beta[l,k]
  ComplexMatrix f(da);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = i; j < da; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) s += u(i * db + k, j * db + l) * beta(l, k);
      f(i, j) = s;
      f(j, i) = std::conj(s);
    }
  return HermitianMatrix::hermitian_part(std::move(f));
}

HermitianMatrix payoff_gradient_alice(const QuantumGame& game, const DensityMatrix& beta) {
  return payoff_gradient_alice(game, beta.matrix());
}

HermitianMatrix payoff_gradient_bob(const QuantumGame& game, const HermitianMatrix& alpha) {
  const std::size_t da = game.alice_dim(), db = game.bob_dim();
  require_dim(alpha, da, "payoff_gradient_bob");
  const ComplexMatrix& u = game.payoff_observable().matrix();
  // F[k,l] = -sum_{i,j} U[(i,k),(j,l)] alpha[j,i]
  ComplexMatrix f(db);
  for (std::size_t k = 0; k < db; ++k)
    for (std::size_t l = k; l < db; ++l) {
      Complex s = 0.0;
      for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j) s += u(i * db + k, j * db + l) * alpha(j, i);
      f(k, l) = -s;
      f(l, k) = -std::conj(s);
    }
  return HermitianMatrix::hermitian_part(std::move(f));
}

HermitianMatrix payoff_gradient_bob(const QuantumGame& game, const DensityMatrix& alpha) {
  return payoff_gradient_bob(game, alpha.matrix());
}

GradientPair payoff_gradient(const QuantumGame& game, const HermitianPair& s) {
  return {payoff_gradient_alice(game, s.bob), payoff_gradient_bob(game, s.alice)};
}

GradientPair payoff_gradient(const QuantumGame& game, const JointState& s) {
  return {payoff_gradient_alice(game, s.bob), payoff_gradient_bob(game, s.alice)};
}

double duality_gap(const GradientPair& g) {
  return hermitian_eig(g.alice).max() + hermitian_eig(g.bob).max();
}

double duality_gap(const QuantumGame& game, const JointState& s) {
  return duality_gap(payoff_gradient(game, s));
}

// -- oracles ------------------------------------------------------------------

double monotonicity_residual(const QuantumGame& game, const JointState& x, const JointState& y) {
  const GradientPair df = payoff_gradient(game, x) - payoff_gradient(game, y);
  return pair_inner(df, HermitianPair::of(x) - HermitianPair::of(y));
}

double lipschitz_estimate(const QuantumGame& game, NormPair norm_pair, std::size_t samples,
                          std::uint64_t seed) {
  if (samples == 0) throw ValidationError("lipschitz_estimate: samples must be >= 1");
  CounterRng rng(seed, 0);
  double best = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    // Alternate mixed and pure samples; pure states reach the spectraplex
    // boundary where the ratio tends to be largest.
    auto draw = [&](std::size_t dim) {
      return (k % 2 == 0) ? random_density(dim, rng) : random_pure_state(dim, rng);
    };
    const JointState x{draw(game.alice_dim()), draw(game.bob_dim())};
    const JointState y{draw(game.alice_dim()), draw(game.bob_dim())};
    const HermitianPair dx = HermitianPair::of(x) - HermitianPair::of(y);
    const GradientPair df = payoff_gradient(game, dx);  // F is linear

    double primal = 0.0, dual = 0.0;
    if (norm_pair == NormPair::Frobenius) {
      primal = std::hypot(frobenius_norm(dx.alice.matrix()), frobenius_norm(dx.bob.matrix()));
      dual = std::hypot(frobenius_norm(df.alice.matrix()), frobenius_norm(df.bob.matrix()));
    } else {
      primal = std::hypot(norms(dx.alice).schatten1, norms(dx.bob).schatten1);
      dual = std::hypot(norms(df.alice).spectral, norms(df.bob).spectral);
    }
    if (primal > 1e-12) best = std::max(best, dual / primal);
  }
  return best;
}

double linearity_check(const QuantumGame& game, const JointState& s1, const JointState& s2,
                       double lambda) {
  const HermitianPair p1 = HermitianPair::of(s1);
  const HermitianPair p2 = HermitianPair::of(s2);
  const GradientPair mixed = payoff_gradient(game, lambda * p1 + (1.0 - lambda) * p2);
  const GradientPair combined =
      lambda * payoff_gradient(game, p1) + (1.0 - lambda) * payoff_gradient(game, p2);
  const GradientPair diff = mixed - combined;
  return std::max(diff.alice.matrix().max_abs(), diff.bob.matrix().max_abs());
}

// -- random states --------------------------------------------------------------

DensityMatrix random_density(std::size_t dim, CounterRng& rng) {
  ComplexMatrix g(dim);
  for (auto& z : g.entries()) z = rng.complex_normal();
  HermitianMatrix h = HermitianMatrix::hermitian_part(g * g.adjoint());
  h *= 1.0 / h.trace();
  return DensityMatrix::unchecked(std::move(h));
}

DensityMatrix random_pure_state(std::size_t dim, CounterRng& rng) {
  std::vector<Complex> v(dim);
  double norm2 = 0.0;
  for (auto& z : v) {
    z = rng.complex_normal();
    norm2 += std::norm(z);
  }
  ComplexMatrix p(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) p(i, j) = v[i] * std::conj(v[j]) / norm2;
  return DensityMatrix::unchecked(HermitianMatrix::hermitian_part(std::move(p)));
}

JointState random_joint_state(const QuantumGame& game, CounterRng& rng) {
  DensityMatrix a = random_density(game.alice_dim(), rng);
  DensityMatrix b = random_density(game.bob_dim(), rng);
  return {std::move(a), std::move(b)};
}

HermitianMatrix random_hermitian(std::size_t dim, CounterRng& rng) {
  ComplexMatrix g(dim);
  for (auto& z : g.entries()) z = rng.complex_normal();
  return HermitianMatrix::hermitian_part(std::move(g));
}

}  // namespace qzsg
