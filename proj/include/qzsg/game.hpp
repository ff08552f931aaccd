#ifndef QZSG_GAME_HPP
#define QZSG_GAME_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "qzsg/matrix.hpp"
#include "qzsg/rng.hpp"

namespace qzsg {

/// A point of the spectraplex: PSD within 1e-9, unit trace within 1e-9.
class DensityMatrix {
 public:
  DensityMatrix() = default;

  /// Validates PSD and trace; throws ValidationError.
  static DensityMatrix checked(HermitianMatrix h);
  /// For values that are density matrices by construction (mirror maps,
  /// convex combinations). No eigendecomposition is performed.
  static DensityMatrix unchecked(HermitianMatrix h) { return DensityMatrix(std::move(h)); }
  static DensityMatrix maximally_mixed(std::size_t dim);

  const HermitianMatrix& matrix() const { return h_; }
  std::size_t dim() const { return h_.dim(); }

  friend bool operator==(const DensityMatrix&, const DensityMatrix&) = default;

 private:
  explicit DensityMatrix(HermitianMatrix h) : h_(std::move(h)) {}
  HermitianMatrix h_;
};

/// Joint strategy (alpha, beta) of the two players.
struct JointState {
  DensityMatrix alice;
  DensityMatrix bob;

  static JointState maximally_mixed(std::size_t alice_dim, std::size_t bob_dim) {
    return {DensityMatrix::maximally_mixed(alice_dim), DensityMatrix::maximally_mixed(bob_dim)};
  }
  friend bool operator==(const JointState&, const JointState&) = default;
};

/// A per-player pair of Hermitian matrices with the shape of a JointState:
/// payoff gradients, dual accumulators, differences of states.
struct HermitianPair {
  HermitianMatrix alice;
  HermitianMatrix bob;

  static HermitianPair of(const JointState& s) { return {s.alice.matrix(), s.bob.matrix()}; }

  HermitianPair& operator+=(const HermitianPair& o) {
    alice += o.alice;
    bob += o.bob;
    return *this;
  }
  HermitianPair& operator-=(const HermitianPair& o) {
    alice -= o.alice;
    bob -= o.bob;
    return *this;
  }
  HermitianPair& operator*=(double s) {
    alice *= s;
    bob *= s;
    return *this;
  }
  friend HermitianPair operator+(HermitianPair a, const HermitianPair& b) { return a += b; }
  friend HermitianPair operator-(HermitianPair a, const HermitianPair& b) { return a -= b; }
  friend HermitianPair operator*(double s, HermitianPair a) { return a *= s; }
  friend bool operator==(const HermitianPair&, const HermitianPair&) = default;
};

/// Joint feedback F(Psi) = (F_alice(beta), F_bob(alpha)).
using GradientPair = HermitianPair;

/// sum_{players} tr(A_p B_p).
double pair_inner(const HermitianPair& a, const HermitianPair& b);

/// Referee measurement {P_w}: PSD elements summing to the identity.
class Povm {
 public:
  Povm() = default;
  /// Each element PSD within 1e-9, sum equal to I within 1e-8 entrywise.
  static Povm checked(std::vector<HermitianMatrix> elements);
  static Povm unchecked(std::vector<HermitianMatrix> elements) { return Povm(std::move(elements)); }

  const std::vector<HermitianMatrix>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  std::size_t dim() const { return elements_.empty() ? 0 : elements_.front().dim(); }

 private:
  explicit Povm(std::vector<HermitianMatrix> e) : elements_(std::move(e)) {}
  std::vector<HermitianMatrix> elements_;
};

/// U = sum_w u(w) P_w. Throws ValidationError on a length mismatch or |u| > 1.
HermitianMatrix build_payoff_observable(const Povm& povm, const std::vector<double>& utilities);

/// Two-player quantum zero-sum game: Alice holds n qubits, Bob m qubits, the
/// referee measures the joint state with `povm` and pays Alice u(w).
class QuantumGame {
 public:
  QuantumGame(std::size_t n, std::size_t m, Povm povm, std::vector<double> utilities,
              std::optional<std::uint64_t> seed = std::nullopt);

  std::size_t alice_qubits() const { return n_; }
  std::size_t bob_qubits() const { return m_; }
  std::size_t alice_dim() const { return std::size_t{1} << n_; }
  std::size_t bob_dim() const { return std::size_t{1} << m_; }

  const Povm& povm() const { return povm_; }
  const std::vector<double>& utilities() const { return utilities_; }
  const HermitianMatrix& payoff_observable() const { return payoff_; }
  double u_inf_norm() const { return u_inf_norm_; }
  std::optional<std::uint64_t> seed() const { return seed_; }

 private:
  std::size_t n_;
  std::size_t m_;
  Povm povm_;
  std::vector<double> utilities_;
  std::optional<std::uint64_t> seed_;
  HermitianMatrix payoff_;
  double u_inf_norm_;
};

inline constexpr int kGameFormatVersion = 1;

nlohmann::json game_to_json(const QuantumGame& game);
/// Validates the schema and every QuantumGame invariant.
QuantumGame game_from_json(const nlohmann::json& j);

/// Z(x)Z payoff measured in the computational basis, u = (+1, -1, -1, +1).
QuantumGame matching_pennies_game();
/// Computational-basis POVM with all utilities zero.
QuantumGame zero_game();

/// Outcome count used when none is requested: 4^(n+m).
std::size_t default_outcome_count(std::size_t n, std::size_t m);

/// Random full-rank POVM game: G_w complex Gaussian, A_w = G_w^dagger G_w + 1e-6 I,
/// P_w = S^{-1/2} A_w S^{-1/2} with S = sum A_w; utilities uniform on [-1, 1].
/// Deterministic in `seed`. Throws ValidationError if outcomes < 2.
QuantumGame random_game(std::size_t n, std::size_t m, std::size_t outcomes, std::uint64_t seed);

// -- evaluation ------------------------------------------------------------

/// tr(U^dagger (alpha (x) beta)), real part. Accepts arbitrary Hermitian
/// arguments so that finite differences can leave the spectraplex.
double expected_utility(const QuantumGame& game, const HermitianMatrix& alpha,
                        const HermitianMatrix& beta);
double expected_utility(const QuantumGame& game, const JointState& s);

/// F_alice(beta) = tr_B[U^dagger (I (x) beta)].
HermitianMatrix payoff_gradient_alice(const QuantumGame& game, const HermitianMatrix& beta);
HermitianMatrix payoff_gradient_alice(const QuantumGame& game, const DensityMatrix& beta);
/// F_bob(alpha) = -tr_A[U^dagger (alpha (x) I)].
HermitianMatrix payoff_gradient_bob(const QuantumGame& game, const HermitianMatrix& alpha);
HermitianMatrix payoff_gradient_bob(const QuantumGame& game, const DensityMatrix& alpha);

GradientPair payoff_gradient(const QuantumGame& game, const HermitianPair& s);
GradientPair payoff_gradient(const QuantumGame& game, const JointState& s);

/// Best-response values from a gradient pair evaluated at s:
/// lambda_max(F_alice(beta)) + lambda_max(F_bob(alpha)).
double duality_gap(const GradientPair& gradient_at_state);
/// max_alpha u(alpha, beta) - min_beta u(alpha, beta) at the given state.
double duality_gap(const QuantumGame& game, const JointState& s);

// -- operator-property oracles --------------------------------------------

/// <F(X) - F(Y), X - Y>; identically zero for zero-sum games.
double monotonicity_residual(const QuantumGame& game, const JointState& x, const JointState& y);

enum class NormPair {
  Frobenius,       // primal and dual both Frobenius
  SpectralTrace,   // dual ||.||_inf, primal ||.||_1
};

/// max over `samples` random pairs of ||F(X)-F(Y)||_dual / ||X-Y||_primal,
/// combining the players' norms in l2. A lower bound on the Lipschitz constant.
double lipschitz_estimate(const QuantumGame& game, NormPair norms, std::size_t samples,
                          std::uint64_t seed);

/// max entrywise |F(l s1 + (1-l) s2) - (l F(s1) + (1-l) F(s2))|.
double linearity_check(const QuantumGame& game, const JointState& s1, const JointState& s2,
                       double lambda);

// -- random states ---------------------------------------------------------

/// Ginibre-distributed full-rank mixed state G G^dagger / tr(G G^dagger).
DensityMatrix random_density(std::size_t dim, CounterRng& rng);
/// Haar-random pure state |v><v|.
DensityMatrix random_pure_state(std::size_t dim, CounterRng& rng);
JointState random_joint_state(const QuantumGame& game, CounterRng& rng);
/// Random Hermitian matrix with i.i.d. complex Gaussian upper triangle.
HermitianMatrix random_hermitian(std::size_t dim, CounterRng& rng);

}  // namespace qzsg

#endif  // QZSG_GAME_HPP
