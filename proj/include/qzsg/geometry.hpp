#ifndef QZSG_GEOMETRY_HPP
#define QZSG_GEOMETRY_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qzsg/game.hpp"
#include "qzsg/matrix.hpp"

namespace qzsg {

enum class RegularizerKind { VonNeumannEntropy, FrobeniusSquared };
enum class NormId { Schatten1, Frobenius };

/// Distance-generating function on a spectraplex.
///
/// VonNeumannEntropy: h(X) = tr[X log X], Bregman divergence is the quantum
/// relative entropy, the mirror map is the logit map exp(Y)/tr exp(Y).
/// FrobeniusSquared: h(X) = ||X||_F^2 / 2, Bregman divergence is half the
/// squared Frobenius distance, the mirror map is the Euclidean projection.
/// Both are 1-strongly convex in their respective norms.
struct Regularizer {
  RegularizerKind kind = RegularizerKind::VonNeumannEntropy;

  static Regularizer entropy() { return {RegularizerKind::VonNeumannEntropy}; }
  static Regularizer frobenius() { return {RegularizerKind::FrobeniusSquared}; }

  double strong_convexity_modulus() const { return 1.0; }
  NormId norm() const {
    return kind == RegularizerKind::VonNeumannEntropy ? NormId::Schatten1 : NormId::Frobenius;
  }
  /// Upper bound on the divergence over one spectraplex of side `dim`:
  /// log(dim) for entropy (measured from the maximally mixed state), 2 for Frobenius.
  double diameter_bound(std::size_t dim) const;
  /// Sum of the per-player bounds.
  double joint_diameter(std::size_t alice_dim, std::size_t bob_dim) const {
    return diameter_bound(alice_dim) + diameter_bound(bob_dim);
  }

  /// "vn-entropy" or "frobenius".
  std::string_view id() const;
  static Regularizer from_id(std::string_view id);

  friend bool operator==(const Regularizer&, const Regularizer&) = default;
};

/// Per-player dual-space element (accumulated feedback, log-domain states).
using DualVector = HermitianPair;

double dgf_value(const Regularizer& reg, const DensityMatrix& x);

/// D_h(X || Y): divergence of X from the reference Y. Entropy case throws
/// NumericalError when Y is singular (lambda_min(Y) <= 1e-15).
double bregman(const Regularizer& reg, const DensityMatrix& x, const DensityMatrix& y);

/// Logit map exp(Y) / tr exp(Y), evaluated with eigenvalues shifted by their max.
DensityMatrix logit_map(const HermitianMatrix& y);

/// Euclidean projection of a real vector onto the probability simplex.
std::vector<double> simplex_project(std::vector<double> v);

/// argmin_C ||Y - C||_F over the spectraplex: project the eigenvalues of Y
/// onto the simplex and keep the eigenvectors.
DensityMatrix orth_project_spectraplex(const HermitianMatrix& y);

/// Regularized best response argmax_X { <Y, X> - h(X) }.
DensityMatrix mirror_map(const Regularizer& reg, const HermitianMatrix& y);
JointState mirror_map(const Regularizer& reg, const DualVector& y);

/// Proximal step from X along the ascent direction G:
/// entropy: Lambda(log X + eta G); Frobenius: Pi(X + eta G).
/// Entropy case throws NumericalError if X is singular.
DensityMatrix proximal_map(const Regularizer& reg, const DensityMatrix& x, const HermitianMatrix& g,
                           double eta);
JointState proximal_map(const Regularizer& reg, const JointState& x, const GradientPair& g,
                        double eta);

/// Log-domain proximal step: D + eta G. For the entropy regularizer,
/// Lambda(D + eta G) == proximal_map(Lambda(D), G, eta).
DualVector dual_proximal_accumulate(const DualVector& d, const GradientPair& g, double eta);

}  // namespace qzsg

#endif  // QZSG_GEOMETRY_HPP
