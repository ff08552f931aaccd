#include "qzsg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qzsg/error.hpp"
#include "qzsg/spectral.hpp"

namespace qzsg {
namespace {

// Spectrum of a reference state that must be strictly positive definite.
Spectrum full_rank_spectrum(const DensityMatrix& y, const char* what) {
  Spectrum s = hermitian_eig(y.matrix());
  if (s.min() <= kLogEigenvalueFloor) {
    std::ostringstream msg;
    msg << what << ": reference state is singular (lambda_min = " << s.min() << ")";
    throw NumericalError(msg.str());
  }
  return s;
}

double entropy_term(double lambda) { return lambda > 0.0 ? lambda * std::log(lambda) : 0.0; }

}  // namespace

double Regularizer::diameter_bound(std::size_t dim) const {
  return kind == RegularizerKind::VonNeumannEntropy ? std::log(static_cast<double>(dim)) : 2.0;
}

std::string_view Regularizer::id() const {
  return kind == RegularizerKind::VonNeumannEntropy ? "vn-entropy" : "frobenius";
}

Regularizer Regularizer::from_id(std::string_view id) {
  if (id == "vn-entropy") return entropy();
  if (id == "frobenius") return frobenius();
  throw ValidationError("unknown regularizer '" + std::string(id) + "'");
}

double dgf_value(const Regularizer& reg, const DensityMatrix& x) {
  if (reg.kind == RegularizerKind::FrobeniusSquared) {
    const double f = frobenius_norm(x.matrix().matrix());
    return 0.5 * f * f;
  }
  double s = 0.0;
  for (double l : hermitian_eig(x.matrix()).values) s += entropy_term(l);
  return s;
}

double bregman(const Regularizer& reg, const DensityMatrix& x, const DensityMatrix& y) {
  if (x.dim() != y.dim()) throw DimensionError("bregman: dimension mismatch");
  if (reg.kind == RegularizerKind::FrobeniusSquared) {
    const double f = frobenius_norm(x.matrix().matrix() - y.matrix().matrix());
    return 0.5 * f * f;
  }
  const HermitianMatrix log_y = matrix_log(full_rank_spectrum(y, "bregman"));
  double x_log_x = 0.0;
  for (double l : hermitian_eig(x.matrix()).values) x_log_x += entropy_term(l);
  return x_log_x - trace_inner(x.matrix(), log_y);
}

DensityMatrix logit_map(const HermitianMatrix& y) {
  const Spectrum s = hermitian_eig(y);
  const double shift = s.max();
  std::vector<double> w(s.values.size());
  double total = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    w[k] = std::exp(s.values[k] - shift);
    total += w[k];
  }
  for (auto& v : w) v /= total;
  return DensityMatrix::unchecked(reassemble(s.vectors, w));
}

std::vector<double> simplex_project(std::vector<double> v) {
  const std::size_t n = v.size();
  if (n == 0) return v;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  double prefix = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    prefix += v[order[j]];
    const double candidate = (prefix - 1.0) / static_cast<double>(j + 1);
    if (v[order[j]] - candidate > 0.0) theta = candidate;
  }
  for (auto& x : v) x = std::max(x - theta, 0.0);
  return v;
}

DensityMatrix orth_project_spectraplex(const HermitianMatrix& y) {
  const Spectrum s = hermitian_eig(y);
  return DensityMatrix::unchecked(reassemble(s.vectors, simplex_project(s.values)));
}

DensityMatrix mirror_map(const Regularizer& reg, const HermitianMatrix& y) {
  return reg.kind == RegularizerKind::VonNeumannEntropy ? logit_map(y)
                                                        : orth_project_spectraplex(y);
}

JointState mirror_map(const Regularizer& reg, const DualVector& y) {
  return {mirror_map(reg, y.alice), mirror_map(reg, y.bob)};
}

DensityMatrix proximal_map(const Regularizer& reg, const DensityMatrix& x, const HermitianMatrix& g,
                           double eta) {
  if (x.dim() != g.dim()) throw DimensionError("proximal_map: dimension mismatch");
  if (reg.kind == RegularizerKind::FrobeniusSquared) {
    return orth_project_spectraplex(x.matrix() + g * eta);
  }
  const HermitianMatrix log_x = matrix_log(full_rank_spectrum(x, "proximal_map"));
  return logit_map(log_x + g * eta);
}

JointState proximal_map(const Regularizer& reg, const JointState& x, const GradientPair& g,
                        double eta) {
  return {proximal_map(reg, x.alice, g.alice, eta), proximal_map(reg, x.bob, g.bob, eta)};
}

DualVector dual_proximal_accumulate(const DualVector& d, const GradientPair& g, double eta) {
  return {d.alice + g.alice * eta, d.bob + g.bob * eta};
}

}  // namespace qzsg
