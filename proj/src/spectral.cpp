#include "qzsg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qzsg/error.hpp"

namespace qzsg {
namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// One complex Jacobi rotation A <- J^dagger A J, V <- V J, zeroing A(p,q).
// J = D R where D rotates the phase of A(p,q) onto the real axis and R is the
// classic real Jacobi rotation for the resulting real 2x2 block.
void rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const Complex phase = apq / mag;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double theta = (aqq - app) / (2.0 * mag);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  const Complex jpp = c;
  const Complex jpq = s;
  const Complex jqp = -s * std::conj(phase);
  const Complex jqq = c * std::conj(phase);

  const std::size_t n = a.dim();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * jpp + akq * jqp;
    a(k, q) = akp * jpq + akq * jqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = app - t * mag;
  a(q, q) = aqq + t * mag;

  for (std::size_t k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * jpp + vkq * jqp;
    v(k, q) = vkp * jpq + vkq * jqq;
  }
}

Spectrum sorted_spectrum(const ComplexMatrix& a, const ComplexMatrix& v) {
  const std::size_t n = a.dim();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() > a(j, j).real();
  });
  Spectrum out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(order[c], order[c]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

}  // namespace

Spectrum hermitian_eig(const HermitianMatrix& h, const JacobiOptions& options) {
  const std::size_t n = h.dim();
  if (n == 0) throw DimensionError("hermitian_eig: empty matrix");
  ComplexMatrix a = h.matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double threshold = options.relative_tolerance * frobenius_norm(a);

  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= threshold) return sorted_spectrum(a, v);
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
  }
  if (off_diagonal_norm(a) <= threshold) return sorted_spectrum(a, v);
  std::ostringstream msg;
  msg << "Jacobi eigensolver did not converge in " << options.max_sweeps
      << " sweeps (off-diagonal norm " << off_diagonal_norm(a) << ")";
  throw NumericalError(msg.str());
}

Spectrum hermitian_eig(const ComplexMatrix& h, const JacobiOptions& options) {
  return hermitian_eig(HermitianMatrix::checked(h), options);
}

HermitianMatrix reassemble(const ComplexMatrix& vectors, const std::vector<double>& values) {
  const std::size_t n = vectors.dim();
  if (values.size() != n) throw DimensionError("reassemble: eigenvalue count mismatch");
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += vectors(i, k) * values[k] * std::conj(vectors(j, k));
      out(i, j) = s;
      out(j, i) = std::conj(s);
    }
  return HermitianMatrix::hermitian_part(std::move(out));
}

HermitianMatrix spectral_fn(const Spectrum& s, const std::function<double(double)>& f) {
  std::vector<double> mapped(s.values.size());
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    mapped[k] = f(s.values[k]);
    if (!std::isfinite(mapped[k])) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "spectral function undefined at eigenvalue " << s.values[k];
      throw NumericalError(msg.str());
    }
  }
  return reassemble(s.vectors, mapped);
}

HermitianMatrix spectral_fn(const HermitianMatrix& h, const std::function<double(double)>& f) {
  return spectral_fn(hermitian_eig(h), f);
}

HermitianMatrix matrix_exp(const HermitianMatrix& h) {
  return spectral_fn(h, [](double x) { return std::exp(x); });
}

HermitianMatrix matrix_log(const Spectrum& s, std::size_t* clamped) {
  std::size_t count = 0;
  const auto result = spectral_fn(s, [&count](double x) {
    if (x < -kPsdTolerance) return std::log(x);  // NaN, reported by spectral_fn
    if (x < kLogEigenvalueFloor) {
      ++count;
      x = kLogEigenvalueFloor;
    }
    return std::log(x);
  });
  if (clamped != nullptr) *clamped += count;
  return result;
}

HermitianMatrix matrix_log(const HermitianMatrix& h, std::size_t* clamped) {
  return matrix_log(hermitian_eig(h), clamped);
}

}  // namespace qzsg
