#ifndef QZSG_SPECTRAL_HPP
#define QZSG_SPECTRAL_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "qzsg/matrix.hpp"

namespace qzsg {

/// Eigen-decomposition H = V diag(values) V^dagger. Eigenvalues are sorted
/// descending; ties keep the order in which Jacobi left them on the diagonal.
struct Spectrum {
  std::vector<double> values;
  ComplexMatrix vectors;  // eigenvectors are the columns

  double max() const { return values.front(); }
  double min() const { return values.back(); }
};

struct JacobiOptions {
  double relative_tolerance = 1e-12;  // off-diagonal Frobenius norm vs ||H||_F
  int max_sweeps = 100;
};

/// Cyclic complex Jacobi eigensolver. Throws NumericalError if the
/// off-diagonal mass has not dropped below tolerance after max_sweeps.
Spectrum hermitian_eig(const HermitianMatrix& h, const JacobiOptions& options = {});
/// Checks Hermiticity first (ValidationError on failure).
Spectrum hermitian_eig(const ComplexMatrix& h, const JacobiOptions& options = {});

/// V diag(values) V^dagger.
HermitianMatrix reassemble(const ComplexMatrix& vectors, const std::vector<double>& values);

/// V diag(f(lambda)) V^dagger. Throws NumericalError naming the eigenvalue if
/// f returns a non-finite value.
HermitianMatrix spectral_fn(const HermitianMatrix& h, const std::function<double(double)>& f);
HermitianMatrix spectral_fn(const Spectrum& s, const std::function<double(double)>& f);

HermitianMatrix matrix_exp(const HermitianMatrix& h);

/// Eigenvalues below this are raised to it before taking a logarithm.
inline constexpr double kLogEigenvalueFloor = 1e-15;
/// Eigenvalues more negative than this are treated as a genuine error.
inline constexpr double kPsdTolerance = 1e-9;

/// Matrix logarithm of a PSD matrix. Eigenvalues in [-kPsdTolerance, floor)
/// are clamped up to the floor and counted in `clamped` (if non-null);
/// anything more negative throws NumericalError.
HermitianMatrix matrix_log(const HermitianMatrix& h, std::size_t* clamped = nullptr);
HermitianMatrix matrix_log(const Spectrum& s, std::size_t* clamped = nullptr);

}  // namespace qzsg

#endif  // QZSG_SPECTRAL_HPP
