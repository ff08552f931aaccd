#ifndef QZSG_MATRIX_HPP
#define QZSG_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qzsg {

using Complex = std::complex<double>;

/// Dense square complex matrix stored row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  /// Zero matrix of side length `dim`.
  explicit ComplexMatrix(std::size_t dim);
  /// Takes ownership of `entries` (row-major, dim*dim values). Throws
  /// DimensionError on a size mismatch and ValidationError on NaN/Inf.
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> values);

  std::size_t dim() const { return dim_; }
  bool empty() const { return dim_ == 0; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

  std::span<const Complex> entries() const { return data_; }
  std::span<Complex> entries() { return data_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double max_abs() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

/// Largest |M[i][j] - conj(M[j][i])|.
double hermitian_defect(const ComplexMatrix& m);

/// True when the Hermitian defect is within 1e-10 * (1 + max|entry|).
bool is_hermitian(const ComplexMatrix& m);

/// A ComplexMatrix known to be Hermitian. Every constructor ends with the
/// exact symmetrization (M + M^dagger) / 2, so invariant checks stay sharp.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  /// Validates Hermiticity within tolerance, then symmetrizes.
  static HermitianMatrix checked(ComplexMatrix m);
  /// Unconditionally replaces `m` by its Hermitian part.
  static HermitianMatrix hermitian_part(ComplexMatrix m);

  static HermitianMatrix zero(std::size_t dim);
  static HermitianMatrix identity(std::size_t dim);
  static HermitianMatrix diagonal(std::span<const double> values);

  const ComplexMatrix& matrix() const { return m_; }
  std::size_t dim() const { return m_.dim(); }
  const Complex& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  double trace() const { return m_.trace().real(); }

  HermitianMatrix& operator+=(const HermitianMatrix& other);
  HermitianMatrix& operator-=(const HermitianMatrix& other);
  HermitianMatrix& operator*=(double s);

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

  friend bool operator==(const HermitianMatrix&, const HermitianMatrix&) = default;

 private:
  explicit HermitianMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// Kronecker product A (x) B.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);
HermitianMatrix tensor_product(const HermitianMatrix& a, const HermitianMatrix& b);

enum class Subsystem { A, B };

/// Partial trace of M acting on C^dimA (x) C^dimB; `keep` names the factor
/// that survives.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                            Subsystem keep);

/// tr(A^dagger B).
Complex trace_inner(const ComplexMatrix& a, const ComplexMatrix& b);
/// tr(A B) for Hermitian arguments; always real.
double trace_inner(const HermitianMatrix& a, const HermitianMatrix& b);

double frobenius_norm(const ComplexMatrix& m);

struct Norms {
  double frobenius = 0.0;
  double schatten1 = 0.0;
  double spectral = 0.0;
};

Norms norms(const HermitianMatrix& m);
/// Throws ValidationError unless `m` is Hermitian within tolerance.
Norms norms(const ComplexMatrix& m);

}  // namespace qzsg

#endif  // QZSG_MATRIX_HPP
