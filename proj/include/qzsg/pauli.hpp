#ifndef QZSG_PAULI_HPP
#define QZSG_PAULI_HPP

#include <cstddef>
#include <map>
#include <string>

#include "qzsg/matrix.hpp"

namespace qzsg {

/// Pauli-string coefficients keyed by strings over {I,X,Y,Z}. The first
/// character acts on the most significant qubit (leftmost tensor factor).
using PauliCoefficients = std::map<std::string, Complex>;

/// The 2^n x 2^n matrix of a Pauli string such as "XZ".
ComplexMatrix pauli_matrix(const std::string& word);

/// Coefficients tr(P^dagger M) / 2^n for all 4^n Pauli strings P.
/// Throws DimensionError unless dim(M) == 2^n_qubits.
PauliCoefficients pauli_decompose(const ComplexMatrix& m, std::size_t n_qubits);

/// sum_P c(P) P.
ComplexMatrix pauli_reconstruct(const PauliCoefficients& coefficients);

}  // namespace qzsg

#endif  // QZSG_PAULI_HPP
