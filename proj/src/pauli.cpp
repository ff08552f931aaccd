#include "qzsg/pauli.hpp"

#include <string>

#include "qzsg/error.hpp"

namespace qzsg {
namespace {

// Every Pauli string is a signed/phased permutation matrix: row r has its
// single non-zero in column r ^ flip_mask.
struct PauliAction {
  std::size_t flip_mask = 0;
  std::size_t dim = 1;
  std::string word;

  Complex entry(std::size_t row) const {
    Complex phase = 1.0;
    const std::size_t n = word.size();
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t bit = (row >> (n - 1 - k)) & 1u;
      switch (word[k]) {
        case 'Y': phase *= bit ? Complex(0.0, 1.0) : Complex(0.0, -1.0); break;
        case 'Z': if (bit) phase = -phase; break;
        default: break;
      }
    }
    return phase;
  }
};

PauliAction action_of(const std::string& word) {
  PauliAction a;
  a.word = word;
  const std::size_t n = word.size();
  a.dim = std::size_t{1} << n;
  for (std::size_t k = 0; k < n; ++k) {
    const char c = word[k];
    if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
      throw ValidationError("invalid Pauli letter '" + std::string(1, c) + "' in " + word);
    }
    if (c == 'X' || c == 'Y') a.flip_mask |= std::size_t{1} << (n - 1 - k);
  }
  return a;
}

std::string word_of(std::size_t index, std::size_t n_qubits) {
  static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  std::string w(n_qubits, 'I');
  for (std::size_t k = 0; k < n_qubits; ++k) {
    w[n_qubits - 1 - k] = kLetters[index & 3u];
    index >>= 2;
  }
  return w;
}

}  // namespace

ComplexMatrix pauli_matrix(const std::string& word) {
  const PauliAction a = action_of(word);
  ComplexMatrix m(a.dim);
  for (std::size_t r = 0; r < a.dim; ++r) m(r, r ^ a.flip_mask) = a.entry(r);
  return m;
}

PauliCoefficients pauli_decompose(const ComplexMatrix& m, std::size_t n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (n_qubits > 8 || m.dim() != dim) {
    throw DimensionError("pauli_decompose: dim " + std::to_string(m.dim()) + " is not 2^" +
                         std::to_string(n_qubits));
  }
  PauliCoefficients out;
  const std::size_t count = std::size_t{1} << (2 * n_qubits);
  for (std::size_t idx = 0; idx < count; ++idx) {
    const PauliAction a = action_of(word_of(idx, n_qubits));
    // tr(P^dagger M) = sum_r conj(P[r, c]) M[r, c] with c = r ^ mask
    Complex s = 0.0;
    for (std::size_t r = 0; r < dim; ++r) s += std::conj(a.entry(r)) * m(r, r ^ a.flip_mask);
    out.emplace(a.word, s / static_cast<double>(dim));
  }
  return out;
}

ComplexMatrix pauli_reconstruct(const PauliCoefficients& coefficients) {
  if (coefficients.empty()) throw DimensionError("pauli_reconstruct: no coefficients");
  const std::size_t n = coefficients.begin()->first.size();
  ComplexMatrix m(std::size_t{1} << n);
  for (const auto& [word, c] : coefficients) {
    if (word.size() != n) throw DimensionError("pauli_reconstruct: mixed word lengths");
    const PauliAction a = action_of(word);
    for (std::size_t r = 0; r < a.dim; ++r) m(r, r ^ a.flip_mask) += c * a.entry(r);
  }
  return m;
}

}  // namespace qzsg
