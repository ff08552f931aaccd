#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../support/oracles.hpp"
#include "qzsg/error.hpp"
#include "qzsg/game.hpp"
#include "qzsg/pauli.hpp"
#include "qzsg/rng.hpp"
#include "qzsg/serialize.hpp"
#include "qzsg/spectral.hpp"

using namespace qzsg;

namespace {

const ComplexMatrix kZ = pauli_matrix("Z");
const ComplexMatrix kX = pauli_matrix("X");

ComplexMatrix ket_bra(std::size_t dim, std::size_t i) {
  ComplexMatrix m(dim);
  m(i, i) = 1.0;
  return m;
}

ComplexMatrix random_complex(std::size_t dim, CounterRng& rng) {
  ComplexMatrix m(dim);
  for (auto& z : m.entries()) z = rng.complex_normal();
  return m;
}

}  // namespace

TEST_CASE("ComplexMatrix rejects bad construction") {
  CHECK_THROWS_AS(ComplexMatrix(2, std::vector<Complex>(3)), DimensionError);
  std::vector<Complex> bad(4);
  bad[1] = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(ComplexMatrix(2, bad), ValidationError);
}

TEST_CASE("tensor_product") {
  CHECK(tensor_product(ComplexMatrix::identity(2), ComplexMatrix::identity(2)) ==
        ComplexMatrix::identity(4));
  const std::vector<double> zz = {1, -1, -1, 1};
  CHECK(tensor_product(kZ, kZ) == ComplexMatrix::diagonal(zz));
  const std::vector<double> e01 = {0, 1, 0, 0};
  CHECK(tensor_product(ket_bra(2, 0), ket_bra(2, 1)) == ComplexMatrix::diagonal(e01));
}

TEST_CASE("partial_trace") {
  SUBCASE("product with a pure factor") {
    CHECK(oracle::max_abs_diff(partial_trace(tensor_product(kX, ket_bra(2, 0)), 2, 2, Subsystem::A),
                               kX) == 0.0);
  }
  SUBCASE("maximally mixed") {
    const ComplexMatrix half = ComplexMatrix::identity(2) * 0.5;
    CHECK(oracle::max_abs_diff(partial_trace(ComplexMatrix::identity(4) * 0.25, 2, 2, Subsystem::B),
                               half) < 1e-15);
  }
  SUBCASE("Bell-state marginal") {
    ComplexMatrix phi(4);
    phi(0, 0) = phi(0, 3) = phi(3, 0) = phi(3, 3) = 0.5;
    const ComplexMatrix half = ComplexMatrix::identity(2) * 0.5;
    CHECK(oracle::max_abs_diff(partial_trace(phi, 2, 2, Subsystem::A), half) < 1e-15);
    CHECK(oracle::max_abs_diff(partial_trace(phi, 2, 2, Subsystem::B), half) < 1e-15);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(partial_trace(ComplexMatrix::identity(4), 2, 3, Subsystem::A), DimensionError);
  }
  SUBCASE("trace preserved and product rule, random operands") {
    CounterRng rng(7, 0);
    for (int k = 0; k < 50; ++k) {
      const std::size_t da = std::size_t{1} << (1 + k % 3), db = std::size_t{1} << (1 + (k / 3) % 3);
      const ComplexMatrix m = random_complex(da * db, rng);
      CHECK(std::abs(partial_trace(m, da, db, Subsystem::A).trace() - m.trace()) < 1e-10);
      CHECK(std::abs(partial_trace(m, da, db, Subsystem::B).trace() - m.trace()) < 1e-10);
      const ComplexMatrix a = random_hermitian(da, rng).matrix();
      const ComplexMatrix b = random_hermitian(db, rng).matrix();
      CHECK(oracle::max_abs_diff(partial_trace(tensor_product(a, b), da, db, Subsystem::A),
                                 a * b.trace()) < 1e-10);
    }
  }
}

TEST_CASE("hermitian_eig") {
  SUBCASE("Pauli Z") {
    const Spectrum s = hermitian_eig(HermitianMatrix::checked(kZ));
    CHECK(s.values == std::vector<double>{1.0, -1.0});
  }
  SUBCASE("multiple of identity keeps index order") {
    const Spectrum s = hermitian_eig(HermitianMatrix::identity(4) * 2.5);
    CHECK(s.values == std::vector<double>(4, 2.5));
    CHECK(s.vectors == ComplexMatrix::identity(4));
  }
  SUBCASE("random reconstruction and unitarity") {
    CounterRng rng(11, 0);
    for (std::size_t dim : {2u, 3u, 8u, 16u, 64u}) {
      const HermitianMatrix h = random_hermitian(dim, rng);
      const Spectrum s = hermitian_eig(h);
      CHECK(oracle::rel_frobenius(oracle::reconstruct(s), h.matrix()) < 1e-10);
      CHECK(oracle::max_abs_diff(s.vectors.adjoint() * s.vectors, ComplexMatrix::identity(dim)) < 1e-10);
      CHECK(std::is_sorted(s.values.rbegin(), s.values.rend()));
    }
  }
  SUBCASE("density matrix spectra are a probability vector") {
    CounterRng rng(12, 0);
    for (int k = 0; k < 100; ++k) {
      const Spectrum s = hermitian_eig(random_density(8, rng).matrix());
      double sum = 0.0;
      for (double v : s.values) sum += v;
      CHECK(std::abs(sum - 1.0) < 1e-9);
      CHECK(s.min() >= -1e-9);
    }
  }
  SUBCASE("non-Hermitian input") {
    ComplexMatrix m = ComplexMatrix::identity(2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_eig(m), ValidationError);
  }
  SUBCASE("sweep budget exhausted") {
    CounterRng rng(13, 0);
    CHECK_THROWS_AS(hermitian_eig(random_hermitian(8, rng), JacobiOptions{1e-12, 1}), NumericalError);
  }
}

TEST_CASE("spectral_fn") {
  const auto exp_fn = [](double x) { return std::exp(x); };
  CHECK(oracle::max_abs_diff(spectral_fn(HermitianMatrix::zero(4), exp_fn).matrix(),
                             ComplexMatrix::identity(4)) < 1e-15);
  const std::vector<double> expected = {std::numbers::e, 1.0 / std::numbers::e};
  CHECK(oracle::max_abs_diff(matrix_exp(HermitianMatrix::checked(kZ)).matrix(),
                             ComplexMatrix::diagonal(expected)) < 1e-15);

  CounterRng rng(21, 0);
  for (int k = 0; k < 20; ++k) {
    const HermitianMatrix h = random_hermitian(8, rng);
    const HermitianMatrix e = matrix_exp(h);
    CHECK(frobenius_norm(matrix_log(e).matrix() - h.matrix()) < 1e-9);
    const Spectrum sh = hermitian_eig(h), se = hermitian_eig(e);
    for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(se.values[i] - std::exp(sh.values[i])) < 1e-9 * std::exp(sh.values[i]) + 1e-12);
    CHECK(se.min() > 0.0);
  }
}

TEST_CASE("spectral_fn reports the offending eigenvalue") {
  const std::vector<double> d = {1.0, -0.5};
  try {
    (void)spectral_fn(HermitianMatrix::diagonal(d), [](double x) { return std::log(x); });
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("-0.5") != std::string::npos);
  }
}

TEST_CASE("matrix_log clamps tiny eigenvalues and counts them") {
  const std::vector<double> d = {1.0, 0.0, -1e-12};
  std::size_t clamped = 0;
  const HermitianMatrix l = matrix_log(HermitianMatrix::diagonal(d), &clamped);
  CHECK(clamped == 2);
  CHECK(l(1, 1).real() == doctest::Approx(std::log(kLogEigenvalueFloor)));
  const std::vector<double> neg = {1.0, -1e-3};
  CHECK_THROWS_AS(matrix_log(HermitianMatrix::diagonal(neg)), NumericalError);
}

TEST_CASE("norms and trace_inner") {
  for (std::size_t d : {1u, 2u, 8u}) {
    const Norms n = norms(HermitianMatrix::identity(d));
    CHECK(n.frobenius == doctest::Approx(std::sqrt(static_cast<double>(d))));
    CHECK(n.schatten1 == doctest::Approx(static_cast<double>(d)));
    CHECK(n.spectral == doctest::Approx(1.0));
  }
  CHECK(trace_inner(kZ, kZ) == Complex(2.0, 0.0));

  CounterRng rng(31, 0);
  for (int k = 0; k < 50; ++k) {
    CHECK(norms(random_density(4, rng).matrix()).schatten1 == doctest::Approx(1.0).epsilon(1e-12));
    const ComplexMatrix a = random_complex(4, rng), b = random_complex(4, rng);
    CHECK(std::abs(trace_inner(a, b) - std::conj(trace_inner(b, a))) < 1e-12);
  }
  ComplexMatrix nh = ComplexMatrix::identity(2);
  nh(1, 0) = Complex(0.0, 1.0);
  CHECK_THROWS_AS(norms(nh), ValidationError);
}

TEST_CASE("pauli_decompose") {
  SUBCASE("basis elements") {
    const auto zz = pauli_decompose(tensor_product(kZ, kZ), 2);
    CHECK(zz.size() == 16);
    for (const auto& [w, c] : zz) CHECK(c == (w == "ZZ" ? Complex(1.0) : Complex(0.0)));
    const auto id = pauli_decompose(ComplexMatrix::identity(4), 2);
    for (const auto& [w, c] : id) CHECK(c == (w == "II" ? Complex(1.0) : Complex(0.0)));
  }
  SUBCASE("word convention: first letter is the leftmost factor") {
    CHECK(pauli_matrix("XZ") == tensor_product(kX, kZ));
    ComplexMatrix y(2);
    y(0, 1) = Complex(0.0, -1.0);
    y(1, 0) = Complex(0.0, 1.0);
    CHECK(pauli_matrix("Y") == y);
  }
  SUBCASE("random reconstruction") {
    CounterRng rng(41, 0);
    for (std::size_t n : {1u, 2u, 3u}) {
      const ComplexMatrix m = random_complex(std::size_t{1} << n, rng);
      CHECK(oracle::max_abs_diff(pauli_reconstruct(pauli_decompose(m, n)), m) < 1e-10);
    }
  }
  SUBCASE("Hermitian input has real coefficients") {
    CounterRng rng(42, 0);
    for (const auto& [w, c] : pauli_decompose(random_hermitian(8, rng).matrix(), 3))
      CHECK(std::abs(c.imag()) < 1e-10);
  }
  SUBCASE("dimension not a power of two") {
    CHECK_THROWS_AS(pauli_decompose(ComplexMatrix::identity(3), 2), DimensionError);
  }
}

TEST_CASE("matrix JSON round-trips bit-exactly") {
  CounterRng rng(51, 0);
  const ComplexMatrix m = random_complex(4, rng);
  const auto text = matrix_to_json(m).dump();
  CHECK(matrix_from_json(nlohmann::json::parse(text)) == m);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse("[[[1,0],[0,0]]]")), ValidationError);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse("[[1,2],[3,4]]")), ValidationError);
}

TEST_CASE("CounterRng is a pure function of (seed, stream, counter)") {
  CounterRng a(5, 1), b(5, 1), c(5, 2);
  for (int k = 0; k < 10; ++k) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  CounterRng u(9, 0);
  for (int k = 0; k < 1000; ++k) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}
