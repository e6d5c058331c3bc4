// Copyright 2026 The trostab authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include "trostab/complex_linalg.hpp"
#include "trostab/errors.hpp"

using trostab::CMatrix;
using trostab::Complex;

namespace {

Eigen::MatrixXcd to_eigen(const CMatrix& a) {
  Eigen::MatrixXcd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a.at(i, j);
  return m;
}

/// Reference operator norm: largest eigenvalue of the Gram matrix via a
/// dense Hermitian eigensolve, then a square root.
double oracle_spectral_norm(const CMatrix& a) {
  const Eigen::MatrixXcd m = to_eigen(a);
  const Eigen::MatrixXcd g = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(g);
  const double lmax = solver.eigenvalues().maxCoeff();
  return std::sqrt(std::max(0.0, lmax));
}

}  // namespace

TEST_CASE("matrix construction and shape errors") {
  CMatrix a(2, 3);
  CHECK(a.rows() == 2);
  CHECK(a.cols() == 3);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(a.at(i, j) == Complex(0.0, 0.0));

  CHECK_THROWS_AS(CMatrix(0, 3), trostab::dimension_error);
  CHECK_THROWS_AS(CMatrix(3, 0), trostab::dimension_error);
  CHECK_THROWS_AS(CMatrix(2, 2, std::vector<Complex>(3)), trostab::dimension_error);

  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(CMatrix(1, 1, {Complex(inf, 0.0)}), trostab::parameter_error);
  CHECK_THROWS_AS(CMatrix(1, 1, {Complex(0.0, std::nan(""))}), trostab::parameter_error);
}

TEST_CASE("arithmetic on shift matrices") {
  // e12 * e21 = e11 for the standard 2x2 matrix units.
  const CMatrix e12(2, 2, {Complex(0, 0), Complex(1, 0), Complex(0, 0), Complex(0, 0)});
  const CMatrix e21(2, 2, {Complex(0, 0), Complex(0, 0), Complex(1, 0), Complex(0, 0)});
  const CMatrix prod = trostab::matmul(e12, e21);
  CHECK(prod.at(0, 0) == Complex(1, 0));
  CHECK(prod.at(0, 1) == Complex(0, 0));
  CHECK(prod.at(1, 0) == Complex(0, 0));
  CHECK(prod.at(1, 1) == Complex(0, 0));

  const CMatrix sum = e12 + e21;
  CHECK(sum.at(0, 1) == Complex(1, 0));
  CHECK(sum.at(1, 0) == Complex(1, 0));

  const CMatrix diff = trostab::sub(sum, e21);
  CHECK(diff.at(1, 0) == Complex(0, 0));
  CHECK(diff.at(0, 1) == Complex(1, 0));

  const CMatrix scaled = Complex(0, 2) * e12;
  CHECK(scaled.at(0, 1) == Complex(0, 2));

  CHECK_THROWS_AS(trostab::matmul(e12, CMatrix(3, 2)), trostab::dimension_error);
  CHECK_THROWS_AS(trostab::add(e12, CMatrix(2, 3)), trostab::dimension_error);
}

TEST_CASE("adjoint conjugates and transposes") {
  const CMatrix a(2, 3, {Complex(1, 2), Complex(3, -1), Complex(0, 5),
                         Complex(-2, 0), Complex(4, 4), Complex(1, -1)});
  const CMatrix h = trostab::adjoint(a);
  CHECK(h.rows() == 3);
  CHECK(h.cols() == 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(h.at(j, i) == std::conj(a.at(i, j)));

  // Applying the adjoint twice gives the original matrix back.
  const CMatrix back = trostab::adjoint(h);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(back.at(i, j) == a.at(i, j));

  const CMatrix c = trostab::conj_entries(a);
  CHECK(c.rows() == 2);
  CHECK(c.cols() == 3);
  CHECK(c.at(0, 0) == Complex(1, -2));
}

TEST_CASE("norms on known matrices") {
  const CMatrix id = CMatrix::identity(2);
  CHECK(trostab::spectral_norm(id) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(trostab::frobenius_norm(id) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  const CMatrix diag(2, 2, {Complex(3, 0), Complex(0, 0), Complex(0, 0), Complex(1, 0)});
  CHECK(trostab::spectral_norm(diag) == doctest::Approx(3.0).epsilon(1e-13));

  // Rank-one column: operator norm equals the Euclidean length.
  const CMatrix col(3, 1, {Complex(1, 0), Complex(2, 0), Complex(2, 0)});
  CHECK(trostab::spectral_norm(col) == doctest::Approx(3.0).epsilon(1e-13));

  CHECK(trostab::spectral_norm(CMatrix::zero(4, 4)) == 0.0);
}

TEST_CASE("spectral norm matches a dense eigensolve across random shapes") {
  std::mt19937_64 shape_engine(20260819ULL);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t rows = 1 + shape_engine() % 8;
    const std::size_t cols = 1 + shape_engine() % 8;
    const CMatrix a = trostab::random_matrix(rows, cols, trostab::substream(0xfeedULL, trial));
    const double ours = trostab::spectral_norm(a);
    const double ref = oracle_spectral_norm(a);
    CHECK(ours == doctest::Approx(ref).epsilon(1e-10));
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("seeded generation is deterministic and seed-sensitive") {
  const CMatrix a = trostab::random_matrix(4, 4, 99);
  const CMatrix b = trostab::random_matrix(4, 4, 99);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(a.at(i, j) == b.at(i, j));

  const CMatrix c = trostab::random_matrix(4, 4, 100);
  bool any_diff = false;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) any_diff = any_diff || (a.at(i, j) != c.at(i, j));
  CHECK(any_diff);

  CHECK(trostab::substream(7, 0) != trostab::substream(7, 1));
  CHECK(trostab::substream(7, 0) == trostab::substream(7, 0));
}

TEST_CASE("complex gaussian entries have unit mean square modulus") {
  double acc = 0.0;
  std::size_t count = 0;
  for (int k = 0; k < 200; ++k) {
    const CMatrix a = trostab::random_matrix(5, 5, trostab::substream(31337ULL, k));
    for (const Complex& z : a.entries()) {
      acc += std::norm(z);
      ++count;
    }
  }
  const double mean = acc / static_cast<double>(count);
  CHECK(std::abs(mean - 1.0) < 0.05);
}
