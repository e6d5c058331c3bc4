// Copyright 2026 The trostab authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "trostab/complex_linalg.hpp"
#include "trostab/errors.hpp"
#include "trostab/ternary_algebra.hpp"

using trostab::CMatrix;
using trostab::Complex;

TEST_CASE("triple product agrees with a hand computation") {
  // Row vectors in M_{1,2}: x = (1, i), y = (2, 0), z = (0, 1).
  // x * adjoint(y) = 1*2 + i*0 = 2, so [x, y, z] = (0, 2).
  const CMatrix x(1, 2, {Complex(1, 0), Complex(0, 1)});
  const CMatrix y(1, 2, {Complex(2, 0), Complex(0, 0)});
  const CMatrix z(1, 2, {Complex(0, 0), Complex(1, 0)});
  const CMatrix t = trostab::ternary_product(x, y, z);
  CHECK(t.rows() == 1);
  CHECK(t.cols() == 2);
  CHECK(t.at(0, 0) == Complex(0, 0));
  CHECK(t.at(0, 1) == Complex(2, 0));

  // Matrix units: [e12, e12, e12] = e12 * e21 * e12 = e12.
  const CMatrix e12(2, 2, {Complex(0, 0), Complex(1, 0), Complex(0, 0), Complex(0, 0)});
  const CMatrix u = trostab::ternary_product(e12, e12, e12);
  CHECK(u.at(0, 1) == Complex(1, 0));
  CHECK(trostab::frobenius_norm(u) == doctest::Approx(1.0));

  CHECK_THROWS_AS(trostab::ternary_product(x, y, CMatrix(2, 2)), trostab::dimension_error);
}

TEST_CASE("middle slot conjugates scalars") {
  const CMatrix x = trostab::random_matrix(3, 2, 11);
  const CMatrix y = trostab::random_matrix(3, 2, 12);
  const CMatrix z = trostab::random_matrix(3, 2, 13);
  const Complex i_unit(0, 1);

  // [x, i*y, z] must equal -i * [x, y, z].
  const CMatrix lhs = trostab::ternary_product(x, trostab::scale(i_unit, y), z);
  const CMatrix rhs = trostab::scale(Complex(0, -1), trostab::ternary_product(x, y, z));
  CHECK(trostab::frobenius_norm(trostab::sub(lhs, rhs)) < 1e-12);

  // Outer slots stay plain linear under the same scalar.
  const CMatrix lhs1 = trostab::ternary_product(trostab::scale(i_unit, x), y, z);
  const CMatrix rhs1 = trostab::scale(i_unit, trostab::ternary_product(x, y, z));
  CHECK(trostab::frobenius_norm(trostab::sub(lhs1, rhs1)) < 1e-12);
}

TEST_CASE("cube identity holds on concrete matrices") {
  const CMatrix a(2, 2, {Complex(2, 1), Complex(0, -1), Complex(1, 0), Complex(-1, 3)});
  const double cube = trostab::spectral_norm(trostab::ternary_product(a, a, a));
  const double norm = trostab::spectral_norm(a);
  CHECK(cube == doctest::Approx(norm * norm * norm).epsilon(1e-12));
}

TEST_CASE("square spaces expose the induced binary structure") {
  const CMatrix a = trostab::random_matrix(3, 3, 21);
  const CMatrix b = trostab::random_matrix(3, 3, 22);

  // a . b recovers the ordinary product.
  const CMatrix ab = trostab::derived_binary(a, b);
  const CMatrix direct = trostab::matmul(a, b);
  CHECK(trostab::frobenius_norm(trostab::sub(ab, direct)) < 1e-12);

  // The induced involution is the adjoint, and it is anti-multiplicative:
  // (a . b)^ = b^ . a^.
  const CMatrix inv_ab = trostab::derived_involution(ab);
  const CMatrix opp = trostab::derived_binary(trostab::derived_involution(b),
                                              trostab::derived_involution(a));
  CHECK(trostab::frobenius_norm(trostab::sub(inv_ab, opp)) < 1e-12);

  const CMatrix inv_a = trostab::derived_involution(a);
  CHECK(trostab::frobenius_norm(trostab::sub(inv_a, trostab::adjoint(a))) == 0.0);

  // Associativity of the induced product.
  const CMatrix c = trostab::random_matrix(3, 3, 23);
  const CMatrix l = trostab::derived_binary(trostab::derived_binary(a, b), c);
  const CMatrix r = trostab::derived_binary(a, trostab::derived_binary(b, c));
  CHECK(trostab::frobenius_norm(trostab::sub(l, r)) /
            (1.0 + trostab::frobenius_norm(l)) <
        1e-13);

  const CMatrix rect = trostab::random_matrix(2, 3, 24);
  CHECK_THROWS_AS(trostab::derived_binary(rect, rect), trostab::model_error);
  CHECK_THROWS_AS(trostab::derived_involution(rect), trostab::model_error);
}

TEST_CASE("axiom sweep passes on square and rectangular spaces") {
  for (const auto& [m, n] : {std::pair<std::size_t, std::size_t>{2, 2}, {2, 3}, {1, 4}}) {
    const trostab::TroSpace space(m, n);
    const trostab::AxiomReport report = trostab::check_axioms(space, 200, 4242);
    CAPTURE(m);
    CAPTURE(n);
    CHECK(report.pass);
    CHECK(report.sample_count == 200);
    CHECK(report.worst_outer_linearity <= trostab::kStructuralAxiomTol);
    CHECK(report.worst_middle_conjugation <= trostab::kStructuralAxiomTol);
    CHECK(report.worst_reassociation <= trostab::kStructuralAxiomTol);
    CHECK(report.worst_norm_excess <= trostab::kNormExcessTol);
    CHECK(report.worst_cube_identity <= trostab::kCubeIdentityTol);
  }
  CHECK_THROWS_AS(trostab::TroSpace(0, 2), trostab::dimension_error);
  CHECK_THROWS_AS(trostab::check_axioms(trostab::TroSpace(2, 2), 0, 1), trostab::parameter_error);
}
