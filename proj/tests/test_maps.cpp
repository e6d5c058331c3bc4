// Copyright 2026 The trostab authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "trostab/complex_linalg.hpp"
#include "trostab/errors.hpp"
#include "trostab/maps.hpp"
#include "trostab/ternary_algebra.hpp"

using trostab::CMatrix;
using trostab::Complex;

namespace {

CMatrix unit_normalized(const CMatrix& x) {
  return trostab::scale(Complex(1.0 / trostab::spectral_norm(x), 0.0), x);
}

/// Second implementation path for the product residual: evaluates both sides
/// with explicit entry loops instead of the library's product helpers.
double hom_residual_oracle(const trostab::TernaryMap& f, const CMatrix& x1, const CMatrix& x2,
                           const CMatrix& x3) {
  auto triple = [](const CMatrix& a, const CMatrix& b, const CMatrix& c) {
    // t = a * adjoint(b) * c, accumulated entrywise.
    CMatrix ab(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < b.rows(); ++j) {
        Complex acc(0, 0);
        for (std::size_t k = 0; k < a.cols(); ++k) acc += a.at(i, k) * std::conj(b.at(j, k));
        ab.at(i, j) = acc;
      }
    CMatrix out(a.rows(), c.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < c.cols(); ++j) {
        Complex acc(0, 0);
        for (std::size_t k = 0; k < ab.cols(); ++k) acc += ab.at(i, k) * c.at(k, j);
        out.at(i, j) = acc;
      }
    return out;
  };
  const CMatrix lhs = f.eval(triple(x1, x2, x3));
  const CMatrix rhs = triple(f.eval(x1), f.eval(x2), f.eval(x3));
  return trostab::spectral_norm(trostab::sub(lhs, rhs));
}

}  // namespace

TEST_CASE("map constructors validate their factors") {
  const CMatrix u = trostab::random_unitary(3, 5);
  const CMatrix gram = trostab::matmul(trostab::adjoint(u), u);
  CHECK(trostab::frobenius_norm(trostab::sub(gram, CMatrix::identity(3))) < 1e-13);

  CHECK_THROWS_AS(trostab::make_exact_hom(trostab::random_matrix(3, 3, 1), u),
                  trostab::model_error);

  const CMatrix a = trostab::random_skew(3, 6);
  CHECK(trostab::frobenius_norm(trostab::add(a, trostab::adjoint(a))) == 0.0);
  CHECK_THROWS_AS(trostab::make_exact_deriv(trostab::random_matrix(3, 3, 2), a),
                  trostab::model_error);

  CHECK_THROWS_AS(trostab::MuSet({Complex(0.5, 0.0)}), trostab::parameter_error);
  const trostab::MuSet mu = trostab::MuSet::roots12_plus_4(7);
  CHECK(mu.values().size() == 16);
  bool has_i = false;
  for (const Complex& m : mu.values()) {
    CHECK(std::abs(std::abs(m) - 1.0) <= 1e-14);
    if (std::abs(m - Complex(0, 1)) < 1e-12) has_i = true;
  }
  CHECK(has_i);
}

TEST_CASE("evaluation of the reference bodies") {
  const CMatrix x = trostab::random_matrix(2, 2, 31);

  const trostab::TernaryMap hom =
      trostab::make_exact_hom(CMatrix::identity(2), CMatrix::identity(2));
  CHECK(trostab::frobenius_norm(trostab::sub(hom.eval(x), x)) == 0.0);

  const CMatrix a = trostab::random_skew(2, 32);
  const trostab::TernaryMap der = trostab::make_exact_deriv(a, a);
  CHECK(trostab::frobenius_norm(der.eval(CMatrix::identity(2))) < 1e-15);

  // Identity plus a radial bump evaluates to x + v on the unit sphere.
  const CMatrix v = unit_normalized(trostab::random_matrix(2, 2, 33));
  const trostab::TernaryMap bumped = trostab::make_perturbed(
      trostab::make_identity(2, 2), trostab::PerturbationKind::radial(1.0, 2.0, v));
  const CMatrix xu = unit_normalized(x);
  const CMatrix expect = trostab::add(xu, v);
  CHECK(trostab::spectral_norm(trostab::sub(bumped.eval(xu), expect)) < 1e-12);

  CHECK_THROWS_AS(hom.eval(CMatrix(3, 3)), trostab::dimension_error);
}

TEST_CASE("exact homomorphisms preserve the norm and kill the product residual") {
  const trostab::TernaryMap f =
      trostab::make_exact_hom(trostab::random_unitary(2, 41), trostab::random_unitary(2, 42));
  for (int k = 0; k < 50; ++k) {
    const CMatrix x = unit_normalized(trostab::random_matrix(2, 2, trostab::substream(99, k)));
    CHECK(trostab::spectral_norm(f.eval(x)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (int k = 0; k < 50; ++k) {
    const std::uint64_t s = trostab::substream(100, k);
    const CMatrix x1 = unit_normalized(trostab::random_matrix(2, 2, trostab::substream(s, 1)));
    const CMatrix x2 = unit_normalized(trostab::random_matrix(2, 2, trostab::substream(s, 2)));
    const CMatrix x3 = unit_normalized(trostab::random_matrix(2, 2, trostab::substream(s, 3)));
    CHECK(trostab::hom_residual(f, x1, x2, x3) <= 1e-12);
  }
}

TEST_CASE("exact derivations kill the Leibniz residual") {
  const trostab::TernaryMap f =
      trostab::make_exact_deriv(trostab::random_skew(2, 51), trostab::random_skew(2, 52));
  for (int k = 0; k < 50; ++k) {
    const std::uint64_t s = trostab::substream(101, k);
    const CMatrix x1 = unit_normalized(trostab::random_matrix(2, 2, trostab::substream(s, 1)));
    const CMatrix x2 = unit_normalized(trostab::random_matrix(2, 2, trostab::substream(s, 2)));
    const CMatrix x3 = unit_normalized(trostab::random_matrix(2, 2, trostab::substream(s, 3)));
    CHECK(trostab::deriv_residual(f, x1, x2, x3) <= 1e-12);
  }

  // Identity map on the square space: lhs - 3*lhs has norm 2 at the identity.
  const trostab::TernaryMap id = trostab::make_identity(2, 2);
  const CMatrix e = CMatrix::identity(2);
  CHECK(trostab::deriv_residual(id, e, e, e) == doctest::Approx(2.0).epsilon(1e-13));

  const trostab::TernaryMap rect = trostab::make_identity(2, 3);
  const CMatrix y(2, 3);
  CHECK_THROWS_AS(trostab::deriv_residual(rect, y, y, y), trostab::model_error);
}

TEST_CASE("functional balance vanishes for linear maps at every unit phase") {
  const trostab::MuSet mu = trostab::MuSet::roots12_plus_4(7);
  const trostab::TernaryMap maps[] = {
      trostab::make_exact_hom(trostab::random_unitary(2, 61), trostab::random_unitary(2, 62)),
      trostab::make_exact_deriv(trostab::random_skew(2, 63), trostab::random_skew(2, 64)),
      trostab::make_identity(2, 2)};
  for (const auto& f : maps) {
    for (int k = 0; k < 10; ++k) {
      const std::uint64_t s = trostab::substream(102, k);
      const CMatrix x1 = trostab::random_matrix(2, 2, trostab::substream(s, 1));
      const CMatrix x2 = trostab::random_matrix(2, 2, trostab::substream(s, 2));
      const CMatrix x3 = trostab::random_matrix(2, 2, trostab::substream(s, 3));
      const double scale_bound =
          1.0 + trostab::spectral_norm(x1) + trostab::spectral_norm(x2) + trostab::spectral_norm(x3);
      for (const Complex& m : mu.values()) {
        CHECK(trostab::fe_residual(f, x1, x2, x3, m) <= 1e-10 * scale_bound);
      }
    }
  }
  CHECK_THROWS_AS(trostab::fe_residual(maps[2], CMatrix(2, 2), CMatrix(2, 2), CMatrix(2, 2),
                                       Complex(0.5, 0.0)),
                  trostab::parameter_error);
}

TEST_CASE("functional balance flags the controls by hand-computable amounts") {
  // Affine control: every term contributes its shift; the balance misses by 2v.
  const CMatrix v = unit_normalized(trostab::random_matrix(2, 2, 71));
  const trostab::TernaryMap affine = trostab::make_affine(v);
  const CMatrix x1 = trostab::random_matrix(2, 2, 72);
  const CMatrix zero = CMatrix::zero(2, 2);
  CHECK(trostab::fe_residual(affine, x1, zero, zero, Complex(1, 0)) ==
        doctest::Approx(2.0).epsilon(1e-12));
  // The miss is phase-independent.
  CHECK(trostab::fe_residual(affine, x1, zero, zero, Complex(0, 1)) ==
        doctest::Approx(2.0).epsilon(1e-12));

  // Radial bump at unit scale: the two contracted arguments contribute
  // theta0/9 each.
  const trostab::TernaryMap bumped = trostab::make_perturbed(
      trostab::make_identity(2, 2),
      trostab::PerturbationKind::radial(1.0, 2.0, trostab::random_matrix(2, 2, 73)));
  const CMatrix xu = unit_normalized(x1);
  CHECK(trostab::fe_residual(bumped, xu, zero, zero, Complex(1, 0)) ==
        doctest::Approx(2.0 / 9.0).epsilon(1e-11));

  // Conjugation: additive, so the balance closes at mu = 1...
  const trostab::TernaryMap conj = trostab::make_conjugation(2, 2);
  const CMatrix x2 = trostab::random_matrix(2, 2, 74);
  const CMatrix x3 = trostab::random_matrix(2, 2, 75);
  CHECK(trostab::fe_residual(conj, x1, x2, x3, Complex(1, 0)) < 1e-12);
  // ...but not at complex phases, and the miss is exactly 1-homogeneous,
  // which doubles as a scaling cross-check of the evaluation itself.
  const double r1 = trostab::fe_residual(conj, x1, x2, x3, Complex(0, 1));
  CHECK(r1 > 0.1);
  for (const double t : {0.5, 2.0}) {
    const Complex tc(t, 0.0);
    const double rt = trostab::fe_residual(conj, trostab::scale(tc, x1), trostab::scale(tc, x2),
                                           trostab::scale(tc, x3), Complex(0, 1));
    CHECK(rt == doctest::Approx(t * r1).epsilon(1e-10));
  }
}

TEST_CASE("perturbations have an exact envelope and match a double evaluation") {
  const trostab::TernaryMap base =
      trostab::make_exact_hom(trostab::random_unitary(2, 81), trostab::random_unitary(2, 82));
  const trostab::TernaryMap radial = trostab::make_perturbed(
      base, trostab::PerturbationKind::radial(0.1, 2.0, trostab::random_matrix(2, 2, 83)));
  const trostab::TernaryMap tangential =
      trostab::make_perturbed(base, trostab::PerturbationKind::tangential(0.1, 2.0));

  for (int k = 0; k < 25; ++k) {
    const CMatrix x = trostab::random_matrix(2, 2, trostab::substream(103, k));
    const double nx = trostab::spectral_norm(x);
    for (const auto& f : {radial, tangential}) {
      const double dev = trostab::spectral_norm(trostab::sub(f.eval(x), base.eval(x)));
      CHECK(dev == doctest::Approx(0.1 * nx * nx).epsilon(1e-12));
      // offset_eval is the same difference computed without subtraction.
      CHECK(trostab::spectral_norm(f.offset_eval(x)) ==
            doctest::Approx(0.1 * nx * nx).epsilon(1e-12));
    }
  }

  // Residual strictly positive on a seeded unit triple, agreeing with an
  // independently coded evaluation of both sides.
  const CMatrix x1 = unit_normalized(trostab::random_matrix(2, 2, 91));
  const CMatrix x2 = unit_normalized(trostab::random_matrix(2, 2, 92));
  const CMatrix x3 = unit_normalized(trostab::random_matrix(2, 2, 93));
  const double got = trostab::hom_residual(radial, x1, x2, x3);
  CHECK(got > 1e-3);
  CHECK(got == doctest::Approx(hom_residual_oracle(radial, x1, x2, x3)).epsilon(1e-12));
}

TEST_CASE("seed-driven map specs are reproducible") {
  trostab::MapSpec spec;
  spec.kind = trostab::MapKind::exact_hom;
  spec.seeds = {11, 22};
  spec.perturbation = trostab::PerturbationSpec{trostab::PerturbationShape::radial, 0.5, 2.0};

  const trostab::TernaryMap f1 = trostab::make_map(spec, 2, 2);
  const trostab::TernaryMap f2 = trostab::make_map(spec, 2, 2);
  const CMatrix x = trostab::random_matrix(2, 2, 94);
  CHECK(trostab::frobenius_norm(trostab::sub(f1.eval(x), f2.eval(x))) == 0.0);

  spec.seeds = {11, 23};
  const trostab::TernaryMap f3 = trostab::make_map(spec, 2, 2);
  CHECK(trostab::frobenius_norm(trostab::sub(f1.eval(x), f3.eval(x))) > 1e-6);

  trostab::MapSpec affine_spec;
  affine_spec.kind = trostab::MapKind::affine;
  affine_spec.seeds = {5};
  const trostab::TernaryMap aff = trostab::make_map(affine_spec, 2, 3);
  // The shift is unit-normalized by construction.
  CHECK(trostab::spectral_norm(aff.offset_eval(CMatrix(2, 3))) ==
        doctest::Approx(1.0).epsilon(1e-12));
}
