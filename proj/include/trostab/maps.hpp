// Copyright 2026 The trostab authors
// SPDX-License-Identifier: Apache-2.0

//! Evaluable maps between matrix spaces: exact ternary homomorphisms and
//! derivations, perturbed variants with a prescribed pointwise envelope, and
//! negative controls (entrywise conjugation, affine shift).  Every map is
//! split into an exactly scale-homogeneous core plus an offset; the split is
//! what lets the correction machinery subtract the core without cancellation.
//!
//! The module also provides the residual functionals used throughout:
//! the three-point functional-balance residual (fe_residual), the product
//! residual for homomorphism candidates (hom_residual), and the Leibniz
//! residual for derivation candidates (deriv_residual).

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trostab/complex_linalg.hpp"

namespace trostab {

/// A finite set of unit-modulus scalars used to probe phase-homogeneity.
class MuSet {
 public:
  /// Validates that every value has |mu| = 1 within 1e-14.
  explicit MuSet(std::vector<Complex> values);

  /// The 12th roots of unity plus four seeded random phases.
  static MuSet roots12_plus_4(std::uint64_t seed);

  const std::vector<Complex>& values() const { return values_; }

 private:
  std::vector<Complex> values_;
};

enum class PerturbationShape { radial, tangential };

/// A pointwise perturbation g with the exact envelope ||g(x)|| = theta0*||x||^exponent.
///
///   radial:     g(x) = theta0 * ||x||^exponent * direction   (fixed unit direction)
///   tangential: g(x) = theta0 * ||x||^(exponent-1) * x       (x != 0; g(0) = 0)
///
/// Both shapes send 0 to 0 whenever exponent > 0.
struct PerturbationKind {
  PerturbationShape shape;
  double theta0 = 0.0;
  double exponent = 0.0;
  /// Radial only; normalized to unit spectral norm when the map is built.
  std::optional<CMatrix> direction;

  static PerturbationKind radial(double theta0, double exponent, CMatrix direction);
  static PerturbationKind tangential(double theta0, double exponent);
};

namespace detail {
class MapBody;
}

/// An immutable evaluable map f between matrix spaces, decomposed as
/// f = core + offset where the core is exactly homogeneous under real
/// scaling (core(t*x) = t*core(x) for real t) and the offset carries
/// everything else (perturbations, affine shifts).
class TernaryMap {
 public:
  CMatrix eval(const CMatrix& x) const;
  CMatrix core_eval(const CMatrix& x) const;
  CMatrix offset_eval(const CMatrix& x) const;

  std::size_t domain_rows() const;
  std::size_t domain_cols() const;
  std::size_t codomain_rows() const;
  std::size_t codomain_cols() const;
  bool is_endomap() const;

  /// Stable identifier of the body ("exact_hom", "perturbed(identity)", ...).
  std::string kind_name() const;

  explicit TernaryMap(std::shared_ptr<const detail::MapBody> body);

 private:
  std::shared_ptr<const detail::MapBody> body_;
};

/// f(x) = U * x * adjoint(W).  Requires adjoint(U)*U = I and adjoint(W)*W = I
/// within 1e-12 (Frobenius), so the map is a spectral-norm isometry.
TernaryMap make_exact_hom(CMatrix u, CMatrix w);

/// f(x) = a*x - x*b with a, b skew-adjoint within 1e-12; the skewness makes
/// the Leibniz identity for the triple product hold exactly.
TernaryMap make_exact_deriv(CMatrix a, CMatrix b);

/// f(x) = x.
TernaryMap make_identity(std::size_t rows, std::size_t cols);

/// f(x) = entrywise complex conjugate of x.  Additive and real-homogeneous,
/// but conjugate-linear: the canonical control that passes every additivity
/// check and fails phase-homogeneity.
TernaryMap make_conjugation(std::size_t rows, std::size_t cols);

/// f(x) = x + v.  The affine control: fails the functional balance by a
/// constant amount (2||v||) regardless of the sample.
TernaryMap make_affine(CMatrix v);

/// base(x) + g(x) with g given by the perturbation kind.
TernaryMap make_perturbed(TernaryMap base, PerturbationKind kind);

/// Deterministic unitary factor: modified Gram-Schmidt, re-orthogonalized
/// once, applied to a seeded random matrix.
CMatrix random_unitary(std::size_t n, std::uint64_t seed);

/// Deterministic skew-adjoint factor (r - adjoint(r))/2 of a seeded random r;
/// the construction is skew-adjoint exactly, bit for bit.
CMatrix random_skew(std::size_t n, std::uint64_t seed);

/// Functional-balance residual
///   || f(mu(x2-x1)/3) + f(mu(x1-3*x3)/3) + mu*f((3*x1+3*x3-x2)/3) - mu*f(x1) ||
/// in the codomain spectral norm.  The three arguments sum to mu*x1, so any
/// C-linear map scores zero for every unit-modulus mu; at mu = 1 the
/// expression is the plain four-point balance
///   f((x2-x1)/3) + f((x1-3*x3)/3) + f((3*x1+3*x3-x2)/3) - f(x1),
/// and with x1 = x2 = 0 it reduces to f(-mu*x3) + mu*f(x3) for maps sending
/// 0 to 0, the instance that separates conjugate-linear controls.
/// Requires |mu| = 1 within 1e-12.
double fe_residual(const TernaryMap& f, const CMatrix& x1, const CMatrix& x2, const CMatrix& x3,
                   Complex mu);

/// || f([x1,x2,x3]) - [f(x1), f(x2), f(x3)] ||.
double hom_residual(const TernaryMap& f, const CMatrix& x1, const CMatrix& x2, const CMatrix& x3);

/// || f([x1,x2,x3]) - [f(x1),x2,x3] - [x1,f(x2),x3] - [x1,x2,f(x3)] ||.
/// Requires an endomap on a square space.
double deriv_residual(const TernaryMap& f, const CMatrix& x1, const CMatrix& x2,
                      const CMatrix& x3);

enum class MapKind { exact_hom, exact_deriv, identity, conjugation, affine };

struct PerturbationSpec {
  PerturbationShape shape;
  double theta0 = 0.0;
  double exponent = 0.0;
};

/// Seed-driven map description, the form the CLI config reduces to.
struct MapSpec {
  MapKind kind = MapKind::identity;
  std::vector<std::uint64_t> seeds;
  std::optional<PerturbationSpec> perturbation;
};

/// Builds the map on the m x n space.  All random factors (unitaries, skew
/// parts, directions, affine shifts) derive from the folded seed list, so a
/// spec is a complete, reproducible description.  Affine shifts and radial
/// directions are normalized to unit spectral norm.
TernaryMap make_map(const MapSpec& spec, std::size_t m, std::size_t n);

}  // namespace trostab
