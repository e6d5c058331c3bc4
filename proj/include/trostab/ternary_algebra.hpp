// Copyright 2026 The trostab authors
// SPDX-License-Identifier: Apache-2.0

//! Rectangular matrix spaces M_{m,n}(C) carrying the triple product
//! [x, y, z] = x * adjoint(y) * z together with axiom verification.
//!
//! The triple product is linear in the outer slots, conjugate-linear in the
//! middle slot, satisfies the reassociation chain
//!   [x, y, [z, w, v]] = [x, [w, z, y], v] = [[x, y, z], w, v],
//! is submultiplicative for the operator norm, and obeys the cube identity
//! ||[x, x, x]|| = ||x||^3.  Square spaces additionally expose the binary
//! product and involution induced by the identity element.

#pragma once

#include <cstddef>
#include <cstdint>

#include "trostab/complex_linalg.hpp"

namespace trostab {

/// A finite-dimensional space of complex rows x cols matrices.
class TroSpace {
 public:
  TroSpace(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
};

/// Triple product x * adjoint(y) * z.  All arguments share one shape and the
/// result has that shape again.
CMatrix ternary_product(const CMatrix& x, const CMatrix& y, const CMatrix& z);

/// Binary product recovered from the triple product through the identity
/// element of a square space: a . b = [a, identity, b] = a * b.
/// Throws model_error when the operands are not square.
CMatrix derived_binary(const CMatrix& a, const CMatrix& b);

/// Involution recovered the same way: x^ = [identity, x, identity] = adjoint(x).
/// Throws model_error when the operand is not square.
CMatrix derived_involution(const CMatrix& x);

/// Worst-case residuals collected over a randomized axiom sweep.
///
/// Structural identities (linearity, conjugate-linearity, reassociation) are
/// reported as ||lhs - rhs|| / (1 + ||lhs|| + ||rhs||).  The norm inequality
/// is reported as the relative excess of ||[x,y,z]|| over ||x|| ||y|| ||z||,
/// and the cube identity as the relative deviation of ||[x,x,x]|| from
/// ||x||^3 with the sample norm swept log-uniformly across [0.1, 10].
struct AxiomReport {
  std::size_t sample_count = 0;
  double worst_outer_linearity = 0.0;
  double worst_middle_conjugation = 0.0;
  double worst_reassociation = 0.0;
  double worst_norm_excess = 0.0;
  double worst_cube_identity = 0.0;
  bool pass = false;
};

/// Tolerances used by check_axioms when deciding the pass verdict.
inline constexpr double kStructuralAxiomTol = 1e-10;
inline constexpr double kNormExcessTol = 1e-10;
inline constexpr double kCubeIdentityTol = 1e-8;

/// Draws sample_count random tuples on the space and measures every axiom.
AxiomReport check_axioms(const TroSpace& space, std::size_t sample_count, std::uint64_t seed);

}  // namespace trostab
