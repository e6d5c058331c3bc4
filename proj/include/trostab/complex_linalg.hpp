// Copyright 2026 The trostab authors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex matrices at desk scale (dimensions up to 16) with exactly the
//! operations the lab needs: arithmetic, adjoint, spectral norm, and a
//! deterministic seeded Gaussian generator. Everything here is value-semantic
//! and side-effect free; identical inputs give identical outputs bit for bit.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace trostab {

using Complex = std::complex<double>;

/// Row-major dense complex matrix. Entries are validated to be finite on
/// construction; NaN/Inf never survive inside a CMatrix.
class CMatrix {
 public:
  /// rows x cols zero matrix. Both dimensions must be >= 1.
  CMatrix(std::size_t rows, std::size_t cols);

  /// Builds from a row-major entry list; size must equal rows*cols.
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Complex& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  const std::vector<Complex>& entries() const { return entries_; }

  /// Re-checks the finiteness invariant; throws parameter_error on violation.
  void validate() const;

  static CMatrix zero(std::size_t rows, std::size_t cols);
  static CMatrix identity(std::size_t n);

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> entries_;
};

CMatrix add(const CMatrix& a, const CMatrix& b);
CMatrix sub(const CMatrix& a, const CMatrix& b);
CMatrix scale(Complex factor, const CMatrix& a);
/// Conjugate transpose.
CMatrix adjoint(const CMatrix& a);
/// Entrywise complex conjugate (no transpose).
CMatrix conj_entries(const CMatrix& a);
CMatrix matmul(const CMatrix& a, const CMatrix& b);

inline CMatrix operator+(const CMatrix& a, const CMatrix& b) { return add(a, b); }
inline CMatrix operator-(const CMatrix& a, const CMatrix& b) { return sub(a, b); }
inline CMatrix operator*(const CMatrix& a, const CMatrix& b) { return matmul(a, b); }
inline CMatrix operator*(Complex s, const CMatrix& a) { return scale(s, a); }

double frobenius_norm(const CMatrix& a);

/// Largest singular value. Power iteration on the Gram matrix a*·a with a
/// deterministic seeded start vector; converged when successive Rayleigh
/// quotients differ by < 1e-14 relative (with a geometric remainder guard so a
/// slow, near-degenerate spectrum cannot stall it into a wrong answer). Falls
/// back to a full Hermitian eigensolve of the Gram matrix (cyclic Jacobi on
/// the real-symmetric embedding) after 10000 iterations without convergence.
double spectral_norm(const CMatrix& a);

/// splitmix64 step; the seed-mixing primitive used everywhere in the lab.
std::uint64_t splitmix64(std::uint64_t x);

/// Derives the RNG stream for item #index of a seeded family. Streams for
/// distinct indices are decorrelated, so results do not depend on the order in
/// which samples are evaluated.
std::uint64_t substream(std::uint64_t seed, std::uint64_t index);

/// rows x cols matrix with i.i.d. standard complex Gaussian entries
/// (E|z|^2 = 1). Generator, documented and fixed: entries are drawn row-major
/// from std::mt19937_64 seeded with splitmix64(seed); each entry is
/// sqrt(-log(u1)) * exp(2*pi*i*u2) with u1, u2 in (0,1] taken from the top 53
/// bits of consecutive engine outputs. Identical (rows, cols, seed) give an
/// identical matrix.
CMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);

}  // namespace trostab
