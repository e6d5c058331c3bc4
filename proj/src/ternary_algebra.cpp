// Copyright 2026 The trostab authors
// SPDX-License-Identifier: Apache-2.0

#include "trostab/ternary_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "trostab/errors.hpp"

namespace trostab {

namespace {

void require_square(const CMatrix& a, const char* op) {
  if (a.rows() != a.cols()) {
    throw model_error(std::string(op) + " needs a square operand, got " +
                      std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

/// Scale-aware distance between two expressions that should agree exactly.
double structural_residual(const CMatrix& lhs, const CMatrix& rhs) {
  return frobenius_norm(sub(lhs, rhs)) / (1.0 + frobenius_norm(lhs) + frobenius_norm(rhs));
}

}  // namespace

TroSpace::TroSpace(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) {
    throw dimension_error("space dimensions must be positive, got " + std::to_string(rows) + "x" +
                          std::to_string(cols));
  }
}

CMatrix ternary_product(const CMatrix& x, const CMatrix& y, const CMatrix& z) {
  if (x.rows() != y.rows() || x.cols() != y.cols() || x.rows() != z.rows() ||
      x.cols() != z.cols()) {
    throw dimension_error("ternary_product arguments must share one shape");
  }
  return matmul(matmul(x, adjoint(y)), z);
}

CMatrix derived_binary(const CMatrix& a, const CMatrix& b) {
  require_square(a, "derived_binary");
  require_square(b, "derived_binary");
  if (a.rows() != b.rows()) {
    throw dimension_error("derived_binary operands must share one shape");
  }
  return ternary_product(a, CMatrix::identity(a.rows()), b);
}

CMatrix derived_involution(const CMatrix& x) {
  require_square(x, "derived_involution");
  const CMatrix e = CMatrix::identity(x.rows());
  return ternary_product(e, x, e);
}

AxiomReport check_axioms(const TroSpace& space, std::size_t sample_count, std::uint64_t seed) {
  if (sample_count == 0) throw parameter_error("check_axioms needs at least one sample");

  AxiomReport report;
  report.sample_count = sample_count;

  std::mt19937_64 scalar_engine(splitmix64(seed ^ 0xa10a5ULL));
  auto unit_scalar = [&scalar_engine]() {
    const double u = (static_cast<double>(scalar_engine() >> 11) + 1.0) * 0x1.0p-53;
    const double phase = 2.0 * 3.14159265358979323846 * u;
    const double mag = 0.5 + (static_cast<double>(scalar_engine() >> 11) + 1.0) * 0x1.0p-53;
    return Complex(mag * std::cos(phase), mag * std::sin(phase));
  };
  auto log_uniform_norm = [&scalar_engine]() {
    const double u = (static_cast<double>(scalar_engine() >> 11) + 1.0) * 0x1.0p-53;
    // log-uniform over [0.1, 10]
    return std::pow(10.0, 2.0 * u - 1.0);
  };

  const std::size_t m = space.rows();
  const std::size_t n = space.cols();

  for (std::size_t k = 0; k < sample_count; ++k) {
    const std::uint64_t s = substream(seed, k);
    const CMatrix x = random_matrix(m, n, substream(s, 1));
    const CMatrix y = random_matrix(m, n, substream(s, 2));
    const CMatrix z = random_matrix(m, n, substream(s, 3));
    const CMatrix w = random_matrix(m, n, substream(s, 4));
    const CMatrix v = random_matrix(m, n, substream(s, 5));
    const CMatrix x2 = random_matrix(m, n, substream(s, 6));
    const Complex alpha = unit_scalar();
    const Complex beta = unit_scalar();

    // Linearity in the first and third slots.
    {
      const CMatrix lhs = ternary_product(add(scale(alpha, x), scale(beta, x2)), y, z);
      const CMatrix rhs =
          add(scale(alpha, ternary_product(x, y, z)), scale(beta, ternary_product(x2, y, z)));
      report.worst_outer_linearity =
          std::max(report.worst_outer_linearity, structural_residual(lhs, rhs));
    }
    {
      const CMatrix lhs = ternary_product(x, y, add(scale(alpha, z), scale(beta, v)));
      const CMatrix rhs =
          add(scale(alpha, ternary_product(x, y, z)), scale(beta, ternary_product(x, y, v)));
      report.worst_outer_linearity =
          std::max(report.worst_outer_linearity, structural_residual(lhs, rhs));
    }

    // Conjugate-linearity in the middle slot.
    {
      const CMatrix lhs = ternary_product(x, add(scale(alpha, y), scale(beta, w)), z);
      const CMatrix rhs = add(scale(std::conj(alpha), ternary_product(x, y, z)),
                              scale(std::conj(beta), ternary_product(x, w, z)));
      report.worst_middle_conjugation =
          std::max(report.worst_middle_conjugation, structural_residual(lhs, rhs));
    }

    // Reassociation chain, both equalities.
    {
      const CMatrix a1 = ternary_product(x, y, ternary_product(z, w, v));
      const CMatrix a2 = ternary_product(x, ternary_product(w, z, y), v);
      const CMatrix a3 = ternary_product(ternary_product(x, y, z), w, v);
      report.worst_reassociation =
          std::max(report.worst_reassociation,
                   std::max(structural_residual(a1, a2), structural_residual(a2, a3)));
    }

    // Norm inequality ||[x,y,z]|| <= ||x|| ||y|| ||z||, relative excess.
    {
      const double bound = spectral_norm(x) * spectral_norm(y) * spectral_norm(z);
      if (bound > 0.0) {
        const double actual = spectral_norm(ternary_product(x, y, z));
        report.worst_norm_excess =
            std::max(report.worst_norm_excess, std::max(0.0, (actual - bound) / bound));
      }
    }

    // Cube identity across a wide range of magnitudes.
    {
      const double nx = spectral_norm(x);
      if (nx > 0.0) {
        const CMatrix xs = scale(Complex(log_uniform_norm() / nx, 0.0), x);
        const double lhs = spectral_norm(ternary_product(xs, xs, xs));
        const double target = std::pow(spectral_norm(xs), 3);
        report.worst_cube_identity =
            std::max(report.worst_cube_identity, std::abs(lhs - target) / target);
      }
    }
  }

  report.pass = report.worst_outer_linearity <= kStructuralAxiomTol &&
                report.worst_middle_conjugation <= kStructuralAxiomTol &&
                report.worst_reassociation <= kStructuralAxiomTol &&
                report.worst_norm_excess <= kNormExcessTol &&
                report.worst_cube_identity <= kCubeIdentityTol;
  return report;
}

}  // namespace trostab
