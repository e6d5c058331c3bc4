// Copyright 2026 The trostab authors
// SPDX-License-Identifier: Apache-2.0

#include "trostab/complex_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "trostab/errors.hpp"

namespace trostab {

namespace {

void require_positive_dims(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw dimension_error("matrix dimensions must be positive, got " + std::to_string(rows) +
                          "x" + std::to_string(cols));
  }
}

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw dimension_error(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                          std::to_string(b.cols()));
  }
}

bool entry_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Complex(0.0, 0.0)) {
  require_positive_dims(rows, cols);
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  require_positive_dims(rows, cols);
  if (entries_.size() != rows_ * cols_) {
    throw dimension_error("entry list has " + std::to_string(entries_.size()) +
                          " elements, expected " + std::to_string(rows_ * cols_));
  }
  validate();
}

void CMatrix::validate() const {
  for (const Complex& z : entries_) {
    if (!entry_finite(z)) {
      throw parameter_error("non-finite matrix entry");
    }
  }
}

CMatrix CMatrix::zero(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix e(n, n);
  for (std::size_t i = 0; i < n; ++i) e.at(i, i) = Complex(1.0, 0.0);
  return e;
}

CMatrix add(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "add");
  CMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j) + b.at(i, j);
  out.validate();
  return out;
}

CMatrix sub(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "sub");
  CMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j) - b.at(i, j);
  out.validate();
  return out;
}

CMatrix scale(Complex factor, const CMatrix& a) {
  if (!entry_finite(factor)) throw parameter_error("non-finite scale factor");
  CMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = factor * a.at(i, j);
  out.validate();
  return out;
}

CMatrix adjoint(const CMatrix& a) {
  CMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(j, i) = std::conj(a.at(i, j));
  return out;
}

CMatrix conj_entries(const CMatrix& a) {
  CMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = std::conj(a.at(i, j));
  return out;
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    throw dimension_error("matmul: inner dimensions " + std::to_string(a.cols()) + " vs " +
                          std::to_string(b.rows()));
  }
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a.at(i, k);
      if (aik == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out.at(i, j) += aik * b.at(k, j);
    }
  }
  out.validate();
  return out;
}

double frobenius_norm(const CMatrix& a) {
  double sum = 0.0;
  for (const Complex& z : a.entries()) sum += std::norm(z);
  return std::sqrt(sum);
}

namespace {

// Gram matrix a*·a, Hermitian positive semidefinite, cols x cols.
CMatrix gram(const CMatrix& a) { return matmul(adjoint(a), a); }

// Largest eigenvalue of a Hermitian matrix via cyclic Jacobi sweeps on the
// 2n x 2n real-symmetric embedding [[Re, -Im], [Im, Re]] (same spectrum,
// doubled multiplicities). Deterministic, accurate to machine precision.
double hermitian_lambda_max(const CMatrix& h) {
  const std::size_t n = h.rows();
  const std::size_t d = 2 * n;
  std::vector<double> m(d * d, 0.0);
  auto idx = [d](std::size_t i, std::size_t j) { return i * d + j; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double re = h.at(i, j).real();
      const double im = h.at(i, j).imag();
      m[idx(i, j)] = re;
      m[idx(i + n, j + n)] = re;
      m[idx(i, j + n)] = -im;
      m[idx(i + n, j)] = im;
    }
  }
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) off += m[idx(i, j)] * m[idx(i, j)];
    double diag = 0.0;
    for (std::size_t i = 0; i < d; ++i) diag += m[idx(i, i)] * m[idx(i, i)];
    if (off <= 1e-30 * std::max(diag, std::numeric_limits<double>::min())) break;
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = m[idx(p, q)];
        if (apq == 0.0) continue;
        const double app = m[idx(p, p)];
        const double aqq = m[idx(q, q)];
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < d; ++k) {
          const double mkp = m[idx(k, p)];
          const double mkq = m[idx(k, q)];
          m[idx(k, p)] = c * mkp - s * mkq;
          m[idx(k, q)] = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double mpk = m[idx(p, k)];
          const double mqk = m[idx(q, k)];
          m[idx(p, k)] = c * mpk - s * mqk;
          m[idx(q, k)] = s * mpk + c * mqk;
        }
      }
    }
  }
  double lmax = m[0];
  for (std::size_t i = 1; i < d; ++i) lmax = std::max(lmax, m[idx(i, i)]);
  return lmax;
}

constexpr std::uint64_t kPowerIterationSeed = 0x535045435452414cULL;

}  // namespace

double spectral_norm(const CMatrix& a) {
  const double fro = frobenius_norm(a);
  if (fro == 0.0) return 0.0;

  const CMatrix g = gram(a);
  const std::size_t n = g.rows();
  if (n == 1) return std::sqrt(std::max(0.0, g.at(0, 0).real()));

  // Deterministic start vector; does not depend on the matrix values.
  std::vector<Complex> v(n);
  {
    std::mt19937_64 engine(splitmix64(kPowerIterationSeed ^ (0x9e37ULL * n)));
    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double re = 1.0 + static_cast<double>(engine() >> 11) * 0x1.0p-53;
      const double im = 1.0 + static_cast<double>(engine() >> 11) * 0x1.0p-53;
      v[i] = Complex(re, im);
      norm2 += std::norm(v[i]);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& z : v) z *= inv;
  }

  std::vector<Complex> w(n);
  double rho_prev = 0.0;
  double diff_prev = std::numeric_limits<double>::infinity();
  const int max_iter = 10000;
  for (int iter = 0; iter < max_iter; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      Complex acc(0.0, 0.0);
      for (std::size_t j = 0; j < n; ++j) acc += g.at(i, j) * v[j];
      w[i] = acc;
    }
    double rho = 0.0;  // v^H G v, real for Hermitian G
    double wnorm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      rho += (std::conj(v[i]) * w[i]).real();
      wnorm2 += std::norm(w[i]);
    }
    if (wnorm2 == 0.0) break;  // start vector fell into the kernel; use the eigensolve
    const double wnorm = std::sqrt(wnorm2);
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wnorm;

    const double diff = std::abs(rho - rho_prev);
    if (iter > 0 && diff < 1e-14 * std::max(rho, std::numeric_limits<double>::min())) {
      // Remainder guard: with contraction ratio r per step the outstanding
      // error is about diff * r / (1 - r); accept only when that is small too.
      double r = (diff_prev > 0.0 && std::isfinite(diff_prev)) ? diff / diff_prev : 0.0;
      r = std::clamp(r, 0.0, 0.999);
      const double remainder = diff * r / (1.0 - r);
      if (remainder <= 1e-13 * std::max(rho, std::numeric_limits<double>::min())) {
        return std::sqrt(std::max(rho, 0.0));
      }
    }
    rho_prev = rho;
    diff_prev = diff;
  }

  return std::sqrt(std::max(0.0, hermitian_lambda_max(g)));
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 0x51ab1dULL));
}

CMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  require_positive_dims(rows, cols);
  std::mt19937_64 engine(splitmix64(seed));
  auto uniform = [&engine]() {
    // (0, 1]: never zero, so the log below is safe.
    return (static_cast<double>(engine() >> 11) + 1.0) * 0x1.0p-53;
  };
  std::vector<Complex> entries;
  entries.reserve(rows * cols);
  for (std::size_t k = 0; k < rows * cols; ++k) {
    const double u1 = uniform();
    const double u2 = uniform();
    const double modulus = std::sqrt(-std::log(u1));
    const double phase = 2.0 * std::numbers::pi * u2;
    entries.emplace_back(modulus * std::cos(phase), modulus * std::sin(phase));
  }
  return CMatrix(rows, cols, std::move(entries));
}

}  // namespace trostab
