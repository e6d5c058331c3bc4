// Copyright 2026 The trostab authors
// SPDX-License-Identifier: Apache-2.0

#include "trostab/maps.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <utility>

#include "trostab/errors.hpp"
#include "trostab/ternary_algebra.hpp"

namespace trostab {

namespace detail {

class MapBody {
 public:
  virtual ~MapBody() = default;
  virtual CMatrix eval(const CMatrix& x) const = 0;
  virtual CMatrix core_eval(const CMatrix& x) const = 0;
  virtual CMatrix offset_eval(const CMatrix& x) const = 0;
  virtual std::string kind_name() const = 0;
  virtual std::size_t domain_rows() const = 0;
  virtual std::size_t domain_cols() const = 0;
  virtual std::size_t codomain_rows() const = 0;
  virtual std::size_t codomain_cols() const = 0;
};

namespace {

void require_domain(const MapBody& body, const CMatrix& x) {
  if (x.rows() != body.domain_rows() || x.cols() != body.domain_cols()) {
    throw dimension_error("map argument is " + std::to_string(x.rows()) + "x" +
                          std::to_string(x.cols()) + ", domain is " +
                          std::to_string(body.domain_rows()) + "x" +
                          std::to_string(body.domain_cols()));
  }
}

class ExactHomBody final : public MapBody {
 public:
  ExactHomBody(CMatrix u, CMatrix w) : u_(std::move(u)), w_adj_(adjoint(w)) {}

  CMatrix eval(const CMatrix& x) const override {
    require_domain(*this, x);
    return matmul(matmul(u_, x), w_adj_);
  }
  CMatrix core_eval(const CMatrix& x) const override { return eval(x); }
  CMatrix offset_eval(const CMatrix& x) const override {
    require_domain(*this, x);
    return CMatrix::zero(codomain_rows(), codomain_cols());
  }
  std::string kind_name() const override { return "exact_hom"; }
  std::size_t domain_rows() const override { return u_.cols(); }
  std::size_t domain_cols() const override { return w_adj_.rows(); }
  std::size_t codomain_rows() const override { return u_.rows(); }
  std::size_t codomain_cols() const override { return w_adj_.cols(); }

 private:
  CMatrix u_;
  CMatrix w_adj_;
};

class ExactDerivBody final : public MapBody {
 public:
  ExactDerivBody(CMatrix a, CMatrix b) : a_(std::move(a)), b_(std::move(b)) {}

  CMatrix eval(const CMatrix& x) const override {
    require_domain(*this, x);
    return sub(matmul(a_, x), matmul(x, b_));
  }
  CMatrix core_eval(const CMatrix& x) const override { return eval(x); }
  CMatrix offset_eval(const CMatrix& x) const override {
    require_domain(*this, x);
    return CMatrix::zero(codomain_rows(), codomain_cols());
  }
  std::string kind_name() const override { return "exact_deriv"; }
  std::size_t domain_rows() const override { return a_.rows(); }
  std::size_t domain_cols() const override { return b_.rows(); }
  std::size_t codomain_rows() const override { return a_.rows(); }
  std::size_t codomain_cols() const override { return b_.rows(); }

 private:
  CMatrix a_;
  CMatrix b_;
};

class IdentityBody final : public MapBody {
 public:
  IdentityBody(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    if (rows == 0 || cols == 0) throw dimension_error("identity map needs positive dimensions");
  }

  CMatrix eval(const CMatrix& x) const override {
    require_domain(*this, x);
    return x;
  }
  CMatrix core_eval(const CMatrix& x) const override { return eval(x); }
  CMatrix offset_eval(const CMatrix& x) const override {
    require_domain(*this, x);
    return CMatrix::zero(rows_, cols_);
  }
  std::string kind_name() const override { return "identity"; }
  std::size_t domain_rows() const override { return rows_; }
  std::size_t domain_cols() const override { return cols_; }
  std::size_t codomain_rows() const override { return rows_; }
  std::size_t codomain_cols() const override { return cols_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
};

class ConjugationBody final : public MapBody {
 public:
  ConjugationBody(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    if (rows == 0 || cols == 0) throw dimension_error("conjugation map needs positive dimensions");
  }

  CMatrix eval(const CMatrix& x) const override {
    require_domain(*this, x);
    return conj_entries(x);
  }
  // Entrywise conjugation commutes with real scaling exactly, so the whole
  // map is its own core.
  CMatrix core_eval(const CMatrix& x) const override { return eval(x); }
  CMatrix offset_eval(const CMatrix& x) const override {
    require_domain(*this, x);
    return CMatrix::zero(rows_, cols_);
  }
  std::string kind_name() const override { return "conjugation"; }
  std::size_t domain_rows() const override { return rows_; }
  std::size_t domain_cols() const override { return cols_; }
  std::size_t codomain_rows() const override { return rows_; }
  std::size_t codomain_cols() const override { return cols_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
};

class AffineBody final : public MapBody {
 public:
  explicit AffineBody(CMatrix v) : v_(std::move(v)) {}

  CMatrix eval(const CMatrix& x) const override {
    require_domain(*this, x);
    return add(x, v_);
  }
  CMatrix core_eval(const CMatrix& x) const override {
    require_domain(*this, x);
    return x;
  }
  CMatrix offset_eval(const CMatrix& x) const override {
    require_domain(*this, x);
    return v_;
  }
  std::string kind_name() const override { return "affine"; }
  std::size_t domain_rows() const override { return v_.rows(); }
  std::size_t domain_cols() const override { return v_.cols(); }
  std::size_t codomain_rows() const override { return v_.rows(); }
  std::size_t codomain_cols() const override { return v_.cols(); }

 private:
  CMatrix v_;
};

class PerturbedBody final : public MapBody {
 public:
  PerturbedBody(std::shared_ptr<const MapBody> base, PerturbationKind kind)
      : base_(std::move(base)), kind_(std::move(kind)) {}

  CMatrix g(const CMatrix& x) const {
    const double norm = spectral_norm(x);
    if (kind_.shape == PerturbationShape::radial) {
      if (norm == 0.0 && kind_.exponent > 0.0) {
        return CMatrix::zero(codomain_rows(), codomain_cols());
      }
      return scale(Complex(kind_.theta0 * std::pow(norm, kind_.exponent), 0.0),
                   *kind_.direction);
    }
    if (norm == 0.0) return CMatrix::zero(codomain_rows(), codomain_cols());
    return scale(Complex(kind_.theta0 * std::pow(norm, kind_.exponent - 1.0), 0.0), x);
  }

  CMatrix eval(const CMatrix& x) const override { return add(base_->eval(x), g(x)); }
  CMatrix core_eval(const CMatrix& x) const override { return base_->core_eval(x); }
  CMatrix offset_eval(const CMatrix& x) const override {
    const CMatrix base_offset = base_->offset_eval(x);
    return add(base_offset, g(x));
  }
  std::string kind_name() const override { return "perturbed(" + base_->kind_name() + ")"; }
  std::size_t domain_rows() const override { return base_->domain_rows(); }
  std::size_t domain_cols() const override { return base_->domain_cols(); }
  std::size_t codomain_rows() const override { return base_->codomain_rows(); }
  std::size_t codomain_cols() const override { return base_->codomain_cols(); }

 private:
  std::shared_ptr<const MapBody> base_;
  PerturbationKind kind_;
};

}  // namespace

}  // namespace detail

MuSet::MuSet(std::vector<Complex> values) : values_(std::move(values)) {
  if (values_.empty()) throw parameter_error("mu set must not be empty");
  for (const Complex& mu : values_) {
    if (std::abs(std::abs(mu) - 1.0) > 1e-14) {
      throw parameter_error("mu set entries must have unit modulus");
    }
  }
}

MuSet MuSet::roots12_plus_4(std::uint64_t seed) {
  std::vector<Complex> values;
  values.reserve(16);
  for (int k = 0; k < 12; ++k) {
    const double phase = std::numbers::pi * static_cast<double>(k) / 6.0;
    values.emplace_back(std::cos(phase), std::sin(phase));
  }
  std::mt19937_64 engine(splitmix64(seed ^ 0x12345ULL));
  for (int k = 0; k < 4; ++k) {
    const double u = (static_cast<double>(engine() >> 11) + 1.0) * 0x1.0p-53;
    const double phase = 2.0 * std::numbers::pi * u;
    values.emplace_back(std::cos(phase), std::sin(phase));
  }
  return MuSet(std::move(values));
}

PerturbationKind PerturbationKind::radial(double theta0, double exponent, CMatrix direction) {
  PerturbationKind kind;
  kind.shape = PerturbationShape::radial;
  kind.theta0 = theta0;
  kind.exponent = exponent;
  kind.direction = std::move(direction);
  return kind;
}

PerturbationKind PerturbationKind::tangential(double theta0, double exponent) {
  PerturbationKind kind;
  kind.shape = PerturbationShape::tangential;
  kind.theta0 = theta0;
  kind.exponent = exponent;
  return kind;
}

TernaryMap::TernaryMap(std::shared_ptr<const detail::MapBody> body) : body_(std::move(body)) {
  if (!body_) throw parameter_error("map body must not be null");
}

CMatrix TernaryMap::eval(const CMatrix& x) const { return body_->eval(x); }
CMatrix TernaryMap::core_eval(const CMatrix& x) const { return body_->core_eval(x); }
CMatrix TernaryMap::offset_eval(const CMatrix& x) const { return body_->offset_eval(x); }
std::size_t TernaryMap::domain_rows() const { return body_->domain_rows(); }
std::size_t TernaryMap::domain_cols() const { return body_->domain_cols(); }
std::size_t TernaryMap::codomain_rows() const { return body_->codomain_rows(); }
std::size_t TernaryMap::codomain_cols() const { return body_->codomain_cols(); }
bool TernaryMap::is_endomap() const {
  return domain_rows() == codomain_rows() && domain_cols() == codomain_cols();
}
std::string TernaryMap::kind_name() const { return body_->kind_name(); }

TernaryMap make_exact_hom(CMatrix u, CMatrix w) {
  const CMatrix gu = matmul(adjoint(u), u);
  const CMatrix gw = matmul(adjoint(w), w);
  const double du = frobenius_norm(sub(gu, CMatrix::identity(gu.rows())));
  const double dw = frobenius_norm(sub(gw, CMatrix::identity(gw.rows())));
  if (du > 1e-12 || dw > 1e-12) {
    throw model_error("exact_hom factors must be isometries (adjoint(U)*U = I within 1e-12)");
  }
  return TernaryMap(std::make_shared<detail::ExactHomBody>(std::move(u), std::move(w)));
}

TernaryMap make_exact_deriv(CMatrix a, CMatrix b) {
  if (a.rows() != a.cols() || b.rows() != b.cols()) {
    throw dimension_error("exact_deriv factors must be square");
  }
  const double da = frobenius_norm(add(a, adjoint(a)));
  const double db = frobenius_norm(add(b, adjoint(b)));
  if (da > 1e-12 || db > 1e-12) {
    throw model_error("exact_deriv factors must be skew-adjoint (a + adjoint(a) = 0 within 1e-12)");
  }
  return TernaryMap(std::make_shared<detail::ExactDerivBody>(std::move(a), std::move(b)));
}

TernaryMap make_identity(std::size_t rows, std::size_t cols) {
  return TernaryMap(std::make_shared<detail::IdentityBody>(rows, cols));
}

TernaryMap make_conjugation(std::size_t rows, std::size_t cols) {
  return TernaryMap(std::make_shared<detail::ConjugationBody>(rows, cols));
}

TernaryMap make_affine(CMatrix v) {
  return TernaryMap(std::make_shared<detail::AffineBody>(std::move(v)));
}

namespace {

std::shared_ptr<const detail::MapBody> body_of(const TernaryMap& map) {
  // Rebuild a body wrapper by delegation; TernaryMap is the only handle we
  // hand out, so the perturbed body captures the map by value instead.
  class Delegate final : public detail::MapBody {
   public:
    explicit Delegate(TernaryMap m) : m_(std::move(m)) {}
    CMatrix eval(const CMatrix& x) const override { return m_.eval(x); }
    CMatrix core_eval(const CMatrix& x) const override { return m_.core_eval(x); }
    CMatrix offset_eval(const CMatrix& x) const override { return m_.offset_eval(x); }
    std::string kind_name() const override { return m_.kind_name(); }
    std::size_t domain_rows() const override { return m_.domain_rows(); }
    std::size_t domain_cols() const override { return m_.domain_cols(); }
    std::size_t codomain_rows() const override { return m_.codomain_rows(); }
    std::size_t codomain_cols() const override { return m_.codomain_cols(); }

   private:
    TernaryMap m_;
  };
  return std::make_shared<Delegate>(map);
}

}  // namespace

TernaryMap make_perturbed(TernaryMap base, PerturbationKind kind) {
  if (kind.theta0 < 0.0) throw parameter_error("perturbation level theta0 must be nonnegative");
  if (kind.shape == PerturbationShape::radial) {
    if (!kind.direction) throw parameter_error("radial perturbation needs a direction matrix");
    if (kind.direction->rows() != base.codomain_rows() ||
        kind.direction->cols() != base.codomain_cols()) {
      throw dimension_error("radial direction must have the codomain shape");
    }
    const double dn = spectral_norm(*kind.direction);
    if (dn == 0.0) throw parameter_error("radial direction must be nonzero");
    kind.direction = scale(Complex(1.0 / dn, 0.0), *kind.direction);
  } else {
    if (!base.is_endomap()) {
      throw dimension_error("tangential perturbation needs matching domain and codomain shapes");
    }
  }
  return TernaryMap(std::make_shared<detail::PerturbedBody>(body_of(base), std::move(kind)));
}

CMatrix random_unitary(std::size_t n, std::uint64_t seed) {
  CMatrix m = random_matrix(n, n, seed);
  // Modified Gram-Schmidt over columns, run twice for orthogonality at the
  // rounding floor.
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex proj(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) proj += std::conj(m.at(i, k)) * m.at(i, j);
        for (std::size_t i = 0; i < n; ++i) m.at(i, j) -= proj * m.at(i, k);
      }
      double norm2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) norm2 += std::norm(m.at(i, j));
      if (norm2 == 0.0) throw model_error("degenerate draw while orthonormalizing");
      const double inv = 1.0 / std::sqrt(norm2);
      for (std::size_t i = 0; i < n; ++i) m.at(i, j) *= inv;
    }
  }
  return m;
}

CMatrix random_skew(std::size_t n, std::uint64_t seed) {
  const CMatrix r = random_matrix(n, n, seed);
  return scale(Complex(0.5, 0.0), sub(r, adjoint(r)));
}

namespace {

CMatrix div3(const CMatrix& a) {
  CMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      out.at(i, j) = Complex(a.at(i, j).real() / 3.0, a.at(i, j).imag() / 3.0);
  return out;
}

void require_triple_shape(const TernaryMap& f, const CMatrix& x1, const CMatrix& x2,
                          const CMatrix& x3) {
  const std::size_t m = f.domain_rows();
  const std::size_t n = f.domain_cols();
  if (x1.rows() != m || x1.cols() != n || x2.rows() != m || x2.cols() != n || x3.rows() != m ||
      x3.cols() != n) {
    throw dimension_error("triple arguments must all have the map's domain shape");
  }
}

}  // namespace

double fe_residual(const TernaryMap& f, const CMatrix& x1, const CMatrix& x2, const CMatrix& x3,
                   Complex mu) {
  if (std::abs(std::abs(mu) - 1.0) > 1e-12) {
    throw parameter_error("fe_residual needs a unit-modulus mu");
  }
  require_triple_shape(f, x1, x2, x3);

  const CMatrix a1 = div3(scale(mu, sub(x2, x1)));
  const CMatrix a2 = div3(scale(mu, sub(x1, scale(Complex(3.0, 0.0), x3))));
  const CMatrix a3 = div3(sub(add(scale(Complex(3.0, 0.0), x1), scale(Complex(3.0, 0.0), x3)), x2));

  CMatrix acc = add(f.eval(a1), f.eval(a2));
  acc = add(acc, scale(mu, f.eval(a3)));
  acc = sub(acc, scale(mu, f.eval(x1)));
  return spectral_norm(acc);
}

double hom_residual(const TernaryMap& f, const CMatrix& x1, const CMatrix& x2,
                    const CMatrix& x3) {
  require_triple_shape(f, x1, x2, x3);
  const CMatrix lhs = f.eval(ternary_product(x1, x2, x3));
  const CMatrix rhs = ternary_product(f.eval(x1), f.eval(x2), f.eval(x3));
  return spectral_norm(sub(lhs, rhs));
}

double deriv_residual(const TernaryMap& f, const CMatrix& x1, const CMatrix& x2,
                      const CMatrix& x3) {
  if (!f.is_endomap() || f.domain_rows() != f.domain_cols()) {
    throw model_error("deriv_residual needs an endomap on a square space");
  }
  require_triple_shape(f, x1, x2, x3);
  const CMatrix lhs = f.eval(ternary_product(x1, x2, x3));
  CMatrix rhs = ternary_product(f.eval(x1), x2, x3);
  rhs = add(rhs, ternary_product(x1, f.eval(x2), x3));
  rhs = add(rhs, ternary_product(x1, x2, f.eval(x3)));
  return spectral_norm(sub(lhs, rhs));
}

TernaryMap make_map(const MapSpec& spec, std::size_t m, std::size_t n) {
  std::uint64_t master = 0x9e3779b97f4a7c15ULL;
  std::uint64_t index = 1;
  for (const std::uint64_t s : spec.seeds) {
    master = splitmix64(master ^ splitmix64(s + index));
    ++index;
  }

  TernaryMap base = [&]() -> TernaryMap {
    switch (spec.kind) {
      case MapKind::exact_hom:
        return make_exact_hom(random_unitary(m, substream(master, 1)),
                              random_unitary(n, substream(master, 2)));
      case MapKind::exact_deriv:
        return make_exact_deriv(random_skew(m, substream(master, 3)),
                                random_skew(n, substream(master, 4)));
      case MapKind::identity:
        return make_identity(m, n);
      case MapKind::conjugation:
        return make_conjugation(m, n);
      case MapKind::affine: {
        CMatrix v = random_matrix(m, n, substream(master, 5));
        const double nv = spectral_norm(v);
        if (nv == 0.0) throw model_error("degenerate affine shift draw");
        return make_affine(scale(Complex(1.0 / nv, 0.0), v));
      }
    }
    throw parameter_error("unknown map kind");
  }();

  if (!spec.perturbation) return base;

  const PerturbationSpec& ps = *spec.perturbation;
  if (ps.shape == PerturbationShape::radial) {
    return make_perturbed(std::move(base),
                          PerturbationKind::radial(ps.theta0, ps.exponent,
                                                   random_matrix(m, n, substream(master, 6))));
  }
  return make_perturbed(std::move(base), PerturbationKind::tangential(ps.theta0, ps.exponent));
}

}  // namespace trostab
