// Copyright 2026 The trostab authors
// SPDX-License-Identifier: Apache-2.0

#include "trostab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "trostab/errors.hpp"

namespace trostab {
namespace {

// Stream tags keeping the samplers of the different experiments disjoint.
constexpr std::uint64_t kThetaLane = 0x7468657461;
constexpr std::uint64_t kBoundLane = 0x626f756e64;
constexpr std::uint64_t kUniqLane = 0x756e6971;
constexpr std::uint64_t kScanLane = 0x7363616e;
constexpr std::uint64_t kLemmaLane = 0x6c656d6d61;
constexpr std::uint64_t kMuLane = 0x6d756c696e;

std::uint64_t lane(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(seed ^ splitmix64(tag));
}

/// Componentwise multiplication by a real factor (no complex cross terms, so
/// scaling by an exact power of two is exact).
CMatrix real_scale(double t, const CMatrix& m) {
  CMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out.at(i, j) = Complex(t * m.at(i, j).real(), t * m.at(i, j).imag());
  return out;
}

CMatrix div3(const CMatrix& m) {
  CMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out.at(i, j) = Complex(m.at(i, j).real() / 3.0, m.at(i, j).imag() / 3.0);
  return out;
}

CMatrix mul3(const CMatrix& m) { return real_scale(3.0, m); }

CMatrix scale_down_steps(CMatrix m, int steps) {
  for (int k = 0; k < steps; ++k) m = div3(m);
  return m;
}

CMatrix scale_up_steps(CMatrix m, int steps) {
  for (int k = 0; k < steps; ++k) m = mul3(m);
  return m;
}

/// 3^steps as a double; exact up to steps == 33, rounded beyond.
double pow3_double(int steps) {
  double v = 1.0;
  for (int k = 0; k < steps; ++k) v *= 3.0;
  return v;
}

CMatrix draw_sample(const TernaryMap& f, std::uint64_t seed, double sample_scale) {
  const CMatrix m = random_matrix(f.domain_rows(), f.domain_cols(), seed);
  return sample_scale == 1.0 ? m : real_scale(sample_scale, m);
}

CMatrix unit_sample(const TernaryMap& f, std::uint64_t seed) {
  const CMatrix m = random_matrix(f.domain_rows(), f.domain_cols(), seed);
  return real_scale(1.0 / spectral_norm(m), m);
}

double resolved_theta(const TernaryMap& f, const StabilityParams& params) {
  if (params.theta) return *params.theta;
  return estimate_theta(f, params).theta_hat;
}

double snap_component(double c, int bits) {
  if (c == 0.0) return c;
  int e = 0;
  const double m = std::frexp(c, &e);
  const double rounded = std::round(std::ldexp(m, bits));
  return std::ldexp(rounded, e - bits);
}

/// Least-squares slope of log(residual) against the step index over the tail
/// window; converts to the per-step geometric ratio.
void fit_ratio(DecayTrace& trace, int depth) {
  const std::size_t window = static_cast<std::size_t>((depth + 1) / 2);
  const std::size_t size = trace.residuals.size();
  const std::size_t start = size > window ? size - window : 0;
  std::vector<double> ns;
  std::vector<double> logs;
  for (std::size_t j = start; j < size; ++j) {
    if (trace.residuals[j] > kFitFloor) {
      ns.push_back(static_cast<double>(j));
      logs.push_back(std::log(trace.residuals[j]));
    }
  }
  trace.fit_points = ns.size();
  if (ns.size() < 2) {
    trace.fit_valid = false;
    trace.fitted_ratio = 0.0;
    return;
  }
  double n_mean = 0.0;
  double l_mean = 0.0;
  for (std::size_t j = 0; j < ns.size(); ++j) {
    n_mean += ns[j];
    l_mean += logs[j];
  }
  n_mean /= static_cast<double>(ns.size());
  l_mean /= static_cast<double>(ns.size());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < ns.size(); ++j) {
    num += (ns[j] - n_mean) * (logs[j] - l_mean);
    den += (ns[j] - n_mean) * (ns[j] - n_mean);
  }
  trace.fit_valid = true;
  trace.fitted_ratio = std::exp(num / den);
}

DecayTrace run_scan(const TernaryMap& f, const StabilityParams& params, int depth, double base,
                    double weight_step, bool use_deriv) {
  params.validate();
  if (depth < 1 || depth > 100) throw parameter_error("scan depth must lie in [1, 100]");
  const bool contracting = params.p > 1.0;
  const std::uint64_t s = lane(params.seed, kScanLane);
  CMatrix a1 = draw_sample(f, substream(s, 1), params.sample_scale);
  CMatrix a2 = draw_sample(f, substream(s, 2), params.sample_scale);
  CMatrix a3 = draw_sample(f, substream(s, 3), params.sample_scale);

  auto advance = [&](const CMatrix& m) {
    CMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) {
        const Complex c = m.at(i, j);
        out.at(i, j) = contracting ? Complex(c.real() / base, c.imag() / base)
                                   : Complex(c.real() * base, c.imag() * base);
      }
    return out;
  };

  DecayTrace trace;
  double weight = 1.0;
  for (int n = 0; n <= depth; ++n) {
    const double resid =
        use_deriv ? deriv_residual(f, a1, a2, a3) : hom_residual(f, a1, a2, a3);
    const double r = weight * resid;
    if (r < kUnderflowFloor) {
      trace.truncated = true;
      break;
    }
    trace.residuals.push_back(r);
    a1 = advance(a1);
    a2 = advance(a2);
    a3 = advance(a3);
    weight = contracting ? weight * weight_step : weight / weight_step;
  }
  fit_ratio(trace, depth);
  return trace;
}

}  // namespace

void StabilityParams::validate() const {
  if (!(p > 0.0) || p == 1.0 || !std::isfinite(p))
    throw parameter_error("exponent must be positive, finite, and different from one");
  if (theta && (!(*theta >= 0.0) || !std::isfinite(*theta)))
    throw parameter_error("explicit theta must be a finite non-negative number");
  if (!(tol > 0.0) || !std::isfinite(tol)) throw parameter_error("tol must be positive");
  if (mu_set.values().empty()) throw parameter_error("mu set must be non-empty");
  if (sample_count < 1 || sample_count > 1000000)
    throw parameter_error("sample_count must lie in [1, 1000000]");
  const int cap = p > 1.0 ? kContractingDepthCap : kDilatingDepthCap;
  if (max_depth < 1 || max_depth > cap)
    throw parameter_error("max_depth out of range for the selected corrector direction");
  if (!(sample_scale > 0.0) || !std::isfinite(sample_scale))
    throw parameter_error("sample_scale must be positive");
}

double bound_coefficient(double theta, double p) {
  if (p == 1.0) throw parameter_error("the stability coefficient diverges at exponent one");
  if (!(theta >= 0.0)) throw parameter_error("theta must be non-negative");
  const double step = theta * (1.0 + std::pow(2.0, p));
  if (p > 1.0) {
    const double t = std::pow(3.0, p - 1.0);
    return step * (t / (t - 1.0));
  }
  return step / (std::pow(3.0, 1.0 - p) - 1.0);
}

double tail_bound(double theta, double p, double norm_x, int depth) {
  if (depth < 0) throw parameter_error("depth must be non-negative");
  const double coeff = bound_coefficient(theta, p);
  return coeff * std::pow(norm_x, p) * std::pow(3.0, -static_cast<double>(depth) * std::fabs(1.0 - p));
}

DepthChoice choose_depth(double theta, double p, double norm_x, double tol, int max_depth) {
  if (!(tol > 0.0)) throw parameter_error("tol must be positive");
  if (max_depth < 0) throw parameter_error("max_depth must be non-negative");
  if (theta == 0.0 || norm_x == 0.0) return {0, false};
  for (int n = 0; n <= max_depth; ++n) {
    if (tail_bound(theta, p, norm_x, n) <= tol) return {n, false};
  }
  return {max_depth, true};
}

CorrectedMap::CorrectedMap(TernaryMap source, int depth, bool contracting)
    : source_(std::move(source)), depth_(depth), contracting_(contracting) {
  const int cap = contracting ? kContractingDepthCap : kDilatingDepthCap;
  if (depth < 0 || depth > cap) throw parameter_error("corrector depth out of range");
}

CMatrix CorrectedMap::eval(const CMatrix& x) const {
  if (contracting_) return scale_up_steps(source_.eval(scale_down_steps(x, depth_)), depth_);
  return scale_down_steps(source_.eval(scale_up_steps(x, depth_)), depth_);
}

CMatrix CorrectedMap::offset_from_core(const CMatrix& x) const {
  if (contracting_) {
    // H_n(x) − core(x) = core(3^n y − x) + 3^n offset(y) with y the rounded
    // x / 3^n; the residual 3^n y − x is formed exactly with fused
    // multiply-adds, so nothing of the small result cancels away.
    const CMatrix y = scale_down_steps(x, depth_);
    const double pow3 = pow3_double(depth_);
    CMatrix r(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < x.cols(); ++j)
        r.at(i, j) = Complex(std::fma(pow3, y.at(i, j).real(), -x.at(i, j).real()),
                             std::fma(pow3, y.at(i, j).imag(), -x.at(i, j).imag()));
    return add(source_.core_eval(r), scale_up_steps(source_.offset_eval(y), depth_));
  }
  // Dilating direction: w = (3^n x) / 3^n recovers x up to a residual small
  // enough that the subtraction below is exact.
  const CMatrix z = scale_up_steps(x, depth_);
  const CMatrix w = scale_down_steps(z, depth_);
  const CMatrix r = sub(w, x);
  return add(source_.core_eval(r), scale_down_steps(source_.offset_eval(z), depth_));
}

CMatrix CorrectedMap::offset_from_source(const CMatrix& x) const {
  return sub(offset_from_core(x), source_.offset_eval(x));
}

CorrectionResult correct(const TernaryMap& f, const StabilityParams& params, const CMatrix& x) {
  params.validate();
  const double theta = resolved_theta(f, params);
  const DepthChoice dc =
      choose_depth(theta, params.p, spectral_norm(x), params.tol, params.max_depth);
  const CorrectedMap cm(f, dc.depth, params.p > 1.0);
  return {cm.eval(x), dc.depth, dc.truncated};
}

ThetaEstimate estimate_theta(const TernaryMap& f, const StabilityParams& params) {
  params.validate();
  ThetaEstimate est;
  est.sample_count = params.sample_count;
  const std::uint64_t s0 = lane(params.seed, kThetaLane);
  const CMatrix zero = CMatrix::zero(f.domain_rows(), f.domain_cols());

  auto family_max = [&](double& slot, const CMatrix& a, const CMatrix& b, const CMatrix& c) {
    const double denom = std::pow(spectral_norm(a), params.p) +
                         std::pow(spectral_norm(b), params.p) +
                         std::pow(spectral_norm(c), params.p);
    if (denom == 0.0) return;
    for (const Complex& mu : params.mu_set.values()) {
      slot = std::max(slot, fe_residual(f, a, b, c, mu) / denom);
    }
  };

  for (std::size_t k = 0; k < params.sample_count; ++k) {
    const std::uint64_t s = substream(s0, k);
    const CMatrix x1 = draw_sample(f, substream(s, 1), params.sample_scale);
    const CMatrix x2 = draw_sample(f, substream(s, 2), params.sample_scale);
    const CMatrix x3 = draw_sample(f, substream(s, 3), params.sample_scale);
    family_max(est.family_random, x1, x2, x3);
    family_max(est.family_single, x1, zero, zero);
    family_max(est.family_double_first, x1, real_scale(2.0, x1), zero);
    family_max(est.family_opposite, x1, real_scale(-1.0, x1), zero);
  }
  est.theta_hat = std::max({est.family_random, est.family_single, est.family_double_first,
                            est.family_opposite});
  return est;
}

BoundReport verify_bound(const TernaryMap& f, const StabilityParams& params) {
  params.validate();
  BoundReport report;
  report.theta_used = resolved_theta(f, params);
  const double coeff = bound_coefficient(report.theta_used, params.p);
  const bool contracting = params.p > 1.0;

  // One depth for every sample: deep enough that the undelivered tail is at
  // most one percent of the bound being verified.
  const double shrink = std::fabs(1.0 - params.p);
  int depth = 0;
  while (std::pow(3.0, -static_cast<double>(depth) * shrink) > 0.01 && depth < params.max_depth)
    ++depth;
  report.depth = depth;
  report.depth_truncated =
      std::pow(3.0, -static_cast<double>(depth) * shrink) > 0.01;

  const CorrectedMap cm(f, depth, contracting);
  const std::uint64_t s0 = lane(params.seed, kBoundLane);
  report.records.reserve(params.sample_count);
  report.worst_ratio = 0.0;
  for (std::size_t k = 0; k < params.sample_count; ++k) {
    const CMatrix x = draw_sample(f, substream(s0, k), params.sample_scale);
    BoundSample rec;
    rec.norm_x = spectral_norm(x);
    rec.offset_norm = spectral_norm(cm.offset_from_source(x));
    rec.bound = coeff * std::pow(rec.norm_x, params.p);
    if (rec.bound > 0.0) {
      rec.ratio = rec.offset_norm / rec.bound;
    } else {
      const double slack = kZeroBoundSlack * (1.0 + std::pow(rec.norm_x, params.p));
      rec.ratio = rec.offset_norm <= slack ? 0.0 : rec.offset_norm / slack;
    }
    report.worst_ratio = std::max(report.worst_ratio, rec.ratio);
    report.records.push_back(rec);
  }
  report.pass = report.worst_ratio <= 1.0 + kBoundRatioTol;
  return report;
}

UniquenessReport uniqueness_check(const TernaryMap& f, const StabilityParams& params, int m1,
                                  int m2) {
  params.validate();
  if (m1 < 0 || m2 < 0) throw parameter_error("depth offsets must be non-negative");
  const bool contracting = params.p > 1.0;
  const double theta = resolved_theta(f, params);
  const int mmin = std::min(m1, m2);
  const int mmax = std::max(m1, m2);

  UniquenessReport report;
  report.records.reserve(params.sample_count);
  report.worst_discrepancy = 0.0;
  bool pass = true;
  const std::uint64_t s0 = lane(params.seed, kUniqLane);
  for (std::size_t k = 0; k < params.sample_count; ++k) {
    const CMatrix x0 = draw_sample(f, substream(s0, k), params.sample_scale);
    const int n0 =
        choose_depth(theta, params.p, spectral_norm(x0), params.tol, params.max_depth).depth;
    // Snap one level beyond the deepest corrector so every scaling chain in
    // both offsets is exact; re-choose the depth from the snapped norm.
    const int snap_depth = n0 + mmax + 1;
    const CMatrix x = snap_to_depth(x0, snap_depth, contracting);
    const double norm_x = spectral_norm(x);
    const int n = std::min(choose_depth(theta, params.p, norm_x, params.tol, params.max_depth).depth,
                           snap_depth - mmax);

    const CorrectedMap cm1(f, n + m1, contracting);
    const CorrectedMap cm2(f, n + m2, contracting);
    UniquenessSample rec;
    rec.norm_x = norm_x;
    rec.base_depth = n;
    rec.discrepancy = spectral_norm(sub(cm1.offset_from_core(x), cm2.offset_from_core(x)));
    rec.allowed = 2.0 * tail_bound(theta, params.p, norm_x, n + mmin);
    if (rec.discrepancy > rec.allowed) pass = false;
    report.worst_discrepancy = std::max(report.worst_discrepancy, rec.discrepancy);
    report.records.push_back(rec);
  }
  report.pass = pass;
  return report;
}

DecayTrace superstability_scan(const TernaryMap& f, const StabilityParams& params, int depth) {
  return run_scan(f, params, depth, 2.0, 8.0, false);
}

DerivDecayTraces deriv_superstability_scan(const TernaryMap& f, const StabilityParams& params,
                                           int depth) {
  DerivDecayTraces traces;
  traces.base8 = run_scan(f, params, depth, 2.0, 8.0, true);
  traces.base27 = run_scan(f, params, depth, 3.0, 27.0, true);
  return traces;
}

LemmaReport lemma_consequences(const TernaryMap& f, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw parameter_error("at least one sample is required");
  LemmaReport report;
  const CMatrix zero = CMatrix::zero(f.domain_rows(), f.domain_cols());
  report.worst_origin = spectral_norm(f.eval(zero));

  const std::uint64_t s0 = lane(seed, kLemmaLane);
  for (std::size_t k = 0; k < samples; ++k) {
    const std::uint64_t s = substream(s0, k);
    const CMatrix x = unit_sample(f, substream(s, 1));
    const CMatrix t1 = unit_sample(f, substream(s, 2));
    const CMatrix t2 = unit_sample(f, substream(s, 3));

    const CMatrix fx = f.eval(x);
    report.worst_odd =
        std::max(report.worst_odd, spectral_norm(add(f.eval(real_scale(-1.0, x)), fx)));
    report.worst_double = std::max(
        report.worst_double,
        spectral_norm(sub(f.eval(real_scale(2.0, x)), real_scale(2.0, fx))));
    report.worst_triple = std::max(
        report.worst_triple,
        spectral_norm(sub(f.eval(real_scale(3.0, x)), real_scale(3.0, fx))));

    const double additive_random =
        spectral_norm(sub(sub(f.eval(add(t1, t2)), f.eval(t1)), f.eval(t2)));
    const double additive_aligned = spectral_norm(sub(sub(f.eval(add(x, x)), fx), fx));
    report.worst_additivity =
        std::max({report.worst_additivity, additive_random, additive_aligned});
  }
  return report;
}

double mu_linearity_check(const TernaryMap& f, const MuSet& mu_set, std::size_t samples,
                          std::uint64_t seed) {
  if (samples == 0) throw parameter_error("at least one sample is required");
  double worst = 0.0;
  const std::uint64_t s0 = lane(seed, kMuLane);
  for (std::size_t k = 0; k < samples; ++k) {
    const CMatrix x = unit_sample(f, substream(s0, k));
    const CMatrix fx = f.eval(x);
    for (const Complex& mu : mu_set.values()) {
      worst = std::max(worst, spectral_norm(sub(f.eval(scale(mu, x)), scale(mu, fx))));
    }
  }
  return worst;
}

CMatrix snap_to_depth(const CMatrix& x, int depth, bool contracting) {
  if (depth < 0) throw parameter_error("snap depth must be non-negative");
  if (depth == 0) return x;
  const int bits = 51 - static_cast<int>(std::ceil(static_cast<double>(depth) * std::log2(3.0)));
  if (bits < 4)
    throw parameter_error("snap depth leaves fewer than four mantissa bits of resolution");

  CMatrix base = contracting ? scale_down_steps(x, depth) : x;
  for (std::size_t i = 0; i < base.rows(); ++i)
    for (std::size_t j = 0; j < base.cols(); ++j)
      base.at(i, j) = Complex(snap_component(base.at(i, j).real(), bits),
                              snap_component(base.at(i, j).imag(), bits));
  return contracting ? scale_up_steps(base, depth) : base;
}

CMatrix depth_exact_sample(std::size_t rows, std::size_t cols, std::uint64_t seed, int depth,
                           bool contracting) {
  return snap_to_depth(random_matrix(rows, cols, seed), depth, contracting);
}

}  // namespace trostab
