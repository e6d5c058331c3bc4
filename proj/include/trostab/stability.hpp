// Copyright 2026 The trostab authors
// SPDX-License-Identifier: Apache-2.0

//! Direct-method stability toolkit: corrector construction, perturbation
//! constants, telescoping bounds, uniqueness discrepancies, decay scans, and
//! the structural consequences used by the report layer.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "trostab/complex_linalg.hpp"
#include "trostab/maps.hpp"

namespace trostab {

/// Allowed corrector depth when the argument is contracted (x / 3^n).
inline constexpr int kContractingDepthCap = 40;
/// Allowed corrector depth when the argument is dilated (3^n x).
inline constexpr int kDilatingDepthCap = 25;
/// Slack accepted on the defect-to-bound ratio before a verdict flips.
inline constexpr double kBoundRatioTol = 1e-9;
/// Absolute allowance used when the theoretical bound is exactly zero.
inline constexpr double kZeroBoundSlack = 1e-12;
/// Decay-scan points below this value are excluded from the ratio fit.
inline constexpr double kFitFloor = 1e-250;
/// Decay-scan traces are cut once a residual drops below this value.
inline constexpr double kUnderflowFloor = 1e-300;

/// Shared knobs for the stability experiments. `p` is the perturbation
/// exponent of the hypothesis; `p > 1` selects the contracting corrector and
/// `p < 1` the dilating one (`p == 1` is rejected). When `theta` is absent,
/// routines that need the constant estimate it from sampled defects.
struct StabilityParams {
  double p = 2.0;
  std::optional<double> theta;
  MuSet mu_set = MuSet::roots12_plus_4(0);
  double tol = 1e-8;
  int max_depth = kContractingDepthCap;
  std::size_t sample_count = 100;
  std::uint64_t seed = 0;
  /// Scale applied to every random sample before use. Exact powers of two
  /// rescale verdict-relevant quantities without rounding noise.
  double sample_scale = 1.0;

  /// Throws parameter_error when any field is out of contract.
  void validate() const;
};

/// Coefficient K(theta, p) of the stability estimate
/// ‖H(x) − f(x)‖ ≤ K · ‖x‖^p, obtained by summing the geometric series of
/// single-step defects. Throws parameter_error at p == 1.
double bound_coefficient(double theta, double p);

/// Remaining telescoping mass after `depth` corrector steps:
/// bound_coefficient · ‖x‖^p · 3^(−depth·|1−p|). At depth 0 this is the full
/// stability bound.
double tail_bound(double theta, double p, double norm_x, int depth);

struct DepthChoice {
  int depth = 0;
  bool truncated = false;
};

/// Smallest depth whose tail_bound falls below `tol`, capped at `max_depth`
/// (`truncated` reports whether the cap was hit).
DepthChoice choose_depth(double theta, double p, double norm_x, double tol, int max_depth);

/// Finite-depth corrector H_n for a source map f: either 3^n f(x / 3^n)
/// (contracting) or 3^(−n) f(3^n x) (dilating).
///
/// The two offset evaluators return the matrix-valued differences
/// H_n(x) − core(x) and H_n(x) − f(x) through a compensated path that keeps
/// the full relative accuracy of the small result. Differencing two plain
/// evaluations instead loses the signal to rounding once n is large, because
/// the linear core dominates both operands.
class CorrectedMap {
 public:
  CorrectedMap(TernaryMap source, int depth, bool contracting);

  CMatrix eval(const CMatrix& x) const;
  CMatrix offset_from_core(const CMatrix& x) const;
  CMatrix offset_from_source(const CMatrix& x) const;

  int depth() const { return depth_; }
  bool contracting() const { return contracting_; }

 private:
  TernaryMap source_;
  int depth_;
  bool contracting_;
};

struct CorrectionResult {
  CMatrix value;
  int depth = 0;
  bool truncated = false;
};

/// Corrects f at x with the depth selected by choose_depth for these params.
CorrectionResult correct(const TernaryMap& f, const StabilityParams& params, const CMatrix& x);

/// Per-family maxima of the normalized balance defect
/// fe_residual / Σ‖x_i‖^p over the sampled argument families.
struct ThetaEstimate {
  double theta_hat = 0.0;
  /// Three independent draws.
  double family_random = 0.0;
  /// (x, 0, 0).
  double family_single = 0.0;
  /// (x, 2x, 0) — the single-step family: its defect equals the one-step
  /// corrector error ‖3 f(x/3) − f(x)‖ up to the fixed denominator.
  double family_double_first = 0.0;
  /// (x, −x, 0).
  double family_opposite = 0.0;
  std::size_t sample_count = 0;
};

ThetaEstimate estimate_theta(const TernaryMap& f, const StabilityParams& params);

struct BoundSample {
  double norm_x = 0.0;
  double offset_norm = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

struct BoundReport {
  std::vector<BoundSample> records;
  double theta_used = 0.0;
  int depth = 0;
  bool depth_truncated = false;
  double worst_ratio = 0.0;
  bool pass = false;
};

/// Checks ‖H(x) − f(x)‖ ≤ bound_coefficient · ‖x‖^p on sampled arguments.
/// The corrector depth is chosen once, independently of x, so that the
/// remaining tail is below one percent of the bound. A sample with a zero
/// bound passes only if its offset is below an absolute slack.
BoundReport verify_bound(const TernaryMap& f, const StabilityParams& params);

struct UniquenessSample {
  double norm_x = 0.0;
  int base_depth = 0;
  double discrepancy = 0.0;
  double allowed = 0.0;
};

struct UniquenessReport {
  std::vector<UniquenessSample> records;
  double worst_discrepancy = 0.0;
  bool pass = false;
};

/// Compares the correctors at depths (n + m1) and (n + m2), with n chosen per
/// sample from the params tolerance. Their discrepancy must stay below twice
/// the tail bound at the shallower depth — the quantitative form of the
/// limit's uniqueness. Samples are snapped to a depth-exact grid internally
/// so the compared offsets carry no argument-rounding noise.
UniquenessReport uniqueness_check(const TernaryMap& f, const StabilityParams& params, int m1,
                                  int m2);

struct DecayTrace {
  std::vector<double> residuals;
  bool truncated = false;
  bool fit_valid = false;
  /// Geometric ratio recovered from a least-squares line through the tail of
  /// log residuals.
  double fitted_ratio = 0.0;
  std::size_t fit_points = 0;
};

/// Rescaled product-defect trace r_n = 8^n · hom_residual(f, x_i / 2^n)
/// (contracting; dilating uses 8^(−n) and 2^n x_i) on one seeded triple.
/// A strictly decaying trace with small ratio witnesses superstability: the
/// product defect cannot be merely bounded unless it vanishes.
DecayTrace superstability_scan(const TernaryMap& f, const StabilityParams& params, int depth);

struct DerivDecayTraces {
  DecayTrace base8;
  DecayTrace base27;
};

/// Same scan for the Leibniz defect, traced in two bases (2-adic and 3-adic
/// argument scaling) whose fitted ratios differ for a genuine defect.
DerivDecayTraces deriv_superstability_scan(const TernaryMap& f, const StabilityParams& params,
                                           int depth);

struct LemmaReport {
  double worst_origin = 0.0;
  double worst_odd = 0.0;
  double worst_double = 0.0;
  double worst_triple = 0.0;
  double worst_additivity = 0.0;
};

/// Worst residuals of the structural consequences every exact solution obeys:
/// f(0) = 0, oddness, the doubling and tripling identities, and additivity.
/// Additivity is probed on random unit pairs and on aligned pairs (x, x),
/// which realize the extreme defect for radial perturbations.
LemmaReport lemma_consequences(const TernaryMap& f, std::size_t samples, std::uint64_t seed);

/// Worst ‖f(mu·x) − mu·f(x)‖ over the given phases at unit samples.
double mu_linearity_check(const TernaryMap& f, const MuSet& mu_set, std::size_t samples,
                          std::uint64_t seed);

/// Rounds every component so that the depth-long chain of scalings used by
/// the corrector is exact in floating point: after snapping, x / 3^k
/// (contracting) or 3^k · x (dilating) round to no bits for all k ≤ depth.
/// Throws parameter_error when the depth leaves fewer than four mantissa
/// bits of resolution.
CMatrix snap_to_depth(const CMatrix& x, int depth, bool contracting);

/// Seeded Gaussian sample already snapped via snap_to_depth.
CMatrix depth_exact_sample(std::size_t rows, std::size_t cols, std::uint64_t seed, int depth,
                           bool contracting);

}  // namespace trostab
