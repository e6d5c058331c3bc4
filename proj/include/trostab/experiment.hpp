// Copyright 2026 The trostab authors
// SPDX-License-Identifier: Apache-2.0

//! Configuration parsing and experiment drivers behind the command line:
//! each driver turns a validated config into a deterministic report body.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "trostab/maps.hpp"
#include "trostab/stability.hpp"

namespace trostab {

inline constexpr const char* kReportVersion = "0.1.0";

struct AlgebraConfig {
  std::size_t m = 2;
  std::size_t n = 2;
};

/// Fully validated experiment configuration. `echo` is the normalized form
/// (defaults filled in) embedded verbatim in every report, so a report always
/// names the exact inputs that produced it.
struct ExperimentConfig {
  AlgebraConfig algebra;
  std::optional<MapSpec> map;
  StabilityParams stability;
  /// Phases came from an explicit list rather than the seeded default set.
  bool mu_explicit = false;
  std::string out_path;
  std::string format = "json";
  nlohmann::ordered_json echo;
};

/// Parses and validates a JSON config. Unknown keys at any level, type
/// mismatches, and out-of-range values are config_error; syntax errors are
/// reported with their line number.
ExperimentConfig parse_config(const std::string& text);

/// Re-seeds the run (stability seed and, unless the phases were explicit,
/// the seeded part of the phase set), keeping the echo in sync.
void apply_seed_override(ExperimentConfig& config, std::uint64_t seed);

struct ReportFile {
  nlohmann::ordered_json body;
  bool verdict = false;
};

ReportFile run_check_algebra(const ExperimentConfig& config);
ReportFile run_stability(const ExperimentConfig& config);
ReportFile run_superstability(const ExperimentConfig& config);
ReportFile run_lemma(const ExperimentConfig& config);

/// Renders the report body as CSV: one row per (check, record), columns the
/// sorted union of record fields across checks.
std::string render_csv(const nlohmann::ordered_json& body);

/// Writes the rendered report to `path` (stdout when empty). The body is
/// byte-identical across reruns; wall-clock time goes to a `<path>.stamp`
/// sidecar so it can never perturb the report itself.
void write_report(const ReportFile& report, const std::string& path, const std::string& format);

}  // namespace trostab
