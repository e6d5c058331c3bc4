// Copyright 2026 The trostab authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end: reads a JSON config, runs one experiment, writes
//! the report. Exit code 0 means every check passed, 2 means the experiment
//! ran but a check failed, 1 means the run could not be set up at all.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "trostab/experiment.hpp"

namespace {

int run_subcommand(const std::string& name, const trostab::ExperimentConfig& config) {
  trostab::ReportFile report;
  if (name == "check-algebra") {
    report = trostab::run_check_algebra(config);
  } else if (name == "stability") {
    report = trostab::run_stability(config);
  } else if (name == "superstability") {
    report = trostab::run_superstability(config);
  } else {
    report = trostab::run_lemma(config);
  }
  trostab::write_report(report, config.out_path, config.format);
  return report.verdict ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for ternary-product stability experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format;
  std::uint64_t seed = 0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Path to the JSON experiment config")->required();
    sub->add_option("--out", out_path, "Report file path (overrides the config)");
    sub->add_option("--format", format, "Report format (overrides the config)")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", seed, "Seed override for the sampled experiments");
  };
  add_common(app.add_subcommand("check-algebra", "Sample the ternary-product axioms"));
  add_common(app.add_subcommand("stability",
                                "Estimate the defect constant and verify the corrector bound"));
  add_common(app.add_subcommand("superstability", "Trace rescaled product-defect decay"));
  add_common(app.add_subcommand("lemma", "Check structural consequences and phase linearity"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read config file \"" << config_path << "\"\n";
    return 1;
  }
  std::ostringstream text;
  text << in.rdbuf();

  try {
    trostab::ExperimentConfig config = trostab::parse_config(text.str());
    if (sub->count("--seed") > 0) trostab::apply_seed_override(config, seed);
    if (sub->count("--out") > 0) config.out_path = out_path;
    if (sub->count("--format") > 0) config.format = format;
    return run_subcommand(sub->get_name(), config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
