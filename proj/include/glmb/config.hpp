#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "glmb/filter.hpp"
#include "glmb/samplers.hpp"
#include "glmb/scenario.hpp"

namespace glmb {

// Parameters a sweep may vary, each with a default numeric range enforced on
// the sweep values (not on the base scenario). `allow_out_of_range` bypasses
// the range check.
enum class SweepParameter {
  None,
  Iterations,            // sampler iterations per parent, range [1000, 10000]
  ExpectedTrajectories,  // range [10, 100]
  DetectionProb,         // range [0.78, 0.96]
  ClutterRate,           // range [50, 140]
  Alpha,                 // range [0.1, 0.9]
  Beta,                  // range [0.1, 0.9]
};

const char* sweep_parameter_name(SweepParameter p);

struct ExperimentConfig {
  std::uint64_t seed = 1;
  int trials = 100;
  std::string output_dir = "out";
  std::vector<SamplerVariant> variants = all_variants();
  SweepParameter sweep_parameter = SweepParameter::None;
  std::vector<double> sweep_values;
  bool allow_out_of_range = false;
  double ospa_order = 1.0;
  double ospa_cutoff = 100.0;
  int threads = 1;  // Monte Carlo worker pool
  ScenarioParams scenario;
  TruncationBudget truncation;
};

// Flat "key = value" text with dotted sections; '#' starts a comment.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

// The full schema with default values; parses back to a default config.
std::string default_config_text();

// Throws std::invalid_argument naming every offending key at once.
void validate(const ExperimentConfig& cfg);

// Copy of cfg.scenario / cfg.truncation with one swept value applied.
ExperimentConfig apply_sweep_value(const ExperimentConfig& cfg, double value);

}  // namespace glmb
