#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glmb/config.hpp"

namespace glmb {

struct TrialScanMetric {
  int scan = 0;
  double ospa = 0.0;
  std::uint64_t unique_samples = 0;
  int n_hypotheses = 0;
  int map_cardinality = 0;
  double cpu_seconds = 0.0;
  double sampler_seconds = 0.0;
};

struct TrialMetric {
  std::size_t grid_index = 0;
  double grid_value = 0.0;  // 0 when no sweep is configured
  int trial = 0;
  SamplerVariant variant = SamplerVariant::TgsPlus;
  double ospa2 = 0.0;
  double mean_ospa = 0.0;
  double mean_unique = 0.0;
  double total_cpu = 0.0;
  double total_sampler = 0.0;
  std::vector<TrialScanMetric> scans;
};

struct ExperimentResult {
  std::vector<TrialMetric> trials;  // ordered by (grid, trial, variant)
  std::vector<std::string> files;   // paths written under output_dir
};

// Grid x trial x variant Monte Carlo driver. Every trial owns a scenario
// substream shared by all variants, so variants see identical data. Writes
// raw_scan_metrics.csv and raw_trial_metrics.csv (deterministic, byte-stable
// across reruns), raw_timing.csv (wall-clock, not reproducible by nature),
// and aggregate.csv (means and sample standard deviations over trials).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace glmb
