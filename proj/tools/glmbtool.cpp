// Command line front end for the GLMB tracking toolkit.
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "glmb/bench.hpp"
#include "glmb/config.hpp"
#include "glmb/enumeration.hpp"
#include "glmb/experiment.hpp"
#include "glmb/io.hpp"

namespace fs = std::filesystem;
using namespace glmb;

namespace {

std::string out_path(const std::string& dir, const char* name) {
  fs::create_directories(dir);
  return (fs::path(dir) / name).string();
}

void announce(const std::string& path) { std::cout << "wrote " << path << '\n'; }

SamplerVariant variant_or_throw(const std::string& name) {
  if (const auto v = parse_variant(name)) return *v;
  throw CLI::ValidationError("--variant", "unknown sampler variant: " + name);
}

// shared sampler overrides for the sample/filter subcommands
struct SamplerFlags {
  std::string variant;
  std::int64_t iterations = -1;
  double alpha = -1.0;
  double beta = -1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--variant", variant,
                    "sampler kernel: tgs+, rgs+, dgs+fwd, dgs+bwd, sgs+, rgs, sgs");
    cmd->add_option("--iters", iterations, "iterations (sweeps for sgs+/sgs)");
    cmd->add_option("--alpha", alpha, "mixture weight on the exact conditional");
    cmd->add_option("--beta", beta, "tempering exponent");
  }
  void apply(SamplerConfig& cfg) const {
    if (!variant.empty()) cfg.variant = variant_or_throw(variant);
    if (iterations >= 0) cfg.iterations = iterations;
    if (alpha >= 0.0) cfg.alpha = alpha;
    if (beta >= 0.0) cfg.beta = beta;
  }
};

void tally_weighted(std::map<std::vector<std::int32_t>, double>& counts,
                    const SampleBatch& batch) {
  double shift = 0.0;
  if (batch.has_importance_weights()) {
    for (const double w : batch.importance_log_weights()) shift = std::max(shift, w);
  }
  for (std::size_t t = 0; t < batch.size(); ++t) {
    const auto m = batch.map_at(t);
    const double mass =
        batch.has_importance_weights() ? std::exp(batch.importance_log_weights()[t] - shift) : 1.0;
    counts[std::vector<std::int32_t>(m.begin(), m.end())] += mass;
  }
}

double total_variation(const std::map<std::vector<std::int32_t>, double>& counts,
                       const std::vector<MapProbability>& exact) {
  double total = 0.0;
  for (const auto& [k, v] : counts) total += v;
  double tv = 0.0;
  auto seen = counts;
  for (const auto& mp : exact) {
    const std::vector<std::int32_t> key(mp.map.entries().begin(), mp.map.entries().end());
    double emp = 0.0;
    if (const auto it = seen.find(key); it != seen.end()) {
      emp = it->second / total;
      seen.erase(it);
    }
    tv += std::abs(emp - mp.probability);
  }
  for (const auto& [k, v] : seen) tv += v / total;
  return 0.5 * tv;
}

std::string join_entries(std::span<const std::int32_t> entries) {
  std::string s;
  for (std::size_t i = 0; i < entries.size(); ++i)
    s += (i == 0 ? "" : ";") + std::to_string(entries[i]);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-object tracking toolkit: GLMB filtering with Gibbs-sampled truncation"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool print_defaults = false;
  app.add_option("--config", config_path, "experiment config file (key = value lines)");
  const auto* seed_opt = app.add_option("--seed", seed, "master seed, overrides the config");
  const auto* out_opt = app.add_option("--out", out_dir, "output directory, overrides the config");
  app.add_flag("--print-defaults", print_defaults, "print the default config and exit");

  auto* simulate = app.add_subcommand("simulate", "generate a scenario: truth and measurements");

  auto* filter = app.add_subcommand("filter", "run the GLMB filter over a measurement file");
  std::string measurements_path;
  int duration = 0;
  bool exhaustive = false;
  int max_hypotheses = -1;
  double min_weight_ratio = -1.0;
  int threads = -1;
  SamplerFlags filter_sampler;
  filter->add_option("--measurements", measurements_path, "measurement CSV (scan,zx,zy)")
      ->required();
  filter->add_option("--duration", duration, "scan count when trailing scans are empty");
  filter_sampler.attach(filter);
  filter->add_flag("--exhaustive", exhaustive, "enumerate instead of sampling (desk scale)");
  filter->add_option("--max-hypotheses", max_hypotheses, "hypothesis cap after each update");
  filter->add_option("--min-weight-ratio", min_weight_ratio,
                     "drop hypotheses below this fraction of the best weight");
  filter->add_option("--threads", threads, "parent hypotheses processed concurrently");

  auto* sample = app.add_subcommand("sample", "run one sampler chain on a cost matrix");
  std::string matrix_path;
  SamplerFlags sample_sampler;
  sample->add_option("--matrix", matrix_path, "cost matrix file ('P M' header)")->required();
  sample_sampler.attach(sample);

  auto* bench = app.add_subcommand("bench", "per-iteration kernel timings on random matrices");
  std::vector<int> bench_objects{100};
  std::vector<int> bench_measurements{100};
  std::int64_t bench_iters = 10000;
  int bench_reps = 5;
  std::vector<std::string> bench_variants;
  bench->add_option("--objects", bench_objects, "object counts")->delimiter(',');
  bench->add_option("--measurements", bench_measurements, "measurement counts")->delimiter(',');
  bench->add_option("--iters", bench_iters, "iteration budget for O(P+M) kernels");
  bench->add_option("--reps", bench_reps, "timed repetitions per point");
  bench->add_option("--variants", bench_variants, "kernels to time (default: all)")
      ->delimiter(',');

  auto* oracle = app.add_subcommand(
      "oracle-check", "enumerate the exact map distribution, optionally test a sampler against it");
  std::string oracle_matrix_path;
  SamplerFlags oracle_sampler;
  double tol = -1.0;
  oracle->add_option("--matrix", oracle_matrix_path, "cost matrix file ('P M' header)")
      ->required();
  oracle_sampler.attach(oracle);
  oracle->add_option("--tol", tol, "fail (exit 2) when total variation exceeds this");

  auto* experiment =
      app.add_subcommand("experiment", "Monte Carlo grid runs driven by the config file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (print_defaults) {
      std::cout << default_config_text();
      return 0;
    }

    ExperimentConfig cfg =
        config_path.empty() ? ExperimentConfig{} : parse_config_file(config_path);
    if (seed_opt->count() > 0) cfg.seed = seed;
    if (out_opt->count() > 0) cfg.output_dir = out_dir;

    if (simulate->parsed()) {
      ScenarioParams sp = cfg.scenario;
      sp.seed = cfg.seed;
      const ScenarioTruth truth = generate_truth(sp);
      const auto frames = generate_measurements(truth, sp.sensor(), cfg.seed);
      const auto truth_path = out_path(cfg.output_dir, "truth.csv");
      auto tf = io::open_output(truth_path);
      io::write_truth_csv(tf, truth);
      announce(truth_path);
      const auto meas_path = out_path(cfg.output_dir, "measurements.csv");
      auto mf = io::open_output(meas_path);
      io::write_measurements_csv(mf, frames);
      announce(meas_path);
      return 0;
    }

    if (filter->parsed()) {
      auto in = io::open_input(measurements_path);
      const auto frames = io::read_measurements_csv(in, duration);
      TruncationBudget budget = cfg.truncation;
      budget.sampler.seed = cfg.seed;
      filter_sampler.apply(budget.sampler);
      if (exhaustive) budget.exhaustive = true;
      if (max_hypotheses >= 0) budget.max_hypotheses = max_hypotheses;
      if (min_weight_ratio >= 0.0) budget.min_weight_ratio = min_weight_ratio;
      if (threads >= 1) budget.num_threads = threads;
      const FilterModels models{cfg.scenario.motion(), cfg.scenario.sensor(),
                                cfg.scenario.births()};
      const FilterResult result = run_filter(frames, models, budget);
      const auto est_path = out_path(cfg.output_dir, "estimates.csv");
      auto ef = io::open_output(est_path);
      io::write_estimates_csv(ef, result);
      announce(est_path);
      const auto diag_path = out_path(cfg.output_dir, "diagnostics.csv");
      auto df = io::open_output(diag_path);
      io::write_diagnostics_csv(df, result.diagnostics);
      announce(diag_path);
      return 0;
    }

    if (sample->parsed()) {
      auto in = io::open_input(matrix_path);
      const CostMatrix eta = io::read_cost_matrix(in);
      SamplerConfig sc = cfg.truncation.sampler;
      sc.seed = cfg.seed;
      sample_sampler.apply(sc);
      const SampleBatch batch = run_sampler(eta, sc);
      const auto path = out_path(cfg.output_dir, "samples.csv");
      auto f = io::open_output(path);
      io::write_samples_csv(f, batch, eta);
      announce(path);
      return 0;
    }

    if (bench->parsed()) {
      std::vector<SamplerVariant> variants;
      for (const auto& name : bench_variants) variants.push_back(variant_or_throw(name));
      if (variants.empty()) variants = all_variants();
      const auto points = bench_kernels(bench_objects, bench_measurements, bench_iters, variants,
                                        bench_reps, cfg.seed);
      const auto path = out_path(cfg.output_dir, "bench.csv");
      auto f = io::open_output(path);
      write_bench_csv(f, points);
      announce(path);
      return 0;
    }

    if (oracle->parsed()) {
      auto in = io::open_input(oracle_matrix_path);
      const CostMatrix eta = io::read_cost_matrix(in);
      const auto exact = brute_force_distribution(eta);
      const auto path = out_path(cfg.output_dir, "exact_distribution.csv");
      auto f = io::open_output(path);
      f << "gamma,probability,log_weight\n";
      for (const auto& mp : exact) {
        f << join_entries(mp.map.entries()) << ',' << io::format_double(mp.probability) << ','
          << io::format_double(joint_log_weight(mp.map, eta)) << '\n';
      }
      announce(path);

      if (!oracle_sampler.variant.empty()) {
        SamplerConfig sc = cfg.truncation.sampler;
        sc.seed = cfg.seed;
        oracle_sampler.apply(sc);
        const SampleBatch batch = run_sampler(eta, sc);
        std::map<std::vector<std::int32_t>, double> counts;
        tally_weighted(counts, batch);
        const double tv = total_variation(counts, exact);
        std::cout << "variant " << variant_name(sc.variant) << " total variation "
                  << io::format_double(tv) << " over " << sc.iterations << " iterations\n";
        if (tol >= 0.0 && tv > tol) {
          std::cerr << "total variation above tolerance " << io::format_double(tol) << '\n';
          return 2;
        }
      }
      return 0;
    }

    if (experiment->parsed()) {
      const ExperimentResult result = run_experiment(cfg);
      for (const auto& f : result.files) announce(f);
      return 0;
    }

    std::cout << app.help();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
