#include "glmb/experiment.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <map>
#include <thread>

#include "glmb/io.hpp"
#include "glmb/metrics.hpp"
#include "glmb/rng.hpp"

namespace glmb {

namespace {

constexpr std::uint64_t kScenarioTag = 11;
constexpr std::uint64_t kMeasurementTag = 12;
constexpr std::uint64_t kSamplerTag = 13;

struct TrialJob {
  std::size_t grid_index;
  int trial;
};

std::vector<TrialMetric> run_trial(const ExperimentConfig& base, std::size_t grid_index,
                                   double grid_value, int trial) {
  const ExperimentConfig cfg =
      base.sweep_parameter == SweepParameter::None ? base : apply_sweep_value(base, grid_value);

  // Common random numbers: the scenario substream is keyed by trial alone, so
  // every variant and every sweep value sees paired data wherever the swept
  // parameter leaves the scenario untouched.
  ScenarioParams sp = cfg.scenario;
  sp.seed = derive_seed(base.seed, kScenarioTag, static_cast<std::uint64_t>(trial));
  const ScenarioTruth truth = generate_truth(sp);
  const auto frames = generate_measurements(
      truth, sp.sensor(),
      derive_seed(base.seed, kMeasurementTag, static_cast<std::uint64_t>(trial)));
  const auto truth_tracks = truth_traces(truth);

  std::vector<std::vector<Eigen::Vector2d>> truth_points(
      static_cast<std::size_t>(truth.duration));
  for (const auto& track : truth.tracks) {
    for (int scan = track.first_scan; scan <= track.last_scan(); ++scan)
      truth_points[static_cast<std::size_t>(scan - 1)].push_back(track.state_at(scan).head<2>());
  }

  const FilterModels models{sp.motion(), sp.sensor(), sp.births()};
  std::vector<TrialMetric> out;
  out.reserve(cfg.variants.size());
  for (std::size_t vi = 0; vi < cfg.variants.size(); ++vi) {
    TruncationBudget budget = cfg.truncation;
    budget.sampler.variant = cfg.variants[vi];
    budget.sampler.seed = derive_seed(base.seed, kSamplerTag, grid_index,
                                      static_cast<std::uint64_t>(trial), vi);
    const FilterResult result = run_filter(frames, models, budget);

    TrialMetric tm;
    tm.grid_index = grid_index;
    tm.grid_value = grid_value;
    tm.trial = trial;
    tm.variant = cfg.variants[vi];

    std::map<Label, TrackTrace> estimate_tracks;
    for (std::size_t k = 0; k < result.estimates.size(); ++k) {
      const auto& diag = result.diagnostics[k];
      std::vector<Eigen::Vector2d> est_points;
      est_points.reserve(result.estimates[k].size());
      for (const auto& e : result.estimates[k]) {
        est_points.push_back(e.state.head<2>());
        estimate_tracks[e.label].points[diag.scan] = e.state.head<2>();
      }
      TrialScanMetric sm;
      sm.scan = diag.scan;
      sm.ospa = ospa(est_points, truth_points[static_cast<std::size_t>(diag.scan - 1)],
                     cfg.ospa_order, cfg.ospa_cutoff);
      sm.unique_samples = diag.n_unique_samples;
      sm.n_hypotheses = diag.n_hypotheses;
      sm.map_cardinality = diag.map_cardinality;
      sm.cpu_seconds = diag.cpu_seconds;
      sm.sampler_seconds = diag.sampler_seconds;
      tm.scans.push_back(sm);

      tm.mean_ospa += sm.ospa;
      tm.mean_unique += static_cast<double>(sm.unique_samples);
      tm.total_cpu += sm.cpu_seconds;
      tm.total_sampler += sm.sampler_seconds;
    }
    const double n = static_cast<double>(tm.scans.size());
    tm.mean_ospa /= n;
    tm.mean_unique /= n;

    std::vector<TrackTrace> est_traces;
    est_traces.reserve(estimate_tracks.size());
    for (auto& [label, trace] : estimate_tracks) est_traces.push_back(std::move(trace));
    tm.ospa2 = ospa2(est_traces, truth_tracks, 1, truth.duration, cfg.ospa_order,
                     cfg.ospa_cutoff);
    out.push_back(std::move(tm));
  }
  return out;
}

struct Welford {
  double sum = 0.0;
  double sumsq = 0.0;
  int n = 0;
  void add(double x) {
    sum += x;
    sumsq += x * x;
    ++n;
  }
  double mean() const { return n > 0 ? sum / n : 0.0; }
  double stddev() const {
    if (n < 2) return 0.0;
    const double var = (sumsq - sum * sum / n) / (n - 1);
    return var > 0.0 ? std::sqrt(var) : 0.0;
  }
};

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  std::filesystem::create_directories(cfg.output_dir);

  std::vector<double> grid_values = cfg.sweep_values;
  if (cfg.sweep_parameter == SweepParameter::None) grid_values = {0.0};

  std::vector<TrialJob> jobs;
  for (std::size_t g = 0; g < grid_values.size(); ++g)
    for (int r = 0; r < cfg.trials; ++r) jobs.push_back(TrialJob{g, r});

  std::vector<std::vector<TrialMetric>> slots(jobs.size());
  const auto work = [&](std::size_t j) {
    slots[j] = run_trial(cfg, jobs[j].grid_index, grid_values[jobs[j].grid_index],
                         jobs[j].trial);
  };
  const int workers = std::min<int>(cfg.threads, static_cast<int>(jobs.size()));
  if (workers <= 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) work(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t j = next.fetch_add(1); j < jobs.size(); j = next.fetch_add(1)) work(j);
      });
    }
    for (auto& t : pool) t.join();
  }

  ExperimentResult result;
  for (auto& slot : slots)
    std::move(slot.begin(), slot.end(), std::back_inserter(result.trials));

  namespace fs = std::filesystem;
  const auto path = [&](const char* name) { return (fs::path(cfg.output_dir) / name).string(); };

  {
    auto f = io::open_output(path("raw_scan_metrics.csv"));
    f << "grid_index,grid_value,trial,variant,scan,ospa,unique_samples,n_hypotheses,"
         "map_cardinality\n";
    for (const auto& tm : result.trials) {
      for (const auto& sm : tm.scans) {
        f << tm.grid_index << ',' << io::format_double(tm.grid_value) << ',' << tm.trial << ','
          << variant_name(tm.variant) << ',' << sm.scan << ',' << io::format_double(sm.ospa)
          << ',' << sm.unique_samples << ',' << sm.n_hypotheses << ',' << sm.map_cardinality
          << '\n';
      }
    }
    result.files.push_back(path("raw_scan_metrics.csv"));
  }
  {
    auto f = io::open_output(path("raw_trial_metrics.csv"));
    f << "grid_index,grid_value,trial,variant,ospa2,mean_ospa,mean_unique_samples\n";
    for (const auto& tm : result.trials) {
      f << tm.grid_index << ',' << io::format_double(tm.grid_value) << ',' << tm.trial << ','
        << variant_name(tm.variant) << ',' << io::format_double(tm.ospa2) << ','
        << io::format_double(tm.mean_ospa) << ',' << io::format_double(tm.mean_unique) << '\n';
    }
    result.files.push_back(path("raw_trial_metrics.csv"));
  }
  {
    auto f = io::open_output(path("raw_timing.csv"));
    f << "grid_index,grid_value,trial,variant,scan,cpu_seconds,sampler_seconds\n";
    for (const auto& tm : result.trials) {
      for (const auto& sm : tm.scans) {
        f << tm.grid_index << ',' << io::format_double(tm.grid_value) << ',' << tm.trial << ','
          << variant_name(tm.variant) << ',' << sm.scan << ','
          << io::format_double(sm.cpu_seconds) << ',' << io::format_double(sm.sampler_seconds)
          << '\n';
      }
    }
    result.files.push_back(path("raw_timing.csv"));
  }
  {
    struct Agg {
      Welford ospa2, ospa, unique, cpu, sampler;
    };
    std::map<std::pair<std::size_t, std::size_t>, Agg> aggs;  // (grid, variant position)
    std::map<SamplerVariant, std::size_t> variant_pos;
    for (std::size_t vi = 0; vi < cfg.variants.size(); ++vi) variant_pos[cfg.variants[vi]] = vi;
    for (const auto& tm : result.trials) {
      Agg& a = aggs[{tm.grid_index, variant_pos[tm.variant]}];
      a.ospa2.add(tm.ospa2);
      a.ospa.add(tm.mean_ospa);
      a.unique.add(tm.mean_unique);
      a.cpu.add(tm.total_cpu);
      a.sampler.add(tm.total_sampler);
    }
    auto f = io::open_output(path("aggregate.csv"));
    f << "grid_index,grid_value,variant,trials,ospa2_mean,ospa2_std,ospa_mean,ospa_std,"
         "unique_mean,unique_std,cpu_total_mean,cpu_total_std,sampler_total_mean,"
         "sampler_total_std\n";
    for (const auto& [key, a] : aggs) {
      f << key.first << ',' << io::format_double(grid_values[key.first]) << ','
        << variant_name(cfg.variants[key.second]) << ',' << a.ospa2.n << ','
        << io::format_double(a.ospa2.mean()) << ',' << io::format_double(a.ospa2.stddev()) << ','
        << io::format_double(a.ospa.mean()) << ',' << io::format_double(a.ospa.stddev()) << ','
        << io::format_double(a.unique.mean()) << ',' << io::format_double(a.unique.stddev())
        << ',' << io::format_double(a.cpu.mean()) << ',' << io::format_double(a.cpu.stddev())
        << ',' << io::format_double(a.sampler.mean()) << ','
        << io::format_double(a.sampler.stddev()) << '\n';
    }
    result.files.push_back(path("aggregate.csv"));
  }
  return result;
}

}  // namespace glmb
