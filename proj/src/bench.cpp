#include "glmb/bench.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>
#include <stdexcept>

#include "glmb/io.hpp"
#include "glmb/rng.hpp"

namespace glmb {

namespace {

CostMatrix random_matrix(int P, int M, std::uint64_t seed) {
  StreamRng rng(seed);
  std::vector<double> v(static_cast<std::size_t>(P) * static_cast<std::size_t>(M + 2));
  for (auto& x : v) x = rng.uniform(0.01, 10.0);
  return CostMatrix(P, M, std::move(v));
}

// keep total work roughly level: budget counts O(P+M)-per-iterate steps
std::int64_t scaled_iterations(SamplerVariant v, std::int64_t budget, int P, int M) {
  const double unit = static_cast<double>(P + M);
  double per_iter = unit;
  switch (v) {
    case SamplerVariant::TgsPlus:
    case SamplerVariant::RgsPlus:
    case SamplerVariant::DgsPlusForward:
    case SamplerVariant::DgsPlusBackward:
      per_iter = unit;
      break;
    case SamplerVariant::SgsPlus:
    case SamplerVariant::RgsGeneric:
      per_iter = static_cast<double>(P) * (M + 2);
      break;
    case SamplerVariant::SgsGeneric:
      per_iter = static_cast<double>(P) * P * (M + 2);
      break;
  }
  const double scaled = static_cast<double>(budget) * unit / per_iter;
  return std::max<std::int64_t>(3, static_cast<std::int64_t>(scaled));
}

double timed_run(const CostMatrix& eta, const SamplerConfig& cfg) {
  NullSink sink;
  const AssociationMap start = AssociationMap::all_undetected(eta.num_objects());
  const auto t0 = std::chrono::steady_clock::now();
  run_sampler(start, eta, cfg, sink);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::vector<BenchPoint> bench_kernels(const std::vector<int>& object_counts,
                                      const std::vector<int>& measurement_counts,
                                      std::int64_t iterations,
                                      const std::vector<SamplerVariant>& variants,
                                      int repetitions, std::uint64_t seed) {
  if (object_counts.empty() || measurement_counts.empty() || variants.empty())
    throw std::invalid_argument("bench needs sizes and variants");
  if (iterations < 1 || repetitions < 1)
    throw std::invalid_argument("bench needs positive iterations and repetitions");

  std::vector<BenchPoint> points;
  for (const int P : object_counts) {
    for (const int M : measurement_counts) {
      const CostMatrix eta = random_matrix(
          P, M,
          derive_seed(seed, static_cast<std::uint64_t>(P), static_cast<std::uint64_t>(M)));
      for (std::size_t vi = 0; vi < variants.size(); ++vi) {
        SamplerConfig cfg;
        cfg.variant = variants[vi];
        cfg.iterations = scaled_iterations(variants[vi], iterations, P, M);
        cfg.seed = derive_seed(seed, static_cast<std::uint64_t>(P),
                               static_cast<std::uint64_t>(M), vi);

        SamplerConfig warm = cfg;
        warm.iterations = std::max<std::int64_t>(1, cfg.iterations / 10);
        timed_run(eta, warm);

        std::vector<double> times(static_cast<std::size_t>(repetitions));
        for (auto& t : times) t = timed_run(eta, cfg);
        std::sort(times.begin(), times.end());
        const double median = times[times.size() / 2];
        points.push_back(BenchPoint{variants[vi], P, M, cfg.iterations,
                                    median / static_cast<double>(cfg.iterations)});
      }
    }
  }
  return points;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchPoint>& points) {
  out << "variant,num_objects,num_measurements,iterations,seconds_per_iteration\n";
  for (const auto& p : points) {
    out << variant_name(p.variant) << ',' << p.num_objects << ',' << p.num_measurements << ','
        << p.iterations << ',' << io::format_double(p.seconds_per_iteration) << '\n';
  }
}

}  // namespace glmb
