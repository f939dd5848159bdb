#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "glmb/samplers.hpp"

namespace glmb {

struct BenchPoint {
  SamplerVariant variant;
  int num_objects = 0;
  int num_measurements = 0;
  std::int64_t iterations = 0;  // actually executed (see scaling note)
  double seconds_per_iteration = 0.0;
};

// Median per-iteration wall time on synthetic random cost matrices over the
// P x M grid, one warmup run plus `repetitions` timed runs per point. The
// requested iteration count budgets the O(P+M)-per-iterate samplers; heavier
// kernels get proportionally fewer iterations so every point costs about the
// same total work. The count actually used is reported per point.
std::vector<BenchPoint> bench_kernels(const std::vector<int>& object_counts,
                                      const std::vector<int>& measurement_counts,
                                      std::int64_t iterations,
                                      const std::vector<SamplerVariant>& variants,
                                      int repetitions = 5, std::uint64_t seed = 1);

void write_bench_csv(std::ostream& out, const std::vector<BenchPoint>& points);

}  // namespace glmb
