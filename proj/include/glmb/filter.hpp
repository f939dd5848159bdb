#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "glmb/association.hpp"
#include "glmb/gaussian.hpp"
#include "glmb/samplers.hpp"
#include "glmb/scenario.hpp"

namespace glmb {

// One mixture component: a label set, the measurement-index history of every
// label since its birth, and the matching Gaussian per label. The three
// vectors run in parallel and labels stay sorted ascending.
struct GlmbHypothesis {
  std::vector<Label> labels;
  std::vector<std::vector<std::int32_t>> histories;
  std::vector<GaussianDensity> densities;
  double log_weight = 0.0;
};

struct GlmbDensity {
  int scan_index = 0;  // scan of the last absorbed frame; 0 means prior, no data yet
  std::vector<GlmbHypothesis> hypotheses;
};

// Single empty hypothesis with full weight: the filter's starting point.
GlmbDensity empty_prior();

struct FilterModels {
  MotionModel motion;
  SensorModel sensor;
  BirthModel births;
};

struct TruncationBudget {
  SamplerConfig sampler;
  int max_hypotheses = 1000;
  double min_weight_ratio = 1.0e-5;  // drop children below ratio * best weight; 0 disables
  bool exhaustive = false;           // enumerate every valid map instead of sampling
  bool proportional_allocation = false;  // split iterations across parents by parent weight
  int num_threads = 1;               // parents processed concurrently when > 1
};

// eta rows for one parent: survivors in parent label order, then one row per
// birth component with positive birth probability.
struct CostMatrixRows {
  CostMatrix eta;
  std::vector<Label> row_labels;
  std::vector<GaussianDensity> row_densities;  // predicted / birth density per row
  std::size_t num_survivors = 0;
};

CostMatrixRows build_cost_matrix(const GlmbHypothesis& parent, const MeasurementFrame& frame,
                                 const FilterModels& models);

struct UpdateStats {
  // distinct merged children clearing the weight threshold, before the cap:
  // the components available to the updated density, so junk-weight chain
  // states do not count toward diversity
  std::uint64_t unique_samples = 0;
  double sampler_seconds = 0.0;  // time spent inside the chains only
};

// One joint predict-update step: per parent build the cost matrix, draw (or
// enumerate) association maps, turn each unique map into a child, merge
// children that share (labels, histories), normalize, threshold, cap.
GlmbDensity joint_predict_update(const GlmbDensity& prior, const MeasurementFrame& frame,
                                 const FilterModels& models, const TruncationBudget& budget,
                                 UpdateStats* stats = nullptr);

// Pr(n) over object counts n = 0 .. max |I|.
std::vector<double> cardinality_distribution(const GlmbDensity& g);

struct StateEstimate {
  Label label;
  Eigen::Vector4d state = Eigen::Vector4d::Zero();
};

// Most probable cardinality first (ties toward fewer objects), then the
// heaviest hypothesis of that cardinality (ties toward first stored).
std::vector<StateEstimate> extract_estimate(const GlmbDensity& g);

void normalize(GlmbDensity& g);

struct ScanDiagnostics {
  int scan = 0;
  int n_hypotheses = 0;
  std::uint64_t n_unique_samples = 0;
  int map_cardinality = 0;
  double cpu_seconds = 0.0;      // full update step, wall clock
  double sampler_seconds = 0.0;  // truncation kernel share of the step
};

struct FilterResult {
  std::vector<std::vector<StateEstimate>> estimates;  // one list per frame
  std::vector<ScanDiagnostics> diagnostics;
};

FilterResult run_filter(const std::vector<MeasurementFrame>& frames, const FilterModels& models,
                        const TruncationBudget& budget);

}  // namespace glmb
