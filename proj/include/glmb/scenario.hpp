#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "glmb/gaussian.hpp"
#include "glmb/metrics.hpp"

namespace glmb {

// Track planted deterministically (no birth draw), mostly for tests.
struct SeededTrack {
  Label label;  // birth_time is the scan the track appears on
  Eigen::Vector4d state = Eigen::Vector4d::Zero();
};

struct ScenarioParams {
  Rect region{0.0, 0.0, 3000.0, 3000.0};
  int duration = 100;  // scans, numbered 1..duration
  double expected_trajectories = 50.0;  // expected total track count; fixes the birth probability
  int num_birth_components = 50;
  double birth_stddev = 10.0;
  double dt = 1.0;
  double accel_stddev = 5.0;
  double survival_prob = 0.99;
  double meas_stddev = 10.0;
  double detection_prob = 0.86;
  double clutter_rate = 90.0;
  std::uint64_t seed = 0;
  std::vector<SeededTrack> seeded_tracks;

  double birth_probability() const;  // expected_trajectories / (duration * components)
  MotionModel motion() const;
  SensorModel sensor() const;
  BirthModel births() const;
};

struct TruthTrack {
  Label label;
  int first_scan = 1;
  std::vector<Eigen::Vector4d> states;  // one per scan, consecutive

  int last_scan() const { return first_scan + static_cast<int>(states.size()) - 1; }
  bool alive_at(int scan) const { return scan >= first_scan && scan <= last_scan(); }
  const Eigen::Vector4d& state_at(int scan) const {
    return states[static_cast<std::size_t>(scan - first_scan)];
  }
};

struct ScenarioTruth {
  int duration = 0;
  std::vector<TruthTrack> tracks;

  int count_alive(int scan) const;
};

struct MeasurementFrame {
  int scan = 1;
  std::vector<Eigen::Vector2d> points;  // all inside the surveillance region
};

// Births, survival-gated constant-velocity motion, termination on region exit.
ScenarioTruth generate_truth(const ScenarioParams& params);

// Per-scan detections (kept only inside the region) plus uniform Poisson clutter,
// order shuffled so detections are not distinguishable by position in the list.
std::vector<MeasurementFrame> generate_measurements(const ScenarioTruth& truth,
                                                    const SensorModel& sensor,
                                                    std::uint64_t seed);

// Position-only view of every track, keyed by scan.
std::vector<TrackTrace> truth_traces(const ScenarioTruth& truth);

}  // namespace glmb
