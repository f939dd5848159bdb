#include "glmb/scenario.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <set>
#include <stdexcept>

#include "glmb/rng.hpp"

namespace glmb {

namespace {

constexpr std::uint64_t kTruthStream = 1;
constexpr std::uint64_t kMeasurementStream = 2;

void check_params(const ScenarioParams& p) {
  if (p.duration < 1) throw std::invalid_argument("scenario needs at least one scan");
  if (p.expected_trajectories < 0.0) throw std::invalid_argument("negative expected track count");
  const double pb = p.birth_probability();
  if (pb >= 1.0) throw std::invalid_argument("birth probability reaches 1; add components or scans");
  for (const auto& s : p.seeded_tracks) {
    if (s.label.birth_time < 1 || s.label.birth_time > p.duration)
      throw std::invalid_argument("seeded track starts outside the scenario window");
  }
}

}  // namespace

double ScenarioParams::birth_probability() const {
  return expected_trajectories / (static_cast<double>(duration) * num_birth_components);
}

MotionModel ScenarioParams::motion() const {
  return MotionModel::constant_velocity(dt, accel_stddev, survival_prob);
}

SensorModel ScenarioParams::sensor() const {
  return SensorModel::position_sensor(meas_stddev, detection_prob, clutter_rate, region);
}

BirthModel ScenarioParams::births() const {
  return BirthModel::grid(num_birth_components, region, birth_probability(), birth_stddev);
}

int ScenarioTruth::count_alive(int scan) const {
  int n = 0;
  for (const auto& t : tracks) n += t.alive_at(scan) ? 1 : 0;
  return n;
}

ScenarioTruth generate_truth(const ScenarioParams& params) {
  check_params(params);
  const MotionModel motion = params.motion();
  const BirthModel births = params.births();
  StreamRng rng(derive_seed(params.seed, kTruthStream));

  // per-component Cholesky factors for birth-state draws
  std::vector<Eigen::Matrix4d> birth_chol;
  birth_chol.reserve(births.components.size());
  for (const auto& c : births.components)
    birth_chol.push_back(Eigen::LLT<Eigen::Matrix4d>(c.density.cov).matrixL());

  ScenarioTruth truth;
  truth.duration = params.duration;
  std::set<Label> labels;
  std::vector<std::size_t> live;
  std::vector<std::size_t> still_live;

  const auto spawn = [&](const Label& label, int scan, const Eigen::Vector4d& state) {
    if (!labels.insert(label).second) throw std::invalid_argument("duplicate track label");
    truth.tracks.push_back(TruthTrack{label, scan, {state}});
    still_live.push_back(truth.tracks.size() - 1);
  };

  for (int scan = 1; scan <= params.duration; ++scan) {
    still_live.clear();
    for (const std::size_t idx : live) {
      if (!rng.bernoulli(motion.survival_prob)) continue;
      TruthTrack& track = truth.tracks[idx];
      Eigen::Vector4d x = motion.F * track.states.back();
      if (params.accel_stddev > 0.0) {
        const double ax = rng.normal(0.0, params.accel_stddev);
        const double ay = rng.normal(0.0, params.accel_stddev);
        const double h = 0.5 * params.dt * params.dt;
        x(0) += h * ax;
        x(1) += h * ay;
        x(2) += params.dt * ax;
        x(3) += params.dt * ay;
      }
      if (!params.region.contains(x(0), x(1))) continue;  // left the region: track ends
      track.states.push_back(x);
      still_live.push_back(idx);
    }
    for (const auto& seeded : params.seeded_tracks) {
      if (seeded.label.birth_time == scan) spawn(seeded.label, scan, seeded.state);
    }
    for (std::size_t i = 0; i < births.components.size(); ++i) {
      const auto& comp = births.components[i];
      if (comp.birth_prob <= 0.0 || !rng.bernoulli(comp.birth_prob)) continue;
      Eigen::Vector4d z;
      for (int k = 0; k < 4; ++k) z(k) = rng.normal(0.0, 1.0);
      const Eigen::Vector4d x = comp.density.mean + birth_chol[i] * z;
      if (!params.region.contains(x(0), x(1))) continue;  // stillborn outside the region
      spawn(Label{scan, static_cast<std::int32_t>(i)}, scan, x);
    }
    live = still_live;
  }
  return truth;
}

std::vector<MeasurementFrame> generate_measurements(const ScenarioTruth& truth,
                                                    const SensorModel& sensor,
                                                    std::uint64_t seed) {
  StreamRng rng(derive_seed(seed, kMeasurementStream));
  const Eigen::Matrix2d noise_chol = Eigen::LLT<Eigen::Matrix2d>(sensor.R).matrixL();

  std::vector<MeasurementFrame> frames;
  frames.reserve(static_cast<std::size_t>(truth.duration));
  for (int scan = 1; scan <= truth.duration; ++scan) {
    MeasurementFrame frame;
    frame.scan = scan;
    for (const auto& track : truth.tracks) {
      if (!track.alive_at(scan)) continue;
      if (!rng.bernoulli(sensor.detection_prob)) continue;
      Eigen::Vector2d w(rng.normal(0.0, 1.0), rng.normal(0.0, 1.0));
      const Eigen::Vector2d z = sensor.H * track.state_at(scan) + noise_chol * w;
      if (sensor.region.contains(z(0), z(1))) frame.points.push_back(z);
    }
    const int clutter = rng.poisson(sensor.clutter_rate);
    for (int k = 0; k < clutter; ++k) {
      frame.points.emplace_back(
          rng.uniform(sensor.region.xmin, sensor.region.xmin + sensor.region.width),
          rng.uniform(sensor.region.ymin, sensor.region.ymin + sensor.region.height));
    }
    for (std::size_t i = frame.points.size(); i > 1; --i) {  // Fisher-Yates
      const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1));
      std::swap(frame.points[i - 1], frame.points[j]);
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

std::vector<TrackTrace> truth_traces(const ScenarioTruth& truth) {
  std::vector<TrackTrace> traces;
  traces.reserve(truth.tracks.size());
  for (const auto& track : truth.tracks) {
    TrackTrace trace;
    for (int scan = track.first_scan; scan <= track.last_scan(); ++scan)
      trace.points[scan] = track.state_at(scan).head<2>();
    traces.push_back(std::move(trace));
  }
  return traces;
}

}  // namespace glmb
