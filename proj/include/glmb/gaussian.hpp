#pragma once

#include <Eigen/Dense>
#include <compare>
#include <cstdint>
#include <vector>

namespace glmb {

// Planar state [x, y, vx, vy]; measurements are noisy positions [zx, zy].

struct GaussianDensity {
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  Eigen::Matrix4d cov = Eigen::Matrix4d::Identity();
};

struct Rect {
  double xmin = 0.0;
  double ymin = 0.0;
  double width = 0.0;
  double height = 0.0;

  bool contains(double x, double y) const {
    return x >= xmin && x <= xmin + width && y >= ymin && y <= ymin + height;
  }
  double area() const { return width * height; }
};

struct MotionModel {
  Eigen::Matrix4d F = Eigen::Matrix4d::Identity();
  Eigen::Matrix4d Q = Eigen::Matrix4d::Zero();
  double survival_prob = 0.99;

  // Nearly-constant-velocity motion driven by white acceleration noise.
  static MotionModel constant_velocity(double dt, double sigma_accel, double survival_prob);
};

struct SensorModel {
  Eigen::Matrix<double, 2, 4> H = Eigen::Matrix<double, 2, 4>::Zero();
  Eigen::Matrix2d R = Eigen::Matrix2d::Identity();
  double detection_prob = 0.86;
  double clutter_rate = 90.0;  // expected clutter points per scan
  Rect region;

  // Poisson clutter is uniform over the region: lambda / area inside, 0 outside.
  double clutter_intensity(const Eigen::Vector2d& z) const {
    return region.contains(z(0), z(1)) ? clutter_rate / region.area() : 0.0;
  }

  static SensorModel position_sensor(double sigma_meas, double detection_prob,
                                     double clutter_rate, const Rect& region);
};

// Track identity: the scan an object appeared plus a within-scan ordinal.
struct Label {
  std::int32_t birth_time = 0;
  std::int32_t index = 0;
  friend auto operator<=>(const Label&, const Label&) = default;
};

struct BirthComponent {
  GaussianDensity density;
  double birth_prob = 0.01;
};

struct BirthModel {
  std::vector<BirthComponent> components;

  // Means laid out on a grid with half-cell margins, zero velocity, shared
  // isotropic standard deviation on all four state components.
  static BirthModel grid(int num_components, const Rect& region, double birth_prob,
                         double stddev);
};

GaussianDensity kalman_predict(const GaussianDensity& density, const MotionModel& motion);

// P_D * N(z; H m, H P H' + R) / clutter_intensity(z).
// Throws std::domain_error when z lies outside the region (zero clutter intensity).
double predictive_likelihood(const GaussianDensity& predicted, const Eigen::Vector2d& z,
                             const SensorModel& sensor);

GaussianDensity kalman_update(const GaussianDensity& predicted, const Eigen::Vector2d& z,
                              const SensorModel& sensor);

}  // namespace glmb
