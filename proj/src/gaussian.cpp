#include "glmb/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace glmb {

MotionModel MotionModel::constant_velocity(double dt, double sigma_accel, double survival_prob) {
  if (dt <= 0.0) throw std::invalid_argument("time step must be positive");
  if (sigma_accel < 0.0) throw std::invalid_argument("negative acceleration noise");
  if (!(survival_prob > 0.0 && survival_prob <= 1.0)) {
    throw std::invalid_argument("survival probability must lie in (0, 1]");
  }
  MotionModel m;
  m.F << 1, 0, dt, 0,
         0, 1, 0, dt,
         0, 0, 1, 0,
         0, 0, 0, 1;
  const double s2 = sigma_accel * sigma_accel;
  const double q11 = s2 * dt * dt * dt * dt / 4.0;
  const double q13 = s2 * dt * dt * dt / 2.0;
  const double q33 = s2 * dt * dt;
  m.Q << q11, 0, q13, 0,
         0, q11, 0, q13,
         q13, 0, q33, 0,
         0, q13, 0, q33;
  m.survival_prob = survival_prob;
  return m;
}

SensorModel SensorModel::position_sensor(double sigma_meas, double detection_prob,
                                         double clutter_rate, const Rect& region) {
  if (sigma_meas <= 0.0) throw std::invalid_argument("measurement noise must be positive");
  if (!(detection_prob >= 0.0 && detection_prob <= 1.0)) {
    throw std::invalid_argument("detection probability must lie in [0, 1]");
  }
  if (clutter_rate < 0.0) throw std::invalid_argument("negative clutter rate");
  if (region.width <= 0.0 || region.height <= 0.0) {
    throw std::invalid_argument("region must have positive extent");
  }
  SensorModel s;
  s.H << 1, 0, 0, 0,
         0, 1, 0, 0;
  s.R = sigma_meas * sigma_meas * Eigen::Matrix2d::Identity();
  s.detection_prob = detection_prob;
  s.clutter_rate = clutter_rate;
  s.region = region;
  return s;
}

BirthModel BirthModel::grid(int num_components, const Rect& region, double birth_prob,
                            double stddev) {
  if (num_components < 1) throw std::invalid_argument("birth model needs at least one component");
  if (!(birth_prob >= 0.0 && birth_prob < 1.0)) {
    throw std::invalid_argument("birth probability must lie in [0, 1)");
  }
  if (stddev <= 0.0) throw std::invalid_argument("birth spread must be positive");

  // factor pair gx * gy = N with gx >= gy as close to square as the divisors
  // allow; the longer grid side runs along the longer region side
  int gx = num_components;
  for (int d = 1; d * d <= num_components; ++d) {
    if (num_components % d == 0) gx = num_components / d;
  }
  int gy = num_components / gx;
  if (region.height > region.width) std::swap(gx, gy);

  BirthModel model;
  const double cw = region.width / gx;
  const double ch = region.height / gy;
  for (int i = 0; i < num_components; ++i) {
    const int ix = i % gx;
    const int iy = i / gx;
    BirthComponent c;
    c.density.mean << region.xmin + (ix + 0.5) * cw, region.ymin + (iy + 0.5) * ch, 0.0, 0.0;
    c.density.cov = stddev * stddev * Eigen::Matrix4d::Identity();
    c.birth_prob = birth_prob;
    model.components.push_back(c);
  }
  return model;
}

GaussianDensity kalman_predict(const GaussianDensity& density, const MotionModel& motion) {
  GaussianDensity out;
  out.mean = motion.F * density.mean;
  out.cov = motion.F * density.cov * motion.F.transpose() + motion.Q;
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();  // keep symmetric under round-off
  return out;
}

double predictive_likelihood(const GaussianDensity& predicted, const Eigen::Vector2d& z,
                             const SensorModel& sensor) {
  const double kappa = sensor.clutter_intensity(z);
  if (kappa <= 0.0) {
    throw std::domain_error("measurement lies outside the surveillance region");
  }
  if (sensor.detection_prob == 0.0) return 0.0;

  const Eigen::Matrix2d S =
      sensor.H * predicted.cov * sensor.H.transpose() + sensor.R;
  const Eigen::LLT<Eigen::Matrix2d> llt(S);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("innovation covariance is not positive definite");
  }
  const Eigen::Vector2d d = z - sensor.H * predicted.mean;
  const Eigen::Vector2d w = llt.solve(d);
  const double log_det = 2.0 * std::log(llt.matrixL().determinant());
  const double log_norm =
      -std::log(2.0 * std::numbers::pi) - 0.5 * log_det - 0.5 * d.dot(w);
  return sensor.detection_prob * std::exp(log_norm) / kappa;
}

GaussianDensity kalman_update(const GaussianDensity& predicted, const Eigen::Vector2d& z,
                              const SensorModel& sensor) {
  const Eigen::Matrix2d S =
      sensor.H * predicted.cov * sensor.H.transpose() + sensor.R;
  const Eigen::LLT<Eigen::Matrix2d> llt(S);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("innovation covariance is not positive definite");
  }
  const Eigen::Matrix<double, 4, 2> K =
      predicted.cov * sensor.H.transpose() * llt.solve(Eigen::Matrix2d::Identity());

  GaussianDensity out;
  out.mean = predicted.mean + K * (z - sensor.H * predicted.mean);
  // Joseph form: stays symmetric positive definite for any gain
  const Eigen::Matrix4d A = Eigen::Matrix4d::Identity() - K * sensor.H;
  out.cov = A * predicted.cov * A.transpose() + K * sensor.R * K.transpose();
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

}  // namespace glmb
