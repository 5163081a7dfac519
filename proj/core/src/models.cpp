#include "mdbglmb/models.hpp"

#include <cmath>
#include <stdexcept>

namespace mdbglmb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

void MotionModel::validate() const
{
  if (!(dt > 0.0))
  {
    throw std::invalid_argument("motion dt must be positive");
  }
  if (!(sigma_w >= 0.0) || !(sigma_u >= 0.0))
  {
    throw std::invalid_argument("motion noise standard deviations must be non-negative");
  }
}

Eigen::Matrix<double, 5, 5> MotionModel::process_covariance() const
{
  Eigen::Matrix<double, 4, 2> G;
  G << dt * dt / 2.0, 0.0,  //
      dt, 0.0,              //
      0.0, dt * dt / 2.0,   //
      0.0, dt;
  Eigen::Matrix<double, 5, 5> Q = Eigen::Matrix<double, 5, 5>::Zero();
  Q.topLeftCorner<4, 4>() = sigma_w * sigma_w * G * G.transpose();
  Q(4, 4) = sigma_u * sigma_u;
  return Q;
}

Eigen::Matrix4d ct_matrix(double turn_rate, double dt)
{
  double sin_term = dt;  // sin(w dt) / w
  double cos_term = 0.0; // (1 - cos(w dt)) / w
  if (std::abs(turn_rate) >= kTurnRateEpsilon)
  {
    sin_term = std::sin(turn_rate * dt) / turn_rate;
    cos_term = (1.0 - std::cos(turn_rate * dt)) / turn_rate;
  }
  double const c = std::cos(turn_rate * dt);
  double const s = std::sin(turn_rate * dt);
  Eigen::Matrix4d F;
  F << 1.0, sin_term, 0.0, -cos_term,  //
      0.0, c, 0.0, -s,                 //
      0.0, cos_term, 1.0, sin_term,    //
      0.0, s, 0.0, c;
  return F;
}

Kinematic ct_transition_mean(Kinematic const& x, double dt)
{
  Kinematic out;
  out.head<4>() = ct_matrix(x(kTurn), dt) * x.head<4>();
  out(kTurn) = x(kTurn);
  return out;
}

Kinematic ct_sample_transition(Kinematic const& x, MotionModel const& model, Rng& rng)
{
  Kinematic out = ct_transition_mean(x, model.dt);
  if (model.sigma_w > 0.0)
  {
    std::normal_distribution<double> accel(0.0, model.sigma_w);
    double const ax = accel(rng);
    double const ay = accel(rng);
    double const half_dt2 = model.dt * model.dt / 2.0;
    out(kPx) += half_dt2 * ax;
    out(kVx) += model.dt * ax;
    out(kPy) += half_dt2 * ay;
    out(kVy) += model.dt * ay;
  }
  if (model.sigma_u > 0.0)
  {
    std::normal_distribution<double> turn(0.0, model.sigma_u);
    out(kTurn) += turn(rng);
  }
  return out;
}

void SensorModel::validate() const
{
  if (!(sigma_theta > 0.0) || !(sigma_r > 0.0))
  {
    throw std::invalid_argument("sensor noise standard deviations must be positive");
  }
  if (!(pd_peak >= 0.0 && pd_peak <= 1.0))
  {
    throw std::invalid_argument("pd_peak must lie in [0, 1]");
  }
  if (!(pd_scale > 0.0))
  {
    throw std::invalid_argument("pd_scale must be positive");
  }
  if (!(clutter_rate >= 0.0))
  {
    throw std::invalid_argument("clutter_rate must be non-negative");
  }
  if (!(clutter_region.bearing_max > clutter_region.bearing_min) ||
      !(clutter_region.range_max > clutter_region.range_min) || clutter_region.range_min < 0.0)
  {
    throw std::invalid_argument("clutter region must have positive area and non-negative ranges");
  }
}

double wrap_angle(double angle)
{
  double wrapped = std::remainder(angle, kTwoPi);  // [-pi, pi]
  if (wrapped <= -std::numbers::pi)
  {
    wrapped += kTwoPi;
  }
  return wrapped;
}

Measurement measurement_mean(Kinematic const& x)
{
  if (x(kPx) == 0.0 && x(kPy) == 0.0)
  {
    throw std::domain_error("bearing is undefined at the sensor origin");
  }
  return Measurement{ std::atan2(x(kPx), x(kPy)), std::hypot(x(kPx), x(kPy)) };
}

double measurement_log_likelihood(Measurement const& z, Measurement const& predicted, SensorModel const& sensor)
{
  double const eb = wrap_angle(z.bearing - predicted.bearing) / sensor.sigma_theta;
  double const er = (z.range - predicted.range) / sensor.sigma_r;
  return -0.5 * (eb * eb + er * er) - std::log(kTwoPi * sensor.sigma_theta * sensor.sigma_r);
}

double measurement_log_likelihood(Measurement const& z, Kinematic const& x, SensorModel const& sensor)
{
  return measurement_log_likelihood(z, measurement_mean(x), sensor);
}

double detection_probability(Kinematic const& x, SensorModel const& sensor)
{
  if (std::isinf(sensor.pd_scale))
  {
    return sensor.pd_peak;
  }
  double const r2 = x(kPx) * x(kPx) + x(kPy) * x(kPy);
  return sensor.pd_peak * std::exp(-r2 / (2.0 * sensor.pd_scale * sensor.pd_scale));
}

double clutter_log_intensity(Measurement const& z, SensorModel const& sensor)
{
  if (!sensor.clutter_region.contains(z))
  {
    throw std::out_of_range("measurement lies outside the clutter region");
  }
  return std::log(sensor.clutter_rate / sensor.clutter_region.area());
}

}  // namespace mdbglmb
