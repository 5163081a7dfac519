#pragma once

#include "mdbglmb/labels.hpp"
#include "mdbglmb/random.hpp"

#include <Eigen/Core>

#include <numbers>

namespace mdbglmb {

/// Turn rates below this magnitude use the constant-velocity limit of the coordinated-turn matrix.
inline constexpr double kTurnRateEpsilon = 1e-8;

/// Coordinated-turn motion with white acceleration noise on position/velocity and a random-walk turn rate.
struct MotionModel
{
  double dt = 1.0;                              ///< sampling period [s]
  double sigma_w = 5.0;                         ///< acceleration noise std [m/s^2]
  double sigma_u = std::numbers::pi / 180.0;    ///< turn-rate noise std [rad/s]

  void validate() const;

  /// Q = blockdiag(sigma_w^2 G G^T, sigma_u^2) in [p_x, v_x, p_y, v_y, turn] ordering.
  [[nodiscard]] Eigen::Matrix<double, 5, 5> process_covariance() const;
};

/// The 4x4 coordinated-turn matrix acting on [p_x, v_x, p_y, v_y].
Eigen::Matrix4d ct_matrix(double turn_rate, double dt);

Kinematic ct_transition_mean(Kinematic const& x, double dt);

Kinematic ct_sample_transition(Kinematic const& x, MotionModel const& model, Rng& rng);

struct Measurement
{
  double bearing = 0.0;  ///< rad, measured from the +y axis towards +x
  double range = 0.0;    ///< m
};

/// Rectangle in measurement space used as the clutter support and sensor field of view.
struct MeasurementRegion
{
  double bearing_min = -std::numbers::pi / 2.0;
  double bearing_max = std::numbers::pi / 2.0;
  double range_min = 0.0;
  double range_max = 2000.0 * std::numbers::sqrt2;

  [[nodiscard]] double area() const { return (bearing_max - bearing_min) * (range_max - range_min); }
  [[nodiscard]] bool contains(Measurement const& z) const
  {
    return z.bearing >= bearing_min && z.bearing <= bearing_max && z.range >= range_min && z.range <= range_max;
  }
};

struct SensorModel
{
  double sigma_theta = 2.0 * std::numbers::pi / 180.0;  ///< bearing std [rad]
  double sigma_r = 10.0;                                ///< range std [m]
  double pd_peak = 0.98;
  double pd_scale = 6000.0;  ///< std of the radial detection profile [m]; +inf gives constant pd_peak
  double clutter_rate = 20.0;
  MeasurementRegion clutter_region;

  void validate() const;
};

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

/// Noise-free bearing/range of a state. Throws std::domain_error at the origin.
Measurement measurement_mean(Kinematic const& x);

double measurement_log_likelihood(Measurement const& z, Kinematic const& x, SensorModel const& sensor);

/// Log-density of z given an already computed predicted bearing/range; no origin check.
double measurement_log_likelihood(Measurement const& z, Measurement const& predicted, SensorModel const& sensor);

double detection_probability(Kinematic const& x, SensorModel const& sensor);

/// log(clutter_rate / area). Throws std::out_of_range when z is outside the clutter region.
double clutter_log_intensity(Measurement const& z, SensorModel const& sensor);

struct SurvivalModel
{
  double probability = 0.99;

  double operator()(Kinematic const&) const { return probability; }
};

}  // namespace mdbglmb
