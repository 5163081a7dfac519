#pragma once

#include "mdbglmb/labels.hpp"
#include "mdbglmb/models.hpp"
#include "mdbglmb/random.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace mdbglmb {

struct TargetScript
{
  std::uint32_t birth_scan = 0;
  std::uint32_t death_scan = 0;  ///< exclusive
  Kinematic initial = Kinematic::Zero();
};

struct CartesianRegion
{
  double x_min = -2000.0;
  double x_max = 2000.0;
  double y_min = 0.0;
  double y_max = 2000.0;

  [[nodiscard]] bool contains(double x, double y) const
  {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }
};

struct ScenarioScript
{
  std::uint32_t duration = 100;
  CartesianRegion region;
  std::vector<TargetScript> targets;
  bool truth_process_noise = false;

  /// Throws std::invalid_argument on inconsistent lifetimes or initial states outside the region.
  void validate() const;
};

/// Ten crossing targets with staggered births and deaths over 100 scans.
ScenarioScript default_scenario();

/// Truth set per scan. Targets born at the same scan are labeled in script order.
std::vector<LabeledSet> generate_truth(ScenarioScript const& script, MotionModel const& motion, Rng& rng);

struct ScanRecord
{
  std::uint32_t scan = 0;
  std::vector<Measurement> measurements;
  LabeledSet truth;
};

/// Detections (Bernoulli p_D, Gaussian noise, inside the sensor region) plus Poisson clutter, shuffled.
std::vector<ScanRecord> generate_measurements(std::vector<LabeledSet> const& truth, SensorModel const& sensor,
                                              Rng& rng);

/// Line format: `scan bearing range bearing range ...`, one scan per line.
void write_measurements(std::ostream& os, std::vector<ScanRecord> const& scans);

/// Parses the line format; truth sets are left empty. Throws std::runtime_error on malformed input.
std::vector<ScanRecord> read_measurements(std::istream& is);

}  // namespace mdbglmb
