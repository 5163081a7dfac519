#pragma once

#include "mdbglmb/birth.hpp"
#include "mdbglmb/glmb.hpp"
#include "mdbglmb/labels.hpp"
#include "mdbglmb/models.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace mdbglmb {

struct TrackerModels
{
  MotionModel motion;
  SensorModel sensor;
  SurvivalModel survival;
};

struct TrackerStep
{
  std::uint32_t scan = 0;
  Estimate estimate;
  std::vector<double> newborn;          ///< r_U per measurement
  std::vector<double> birth_existence;  ///< r_B per measurement
  std::size_t hypotheses = 0;
};

/// Measurement-driven delta-GLMB tracker. The first scan starts from the empty density; every
/// later scan is predicted with the births spawned by the previous scan's measurements.
class Tracker
{
public:
  Tracker(TrackerModels models, FilterConfig filter, MdbConfig birth, std::uint64_t seed,
          std::uint32_t first_scan = 0);

  TrackerStep step(std::span<Measurement const> Z);

  [[nodiscard]] GlmbDensity const& posterior() const { return posterior_; }
  [[nodiscard]] std::vector<BirthComponent> const& pending_births() const { return births_; }

  /// Disables birth generation. Without births the tracker can never report a target.
  void disable_births() { births_enabled_ = false; }

private:
  TrackerModels models_;
  FilterConfig filter_;
  MdbConfig birth_;
  std::uint64_t seed_;
  std::uint32_t scan_;
  bool started_ = false;
  bool births_enabled_ = true;
  GlmbDensity posterior_;
  std::vector<BirthComponent> births_;
  LabelAllocator labels_;
};

}  // namespace mdbglmb
