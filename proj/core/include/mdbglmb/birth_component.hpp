#pragma once

#include "mdbglmb/labels.hpp"
#include "mdbglmb/models.hpp"
#include "mdbglmb/particles.hpp"

namespace mdbglmb {

/// Bernoulli birth seeded by one measurement: existence probability and particle density for the next scan.
struct BirthComponent
{
  TrackLabel label;
  Measurement source;
  double existence = 0.0;
  TrackDensityPtr density;
};

}  // namespace mdbglmb
