#pragma once

#include "mdbglmb/labels.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace mdbglmb {

struct OspaParams
{
  double cutoff = 100.0;  ///< c [m]
  double order = 1.0;     ///< p

  void validate() const;
};

using Position = Eigen::Vector2d;

/// OSPA distance between two finite point sets; 0 when both are empty.
double ospa(std::span<Position const> X, std::span<Position const> Y, OspaParams const& params);

/// Planar positions of a labeled set.
std::vector<Position> positions(std::span<LabeledState const> X);

struct CardinalityStats
{
  double mean = 0.0;
  double std = 0.0;
  double truth = 0.0;
};

CardinalityStats cardinality_moments(std::span<double const> rho);

/// Mean and standard deviation of each scan's cardinality distribution, paired with the true count.
/// Throws std::invalid_argument on length mismatch.
std::vector<CardinalityStats> cardinality_series(std::span<std::vector<double> const> estimates,
                                                 std::span<std::size_t const> truth);

}  // namespace mdbglmb
