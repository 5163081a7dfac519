#pragma once

#include "mdbglmb/birth_component.hpp"
#include "mdbglmb/glmb.hpp"
#include "mdbglmb/labels.hpp"
#include "mdbglmb/models.hpp"

#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

namespace mdbglmb {

/// Measurement-driven birth parameters.
struct MdbConfig
{
  double expected_births = 0.3;   ///< lambda_B: expected number of births per scan
  double max_existence = 0.15;    ///< r_B,max
  std::size_t particles = 10000;  ///< M_b
  /// Square roots of the diagonal of the birth covariance P_B.
  Kinematic birth_std = (Kinematic() << 50.0, 50.0, 50.0, 50.0, 6.0 * std::numbers::pi / 180.0).finished();
  double min_newborn_likelihood = 0.0;

  /// Also rejects max_existence == 1, which would make the birth LMB weight singular.
  void validate() const;
};

/// r_U(z) = 1 - total weight of the hypotheses whose latest association claims z, per measurement index.
std::vector<double> newborn_likelihoods(std::size_t measurement_count, GlmbDensity const& posterior);

/// r_B(z) = min(r_B,max, lambda_B * r_U(z) / sum r_U); all zero when nothing is unexplained.
std::vector<double> birth_existences(std::span<double const> newborn, MdbConfig const& config);

/// Target state recovered from a bearing/range measurement: [r sin(theta), 0, r cos(theta), 0, 0].
Kinematic birth_mean(Measurement const& z);

/// One Gaussian particle birth per measurement with r_B > 0 and r_U above the configured threshold.
/// Labels are allocated for `birth_scan` in measurement order.
std::vector<BirthComponent> make_birth_components(std::span<Measurement const> Z, std::span<double const> existence,
                                                  std::span<double const> newborn, MdbConfig const& config,
                                                  std::uint32_t birth_scan, LabelAllocator& labels,
                                                  std::uint64_t stream_seed);

/// Labeled multi-Bernoulli weight of the birth subset `subset` among `components`.
/// Throws std::domain_error if a component with existence 1 is excluded.
double birth_lmb_weight(std::span<TrackLabel const> subset, std::span<BirthComponent const> components);

}  // namespace mdbglmb
