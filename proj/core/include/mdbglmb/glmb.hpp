#pragma once

#include "mdbglmb/birth_component.hpp"
#include "mdbglmb/labels.hpp"
#include "mdbglmb/models.hpp"
#include "mdbglmb/particles.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace mdbglmb {

/// One (label set, association history) component of a delta-GLMB density.
struct Hypothesis
{
  std::vector<TrackLabel> labels;        ///< sorted, distinct
  std::vector<TrackDensityPtr> tracks;   ///< aligned with `labels`
  std::uint64_t history_id = 0;          ///< chain hash of the association maps that produced this component
  double log_weight = 0.0;
  /// Association map of the most recent update, aligned with `labels` (0 = missed, j = measurement j).
  /// Empty for predicted hypotheses.
  std::vector<int> association;

  [[nodiscard]] std::size_t cardinality() const { return labels.size(); }
  [[nodiscard]] bool claims(int measurement) const;
};

struct GlmbDensity
{
  std::vector<Hypothesis> hypotheses;
  std::uint32_t scan = 0;

  /// Single empty hypothesis with weight one.
  static GlmbDensity empty(std::uint32_t scan);

  /// rho(n) = sum of weights of hypotheses with n labels.
  [[nodiscard]] std::vector<double> cardinality_distribution() const;

  /// Throws std::logic_error when a structural invariant is broken.
  void validate(double weight_tolerance = 1e-9) const;
};

/// Truncation budgets and particle maintenance of the recursion.
struct FilterConfig
{
  std::size_t particles = 1000;          ///< particles per persisting track
  double resample_threshold = 0.5;       ///< resample when ESS < threshold * particle count
  std::size_t total_assignments = 1000;  ///< update budget, split in proportion to hypothesis weight
  std::size_t survival_subsets = 20;
  std::size_t birth_subsets = 40;
  std::size_t predicted_hypotheses = 3000;  ///< prediction budget, split in proportion to hypothesis weight
  double min_weight = 1e-5;
  std::size_t max_hypotheses = 1000;

  void validate() const;
};

/// Measurement update. `stream_seed` seeds the resampling substreams.
GlmbDensity glmb_update(GlmbDensity const& prior, std::span<Measurement const> Z, SensorModel const& sensor,
                        FilterConfig const& config, std::uint64_t stream_seed);

/// Prediction to the next scan with the given birth components.
GlmbDensity glmb_predict(GlmbDensity const& posterior, std::span<BirthComponent const> births,
                         MotionModel const& motion, SurvivalModel const& survival, FilterConfig const& config,
                         std::uint64_t stream_seed);

/// Drops hypotheses lighter than `min_weight` (the heaviest always stays), keeps at most `max_hypotheses`, renormalizes.
GlmbDensity prune_and_cap(GlmbDensity const& g, double min_weight, std::size_t max_hypotheses);

struct Estimate
{
  LabeledSet states;
  std::vector<double> cardinality;
};

/// MAP cardinality, then the heaviest hypothesis of that cardinality at its particle means.
Estimate extract_estimates(GlmbDensity const& g);

/// Normalizes log weights in place; throws std::runtime_error when every weight is zero.
void normalize_log_weights(std::vector<Hypothesis>& hypotheses);

}  // namespace mdbglmb
