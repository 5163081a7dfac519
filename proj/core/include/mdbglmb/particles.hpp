#pragma once

#include "mdbglmb/labels.hpp"
#include "mdbglmb/models.hpp"
#include "mdbglmb/random.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <memory>
#include <span>

namespace mdbglmb {

using ParticleStates = Eigen::Matrix<double, 5, Eigen::Dynamic>;

/// Weighted particle approximation of one labeled track's kinematic density.
///
/// Weights are normalized on construction. The `id` identifies the density's provenance
/// (birth, prediction, update branch) and seeds the random substreams derived from it, so
/// the same density always produces the same descendants regardless of processing order.
class LabeledParticleDensity
{
public:
  /// Throws std::invalid_argument on empty input, non-finite states, negative weights or zero total weight.
  LabeledParticleDensity(TrackLabel label, ParticleStates states, Eigen::VectorXd weights, std::uint64_t id = 0);

  /// Equally weighted particles.
  LabeledParticleDensity(TrackLabel label, ParticleStates states, std::uint64_t id = 0);

  [[nodiscard]] TrackLabel label() const { return label_; }
  [[nodiscard]] std::uint64_t id() const { return id_; }
  [[nodiscard]] Eigen::Index size() const { return states_.cols(); }
  [[nodiscard]] ParticleStates const& states() const { return states_; }
  [[nodiscard]] Eigen::VectorXd const& weights() const { return weights_; }

  [[nodiscard]] Kinematic mean() const { return states_ * weights_; }
  [[nodiscard]] double effective_sample_size() const { return 1.0 / weights_.squaredNorm(); }

private:
  TrackLabel label_;
  ParticleStates states_;
  Eigen::VectorXd weights_;
  std::uint64_t id_;
};

using TrackDensityPtr = std::shared_ptr<LabeledParticleDensity const>;

using StateFunction = std::function<double(Kinematic const&)>;

/// Monte Carlo estimate of <f, p>.
double inner_product(LabeledParticleDensity const& p, StateFunction const& f);

struct TrackPrediction
{
  double eta_survival;
  LabeledParticleDensity density;
};

/// Survival-weighted propagation. Throws std::domain_error when the survival mass is zero.
TrackPrediction predict_track(LabeledParticleDensity const& p, MotionModel const& motion, StateFunction const& survival,
                              Rng& rng, std::uint64_t new_id = 0);

struct TrackUpdate
{
  double log_eta;  ///< log <p, psi>
  LabeledParticleDensity density;
};

/// Bayes reweighting by a per-particle pseudo-likelihood given in log form (-inf allowed).
/// Throws std::domain_error when every particle has zero likelihood.
TrackUpdate update_track(LabeledParticleDensity const& p, std::span<double const> log_psi, std::uint64_t new_id = 0);

/// Convenience overload evaluating log(psi(x)) per particle.
TrackUpdate update_track(LabeledParticleDensity const& p, StateFunction const& psi, std::uint64_t new_id = 0);

/// Systematic resampling to `target_count` equally weighted particles.
LabeledParticleDensity resample(LabeledParticleDensity const& p, Eigen::Index target_count, Rng& rng,
                                std::uint64_t new_id = 0);

/// log(sum(exp(values))), -inf for an empty or all -inf input.
double log_sum_exp(std::span<double const> values);

}  // namespace mdbglmb
