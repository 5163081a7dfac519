#include "mdbglmb/particles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mdbglmb {

LabeledParticleDensity::LabeledParticleDensity(TrackLabel label, ParticleStates states, Eigen::VectorXd weights,
                                               std::uint64_t id)
  : label_{ label }, states_{ std::move(states) }, weights_{ std::move(weights) }, id_{ id }
{
  if (states_.cols() == 0)
  {
    throw std::invalid_argument("particle density needs at least one particle");
  }
  if (weights_.size() != states_.cols())
  {
    throw std::invalid_argument("particle weight count does not match state count");
  }
  if (!states_.allFinite())
  {
    throw std::invalid_argument("particle states must be finite");
  }
  if (!weights_.allFinite() || (weights_.array() < 0.0).any())
  {
    throw std::invalid_argument("particle weights must be finite and non-negative");
  }
  double const total = weights_.sum();
  if (!(total > 0.0))
  {
    throw std::invalid_argument("particle weights sum to zero");
  }
  weights_ /= total;
}

LabeledParticleDensity::LabeledParticleDensity(TrackLabel label, ParticleStates states, std::uint64_t id)
  : LabeledParticleDensity(label, states, Eigen::VectorXd::Constant(states.cols(), 1.0), id)
{
}

double inner_product(LabeledParticleDensity const& p, StateFunction const& f)
{
  double sum = 0.0;
  auto const& w = p.weights();
  for (Eigen::Index i = 0; i < p.size(); ++i)
  {
    sum += w(i) * f(p.states().col(i));
  }
  return sum;
}

TrackPrediction predict_track(LabeledParticleDensity const& p, MotionModel const& motion, StateFunction const& survival,
                              Rng& rng, std::uint64_t new_id)
{
  Eigen::VectorXd weights(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i)
  {
    weights(i) = p.weights()(i) * survival(p.states().col(i));
  }
  double const eta = weights.sum();
  if (!(eta > 0.0))
  {
    throw std::domain_error("track has zero survival probability");
  }
  ParticleStates states(5, p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i)
  {
    states.col(i) = ct_sample_transition(p.states().col(i), motion, rng);
  }
  return { eta, LabeledParticleDensity{ p.label(), std::move(states), weights / eta, new_id } };
}

double log_sum_exp(std::span<double const> values)
{
  double const max = values.empty() ? -std::numeric_limits<double>::infinity()
                                    : *std::max_element(values.begin(), values.end());
  if (!std::isfinite(max))
  {
    return max;
  }
  double sum = 0.0;
  for (double v : values)
  {
    sum += std::exp(v - max);
  }
  return max + std::log(sum);
}

TrackUpdate update_track(LabeledParticleDensity const& p, std::span<double const> log_psi, std::uint64_t new_id)
{
  if (static_cast<Eigen::Index>(log_psi.size()) != p.size())
  {
    throw std::invalid_argument("likelihood count does not match particle count");
  }
  std::vector<double> log_terms(log_psi.size());
  for (std::size_t i = 0; i < log_psi.size(); ++i)
  {
    log_terms[i] = std::log(p.weights()(static_cast<Eigen::Index>(i))) + log_psi[i];
  }
  double const log_eta = log_sum_exp(log_terms);
  if (!std::isfinite(log_eta))
  {
    throw std::domain_error("association has zero likelihood for every particle");
  }
  Eigen::VectorXd weights(p.size());
  for (std::size_t i = 0; i < log_terms.size(); ++i)
  {
    weights(static_cast<Eigen::Index>(i)) = std::exp(log_terms[i] - log_eta);
  }
  return { log_eta, LabeledParticleDensity{ p.label(), p.states(), std::move(weights), new_id } };
}

TrackUpdate update_track(LabeledParticleDensity const& p, StateFunction const& psi, std::uint64_t new_id)
{
  std::vector<double> log_psi(static_cast<std::size_t>(p.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i)
  {
    log_psi[static_cast<std::size_t>(i)] = std::log(psi(p.states().col(i)));
  }
  return update_track(p, log_psi, new_id);
}

LabeledParticleDensity resample(LabeledParticleDensity const& p, Eigen::Index target_count, Rng& rng,
                                std::uint64_t new_id)
{
  if (target_count <= 0)
  {
    throw std::invalid_argument("resample target count must be positive");
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double const step = 1.0 / static_cast<double>(target_count);
  double u = unif(rng) * step;
  ParticleStates states(5, target_count);
  auto const& w = p.weights();
  Eigen::Index source = 0;
  double cumulative = w(0);
  for (Eigen::Index k = 0; k < target_count; ++k)
  {
    while (u > cumulative && source + 1 < p.size())
    {
      ++source;
      cumulative += w(source);
    }
    states.col(k) = p.states().col(source);
    u += step;
  }
  return LabeledParticleDensity{ p.label(), std::move(states), new_id };
}

}  // namespace mdbglmb
