#include "mdbglmb/birth.hpp"

#include "mdbglmb/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdbglmb {

void MdbConfig::validate() const
{
  if (!(expected_births >= 0.0))
  {
    throw std::invalid_argument("expected_births must be non-negative");
  }
  if (!(max_existence >= 0.0 && max_existence < 1.0))
  {
    throw std::invalid_argument("max_existence must lie in [0, 1)");
  }
  if (particles == 0)
  {
    throw std::invalid_argument("birth particle count must be positive");
  }
  if (!birth_std.allFinite() || (birth_std.array() < 0.0).any())
  {
    throw std::invalid_argument("birth standard deviations must be finite and non-negative");
  }
  if (!(min_newborn_likelihood >= 0.0 && min_newborn_likelihood <= 1.0))
  {
    throw std::invalid_argument("min_newborn_likelihood must lie in [0, 1]");
  }
}

std::vector<double> newborn_likelihoods(std::size_t measurement_count, GlmbDensity const& posterior)
{
  std::vector<double> claimed(measurement_count, 0.0);
  for (auto const& h : posterior.hypotheses)
  {
    double const w = std::exp(h.log_weight);
    for (int j : h.association)
    {
      if (j > 0 && static_cast<std::size_t>(j) <= measurement_count)
      {
        claimed[static_cast<std::size_t>(j - 1)] += w;
      }
    }
  }
  std::vector<double> r_u(measurement_count);
  for (std::size_t j = 0; j < measurement_count; ++j)
  {
    r_u[j] = std::clamp(1.0 - claimed[j], 0.0, 1.0);
  }
  return r_u;
}

std::vector<double> birth_existences(std::span<double const> newborn, MdbConfig const& config)
{
  std::vector<double> r_b(newborn.size(), 0.0);
  double total = 0.0;
  for (double r : newborn)
  {
    total += r;
  }
  if (!(total > 0.0))
  {
    return r_b;
  }
  for (std::size_t j = 0; j < newborn.size(); ++j)
  {
    r_b[j] = std::min(config.max_existence, config.expected_births * newborn[j] / total);
  }
  return r_b;
}

Kinematic birth_mean(Measurement const& z)
{
  Kinematic m;
  m << z.range * std::sin(z.bearing), 0.0, z.range * std::cos(z.bearing), 0.0, 0.0;
  return m;
}

std::vector<BirthComponent> make_birth_components(std::span<Measurement const> Z, std::span<double const> existence,
                                                  std::span<double const> newborn, MdbConfig const& config,
                                                  std::uint32_t birth_scan, LabelAllocator& labels,
                                                  std::uint64_t stream_seed)
{
  if (existence.size() != Z.size() || newborn.size() != Z.size())
  {
    throw std::invalid_argument("birth inputs must have one entry per measurement");
  }
  std::vector<std::size_t> sources;
  for (std::size_t j = 0; j < Z.size(); ++j)
  {
    if (existence[j] > 0.0 && newborn[j] > config.min_newborn_likelihood)
    {
      sources.push_back(j);
    }
  }
  auto const assigned = labels.allocate(birth_scan, static_cast<std::uint32_t>(sources.size()));

  std::vector<BirthComponent> births;
  births.reserve(sources.size());
  auto const count = static_cast<Eigen::Index>(config.particles);
  for (std::size_t k = 0; k < sources.size(); ++k)
  {
    auto const j = sources[k];
    auto const label = assigned[k];
    std::uint64_t const id = derive_seed(0xB1A7'0000ULL, { label.birth_time, label.birth_index });
    Rng rng = make_rng(stream_seed, { id });
    std::normal_distribution<double> normal(0.0, 1.0);
    Kinematic const mean = birth_mean(Z[j]);
    ParticleStates states(5, count);
    for (Eigen::Index i = 0; i < count; ++i)
    {
      for (int d = 0; d < 5; ++d)
      {
        states(d, i) = mean(d) + config.birth_std(d) * normal(rng);
      }
    }
    births.push_back(BirthComponent{ label, Z[j], existence[j],
                                     std::make_shared<LabeledParticleDensity const>(label, std::move(states), id) });
  }
  return births;
}

double birth_lmb_weight(std::span<TrackLabel const> subset, std::span<BirthComponent const> components)
{
  double weight = 1.0;
  std::size_t matched = 0;
  for (auto const& c : components)
  {
    bool const member = std::find(subset.begin(), subset.end(), c.label) != subset.end();
    if (member)
    {
      ++matched;
      weight *= c.existence;
    }
    else
    {
      if (c.existence >= 1.0)
      {
        throw std::domain_error("a birth with existence one cannot be excluded");
      }
      weight *= 1.0 - c.existence;
    }
  }
  if (matched != subset.size())
  {
    throw std::invalid_argument("subset contains labels that are not birth components");
  }
  return weight;
}

}  // namespace mdbglmb
