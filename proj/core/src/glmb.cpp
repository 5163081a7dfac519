#include "mdbglmb/glmb.hpp"

#include "mdbglmb/assignment.hpp"
#include "mdbglmb/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace mdbglmb {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Floor for log(kappa) so that a clutter-free sensor keeps detection ratios finite.
constexpr double kMinLogClutter = -500.0;

constexpr std::uint64_t kPredictTag = 0x5052454449435400ULL;
constexpr std::uint64_t kUpdateTag = 0x5550444154450000ULL;

std::uint64_t history_after_update(Hypothesis const& h, std::vector<int> const& map)
{
  std::uint64_t id = hash_combine(h.history_id, kUpdateTag);
  for (std::size_t i = 0; i < h.labels.size(); ++i)
  {
    id = hash_combine(id, (std::uint64_t{ h.labels[i].birth_time } << 32) | h.labels[i].birth_index);
    id = hash_combine(id, static_cast<std::uint64_t>(map[i]));
  }
  return id;
}

/// Per-density likelihood table shared by every hypothesis that carries the same track density.
class UpdateTable
{
public:
  UpdateTable(std::span<Measurement const> Z, SensorModel const& sensor, FilterConfig const& config,
              std::uint32_t scan, std::uint64_t seed)
    : Z_{ Z }, sensor_{ sensor }, config_{ config }, scan_{ scan }, seed_{ seed }
  {
    log_kappa_.reserve(Z.size());
    for (auto const& z : Z)
    {
      log_kappa_.push_back(std::max(clutter_log_intensity(z, sensor), kMinLogClutter));
    }
    log_norm_ = -std::log(2.0 * std::numbers::pi * sensor.sigma_theta * sensor.sigma_r);
  }

  std::size_t entry(TrackDensityPtr const& density)
  {
    auto [it, inserted] = index_.try_emplace(density.get(), entries_.size());
    if (inserted)
    {
      entries_.push_back(build(density));
    }
    return it->second;
  }

  [[nodiscard]] double log_eta(std::size_t e, int column) const
  {
    return entries_[e].log_eta[static_cast<std::size_t>(column)];
  }

  TrackDensityPtr posterior(std::size_t e, int column)
  {
    auto& entry = entries_[e];
    auto& slot = entry.posterior[static_cast<std::size_t>(column)];
    if (!slot)
    {
      slot = make_posterior(entry, column);
    }
    return slot;
  }

private:
  struct Entry
  {
    TrackDensityPtr prior;
    std::vector<Measurement> predicted;
    std::vector<double> log_weight;
    std::vector<double> log_pd;
    std::vector<double> log_miss;
    std::vector<double> log_eta;  // [0] = missed detection, [j] = measurement j
    std::vector<TrackDensityPtr> posterior;
  };

  [[nodiscard]] double log_psi(Entry const& e, std::size_t i, int column) const
  {
    if (column == 0)
    {
      return e.log_miss[i];
    }
    auto const j = static_cast<std::size_t>(column - 1);
    auto const& z = Z_[j];
    double const eb = wrap_angle(z.bearing - e.predicted[i].bearing) / sensor_.sigma_theta;
    double const er = (z.range - e.predicted[i].range) / sensor_.sigma_r;
    return e.log_pd[i] + log_norm_ - 0.5 * (eb * eb + er * er) - log_kappa_[j];
  }

  Entry build(TrackDensityPtr const& density)
  {
    Entry e;
    e.prior = density;
    auto const n = static_cast<std::size_t>(density->size());
    e.predicted.resize(n);
    e.log_weight.resize(n);
    e.log_pd.resize(n);
    e.log_miss.resize(n);
    for (std::size_t i = 0; i < n; ++i)
    {
      auto const x = density->states().col(static_cast<Eigen::Index>(i));
      e.predicted[i] = Measurement{ std::atan2(x(kPx), x(kPy)), std::hypot(x(kPx), x(kPy)) };
      e.log_weight[i] = std::log(density->weights()(static_cast<Eigen::Index>(i)));
      double const pd = detection_probability(x, sensor_);
      e.log_pd[i] = std::log(pd);
      e.log_miss[i] = std::log1p(-pd);
    }
    std::vector<double> terms(n);
    e.log_eta.resize(Z_.size() + 1);
    for (int column = 0; column <= static_cast<int>(Z_.size()); ++column)
    {
      for (std::size_t i = 0; i < n; ++i)
      {
        terms[i] = e.log_weight[i] + log_psi(e, i, column);
      }
      e.log_eta[static_cast<std::size_t>(column)] = log_sum_exp(terms);
    }
    e.posterior.resize(Z_.size() + 1);
    return e;
  }

  TrackDensityPtr make_posterior(Entry const& e, int column)
  {
    auto const n = e.log_weight.size();
    std::vector<double> lp(n);
    for (std::size_t i = 0; i < n; ++i)
    {
      lp[i] = log_psi(e, i, column);
    }
    std::uint64_t const id = derive_seed(e.prior->id(), { kUpdateTag, scan_, static_cast<std::uint64_t>(column) });
    auto updated = update_track(*e.prior, lp, id);
    auto const count = updated.density.size();
    auto const target = static_cast<Eigen::Index>(config_.particles);
    if (updated.density.effective_sample_size() < config_.resample_threshold * static_cast<double>(count) ||
        count > target)
    {
      Rng rng = make_rng(seed_, { id });
      return std::make_shared<LabeledParticleDensity const>(resample(updated.density, target, rng, id));
    }
    return std::make_shared<LabeledParticleDensity const>(std::move(updated.density));
  }

  std::span<Measurement const> Z_;
  SensorModel const& sensor_;
  FilterConfig const& config_;
  std::uint32_t scan_;
  std::uint64_t seed_;
  std::vector<double> log_kappa_;
  double log_norm_ = 0.0;
  std::unordered_map<LabeledParticleDensity const*, std::size_t> index_;
  std::vector<Entry> entries_;
};

std::size_t proportional_budget(std::size_t total, double weight)
{
  double const share = std::ceil(static_cast<double>(total) * weight);
  if (!(share >= 1.0))
  {
    return 1;
  }
  if (share >= static_cast<double>(std::numeric_limits<std::size_t>::max() / 2))
  {
    return std::numeric_limits<std::size_t>::max() / 2;
  }
  return static_cast<std::size_t>(share);
}

double log_complement(double p)
{
  return std::log1p(-p);
}

bool heavier(Hypothesis const& a, Hypothesis const& b)
{
  if (a.log_weight != b.log_weight)
  {
    return a.log_weight > b.log_weight;
  }
  if (a.labels != b.labels)
  {
    return a.labels < b.labels;
  }
  return a.history_id < b.history_id;
}

}  // namespace

bool Hypothesis::claims(int measurement) const
{
  return std::find(association.begin(), association.end(), measurement) != association.end();
}

GlmbDensity GlmbDensity::empty(std::uint32_t scan)
{
  GlmbDensity g;
  g.scan = scan;
  g.hypotheses.push_back(Hypothesis{});
  return g;
}

std::vector<double> GlmbDensity::cardinality_distribution() const
{
  std::size_t max_n = 0;
  for (auto const& h : hypotheses)
  {
    max_n = std::max(max_n, h.cardinality());
  }
  std::vector<double> rho(max_n + 1, 0.0);
  for (auto const& h : hypotheses)
  {
    rho[h.cardinality()] += std::exp(h.log_weight);
  }
  return rho;
}

void GlmbDensity::validate(double weight_tolerance) const
{
  if (hypotheses.empty())
  {
    throw std::logic_error("GLMB density has no hypotheses");
  }
  double total = 0.0;
  std::vector<std::pair<std::vector<TrackLabel>, std::uint64_t>> keys;
  keys.reserve(hypotheses.size());
  for (auto const& h : hypotheses)
  {
    if (h.labels.size() != h.tracks.size())
    {
      throw std::logic_error("hypothesis label and track counts differ");
    }
    for (std::size_t i = 0; i < h.labels.size(); ++i)
    {
      if (!h.tracks[i] || h.tracks[i]->label() != h.labels[i])
      {
        throw std::logic_error("hypothesis track does not carry its label");
      }
      if (i > 0 && !(h.labels[i - 1] < h.labels[i]))
      {
        throw std::logic_error("hypothesis labels are not sorted and distinct");
      }
    }
    total += std::exp(h.log_weight);
    keys.emplace_back(h.labels, h.history_id);
  }
  if (std::abs(total - 1.0) > weight_tolerance)
  {
    throw std::logic_error("GLMB weights sum to " + std::to_string(total));
  }
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
  {
    throw std::logic_error("duplicate (labels, history) hypothesis");
  }
}

void FilterConfig::validate() const
{
  if (particles == 0)
  {
    throw std::invalid_argument("particle count must be positive");
  }
  if (!(resample_threshold >= 0.0 && resample_threshold <= 1.0))
  {
    throw std::invalid_argument("resample threshold must lie in [0, 1]");
  }
  if (total_assignments == 0 || survival_subsets == 0 || birth_subsets == 0 || predicted_hypotheses == 0 ||
      max_hypotheses == 0)
  {
    throw std::invalid_argument("truncation budgets must be positive");
  }
  if (!(min_weight >= 0.0 && min_weight < 1.0))
  {
    throw std::invalid_argument("min_weight must lie in [0, 1)");
  }
}

void normalize_log_weights(std::vector<Hypothesis>& hypotheses)
{
  std::vector<double> lw;
  lw.reserve(hypotheses.size());
  for (auto const& h : hypotheses)
  {
    lw.push_back(h.log_weight);
  }
  double const norm = log_sum_exp(lw);
  if (!std::isfinite(norm))
  {
    throw std::runtime_error("every GLMB hypothesis has zero weight");
  }
  for (auto& h : hypotheses)
  {
    h.log_weight -= norm;
  }
}

GlmbDensity glmb_update(GlmbDensity const& prior, std::span<Measurement const> Z, SensorModel const& sensor,
                        FilterConfig const& config, std::uint64_t stream_seed)
{
  UpdateTable table{ Z, sensor, config, prior.scan, stream_seed };

  std::vector<double> prior_lw;
  for (auto const& h : prior.hypotheses)
  {
    prior_lw.push_back(h.log_weight);
  }
  double const prior_norm = log_sum_exp(prior_lw);

  auto const z_count = static_cast<Eigen::Index>(Z.size());
  GlmbDensity posterior;
  posterior.scan = prior.scan;
  for (auto const& h : prior.hypotheses)
  {
    auto const n = static_cast<Eigen::Index>(h.cardinality());
    std::vector<std::size_t> entries;
    entries.reserve(h.tracks.size());
    Eigen::MatrixXd detect(n, z_count);
    Eigen::VectorXd miss(n);
    for (Eigen::Index r = 0; r < n; ++r)
    {
      auto const e = table.entry(h.tracks[static_cast<std::size_t>(r)]);
      entries.push_back(e);
      miss(r) = -table.log_eta(e, 0);
      for (Eigen::Index j = 0; j < z_count; ++j)
      {
        detect(r, j) = -table.log_eta(e, static_cast<int>(j) + 1);
      }
    }
    double const weight = std::exp(h.log_weight - prior_norm);
    auto const budget = proportional_budget(config.total_assignments, weight);

    std::vector<RankedAssociation> maps;
    try
    {
      maps = ranked_associations(detect, miss, budget);
    }
    catch (std::invalid_argument const&)
    {
      continue;  // no association with non-zero likelihood
    }
    for (auto& ra : maps)
    {
      Hypothesis child;
      child.labels = h.labels;
      child.tracks.reserve(h.tracks.size());
      for (std::size_t r = 0; r < h.tracks.size(); ++r)
      {
        child.tracks.push_back(table.posterior(entries[r], ra.map[r]));
      }
      child.history_id = history_after_update(h, ra.map);
      child.log_weight = h.log_weight - ra.cost;
      child.association = std::move(ra.map);
      posterior.hypotheses.push_back(std::move(child));
    }
  }
  normalize_log_weights(posterior.hypotheses);
  return posterior;
}

GlmbDensity glmb_predict(GlmbDensity const& posterior, std::span<BirthComponent const> births,
                         MotionModel const& motion, SurvivalModel const& survival, FilterConfig const& config,
                         std::uint64_t stream_seed)
{
  std::uint32_t const next_scan = posterior.scan + 1;

  // Birth factor w_B, shared by every parent hypothesis.
  std::vector<std::size_t> candidates;
  std::vector<std::size_t> mandatory_births;
  std::vector<double> birth_log_ratio;
  double birth_log_base = 0.0;
  for (std::size_t b = 0; b < births.size(); ++b)
  {
    double const r = births[b].existence;
    if (!(r >= 0.0 && r <= 1.0))
    {
      throw std::invalid_argument("birth existence outside [0, 1]");
    }
    if (r >= 1.0)
    {
      mandatory_births.push_back(b);
    }
    else if (r > 0.0)
    {
      candidates.push_back(b);
      birth_log_ratio.push_back(std::log(r) - log_complement(r));
      birth_log_base += log_complement(r);
    }
  }
  auto birth_subsets = k_best_subsets_log(birth_log_ratio, birth_log_base, config.birth_subsets);
  for (auto& s : birth_subsets)
  {
    for (auto& item : s.items)
    {
      item = candidates[item];
    }
    s.items.insert(s.items.end(), mandatory_births.begin(), mandatory_births.end());
    std::sort(s.items.begin(), s.items.end());
  }

  std::vector<double> lw;
  for (auto const& h : posterior.hypotheses)
  {
    lw.push_back(h.log_weight);
  }
  double const norm = log_sum_exp(lw);

  struct Predicted
  {
    double eta;
    TrackDensityPtr density;
  };
  std::unordered_map<LabeledParticleDensity const*, Predicted> cache;
  StateFunction const survival_fn = [&survival](Kinematic const& x) { return survival(x); };
  auto predict = [&](TrackDensityPtr const& p) -> Predicted const& {
    auto it = cache.find(p.get());
    if (it != cache.end())
    {
      return it->second;
    }
    double const eta = inner_product(*p, survival_fn);
    Predicted result{ eta, nullptr };
    if (eta > 0.0)
    {
      std::uint64_t const id = derive_seed(p->id(), { kPredictTag, next_scan });
      Rng rng = make_rng(stream_seed, { id });
      auto prediction = predict_track(*p, motion, survival_fn, rng, id);
      result.eta = prediction.eta_survival;
      result.density = std::make_shared<LabeledParticleDensity const>(std::move(prediction.density));
    }
    return cache.emplace(p.get(), std::move(result)).first->second;
  };

  GlmbDensity predicted;
  predicted.scan = next_scan;
  for (auto const& h : posterior.hypotheses)
  {
    std::vector<std::size_t> mandatory;
    std::vector<std::size_t> optional;
    std::vector<double> log_ratio;
    double log_base = h.log_weight;
    std::vector<TrackDensityPtr> propagated(h.tracks.size());
    for (std::size_t i = 0; i < h.tracks.size(); ++i)
    {
      auto const& pr = predict(h.tracks[i]);
      propagated[i] = pr.density;
      if (pr.eta >= 1.0)
      {
        mandatory.push_back(i);
      }
      else if (pr.eta > 0.0)
      {
        optional.push_back(i);
        log_ratio.push_back(std::log(pr.eta) - log_complement(pr.eta));
        log_base += log_complement(pr.eta);
      }
    }
    auto survivors = k_best_subsets_log(log_ratio, log_base, config.survival_subsets);

    // Cross survival and birth choices, keeping the heaviest within this parent's budget.
    struct Pair
    {
      double log_weight;
      std::size_t s;
      std::size_t b;
    };
    std::vector<Pair> pairs;
    pairs.reserve(survivors.size() * birth_subsets.size());
    for (std::size_t s = 0; s < survivors.size(); ++s)
    {
      for (std::size_t b = 0; b < birth_subsets.size(); ++b)
      {
        pairs.push_back(Pair{ survivors[s].weight + birth_subsets[b].weight, s, b });
      }
    }
    auto const budget =
        std::min(pairs.size(), proportional_budget(config.predicted_hypotheses, std::exp(h.log_weight - norm)));
    auto const by_weight = [](Pair const& a, Pair const& b) {
      if (a.log_weight != b.log_weight)
      {
        return a.log_weight > b.log_weight;
      }
      return std::tie(a.s, a.b) < std::tie(b.s, b.b);
    };
    std::partial_sort(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(budget), pairs.end(), by_weight);

    for (std::size_t k = 0; k < budget; ++k)
    {
      auto const& pair = pairs[k];
      std::vector<std::size_t> kept = mandatory;
      for (auto item : survivors[pair.s].items)
      {
        kept.push_back(optional[item]);
      }
      std::sort(kept.begin(), kept.end());
      Hypothesis child;
      child.history_id = h.history_id;
      child.log_weight = pair.log_weight;
      for (auto i : kept)
      {
        child.labels.push_back(h.labels[i]);
        child.tracks.push_back(propagated[i]);
      }
      for (auto b : birth_subsets[pair.b].items)
      {
        child.labels.push_back(births[b].label);
        child.tracks.push_back(births[b].density);
      }
      if (!std::is_sorted(child.labels.begin(), child.labels.end()))
      {
        std::vector<std::size_t> order(child.labels.size());
        for (std::size_t i = 0; i < order.size(); ++i)
        {
          order[i] = i;
        }
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return child.labels[a] < child.labels[b]; });
        Hypothesis sorted;
        for (auto i : order)
        {
          sorted.labels.push_back(child.labels[i]);
          sorted.tracks.push_back(child.tracks[i]);
        }
        child.labels = std::move(sorted.labels);
        child.tracks = std::move(sorted.tracks);
      }
      predicted.hypotheses.push_back(std::move(child));
    }
  }
  normalize_log_weights(predicted.hypotheses);
  return predicted;
}

GlmbDensity prune_and_cap(GlmbDensity const& g, double min_weight, std::size_t max_hypotheses)
{
  GlmbDensity out;
  out.scan = g.scan;
  out.hypotheses = g.hypotheses;
  normalize_log_weights(out.hypotheses);
  std::sort(out.hypotheses.begin(), out.hypotheses.end(), heavier);
  double const log_min = min_weight > 0.0 ? std::log(min_weight) : -std::numeric_limits<double>::infinity();
  std::size_t keep = 1;
  while (keep < out.hypotheses.size() && keep < max_hypotheses && out.hypotheses[keep].log_weight >= log_min)
  {
    ++keep;
  }
  out.hypotheses.resize(keep);
  normalize_log_weights(out.hypotheses);
  return out;
}

Estimate extract_estimates(GlmbDensity const& g)
{
  Estimate est;
  est.cardinality = g.cardinality_distribution();
  std::size_t n_star = 0;
  for (std::size_t n = 1; n < est.cardinality.size(); ++n)
  {
    if (est.cardinality[n] > est.cardinality[n_star])
    {
      n_star = n;
    }
  }
  Hypothesis const* best = nullptr;
  for (auto const& h : g.hypotheses)
  {
    if (h.cardinality() == n_star && (best == nullptr || heavier(h, *best)))
    {
      best = &h;
    }
  }
  if (best != nullptr)
  {
    for (std::size_t i = 0; i < best->labels.size(); ++i)
    {
      est.states.push_back(LabeledState{ best->tracks[i]->mean(), best->labels[i] });
    }
  }
  return est;
}

}  // namespace mdbglmb
