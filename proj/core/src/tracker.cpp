#include "mdbglmb/tracker.hpp"

#include "mdbglmb/random.hpp"

namespace mdbglmb {

namespace {

constexpr std::uint64_t kPredictStream = 1;
constexpr std::uint64_t kUpdateStream = 2;
constexpr std::uint64_t kBirthStream = 3;

}  // namespace

Tracker::Tracker(TrackerModels models, FilterConfig filter, MdbConfig birth, std::uint64_t seed,
                 std::uint32_t first_scan)
  : models_{ models }, filter_{ filter }, birth_{ birth }, seed_{ seed }, scan_{ first_scan }
{
  models_.motion.validate();
  models_.sensor.validate();
  filter_.validate();
  birth_.validate();
}

TrackerStep Tracker::step(std::span<Measurement const> Z)
{
  GlmbDensity prior = started_ ? glmb_predict(posterior_, births_, models_.motion, models_.survival, filter_,
                                              derive_seed(seed_, { kPredictStream, scan_ }))
                               : GlmbDensity::empty(scan_);
  started_ = true;
  posterior_ = prune_and_cap(glmb_update(prior, Z, models_.sensor, filter_, derive_seed(seed_, { kUpdateStream, scan_ })),
                             filter_.min_weight, filter_.max_hypotheses);

  TrackerStep out;
  out.scan = scan_;
  out.estimate = extract_estimates(posterior_);
  out.hypotheses = posterior_.hypotheses.size();
  out.newborn = newborn_likelihoods(Z.size(), posterior_);
  out.birth_existence = birth_existences(out.newborn, birth_);
  births_.clear();
  if (births_enabled_)
  {
    births_ = make_birth_components(Z, out.birth_existence, out.newborn, birth_, scan_ + 1, labels_,
                                    derive_seed(seed_, { kBirthStream, scan_ }));
  }
  ++scan_;
  return out;
}

}  // namespace mdbglmb
