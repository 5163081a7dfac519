#include "mdbglmb/glmb.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

using namespace mdbglmb;

namespace {

Kinematic at(double px, double py)
{
  return (Kinematic() << px, 0.0, py, 0.0, 0.0).finished();
}

Hypothesis hypothesis(std::vector<TrackDensityPtr> tracks, double weight, std::uint64_t history)
{
  Hypothesis h;
  std::sort(tracks.begin(), tracks.end(), [](auto const& a, auto const& b) { return a->label() < b->label(); });
  for (auto const& t : tracks)
  {
    h.labels.push_back(t->label());
  }
  h.tracks = std::move(tracks);
  h.history_id = history;
  h.log_weight = std::log(weight);
  return h;
}

FilterConfig exhaustive(std::size_t particles)
{
  FilterConfig c;
  c.particles = particles;
  c.resample_threshold = 0.0;
  c.total_assignments = 1000000;
  c.survival_subsets = 1000;
  c.birth_subsets = 1000;
  c.predicted_hypotheses = 1000000;
  return c;
}

BirthComponent birth(std::uint32_t scan, std::uint32_t index, double r, Kinematic const& x, Rng& rng)
{
  BirthComponent b;
  b.label = TrackLabel{ scan, index };
  b.existence = r;
  b.source = measurement_mean(x);
  b.density = oracle::random_track(b.label, x, 30.0, 20, rng, 900 + index);
  return b;
}

}  // namespace

TEST(GlmbUpdate, EmptyPriorExplainsEverythingAsClutter)
{
  SensorModel const s;
  std::vector<Measurement> Z{ { 0.1, 500.0 }, { -0.3, 900.0 } };
  auto const post = glmb_update(GlmbDensity::empty(0), Z, s, FilterConfig{}, 1);
  ASSERT_EQ(post.hypotheses.size(), 1U);
  EXPECT_TRUE(post.hypotheses[0].labels.empty());
  EXPECT_DOUBLE_EQ(post.hypotheses[0].log_weight, 0.0);
  EXPECT_FALSE(post.hypotheses[0].claims(1));
  EXPECT_FALSE(post.hypotheses[0].claims(2));
}

TEST(GlmbUpdate, NoMeasurementsMissedDetectionOnly)
{
  SensorModel const s;
  Rng rng(1);
  auto const track = oracle::random_track(TrackLabel{ 0, 0 }, at(3000.0, 4000.0), 500.0, 40, rng, 7);
  GlmbDensity prior;
  prior.hypotheses.push_back(hypothesis({ track }, 1.0, 3));
  auto const post = glmb_update(prior, {}, s, exhaustive(40), 1);
  ASSERT_EQ(post.hypotheses.size(), 1U);
  auto const& h = post.hypotheses[0];
  EXPECT_EQ(h.association, (std::vector<int>{ 0 }));
  EXPECT_NEAR(h.log_weight, 0.0, 1e-15);
  auto const& upd = *h.tracks[0];
  double norm = 0.0;
  for (Eigen::Index i = 0; i < track->size(); ++i)
  {
    norm += track->weights()(i) * (1.0 - detection_probability(track->states().col(i), s));
  }
  for (Eigen::Index i = 0; i < track->size(); ++i)
  {
    double const expected = track->weights()(i) * (1.0 - detection_probability(track->states().col(i), s)) / norm;
    EXPECT_NEAR(upd.weights()(i), expected, 1e-12);
  }
}

TEST(GlmbUpdate, TwoSeparatedTracksPickTheirMeasurements)
{
  SensorModel s;
  s.clutter_rate = 1.0;
  Rng rng(2);
  auto const a = oracle::random_track(TrackLabel{ 0, 0 }, at(-800.0, 1000.0), 10.0, 30, rng, 1);
  auto const b = oracle::random_track(TrackLabel{ 0, 1 }, at(800.0, 1000.0), 10.0, 30, rng, 2);
  GlmbDensity prior;
  prior.hypotheses.push_back(hypothesis({ a, b }, 1.0, 0));
  std::vector<Measurement> Z{ measurement_mean(at(800.0, 1000.0)), measurement_mean(at(-800.0, 1000.0)) };
  auto const post = glmb_update(prior, Z, s, exhaustive(30), 1);
  auto const top = std::max_element(post.hypotheses.begin(), post.hypotheses.end(),
                                    [](auto const& x, auto const& y) { return x.log_weight < y.log_weight; });
  EXPECT_EQ(top->association, (std::vector<int>{ 2, 1 }));
  EXPECT_LE(oracle::max_update_error(post, oracle::update_weights(prior, Z, s)), 1e-9);
  EXPECT_NO_THROW(post.validate());
}

TEST(GlmbUpdate, RandomInstancesMatchOracle)
{
  SensorModel const s;
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> pos(-1500.0, 1500.0);
  for (int trial = 0; trial < 40; ++trial)
  {
    Rng rng(gen());
    GlmbDensity prior;
    std::vector<TrackDensityPtr> pool;
    for (std::uint32_t i = 0; i < 3; ++i)
    {
      pool.push_back(oracle::random_track(TrackLabel{ 0, i }, at(pos(rng), 1000.0 + pos(rng) / 2.0), 40.0, 15, rng, i + 1));
    }
    prior.hypotheses.push_back(hypothesis({}, 0.2, 10));
    prior.hypotheses.push_back(hypothesis({ pool[0] }, 0.3, 11));
    prior.hypotheses.push_back(hypothesis({ pool[0], pool[1] }, 0.4, 12));
    prior.hypotheses.push_back(hypothesis({ pool[1], pool[2] }, 0.1, 13));
    std::vector<Measurement> Z;
    int const nz = static_cast<int>(gen() % 4);
    for (int j = 0; j < nz; ++j)
    {
      Z.push_back(oracle::noisy_measurement(pool[static_cast<std::size_t>(j) % 3]->mean(), s, rng));
    }
    auto const post = glmb_update(prior, Z, s, exhaustive(15), gen());
    EXPECT_LE(oracle::max_update_error(post, oracle::update_weights(prior, Z, s)), 1e-9);
    EXPECT_NO_THROW(post.validate());
  }
}

TEST(GlmbUpdate, MeasurementPermutationInvariance)
{
  SensorModel const s;
  Rng rng(4);
  auto const a = oracle::random_track(TrackLabel{ 0, 0 }, at(-300.0, 1000.0), 30.0, 20, rng, 1);
  auto const b = oracle::random_track(TrackLabel{ 0, 1 }, at(-250.0, 1050.0), 30.0, 20, rng, 2);
  GlmbDensity prior;
  prior.hypotheses.push_back(hypothesis({ a, b }, 1.0, 0));
  std::vector<Measurement> Z{ oracle::noisy_measurement(a->mean(), s, rng), oracle::noisy_measurement(b->mean(), s, rng),
                              Measurement{ 0.5, 700.0 } };
  std::vector<int> const perm{ 2, 0, 1 };  // Zp[k] = Z[perm[k]]
  std::vector<Measurement> Zp;
  for (int k : perm)
  {
    Zp.push_back(Z[static_cast<std::size_t>(k)]);
  }
  auto const p1 = oracle::update_table(glmb_update(prior, Z, s, exhaustive(20), 1));
  auto const p2 = oracle::update_table(glmb_update(prior, Zp, s, exhaustive(20), 1));
  ASSERT_EQ(p1.size(), p2.size());
  for (auto const& [key, w] : p2)
  {
    auto mapped = key;
    for (auto& j : mapped.second)
    {
      j = j == 0 ? 0 : perm[static_cast<std::size_t>(j - 1)] + 1;
    }
    ASSERT_TRUE(p1.contains(mapped));
    EXPECT_NEAR(p1.at(mapped), w, 1e-12);
  }
}

TEST(GlmbUpdate, LabelsNeverMutate)
{
  SensorModel const s;
  Rng rng(5);
  auto const a = oracle::random_track(TrackLabel{ 2, 4 }, at(100.0, 800.0), 30.0, 20, rng, 1);
  GlmbDensity prior;
  prior.hypotheses.push_back(hypothesis({ a }, 1.0, 0));
  std::vector<Measurement> Z{ oracle::noisy_measurement(a->mean(), s, rng) };
  for (auto const& h : glmb_update(prior, Z, s, exhaustive(20), 1).hypotheses)
  {
    EXPECT_EQ(h.labels, prior.hypotheses[0].labels);
    EXPECT_EQ(h.tracks[0]->label(), (TrackLabel{ 2, 4 }));
  }
}

TEST(GlmbPredict, CertainSurvivalKeepsLabelSets)
{
  Rng rng(6);
  auto const a = oracle::random_track(TrackLabel{ 0, 0 }, at(0.0, 500.0), 10.0, 10, rng, 1);
  auto const b = oracle::random_track(TrackLabel{ 0, 1 }, at(100.0, 500.0), 10.0, 10, rng, 2);
  GlmbDensity post;
  post.hypotheses.push_back(hypothesis({ a, b }, 0.6, 1));
  post.hypotheses.push_back(hypothesis({ a }, 0.4, 2));
  auto const pred = glmb_predict(post, {}, MotionModel{}, SurvivalModel{ 1.0 }, exhaustive(10), 1);
  ASSERT_EQ(pred.hypotheses.size(), 2U);
  for (auto const& h : pred.hypotheses)
  {
    if (h.history_id == 1)
    {
      EXPECT_EQ(h.labels.size(), 2U);
      EXPECT_NEAR(std::exp(h.log_weight), 0.6, 1e-12);
    }
    else
    {
      EXPECT_EQ(h.labels.size(), 1U);
      EXPECT_NEAR(std::exp(h.log_weight), 0.4, 1e-12);
    }
    EXPECT_TRUE(h.association.empty());
  }
}

TEST(GlmbPredict, SingleBirthFromEmpty)
{
  Rng rng(7);
  std::vector<BirthComponent> births{ birth(1, 0, 0.15, at(0.0, 1000.0), rng) };
  auto const pred = glmb_predict(GlmbDensity::empty(0), births, MotionModel{}, SurvivalModel{}, exhaustive(10), 1);
  ASSERT_EQ(pred.hypotheses.size(), 2U);
  EXPECT_EQ(pred.scan, 1U);
  for (auto const& h : pred.hypotheses)
  {
    EXPECT_NEAR(std::exp(h.log_weight), h.labels.empty() ? 0.85 : 0.15, 1e-12);
  }
}

TEST(GlmbPredict, SingleTrackSurvival)
{
  Rng rng(8);
  auto const a = oracle::random_track(TrackLabel{ 0, 0 }, at(0.0, 500.0), 10.0, 10, rng, 1);
  GlmbDensity post;
  post.hypotheses.push_back(hypothesis({ a }, 1.0, 1));
  auto cfg = exhaustive(10);
  cfg.survival_subsets = 2;
  auto const pred = glmb_predict(post, {}, MotionModel{}, SurvivalModel{ 0.99 }, cfg, 1);
  ASSERT_EQ(pred.hypotheses.size(), 2U);
  for (auto const& h : pred.hypotheses)
  {
    EXPECT_NEAR(std::exp(h.log_weight), h.labels.empty() ? 0.01 : 0.99, 1e-12);
  }
}

TEST(GlmbPredict, RandomInstancesMatchOracle)
{
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> unif(0.01, 0.99);
  for (int trial = 0; trial < 40; ++trial)
  {
    Rng rng(gen());
    std::vector<TrackDensityPtr> pool;
    for (std::uint32_t i = 0; i < 3; ++i)
    {
      pool.push_back(oracle::random_track(TrackLabel{ i, 0 }, at(100.0 * i, 700.0), 20.0, 8, rng, i + 1));
    }
    GlmbDensity post;
    post.scan = 4;
    post.hypotheses.push_back(hypothesis({}, 0.1, 20));
    post.hypotheses.push_back(hypothesis({ pool[2] }, 0.2, 21));
    post.hypotheses.push_back(hypothesis({ pool[0], pool[1], pool[2] }, 0.5, 22));
    post.hypotheses.push_back(hypothesis({ pool[0], pool[1] }, 0.2, 23));
    std::vector<BirthComponent> births;
    auto const nb = gen() % 3;
    for (std::uint32_t b = 0; b < nb; ++b)
    {
      births.push_back(birth(5, b, unif(gen), at(-500.0, 1200.0), rng));
    }
    double const ps = unif(gen);
    auto const pred = glmb_predict(post, births, MotionModel{}, SurvivalModel{ ps }, exhaustive(8), gen());
    EXPECT_LE(oracle::max_predict_error(pred, oracle::predict_weights(post, births, ps)), 1e-9);
    EXPECT_NO_THROW(pred.validate());
    for (auto const& h : pred.hypotheses)
    {
      for (auto const& l : h.labels)
      {
        bool const known = l.birth_time < 5 || std::any_of(births.begin(), births.end(),
                                                            [&](auto const& b) { return b.label == l; });
        EXPECT_TRUE(known);
      }
    }
  }
}

TEST(PruneAndCap, Examples)
{
  Rng rng(10);
  auto const a = oracle::random_track(TrackLabel{ 0, 0 }, at(0.0, 500.0), 10.0, 5, rng, 1);
  auto const b = oracle::random_track(TrackLabel{ 0, 1 }, at(0.0, 600.0), 10.0, 5, rng, 2);
  GlmbDensity g;
  g.hypotheses.push_back(hypothesis({ a }, 0.3, 1));
  g.hypotheses.push_back(hypothesis({ a, b }, 0.6, 2));
  g.hypotheses.push_back(hypothesis({}, 0.1, 3));

  auto const same = prune_and_cap(g, 1e-5, 10);
  EXPECT_EQ(same.hypotheses.size(), 3U);
  double total = 0.0;
  for (auto const& h : same.hypotheses)
  {
    total += std::exp(h.log_weight);
  }
  EXPECT_NEAR(total, 1.0, 1e-12);

  auto const pruned = prune_and_cap(g, 0.2, 10);
  ASSERT_EQ(pruned.hypotheses.size(), 2U);
  EXPECT_NEAR(std::exp(pruned.hypotheses[0].log_weight), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(std::exp(pruned.hypotheses[1].log_weight), 1.0 / 3.0, 1e-12);

  auto const capped = prune_and_cap(g, 0.0, 1);
  ASSERT_EQ(capped.hypotheses.size(), 1U);
  EXPECT_EQ(capped.hypotheses[0].history_id, 2U);
  EXPECT_NEAR(capped.hypotheses[0].log_weight, 0.0, 1e-15);

  auto const heaviest = prune_and_cap(g, 0.9, 10);
  ASSERT_EQ(heaviest.hypotheses.size(), 1U);
  EXPECT_EQ(heaviest.hypotheses[0].history_id, 2U);
}

TEST(ExtractEstimates, Examples)
{
  auto const empty = extract_estimates(GlmbDensity::empty(0));
  EXPECT_TRUE(empty.states.empty());
  EXPECT_EQ(empty.cardinality, (std::vector<double>{ 1.0 }));

  Kinematic const x0 = (Kinematic() << 12.0, 1.0, 900.0, -2.0, 0.01).finished();
  ParticleStates pm(5, 4);
  for (int i = 0; i < 4; ++i)
  {
    pm.col(i) = x0;
  }
  auto const track = std::make_shared<LabeledParticleDensity const>(TrackLabel{ 3, 1 }, pm);
  GlmbDensity g;
  g.hypotheses.push_back(hypothesis({}, 0.3, 1));
  g.hypotheses.push_back(hypothesis({ track }, 0.7, 2));
  auto const est = extract_estimates(g);
  ASSERT_EQ(est.states.size(), 1U);
  EXPECT_EQ(est.states[0].label, (TrackLabel{ 3, 1 }));
  EXPECT_EQ(est.states[0].kinematic, x0);
  ASSERT_EQ(est.cardinality.size(), 2U);
  EXPECT_NEAR(est.cardinality[0], 0.3, 1e-12);
  EXPECT_NEAR(est.cardinality[1], 0.7, 1e-12);
}

TEST(ExtractEstimates, TiesPickSmallestCardinality)
{
  Rng rng(11);
  auto const a = oracle::random_track(TrackLabel{ 0, 0 }, at(0.0, 500.0), 10.0, 5, rng, 1);
  GlmbDensity g;
  g.hypotheses.push_back(hypothesis({ a }, 0.5, 1));
  g.hypotheses.push_back(hypothesis({}, 0.5, 2));
  EXPECT_TRUE(extract_estimates(g).states.empty());
}

TEST(GlmbDensity, ValidateDetectsBrokenInvariants)
{
  Rng rng(12);
  auto const a = oracle::random_track(TrackLabel{ 0, 0 }, at(0.0, 500.0), 10.0, 5, rng, 1);
  GlmbDensity g;
  g.hypotheses.push_back(hypothesis({ a }, 0.5, 1));
  g.hypotheses.push_back(hypothesis({ a }, 0.5, 1));
  EXPECT_THROW(g.validate(), std::logic_error);
  g.hypotheses[1].history_id = 2;
  EXPECT_NO_THROW(g.validate());
  g.hypotheses[1].log_weight = std::log(0.6);
  EXPECT_THROW(g.validate(), std::logic_error);
  auto const rho = GlmbDensity::empty(0).cardinality_distribution();
  EXPECT_EQ(rho, (std::vector<double>{ 1.0 }));
}

TEST(NormalizeLogWeights, AllZeroThrows)
{
  std::vector<Hypothesis> hs(2);
  hs[0].log_weight = -INFINITY;
  hs[1].log_weight = -INFINITY;
  EXPECT_THROW(normalize_log_weights(hs), std::runtime_error);
}
