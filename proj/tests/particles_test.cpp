#include "mdbglmb/particles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

using namespace mdbglmb;

namespace {

LabeledParticleDensity random_density(int n, Rng& rng, bool uniform = false)
{
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  ParticleStates states(5, n);
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i)
  {
    for (int d = 0; d < 5; ++d)
    {
      states(d, i) = 100.0 * normal(rng);
    }
    w(i) = uniform ? 1.0 : unif(rng) + 0.01;
  }
  return LabeledParticleDensity{ TrackLabel{ 0, 0 }, states, w };
}

}  // namespace

TEST(ParticleDensity, NormalizesAndValidates)
{
  ParticleStates s = ParticleStates::Zero(5, 3);
  LabeledParticleDensity p{ TrackLabel{}, s, Eigen::Vector3d(1.0, 2.0, 1.0) };
  EXPECT_NEAR(p.weights().sum(), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(p.weights()(1), 0.5);
  EXPECT_THROW((LabeledParticleDensity{ TrackLabel{}, ParticleStates(5, 0) }), std::invalid_argument);
  EXPECT_THROW((LabeledParticleDensity{ TrackLabel{}, s, Eigen::Vector3d(0.0, 0.0, 0.0) }), std::invalid_argument);
  ParticleStates bad = s;
  bad(0, 0) = std::nan("");
  EXPECT_THROW((LabeledParticleDensity{ TrackLabel{}, bad }), std::invalid_argument);
}

TEST(InnerProduct, ConstantsAndNormalization)
{
  Rng rng(1);
  auto const p = random_density(50, rng);
  EXPECT_NEAR(inner_product(p, [](auto const&) { return 1.0; }), 1.0, 1e-12);
  EXPECT_NEAR(inner_product(p, [](auto const&) { return 3.5; }), 3.5, 1e-12);
  EXPECT_NEAR(inner_product(p, [](auto const&) { return 0.99; }), 0.99, 1e-12);
}

TEST(PredictTrack, ConstantSurvival)
{
  Rng rng(2);
  auto const p = random_density(40, rng);
  auto const pred = predict_track(p, MotionModel{}, [](auto const&) { return 0.99; }, rng);
  EXPECT_NEAR(pred.eta_survival, 0.99, 1e-12);
  EXPECT_EQ(pred.density.size(), p.size());
  EXPECT_EQ(pred.density.label(), p.label());
}

TEST(PredictTrack, DeterministicKernelCommutesWithInnerProduct)
{
  Rng rng(3);
  auto const p = random_density(60, rng);
  MotionModel const still{ 1.0, 0.0, 0.0 };
  auto const pred = predict_track(p, still, [](auto const&) { return 1.0; }, rng);
  EXPECT_DOUBLE_EQ(pred.eta_survival, 1.0);
  for (Eigen::Index i = 0; i < p.size(); ++i)
  {
    Kinematic const expected = ct_transition_mean(p.states().col(i), 1.0);
    EXPECT_EQ(Kinematic(pred.density.states().col(i)), expected);
    EXPECT_DOUBLE_EQ(pred.density.weights()(i), p.weights()(i));
  }
  auto f = [](Kinematic const& x) { return x(kPx) * x(kPy) + x(kVx); };
  double const lhs = inner_product(pred.density, f);
  double const rhs = inner_product(p, [&](Kinematic const& x) { return f(ct_transition_mean(x, 1.0)); });
  EXPECT_NEAR(lhs, rhs, 1e-9 * (1.0 + std::abs(rhs)));
}

TEST(PredictTrack, StateDependentSurvivalReweights)
{
  Rng rng(4);
  auto const p = random_density(30, rng);
  auto survival = [](Kinematic const& x) { return x(kPx) > 0.0 ? 0.9 : 0.5; };
  auto const pred = predict_track(p, MotionModel{ 1.0, 0.0, 0.0 }, survival, rng);
  EXPECT_NEAR(pred.eta_survival, inner_product(p, survival), 1e-12);
  for (Eigen::Index i = 0; i < p.size(); ++i)
  {
    EXPECT_NEAR(pred.density.weights()(i), p.weights()(i) * survival(p.states().col(i)) / pred.eta_survival, 1e-12);
  }
}

TEST(PredictTrack, ZeroSurvivalThrows)
{
  Rng rng(5);
  auto const p = random_density(10, rng);
  EXPECT_THROW(predict_track(p, MotionModel{}, [](auto const&) { return 0.0; }, rng), std::domain_error);
}

TEST(UpdateTrack, MissedDetectionBranch)
{
  Rng rng(6);
  auto const p = random_density(25, rng);
  auto const upd = update_track(p, [](auto const&) { return 1.0 - 0.98; });
  EXPECT_NEAR(std::exp(upd.log_eta), 0.02, 1e-12);
  EXPECT_LT((upd.density.weights() - p.weights()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(upd.density.states(), p.states());
}

TEST(UpdateTrack, ConstantLikelihoodAndRenormalization)
{
  Rng rng(7);
  auto const p = random_density(25, rng);
  auto const upd = update_track(p, [](auto const&) { return 4.0; });
  EXPECT_NEAR(std::exp(upd.log_eta), 4.0, 1e-12);
  auto const varied = update_track(p, [](Kinematic const& x) { return std::exp(-x.squaredNorm() / 1e5); });
  EXPECT_NEAR(inner_product(varied.density, [](auto const&) { return 1.0; }), 1.0, 1e-9);
}

TEST(UpdateTrack, IndicatorCollapsesToPointMass)
{
  Rng rng(8);
  auto const p = random_density(10, rng);
  Kinematic const chosen = p.states().col(3);
  auto const upd = update_track(p, [&](Kinematic const& x) { return x == chosen ? 1.0 : 0.0; });
  EXPECT_DOUBLE_EQ(upd.density.weights()(3), 1.0);
  EXPECT_EQ(upd.density.mean(), chosen);
  EXPECT_THROW(update_track(p, [](auto const&) { return 0.0; }), std::domain_error);
}

TEST(Resample, UniformInputKeepsUniformWeights)
{
  Rng rng(9);
  auto const p = random_density(20, rng, true);
  auto const r = resample(p, 20, rng);
  EXPECT_EQ(r.size(), 20);
  for (Eigen::Index i = 0; i < r.size(); ++i)
  {
    EXPECT_DOUBLE_EQ(r.weights()(i), 1.0 / 20.0);
    bool found = false;
    for (Eigen::Index j = 0; j < p.size(); ++j)
    {
      found = found || Kinematic(r.states().col(i)) == Kinematic(p.states().col(j));
    }
    EXPECT_TRUE(found);
  }
}

TEST(Resample, PointMass)
{
  ParticleStates s = ParticleStates::Random(5, 4);
  LabeledParticleDensity p{ TrackLabel{}, s, Eigen::Vector4d(0.0, 0.0, 1.0, 0.0) };
  Rng rng(10);
  auto const r = resample(p, 7, rng);
  for (Eigen::Index i = 0; i < 7; ++i)
  {
    EXPECT_EQ(Kinematic(r.states().col(i)), Kinematic(s.col(2)));
  }
}

TEST(Resample, Unbiased)
{
  Rng rng(11);
  auto const p = random_density(30, rng);
  auto stat = [](Kinematic const& x) { return x(kPx); };
  double const target = inner_product(p, stat);
  constexpr int draws = 10000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int d = 0; d < draws; ++d)
  {
    double const v = inner_product(resample(p, 30, rng), stat);
    sum += v;
    sum2 += v * v;
  }
  double const mean = sum / draws;
  double const se = std::sqrt((sum2 / draws - mean * mean) / draws);
  EXPECT_LT(std::abs(mean - target), 3.0 * se);
}

TEST(LogSumExp, HandlesExtremes)
{
  std::vector<double> v{ -1000.0, -1000.0 };
  EXPECT_NEAR(log_sum_exp(v), -1000.0 + std::log(2.0), 1e-12);
  std::vector<double> none{ -INFINITY, -INFINITY };
  EXPECT_EQ(log_sum_exp(none), -INFINITY);
}
