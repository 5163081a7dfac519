#include "mdbglmb/metrics.hpp"

#include "mdbglmb/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdbglmb {

void OspaParams::validate() const
{
  if (!(cutoff > 0.0))
  {
    throw std::invalid_argument("OSPA cutoff must be positive");
  }
  if (!(order >= 1.0))
  {
    throw std::invalid_argument("OSPA order must be at least 1");
  }
}

double ospa(std::span<Position const> X, std::span<Position const> Y, OspaParams const& params)
{
  if (X.size() > Y.size())
  {
    return ospa(Y, X, params);
  }
  auto const m = X.size();
  auto const n = Y.size();
  if (n == 0)
  {
    return 0.0;
  }
  double const cp = std::pow(params.cutoff, params.order);
  double localization = 0.0;
  if (m > 0)
  {
    CostMatrix costs(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < m; ++i)
    {
      for (std::size_t j = 0; j < n; ++j)
      {
        double const d = std::min(params.cutoff, (X[i] - Y[j]).norm());
        costs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::pow(d, params.order);
      }
    }
    localization = solve_assignment(costs)->cost;
  }
  double const total = (localization + cp * static_cast<double>(n - m)) / static_cast<double>(n);
  return std::min(params.cutoff, std::pow(total, 1.0 / params.order));
}

std::vector<Position> positions(std::span<LabeledState const> X)
{
  std::vector<Position> out;
  out.reserve(X.size());
  for (auto const& x : X)
  {
    out.emplace_back(x.kinematic(kPx), x.kinematic(kPy));
  }
  return out;
}

CardinalityStats cardinality_moments(std::span<double const> rho)
{
  CardinalityStats s;
  double second = 0.0;
  for (std::size_t n = 0; n < rho.size(); ++n)
  {
    s.mean += static_cast<double>(n) * rho[n];
    second += static_cast<double>(n * n) * rho[n];
  }
  s.std = std::sqrt(std::max(0.0, second - s.mean * s.mean));
  return s;
}

std::vector<CardinalityStats> cardinality_series(std::span<std::vector<double> const> estimates,
                                                 std::span<std::size_t const> truth)
{
  if (estimates.size() != truth.size())
  {
    throw std::invalid_argument("cardinality series lengths differ");
  }
  std::vector<CardinalityStats> out;
  out.reserve(estimates.size());
  for (std::size_t k = 0; k < estimates.size(); ++k)
  {
    auto s = cardinality_moments(estimates[k]);
    s.truth = static_cast<double>(truth[k]);
    out.push_back(s);
  }
  return out;
}

}  // namespace mdbglmb
