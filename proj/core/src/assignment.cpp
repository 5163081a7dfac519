#include "mdbglmb/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <utility>

namespace mdbglmb {

namespace {

double assignment_cost(CostMatrix const& costs, std::vector<int> const& columns)
{
  double total = 0.0;
  for (std::size_t r = 0; r < columns.size(); ++r)
  {
    total += costs(static_cast<Eigen::Index>(r), columns[r]);
  }
  return total;
}

struct MurtyNode
{
  CostMatrix costs;
  Assignment solution;
};

struct NodeOrder
{
  // priority_queue pops the largest; invert to pop the cheapest, then the lexicographically smallest.
  bool operator()(MurtyNode const& a, MurtyNode const& b) const
  {
    if (a.solution.cost != b.solution.cost)
    {
      return a.solution.cost > b.solution.cost;
    }
    return a.solution.columns > b.solution.columns;
  }
};

}  // namespace

std::optional<Assignment> solve_assignment(CostMatrix const& costs)
{
  auto const n = static_cast<int>(costs.rows());
  auto const m = static_cast<int>(costs.cols());
  if (n > m)
  {
    throw std::invalid_argument("assignment needs at least as many columns as rows");
  }
  if (n == 0)
  {
    return Assignment{};
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials; column 0 is the virtual source of each augmentation.
  std::vector<double> u(n + 1, 0.0);
  std::vector<double> v(m + 1, 0.0);
  std::vector<int> owner(m + 1, 0);
  std::vector<int> way(m + 1, 0);
  std::vector<double> minv(m + 1);
  std::vector<char> used(m + 1);
  for (int i = 1; i <= n; ++i)
  {
    owner[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do
    {
      used[j0] = 1;
      int const i0 = owner[j0];
      double delta = inf;
      int j1 = -1;
      for (int j = 1; j <= m; ++j)
      {
        if (used[j])
        {
          continue;
        }
        double const c = costs(i0 - 1, j - 1);
        if (c != inf)
        {
          double const reduced = c - u[i0] - v[j];
          if (reduced < minv[j])
          {
            minv[j] = reduced;
            way[j] = j0;
          }
        }
        if (minv[j] < delta)
        {
          delta = minv[j];
          j1 = j;
        }
      }
      if (j1 < 0)
      {
        return std::nullopt;
      }
      for (int j = 0; j <= m; ++j)
      {
        if (used[j])
        {
          u[owner[j]] += delta;
          v[j] -= delta;
        }
        else if (minv[j] != inf)
        {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do
    {
      int const j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Assignment result;
  result.columns.assign(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= m; ++j)
  {
    if (owner[j] != 0)
    {
      result.columns[static_cast<std::size_t>(owner[j] - 1)] = j - 1;
    }
  }
  result.cost = assignment_cost(costs, result.columns);
  return result;
}

std::vector<Assignment> ranked_assignments(CostMatrix const& costs, std::size_t m)
{
  std::vector<Assignment> out;
  if (m == 0)
  {
    return out;
  }
  auto first = solve_assignment(costs);
  if (!first)
  {
    throw std::invalid_argument("cost matrix admits no feasible assignment");
  }
  std::priority_queue<MurtyNode, std::vector<MurtyNode>, NodeOrder> queue;
  queue.push(MurtyNode{ costs, std::move(*first) });
  auto const rows = costs.rows();
  while (!queue.empty() && out.size() < m)
  {
    MurtyNode node = queue.top();
    queue.pop();
    out.push_back(node.solution);
    if (out.size() == m)
    {
      break;
    }
    // Partition the node's solution space: child r forbids the r-th pairing and fixes pairings 0..r-1.
    CostMatrix partition = node.costs;
    for (Eigen::Index r = 0; r < rows; ++r)
    {
      auto const col = node.solution.columns[static_cast<std::size_t>(r)];
      CostMatrix child = partition;
      child(r, col) = kForbidden;
      if (auto solution = solve_assignment(child))
      {
        // Report the cost against the original matrix so that ties compare exactly.
        solution->cost = assignment_cost(costs, solution->columns);
        queue.push(MurtyNode{ std::move(child), std::move(*solution) });
      }
      // Fix row r to `col` in the remaining partitions.
      double const keep = partition(r, col);
      partition.row(r).setConstant(kForbidden);
      partition.col(col).setConstant(kForbidden);
      partition(r, col) = keep;
    }
  }
  return out;
}

CostMatrix association_cost_matrix(Eigen::MatrixXd const& detect, Eigen::VectorXd const& miss)
{
  auto const n = detect.rows();
  auto const z = detect.cols();
  if (miss.size() != n)
  {
    throw std::invalid_argument("missed-detection cost count does not match track count");
  }
  CostMatrix costs = CostMatrix::Constant(n, z + n, kForbidden);
  costs.leftCols(z) = detect;
  for (Eigen::Index r = 0; r < n; ++r)
  {
    costs(r, z + r) = miss(r);
  }
  return costs;
}

std::vector<RankedAssociation> ranked_associations(Eigen::MatrixXd const& detect, Eigen::VectorXd const& miss,
                                                   std::size_t m)
{
  std::vector<RankedAssociation> out;
  if (m == 0)
  {
    return out;
  }
  if (detect.rows() == 0)
  {
    out.push_back(RankedAssociation{});
    return out;
  }
  auto const z = static_cast<int>(detect.cols());
  CostMatrix const costs = association_cost_matrix(detect, miss);
  for (auto& a : ranked_assignments(costs, m))
  {
    RankedAssociation ra;
    ra.map.reserve(a.columns.size());
    for (int c : a.columns)
    {
      ra.map.push_back(c < z ? c + 1 : 0);
    }
    ra.cost = 0.0;
    for (std::size_t r = 0; r < ra.map.size(); ++r)
    {
      auto const row = static_cast<Eigen::Index>(r);
      ra.cost += ra.map[r] > 0 ? detect(row, ra.map[r] - 1) : miss(row);
    }
    out.push_back(std::move(ra));
  }
  std::stable_sort(out.begin(), out.end(), [](auto const& a, auto const& b) {
    if (a.cost != b.cost)
    {
      return a.cost < b.cost;
    }
    return a.map < b.map;
  });
  return out;
}

std::vector<WeightedSubset> k_best_subsets_log(std::span<double const> log_ratios, double log_base, std::size_t k)
{
  std::vector<WeightedSubset> out;
  if (k == 0)
  {
    return out;
  }
  auto const n = log_ratios.size();
  for (double lr : log_ratios)
  {
    if (!std::isfinite(lr))
    {
      throw std::invalid_argument("subset ratios must be finite and positive");
    }
  }
  // The best subset takes every item with ratio > 1. Any other subset is reached by flipping a set of
  // items, each flip costing |log ratio|. Enumerate flip sets in nondecreasing total cost; this is the
  // shortest-path ordering over the items sorted by flip cost.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{ 0 });
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return std::abs(log_ratios[a]) < std::abs(log_ratios[b]); });
  std::vector<double> flip_cost(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    flip_cost[i] = std::abs(log_ratios[order[i]]);
  }

  auto to_subset = [&](std::vector<std::size_t> const& flips) {
    std::vector<char> member(n, 0);
    for (std::size_t i = 0; i < n; ++i)
    {
      member[i] = log_ratios[i] > 0.0 ? 1 : 0;
    }
    for (auto f : flips)
    {
      member[order[f]] ^= 1;
    }
    WeightedSubset s;
    s.weight = log_base;
    for (std::size_t i = 0; i < n; ++i)
    {
      if (member[i])
      {
        s.items.push_back(i);
        s.weight += log_ratios[i];
      }
    }
    return s;
  };

  struct Path
  {
    double cost;
    std::vector<std::size_t> flips;  // increasing positions in `order`
  };
  auto cmp = [](Path const& a, Path const& b) {
    if (a.cost != b.cost)
    {
      return a.cost > b.cost;
    }
    return a.flips > b.flips;
  };
  std::priority_queue<Path, std::vector<Path>, decltype(cmp)> queue(cmp);

  out.push_back(to_subset({}));
  if (n > 0)
  {
    queue.push(Path{ flip_cost[0], { 0 } });
  }
  while (out.size() < k && !queue.empty())
  {
    Path path = queue.top();
    queue.pop();
    out.push_back(to_subset(path.flips));
    auto const last = path.flips.back();
    if (last + 1 < n)
    {
      Path extend = path;
      extend.flips.push_back(last + 1);
      extend.cost += flip_cost[last + 1];
      queue.push(std::move(extend));

      Path shift = std::move(path);
      shift.flips.back() = last + 1;
      shift.cost += flip_cost[last + 1] - flip_cost[last];
      queue.push(std::move(shift));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](auto const& a, auto const& b) {
    if (a.weight != b.weight)
    {
      return a.weight > b.weight;
    }
    return a.items < b.items;
  });
  return out;
}

std::vector<WeightedSubset> k_best_subsets(std::span<double const> ratios, double base_weight, std::size_t k)
{
  std::vector<double> log_ratios(ratios.size());
  for (std::size_t i = 0; i < ratios.size(); ++i)
  {
    if (!(ratios[i] > 0.0) || !std::isfinite(ratios[i]))
    {
      throw std::invalid_argument("subset ratios must be finite and positive");
    }
    log_ratios[i] = std::log(ratios[i]);
  }
  auto out = k_best_subsets_log(log_ratios, 0.0, k);
  for (auto& s : out)
  {
    double w = base_weight;
    for (auto i : s.items)
    {
      w *= ratios[i];
    }
    s.weight = w;
  }
  return out;
}

}  // namespace mdbglmb
