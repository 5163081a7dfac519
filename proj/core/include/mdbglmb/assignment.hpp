#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace mdbglmb {

/// Cost of a forbidden row/column pairing.
inline constexpr double kForbidden = std::numeric_limits<double>::infinity();

using CostMatrix = Eigen::MatrixXd;

/// Row-to-column assignment; `columns[r]` is the column chosen by row r.
struct Assignment
{
  std::vector<int> columns;
  double cost = 0.0;
};

/// Minimum-cost assignment of every row to a distinct column (rows <= cols) by shortest augmenting paths.
/// Entries may be +inf. Returns std::nullopt when no finite-cost assignment exists.
std::optional<Assignment> solve_assignment(CostMatrix const& costs);

/// Up to `m` lowest-cost assignments in nondecreasing cost (Murty's partitioning).
/// Throws std::invalid_argument when no feasible assignment exists.
std::vector<Assignment> ranked_assignments(CostMatrix const& costs, std::size_t m);

/// Association map over the rows of a track/measurement problem: 0 = missed, j >= 1 = measurement j.
struct RankedAssociation
{
  std::vector<int> map;
  double cost = 0.0;
};

/// Lays out the track/measurement cost matrix: `detect` (tracks x measurements) followed by one
/// missed-detection column per track (diagonal, off-diagonal entries forbidden).
CostMatrix association_cost_matrix(Eigen::MatrixXd const& detect, Eigen::VectorXd const& miss);

/// Ranked association maps for a tracks x measurements problem. Ties are broken by the
/// lexicographic order of the map. An empty track set yields the single empty map.
std::vector<RankedAssociation> ranked_associations(Eigen::MatrixXd const& detect, Eigen::VectorXd const& miss,
                                                   std::size_t m);

struct WeightedSubset
{
  std::vector<std::size_t> items;  ///< sorted item indices
  double weight = 0.0;
};

/// The k subsets L maximizing base * prod_{i in L} ratio[i], heaviest first. Ratios must be finite and positive.
std::vector<WeightedSubset> k_best_subsets(std::span<double const> ratios, double base_weight, std::size_t k);

/// Log-domain variant: maximizes log_base + sum_{i in L} log_ratio[i]; `weight` holds the log weight.
std::vector<WeightedSubset> k_best_subsets_log(std::span<double const> log_ratios, double log_base, std::size_t k);

}  // namespace mdbglmb
