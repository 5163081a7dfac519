#pragma once

#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <span>
#include <vector>

namespace mdbglmb {

/// Kinematic state [p_x, v_x, p_y, v_y, turn_rate]; positions in m, velocities in m/s, turn rate in rad/s.
using Kinematic = Eigen::Matrix<double, 5, 1>;

inline constexpr int kPx = 0;
inline constexpr int kVx = 1;
inline constexpr int kPy = 2;
inline constexpr int kVy = 3;
inline constexpr int kTurn = 4;

/// Track identity: the scan a track was born at and its order among the births of that scan.
/// Ordered lexicographically.
struct TrackLabel
{
  std::uint32_t birth_time = 0;
  std::uint32_t birth_index = 0;

  friend constexpr auto operator<=>(TrackLabel const&, TrackLabel const&) = default;
};

std::ostream& operator<<(std::ostream& os, TrackLabel const& label);

struct LabeledState
{
  Kinematic kinematic = Kinematic::Zero();
  TrackLabel label;
};

/// Finite labeled set, stored sorted by label.
using LabeledSet = std::vector<LabeledState>;

/// Product of h over the elements of X; 1 for the empty set.
double multi_object_exponential(std::function<double(LabeledState const&)> const& h, std::span<LabeledState const> X);

/// 1 iff every element of X carries a distinct label, else 0.
int distinct_label_indicator(std::span<LabeledState const> X);

/// Sorts a labeled set by label so that set comparison is order independent.
void sort_by_label(LabeledSet& X);

/// Issues birth labels. One allocator per filter run; each scan may be allocated once.
class LabelAllocator
{
public:
  /// Labels (scan, 0) ... (scan, count - 1). Throws std::logic_error if the scan was already allocated.
  std::vector<TrackLabel> allocate(std::uint32_t scan, std::uint32_t count);

  [[nodiscard]] bool allocated(std::uint32_t scan) const { return issued_.contains(scan); }

private:
  std::map<std::uint32_t, std::uint32_t> issued_;
};

}  // namespace mdbglmb

template <>
struct std::hash<mdbglmb::TrackLabel>
{
  std::size_t operator()(mdbglmb::TrackLabel const& l) const noexcept
  {
    return std::hash<std::uint64_t>{}((std::uint64_t{ l.birth_time } << 32) | l.birth_index);
  }
};
