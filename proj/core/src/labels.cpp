#include "mdbglmb/labels.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace mdbglmb {

std::ostream& operator<<(std::ostream& os, TrackLabel const& label)
{
  return os << '(' << label.birth_time << ',' << label.birth_index << ')';
}

double multi_object_exponential(std::function<double(LabeledState const&)> const& h, std::span<LabeledState const> X)
{
  double product = 1.0;
  for (auto const& x : X)
  {
    product *= h(x);
  }
  return product;
}

int distinct_label_indicator(std::span<LabeledState const> X)
{
  std::unordered_set<TrackLabel> seen;
  seen.reserve(X.size());
  for (auto const& x : X)
  {
    if (!seen.insert(x.label).second)
    {
      return 0;
    }
  }
  return 1;
}

void sort_by_label(LabeledSet& X)
{
  std::stable_sort(X.begin(), X.end(), [](auto const& a, auto const& b) { return a.label < b.label; });
}

std::vector<TrackLabel> LabelAllocator::allocate(std::uint32_t scan, std::uint32_t count)
{
  auto [it, inserted] = issued_.emplace(scan, count);
  if (!inserted)
  {
    throw std::logic_error("birth labels for scan " + std::to_string(scan) + " were already allocated (" +
                           std::to_string(it->second) + " labels)");
  }
  std::vector<TrackLabel> labels;
  labels.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i)
  {
    labels.push_back(TrackLabel{ scan, i });
  }
  return labels;
}

}  // namespace mdbglmb
