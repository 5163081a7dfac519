#include "mdbglmb/scenario.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace mdbglmb {

void ScenarioScript::validate() const
{
  for (std::size_t i = 0; i < targets.size(); ++i)
  {
    auto const& t = targets[i];
    if (!(t.birth_scan < t.death_scan) || t.death_scan > duration)
    {
      throw std::invalid_argument(fmt::format("target {} needs birth_scan < death_scan <= duration", i));
    }
    if (!t.initial.allFinite() || !region.contains(t.initial(kPx), t.initial(kPy)))
    {
      throw std::invalid_argument(fmt::format("target {} starts outside the surveillance region", i));
    }
  }
}

ScenarioScript default_scenario()
{
  // Reconstructed trajectories: several targets share start points so that their tracks cross.
  double const w = 2.0 * std::numbers::pi / 180.0;
  auto state = [](double px, double vx, double py, double vy, double turn) {
    return (Kinematic() << px, vx, py, vy, turn).finished();
  };
  ScenarioScript s;
  s.duration = 100;
  s.targets = {
    { 0, 100, state(1000.0 + 3.8676, -10.0, 1500.0 - 11.7457, -10.0, w / 8.0) },
    { 9, 100, state(-250.0 - 5.8857, 20.0, 1000.0 + 11.4102, 3.0, -w / 3.0) },
    { 9, 100, state(-1500.0 - 7.3806, 11.0, 250.0 + 6.7993, 10.0, -w / 2.0) },
    { 9, 65, state(-1500.0, 43.0, 250.0, 0.0, 0.0) },
    { 19, 79, state(250.0 - 3.8676, 11.0, 750.0 - 11.0747, 5.0, w / 4.0) },
    { 39, 100, state(-250.0 + 7.3806, -12.0, 1000.0 - 6.7993, -12.0, w / 2.0) },
    { 39, 100, state(1000.0, 0.0, 1500.0, -10.0, w / 4.0) },
    { 39, 79, state(250.0, -50.0, 750.0, 0.0, -w / 4.0) },
    { 59, 100, state(1000.0, -50.0, 1500.0, 0.0, -w / 4.0) },
    { 59, 100, state(250.0, -40.0, 750.0, 25.0, w / 4.0) },
  };
  return s;
}

std::vector<LabeledSet> generate_truth(ScenarioScript const& script, MotionModel const& motion, Rng& rng)
{
  script.validate();
  std::vector<LabeledSet> truth(script.duration);
  std::map<std::uint32_t, std::uint32_t> births_at;
  MotionModel truth_motion = motion;
  if (!script.truth_process_noise)
  {
    truth_motion.sigma_w = 0.0;
    truth_motion.sigma_u = 0.0;
  }
  for (auto const& t : script.targets)
  {
    TrackLabel const label{ t.birth_scan, births_at[t.birth_scan]++ };
    Kinematic x = t.initial;
    for (std::uint32_t k = t.birth_scan; k < t.death_scan; ++k)
    {
      if (k > t.birth_scan)
      {
        x = ct_sample_transition(x, truth_motion, rng);
      }
      truth[k].push_back(LabeledState{ x, label });
    }
  }
  for (auto& X : truth)
  {
    sort_by_label(X);
  }
  return truth;
}

std::vector<ScanRecord> generate_measurements(std::vector<LabeledSet> const& truth, SensorModel const& sensor,
                                              Rng& rng)
{
  std::vector<ScanRecord> scans;
  scans.reserve(truth.size());
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::poisson_distribution<int> clutter_count(sensor.clutter_rate);
  auto const& region = sensor.clutter_region;
  for (std::size_t k = 0; k < truth.size(); ++k)
  {
    ScanRecord rec;
    rec.scan = static_cast<std::uint32_t>(k);
    rec.truth = truth[k];
    for (auto const& x : truth[k])
    {
      if (unif(rng) >= detection_probability(x.kinematic, sensor))
      {
        continue;
      }
      Measurement z = measurement_mean(x.kinematic);
      z.bearing = wrap_angle(z.bearing + sensor.sigma_theta * normal(rng));
      z.range += sensor.sigma_r * normal(rng);
      if (region.contains(z))
      {
        rec.measurements.push_back(z);
      }
    }
    int const clutter = sensor.clutter_rate > 0.0 ? clutter_count(rng) : 0;
    for (int c = 0; c < clutter; ++c)
    {
      double const bearing = region.bearing_min + (region.bearing_max - region.bearing_min) * unif(rng);
      double const range = region.range_min + (region.range_max - region.range_min) * unif(rng);
      rec.measurements.push_back(Measurement{ bearing, range });
    }
    std::shuffle(rec.measurements.begin(), rec.measurements.end(), rng);
    scans.push_back(std::move(rec));
  }
  return scans;
}

void write_measurements(std::ostream& os, std::vector<ScanRecord> const& scans)
{
  for (auto const& s : scans)
  {
    os << s.scan;
    for (auto const& z : s.measurements)
    {
      os << fmt::format(" {:.17g} {:.17g}", z.bearing, z.range);
    }
    os << '\n';
  }
}

std::vector<ScanRecord> read_measurements(std::istream& is)
{
  std::vector<ScanRecord> scans;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line))
  {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#')
    {
      continue;
    }
    std::istringstream ls(line);
    ScanRecord rec;
    if (!(ls >> rec.scan))
    {
      throw std::runtime_error(fmt::format("line {}: missing scan index", line_no));
    }
    double bearing = 0.0;
    while (ls >> bearing)
    {
      double range = 0.0;
      if (!(ls >> range))
      {
        throw std::runtime_error(fmt::format("line {}: bearing without range", line_no));
      }
      rec.measurements.push_back(Measurement{ bearing, range });
    }
    if (!ls.eof())
    {
      throw std::runtime_error(fmt::format("line {}: unparsable value", line_no));
    }
    if (!scans.empty() && rec.scan != scans.back().scan + 1)
    {
      throw std::runtime_error(fmt::format("line {}: scans must be consecutive", line_no));
    }
    scans.push_back(std::move(rec));
  }
  return scans;
}

}  // namespace mdbglmb
