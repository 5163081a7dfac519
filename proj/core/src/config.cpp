#include "mdbglmb/config.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>

namespace mdbglmb {

namespace {

using nlohmann::json;

std::string join(std::vector<std::string> const& errors)
{
  std::string out = "invalid configuration:";
  for (auto const& e : errors)
  {
    out += "\n  " + e;
  }
  return out;
}

/// Reads one JSON object, recording errors against dotted field paths.
class Section
{
public:
  Section(json const* node, std::string path, std::vector<std::string>& errors)
    : node_{ node }, path_{ std::move(path) }, errors_{ errors }
  {
    if (node_ != nullptr && !node_->is_object())
    {
      error("", "must be an object");
      node_ = nullptr;
    }
  }

  ~Section()
  {
    if (node_ == nullptr)
    {
      return;
    }
    for (auto const& [key, value] : node_->items())
    {
      if (!known_.contains(key))
      {
        error(key, "unknown field");
      }
    }
  }

  Section(Section const&) = delete;
  Section& operator=(Section const&) = delete;

  [[nodiscard]] std::string field(std::string const& key) const { return path_.empty() ? key : path_ + "." + key; }

  void error(std::string const& key, std::string const& message)
  {
    errors_.push_back(fmt::format("{}: {}", key.empty() ? path_ : field(key), message));
  }

  json const* find(std::string const& key)
  {
    known_.insert(key);
    if (node_ == nullptr)
    {
      return nullptr;
    }
    auto it = node_->find(key);
    return it == node_->end() ? nullptr : &*it;
  }

  Section child(std::string const& key) { return Section{ find(key), field(key), errors_ }; }

  std::vector<std::string>& sink() { return errors_; }

  void number(std::string const& key, double& out, std::function<bool(double)> const& ok, char const* requirement)
  {
    auto const* v = find(key);
    if (v == nullptr)
    {
      return;
    }
    if (!v->is_number())
    {
      error(key, "must be a number");
      return;
    }
    double const value = v->get<double>();
    if (!ok(value))
    {
      error(key, requirement);
      return;
    }
    out = value;
  }

  template <typename Int>
  void integer(std::string const& key, Int& out, long long min_value, char const* requirement)
  {
    auto const* v = find(key);
    if (v == nullptr)
    {
      return;
    }
    if (!v->is_number_integer())
    {
      error(key, "must be an integer");
      return;
    }
    if (v->is_number_unsigned())
    {
      auto const value = v->get<unsigned long long>();
      if (value > static_cast<unsigned long long>(std::numeric_limits<Int>::max()))
      {
        error(key, "is too large");
        return;
      }
      if (min_value > 0 && value < static_cast<unsigned long long>(min_value))
      {
        error(key, requirement);
        return;
      }
      out = static_cast<Int>(value);
      return;
    }
    auto const value = v->get<long long>();
    if (value < min_value)
    {
      error(key, requirement);
      return;
    }
    out = static_cast<Int>(value);
  }

  void boolean(std::string const& key, bool& out)
  {
    auto const* v = find(key);
    if (v == nullptr)
    {
      return;
    }
    if (!v->is_boolean())
    {
      error(key, "must be a boolean");
      return;
    }
    out = v->get<bool>();
  }

  void string(std::string const& key, std::string& out)
  {
    auto const* v = find(key);
    if (v == nullptr)
    {
      return;
    }
    if (!v->is_string())
    {
      error(key, "must be a string");
      return;
    }
    out = v->get<std::string>();
  }

  bool vector5(std::string const& key, Kinematic& out, bool non_negative)
  {
    auto const* v = find(key);
    if (v == nullptr)
    {
      return false;
    }
    if (!v->is_array() || v->size() != 5)
    {
      error(key, "must be an array of 5 numbers");
      return false;
    }
    Kinematic value;
    for (int i = 0; i < 5; ++i)
    {
      auto const& e = (*v)[static_cast<std::size_t>(i)];
      if (!e.is_number() || (non_negative && e.get<double>() < 0.0))
      {
        error(key, non_negative ? "must be an array of 5 non-negative numbers" : "must be an array of 5 numbers");
        return false;
      }
      value(i) = e.get<double>();
    }
    out = value;
    return true;
  }

private:
  json const* node_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> known_;
};

auto const positive = [](double v) { return v > 0.0; };
auto const non_negative = [](double v) { return v >= 0.0; };
auto const probability = [](double v) { return v >= 0.0 && v <= 1.0; };
auto const any_number = [](double) { return true; };

void read_scenario(Section& s, ScenarioScript& out)
{
  s.integer("duration", out.duration, 1, "must be a positive integer");
  s.boolean("truth_process_noise", out.truth_process_noise);
  {
    auto r = s.child("region");
    r.number("x_min", out.region.x_min, any_number, "");
    r.number("x_max", out.region.x_max, any_number, "");
    r.number("y_min", out.region.y_min, any_number, "");
    r.number("y_max", out.region.y_max, any_number, "");
    if (!(out.region.x_max > out.region.x_min && out.region.y_max > out.region.y_min))
    {
      r.error("", "must have positive area");
    }
  }
  if (auto const* targets = s.find("targets"))
  {
    if (!targets->is_array())
    {
      s.error("targets", "must be an array");
      return;
    }
    out.targets.clear();
    for (std::size_t i = 0; i < targets->size(); ++i)
    {
      Section t{ &(*targets)[i], s.field(fmt::format("targets[{}]", i)), s.sink() };
      TargetScript target;
      t.integer("birth_scan", target.birth_scan, 0, "must be a non-negative integer");
      t.integer("death_scan", target.death_scan, 0, "must be a non-negative integer");
      if (t.find("birth_scan") == nullptr || t.find("death_scan") == nullptr)
      {
        t.error("", "needs birth_scan and death_scan");
      }
      if (!t.vector5("state", target.initial, false))
      {
        t.error("state", "is required");
      }
      out.targets.push_back(target);
    }
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors) : std::runtime_error{ join(errors) }, errors_{ std::move(errors) }
{
}

RunConfig validate_config(json const& raw)
{
  RunConfig cfg;
  std::vector<std::string> errors;
  {
    Section root{ &raw, "", errors };
    root.integer("seed", cfg.seed, 0, "must be a non-negative integer");
    root.integer("runs", cfg.runs, 1, "must be a positive integer");
    root.integer("threads", cfg.threads, 0, "must be a non-negative integer");
    std::string output = cfg.output_dir.string();
    root.string("output_dir", output);
    cfg.output_dir = output;

    {
      auto s = root.child("scenario");
      read_scenario(s, cfg.scenario);
    }
    {
      auto m = root.child("motion");
      m.number("dt", cfg.models.motion.dt, positive, "must be positive");
      m.number("sigma_w", cfg.models.motion.sigma_w, non_negative, "must be non-negative");
      m.number("sigma_u", cfg.models.motion.sigma_u, non_negative, "must be non-negative");
    }
    {
      auto s = root.child("sensor");
      auto& sensor = cfg.models.sensor;
      s.number("sigma_theta", sensor.sigma_theta, positive, "must be positive");
      s.number("sigma_r", sensor.sigma_r, positive, "must be positive");
      s.number("pd_peak", sensor.pd_peak, probability, "must lie in [0, 1]");
      if (auto const* scale = s.find("pd_scale"); scale != nullptr && scale->is_null())
      {
        sensor.pd_scale = std::numeric_limits<double>::infinity();  // constant detection probability
      }
      else
      {
        s.number("pd_scale", sensor.pd_scale, positive, "must be positive or null");
      }
      s.number("clutter_rate", sensor.clutter_rate, non_negative, "must be non-negative");
      auto r = s.child("clutter_region");
      auto& region = sensor.clutter_region;
      r.number("bearing_min", region.bearing_min, any_number, "");
      r.number("bearing_max", region.bearing_max, any_number, "");
      r.number("range_min", region.range_min, non_negative, "must be non-negative");
      r.number("range_max", region.range_max, non_negative, "must be non-negative");
      if (!(region.bearing_max > region.bearing_min && region.range_max > region.range_min))
      {
        r.error("", "must have positive area");
      }
    }
    {
      auto s = root.child("survival");
      s.number("probability", cfg.models.survival.probability, probability, "must lie in [0, 1]");
    }
    {
      auto f = root.child("filter");
      auto& filter = cfg.filter;
      f.integer("particles", filter.particles, 1, "must be a positive integer");
      f.number("resample_threshold", filter.resample_threshold, probability, "must lie in [0, 1]");
      f.integer("total_assignments", filter.total_assignments, 1, "must be a positive integer");
      f.integer("survival_subsets", filter.survival_subsets, 1, "must be a positive integer");
      f.integer("birth_subsets", filter.birth_subsets, 1, "must be a positive integer");
      f.integer("predicted_hypotheses", filter.predicted_hypotheses, 1, "must be a positive integer");
      f.number("min_weight", filter.min_weight, [](double v) { return v >= 0.0 && v < 1.0; }, "must lie in [0, 1)");
      f.integer("max_hypotheses", filter.max_hypotheses, 1, "must be a positive integer");
    }
    {
      auto b = root.child("birth");
      auto& birth = cfg.birth;
      b.number("expected_births", birth.expected_births, non_negative, "must be non-negative");
      b.number("max_existence", birth.max_existence, [](double v) { return v >= 0.0 && v < 1.0; },
               "must lie in [0, 1)");
      b.integer("particles", birth.particles, 1, "must be a positive integer");
      b.vector5("std", birth.birth_std, true);
      b.number("min_newborn_likelihood", birth.min_newborn_likelihood, probability, "must lie in [0, 1]");
    }
    {
      auto o = root.child("ospa");
      o.number("cutoff", cfg.ospa.cutoff, positive, "must be positive");
      o.number("order", cfg.ospa.order, [](double v) { return v >= 1.0; }, "must be at least 1");
    }
  }
  if (errors.empty())
  {
    try
    {
      cfg.scenario.validate();
    }
    catch (std::invalid_argument const& e)
    {
      errors.push_back(fmt::format("scenario: {}", e.what()));
    }
  }
  if (!errors.empty())
  {
    throw ConfigError(std::move(errors));
  }
  return cfg;
}

RunConfig load_config(std::filesystem::path const& path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError({ fmt::format("{}: cannot open file", path.string()) });
  }
  json raw;
  try
  {
    raw = json::parse(in, nullptr, true, true);
  }
  catch (json::parse_error const& e)
  {
    throw ConfigError({ fmt::format("{}: {}", path.string(), e.what()) });
  }
  return validate_config(raw);
}

json to_json(RunConfig const& c)
{
  auto vec5 = [](Kinematic const& v) { return json::array({ v(0), v(1), v(2), v(3), v(4) }); };
  json targets = json::array();
  for (auto const& t : c.scenario.targets)
  {
    targets.push_back({ { "birth_scan", t.birth_scan }, { "death_scan", t.death_scan }, { "state", vec5(t.initial) } });
  }
  auto const& s = c.models.sensor;
  return json{
    { "seed", c.seed },
    { "runs", c.runs },
    { "threads", c.threads },
    { "output_dir", c.output_dir.string() },
    { "scenario",
      { { "duration", c.scenario.duration },
        { "truth_process_noise", c.scenario.truth_process_noise },
        { "region",
          { { "x_min", c.scenario.region.x_min },
            { "x_max", c.scenario.region.x_max },
            { "y_min", c.scenario.region.y_min },
            { "y_max", c.scenario.region.y_max } } },
        { "targets", targets } } },
    { "motion",
      { { "dt", c.models.motion.dt }, { "sigma_w", c.models.motion.sigma_w }, { "sigma_u", c.models.motion.sigma_u } } },
    { "sensor",
      { { "sigma_theta", s.sigma_theta },
        { "sigma_r", s.sigma_r },
        { "pd_peak", s.pd_peak },
        { "pd_scale", std::isinf(s.pd_scale) ? json(nullptr) : json(s.pd_scale) },
        { "clutter_rate", s.clutter_rate },
        { "clutter_region",
          { { "bearing_min", s.clutter_region.bearing_min },
            { "bearing_max", s.clutter_region.bearing_max },
            { "range_min", s.clutter_region.range_min },
            { "range_max", s.clutter_region.range_max } } } } },
    { "survival", { { "probability", c.models.survival.probability } } },
    { "filter",
      { { "particles", c.filter.particles },
        { "resample_threshold", c.filter.resample_threshold },
        { "total_assignments", c.filter.total_assignments },
        { "survival_subsets", c.filter.survival_subsets },
        { "birth_subsets", c.filter.birth_subsets },
        { "predicted_hypotheses", c.filter.predicted_hypotheses },
        { "min_weight", c.filter.min_weight },
        { "max_hypotheses", c.filter.max_hypotheses } } },
    { "birth",
      { { "expected_births", c.birth.expected_births },
        { "max_existence", c.birth.max_existence },
        { "particles", c.birth.particles },
        { "std", vec5(c.birth.birth_std) },
        { "min_newborn_likelihood", c.birth.min_newborn_likelihood } } },
    { "ospa", { { "cutoff", c.ospa.cutoff }, { "order", c.ospa.order } } },
  };
}

}  // namespace mdbglmb
