#pragma once

#include "mdbglmb/birth.hpp"
#include "mdbglmb/glmb.hpp"
#include "mdbglmb/metrics.hpp"
#include "mdbglmb/scenario.hpp"
#include "mdbglmb/tracker.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdbglmb {

struct RunConfig
{
  ScenarioScript scenario = default_scenario();
  TrackerModels models;
  FilterConfig filter;
  MdbConfig birth;
  OspaParams ospa;
  std::size_t runs = 1;
  std::uint64_t seed = 1;
  std::size_t threads = 0;  ///< 0 = hardware concurrency
  std::filesystem::path output_dir = "results";
};

/// Every problem found while validating a configuration, each prefixed with its field path.
class ConfigError : public std::runtime_error
{
public:
  explicit ConfigError(std::vector<std::string> errors);

  [[nodiscard]] std::vector<std::string> const& errors() const { return errors_; }

private:
  std::vector<std::string> errors_;
};

/// Fills defaults, checks every field and rejects unknown keys. Throws ConfigError.
RunConfig validate_config(nlohmann::json const& raw);

/// Parses and validates a configuration file. Throws ConfigError (also for syntax errors).
RunConfig load_config(std::filesystem::path const& path);

/// Fully resolved configuration, suitable as input to validate_config.
nlohmann::json to_json(RunConfig const& config);

}  // namespace mdbglmb
