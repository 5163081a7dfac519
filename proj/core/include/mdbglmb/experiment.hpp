#pragma once

#include "mdbglmb/config.hpp"
#include "mdbglmb/metrics.hpp"
#include "mdbglmb/scenario.hpp"
#include "mdbglmb/tracker.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

namespace mdbglmb {

/// Everything one Monte Carlo run produced, per scan.
struct RunResult
{
  std::vector<ScanRecord> scans;              ///< measurements and truth
  std::vector<LabeledSet> estimates;
  std::vector<std::vector<double>> cardinality;  ///< rho(n) of each posterior
  std::vector<double> ospa;
  std::vector<std::vector<double>> newborn;          ///< r_U per measurement
  std::vector<std::vector<double>> birth_existence;  ///< r_B per measurement
  std::vector<std::size_t> hypotheses;
};

struct ExperimentReport
{
  std::vector<RunResult> runs;
  std::vector<double> mean_ospa;                  ///< per scan, averaged over runs
  std::vector<CardinalityStats> mean_cardinality;  ///< moments of the run-averaged rho(n), with truth
};

/// Sees every filter step together with the tracker state after it (posterior and pending births).
using ScanObserver = std::function<void(TrackerStep const& step, Tracker const& tracker)>;

/// Per-run variant used by run_experiment. Invoked concurrently from worker threads.
using RunObserver = std::function<void(std::size_t run_index, TrackerStep const& step, Tracker const& tracker)>;

/// Run `run_index`: simulate with substream (seed, run_index), filter every scan and score it.
RunResult run_single(RunConfig const& config, std::size_t run_index, ScanObserver const& observer = {});

/// Filters recorded scans (no truth required); OSPA is scored only where truth is present.
RunResult filter_scans(RunConfig const& config, std::vector<ScanRecord> scans, std::uint64_t seed,
                       ScanObserver const& observer = {});

/// All runs (in parallel) aggregated in run order.
ExperimentReport run_experiment(RunConfig const& config, RunObserver const& observer = {});

/// Writes ospa.csv, cardinality.csv, tracks.csv, truth.csv, per-run files, replayable measurements
/// and the resolved configuration into config.output_dir.
void write_report(RunConfig const& config, ExperimentReport const& report);

/// Writes tracks.csv and cardinality.csv (without truth) for a replayed measurement file.
void write_replay(std::filesystem::path const& output_dir, RunResult const& result);

}  // namespace mdbglmb
