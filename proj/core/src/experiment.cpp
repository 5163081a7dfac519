#include "mdbglmb/experiment.hpp"

#include "mdbglmb/random.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

namespace mdbglmb {

namespace {

constexpr std::uint64_t kTruthStream = 11;
constexpr std::uint64_t kMeasurementStream = 12;
constexpr std::uint64_t kFilterStream = 13;

std::ofstream open_output(std::filesystem::path const& path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
  {
    throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  }
  return out;
}

void write_states(std::ostream& os, std::size_t run, std::vector<LabeledSet> const& sets)
{
  for (std::size_t k = 0; k < sets.size(); ++k)
  {
    for (auto const& x : sets[k])
    {
      os << fmt::format("{},{},{},{},{:.6f},{:.6f}\n", run, k, x.label.birth_time, x.label.birth_index,
                        x.kinematic(kPx), x.kinematic(kPy));
    }
  }
}

}  // namespace

RunResult filter_scans(RunConfig const& config, std::vector<ScanRecord> scans, std::uint64_t seed,
                       ScanObserver const& observer)
{
  RunResult result;
  std::uint32_t const first = scans.empty() ? 0 : scans.front().scan;
  Tracker tracker{ config.models, config.filter, config.birth, seed, first };
  for (auto const& scan : scans)
  {
    auto step = tracker.step(scan.measurements);
    if (observer)
    {
      observer(step, tracker);
    }
    auto const est_pos = positions(step.estimate.states);
    auto const truth_pos = positions(scan.truth);
    result.ospa.push_back(ospa(est_pos, truth_pos, config.ospa));
    result.estimates.push_back(std::move(step.estimate.states));
    result.cardinality.push_back(std::move(step.estimate.cardinality));
    result.newborn.push_back(std::move(step.newborn));
    result.birth_existence.push_back(std::move(step.birth_existence));
    result.hypotheses.push_back(step.hypotheses);
  }
  result.scans = std::move(scans);
  return result;
}

RunResult run_single(RunConfig const& config, std::size_t run_index, ScanObserver const& observer)
{
  Rng truth_rng = make_rng(config.seed, { run_index, kTruthStream });
  Rng meas_rng = make_rng(config.seed, { run_index, kMeasurementStream });
  auto const truth = generate_truth(config.scenario, config.models.motion, truth_rng);
  auto scans = generate_measurements(truth, config.models.sensor, meas_rng);
  return filter_scans(config, std::move(scans), derive_seed(config.seed, { run_index, kFilterStream }), observer);
}

ExperimentReport run_experiment(RunConfig const& config, RunObserver const& observer)
{
  ExperimentReport report;
  report.runs.resize(config.runs);

  std::size_t threads = config.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : config.threads;
  threads = std::min(threads, config.runs);
  std::atomic<std::size_t> next{ 0 };
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t r = next++; r < config.runs; r = next++)
    {
      try
      {
        ScanObserver per_run;
        if (observer)
        {
          per_run = [&observer, r](TrackerStep const& step, Tracker const& tracker) { observer(r, step, tracker); };
        }
        report.runs[r] = run_single(config, r, per_run);
      }
      catch (...)
      {
        std::lock_guard lock(failure_mutex);
        if (!failure)
        {
          failure = std::current_exception();
        }
      }
    }
  };
  if (threads <= 1)
  {
    worker();
  }
  else
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t)
    {
      pool.emplace_back(worker);
    }
  }
  if (failure)
  {
    std::rethrow_exception(failure);
  }

  std::size_t const scans = config.scenario.duration;
  report.mean_ospa.assign(scans, 0.0);
  report.mean_cardinality.resize(scans);
  for (std::size_t k = 0; k < scans; ++k)
  {
    std::vector<double> rho;
    for (auto const& run : report.runs)
    {
      report.mean_ospa[k] += run.ospa[k];
      auto const& r = run.cardinality[k];
      if (rho.size() < r.size())
      {
        rho.resize(r.size(), 0.0);
      }
      for (std::size_t n = 0; n < r.size(); ++n)
      {
        rho[n] += r[n];
      }
    }
    double const runs = static_cast<double>(config.runs);
    report.mean_ospa[k] /= runs;
    for (auto& p : rho)
    {
      p /= runs;
    }
    report.mean_cardinality[k] = cardinality_moments(rho);
    report.mean_cardinality[k].truth = static_cast<double>(report.runs.front().scans[k].truth.size());
  }
  return report;
}

void write_report(RunConfig const& config, ExperimentReport const& report)
{
  auto const& dir = config.output_dir;
  std::filesystem::create_directories(dir / "runs");

  {
    auto out = open_output(dir / "resolved_config.json");
    out << to_json(config).dump(2) << '\n';
  }
  {
    auto out = open_output(dir / "ospa.csv");
    out << "scan,mean_ospa";
    for (std::size_t r = 0; r < report.runs.size(); ++r)
    {
      out << ",run_" << r;
    }
    out << '\n';
    for (std::size_t k = 0; k < report.mean_ospa.size(); ++k)
    {
      out << fmt::format("{},{:.6f}", k, report.mean_ospa[k]);
      for (auto const& run : report.runs)
      {
        out << fmt::format(",{:.6f}", run.ospa[k]);
      }
      out << '\n';
    }
  }
  {
    auto out = open_output(dir / "cardinality.csv");
    out << "scan,truth,est_mean,est_std\n";
    for (std::size_t k = 0; k < report.mean_cardinality.size(); ++k)
    {
      auto const& c = report.mean_cardinality[k];
      out << fmt::format("{},{},{:.6f},{:.6f}\n", k, c.truth, c.mean, c.std);
    }
  }
  {
    auto tracks = open_output(dir / "tracks.csv");
    auto truth = open_output(dir / "truth.csv");
    tracks << "run,scan,label_birth_time,label_birth_index,p_x,p_y\n";
    truth << "run,scan,label_birth_time,label_birth_index,p_x,p_y\n";
    for (std::size_t r = 0; r < report.runs.size(); ++r)
    {
      auto const& run = report.runs[r];
      write_states(tracks, r, run.estimates);
      std::vector<LabeledSet> truth_sets;
      for (auto const& s : run.scans)
      {
        truth_sets.push_back(s.truth);
      }
      write_states(truth, r, truth_sets);
    }
  }
  for (std::size_t r = 0; r < report.runs.size(); ++r)
  {
    auto const& run = report.runs[r];
    {
      auto out = open_output(dir / "runs" / fmt::format("run_{}_cardinality.csv", r));
      out << "scan,truth,est_mean,est_std,map_cardinality,ospa,hypotheses\n";
      for (std::size_t k = 0; k < run.scans.size(); ++k)
      {
        auto const c = cardinality_moments(run.cardinality[k]);
        out << fmt::format("{},{},{:.6f},{:.6f},{},{:.6f},{}\n", run.scans[k].scan, run.scans[k].truth.size(), c.mean,
                           c.std, run.estimates[k].size(), run.ospa[k], run.hypotheses[k]);
      }
    }
    {
      auto out = open_output(dir / "runs" / fmt::format("run_{}_measurements.txt", r));
      write_measurements(out, run.scans);
    }
  }
}

void write_replay(std::filesystem::path const& output_dir, RunResult const& result)
{
  std::filesystem::create_directories(output_dir);
  {
    auto out = open_output(output_dir / "tracks.csv");
    out << "run,scan,label_birth_time,label_birth_index,p_x,p_y\n";
    for (std::size_t k = 0; k < result.estimates.size(); ++k)
    {
      for (auto const& x : result.estimates[k])
      {
        out << fmt::format("0,{},{},{},{:.6f},{:.6f}\n", result.scans[k].scan, x.label.birth_time,
                           x.label.birth_index, x.kinematic(kPx), x.kinematic(kPy));
      }
    }
  }
  {
    auto out = open_output(output_dir / "cardinality.csv");
    out << "scan,est_mean,est_std,map_cardinality\n";
    for (std::size_t k = 0; k < result.estimates.size(); ++k)
    {
      auto const c = cardinality_moments(result.cardinality[k]);
      out << fmt::format("{},{:.6f},{:.6f},{}\n", result.scans[k].scan, c.mean, c.std, result.estimates[k].size());
    }
  }
}

}  // namespace mdbglmb
