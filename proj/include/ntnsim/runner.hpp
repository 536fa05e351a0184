#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ntnsim/config.hpp"
#include "ntnsim/cost.hpp"
#include "ntnsim/metrics.hpp"
#include "ntnsim/simulation.hpp"

namespace ntnsim {

inline constexpr const char* artifact_version = NTNSIM_VERSION;

struct ScenarioSpec {
    Scenario scenario;
    std::size_t n_devices = 0;
    std::vector<std::size_t> sweep_devices;  // success runs only
    std::size_t n_runs = 1;
    double duration_s = 3600.0;
    MetricMode mode = MetricMode::erasure;
    std::uint64_t master_seed = 0;
    bool seed_generated = false;
    bool fixed_layout = false;
    std::size_t workers = 1;

    // Throws ConfigError.
    void validate() const;
};

// Spec from the run.* keys; a missing seed is drawn from entropy.
ScenarioSpec make_spec(const SimulationConfig& cfg, MetricMode mode);

// Stream of one run. sweep_point separates the points of a device sweep.
Rng seed_management(std::uint64_t master_seed, std::uint64_t run_index, std::uint64_t sweep_point = 0);

// 0 means hardware concurrency (at least 1).
std::size_t resolve_workers(std::size_t requested);

/**
 * Runs work(i) for i in [0, n) on a pool of workers and hands each result to
 * merge() in index order on a single consumer, so the reduction does not
 * depend on the pool size. The first exception stops the pool and is
 * rethrown.
 */
template <typename Result>
void run_ordered(std::size_t n, std::size_t workers, const std::function<Result(std::size_t)>& work,
                 const std::function<void(std::size_t, Result&&)>& merge);

struct ErasureReport {
    ScenarioSpec spec;
    HeatmapGrid heatmap;
    std::vector<RadialRing> radial;
    DistributionSummary violin;
    MeanAccumulator run_means;  // per-run mean device erasure
    std::size_t units = 0;
    std::size_t erased_units = 0;
    std::size_t samples = 0;
    std::string trace_csv;  // run 0, when requested
};

struct SuccessReport {
    ScenarioSpec spec;
    std::vector<SuccessPoint> points;
    std::vector<std::size_t> packets;  // per point, all runs
    std::vector<std::size_t> decoded;
};

struct CrossoverEntry {
    std::string first;
    std::string second;
    std::optional<std::size_t> devices;
};

struct CostReport {
    std::vector<std::size_t> station_counts;
    std::vector<CostSweepRow> rows;
    std::vector<CrossoverEntry> crossovers;
    int horizon_years = 20;
};

struct ExperimentHooks {
    std::function<void(std::size_t done, std::size_t total)> progress;
    bool keep_trace = false;
};

ErasureReport run_erasure_experiment(const ScenarioSpec& spec, const SimulationConfig& cfg,
                                     const ExperimentHooks& hooks = {});
// Zero devices in the sweep is rejected with ConfigError.
SuccessReport run_success_experiment(const ScenarioSpec& spec, const SimulationConfig& cfg,
                                     const ExperimentHooks& hooks = {});
CostReport run_cost_report(const SimulationConfig& cfg);

// "# key=value" lines: config hash, seed, scenario, version.
std::string metadata_header(const SimulationConfig& cfg, const std::string& scenario,
                            std::optional<std::uint64_t> seed);

// Each writer returns the files it created.
std::vector<std::filesystem::path> write_erasure_outputs(const ErasureReport& r,
                                                         const SimulationConfig& cfg,
                                                         const std::filesystem::path& dir);
std::vector<std::filesystem::path> write_success_outputs(const SuccessReport& r,
                                                         const SimulationConfig& cfg,
                                                         const std::filesystem::path& dir);
std::vector<std::filesystem::path> write_cost_outputs(const CostReport& r,
                                                      const SimulationConfig& cfg,
                                                      const std::filesystem::path& dir);
// One lap drawn from the seed, sampled every run.orbit_trace_step_s.
std::vector<std::filesystem::path> write_orbit_trace(const SimulationConfig& cfg,
                                                     std::uint64_t seed, bool seed_generated,
                                                     const std::filesystem::path& dir);

}  // namespace ntnsim

#include "ntnsim/runner_impl.hpp"
