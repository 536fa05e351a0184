#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ntnsim/channel.hpp"
#include "ntnsim/cost.hpp"
#include "ntnsim/geometry.hpp"
#include "ntnsim/lrfhss.hpp"
#include "ntnsim/orbit.hpp"

namespace ntnsim {

struct RunControl {
    std::string scenario = "HAPS";
    std::size_t devices = 1000;
    std::vector<std::size_t> sweep_devices{100, 1000, 5000, 10000};
    std::size_t runs = 100;
    double duration_s = 3600.0;
    std::optional<std::uint64_t> seed;
    std::size_t workers = 0;  // 0: hardware concurrency
    bool fixed_layout = false;
    double heatmap_bin_m = 4000.0;
    std::size_t radial_rings = 8;
    std::size_t violin_bins = 50;
    std::size_t cost_max_devices = 30000;
    std::size_t cost_step = 500;
    std::vector<std::size_t> cost_station_counts{10, 20};
    double orbit_trace_step_s = 1.0;
};

struct SimulationConfig {
    RegionConfig region;
    HapsConfig haps;
    OrbitConfig orbit;
    ChannelConfig channel;
    LrFhssConfig lrfhss;
    double mean_interval_s = 900.0;
    CostParams cost;
    RunControl run;

    // Throws ConfigError naming the offending key.
    void validate() const;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string message, std::string key = {}, std::size_t line = 0);

    const std::string& key() const { return key_; }
    std::size_t line() const { return line_; }

private:
    std::string key_;
    std::size_t line_;
};

// Sets one key from its textual value (units as listed by config_keys()).
void set_config_value(SimulationConfig& cfg, std::string_view key, std::string_view value);

// Applies "key = value" lines; '#' starts a comment. Errors carry origin:line.
void apply_config_text(SimulationConfig& cfg, std::string_view text,
                       std::string_view origin = "<config>");

SimulationConfig load_config_file(const std::string& path);

struct ConfigKey {
    std::string key;
    std::string unit;
};

std::vector<ConfigKey> config_keys();

// Every key with its canonical value, in table order.
std::vector<std::pair<std::string, std::string>> config_entries(const SimulationConfig& cfg);

// FNV-1a over the canonical entries, excluding run.seed and run.workers
// (neither changes what a seeded run computes).
std::uint64_t config_hash(const SimulationConfig& cfg);

std::string hex64(std::uint64_t v);

}  // namespace ntnsim
