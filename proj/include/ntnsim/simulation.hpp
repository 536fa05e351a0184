#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ntnsim/config.hpp"
#include "ntnsim/gateways.hpp"
#include "ntnsim/metrics.hpp"
#include "ntnsim/random.hpp"

namespace ntnsim {

// Which receivers serve the region: TN(M), HAPS, LEO or any combination.
struct Scenario {
    std::size_t terrestrial_bs = 0;
    bool haps = false;
    bool leo = false;

    std::string name() const;
    bool operator==(const Scenario&) const = default;
};

// Accepts names like "LEO", "HAPS+TN(20)", "leo+haps+tn10". TN(0) and empty
// scenarios are rejected with ConfigError.
Scenario parse_scenario(std::string_view text);

enum class MetricMode { erasure, success, both };

struct DeviceOutcome {
    Point2 position;
    std::size_t units = 0;
    std::size_t erased_units = 0;  // lost at every gateway, collisions ignored
    std::size_t packets = 0;
    std::size_t decoded = 0;
};

struct RunOutcome {
    std::vector<DeviceOutcome> devices;
    std::size_t units = 0;
    std::size_t erased_units = 0;
    std::size_t packets = 0;
    std::size_t decoded = 0;
    std::size_t gateways = 0;

    // One sample per device that sent at least one unit.
    std::vector<ErasureSample> erasure_samples() const;
    // Mean device erasure (NaN without samples).
    double mean_device_erasure() const;
    // Per-device success averaged over devices that sent packets (NaN if none).
    double success_rate() const;
};

struct RunRequest {
    Scenario scenario;
    std::size_t n_devices = 0;
    double duration_s = 0.0;
    MetricMode mode = MetricMode::erasure;
    // Reused instead of a fresh draw when set.
    const BasestationLayout* fixed_layout = nullptr;
};

GatewaySet build_gateways(const Scenario& scenario, const SimulationConfig& cfg, Rng& rng,
                          const BasestationLayout* fixed_layout = nullptr);

/**
 * One Monte Carlo run: deploy devices (and stations unless a fixed layout is
 * given), schedule traffic, draw laps, sample every unit's reception at every
 * gateway and, for success runs, apply collisions and decode.
 *
 * Static links (terrestrial, HAPS) are sampled as Bernoulli trials with the
 * closed-form reception probability; unlikely links go through exact
 * geometric-skip thinning. LEO links draw the gamma gain per unit at the
 * satellite position of the unit's start time.
 *
 * When trace is non-null, one CSV row per (unit, gateway) is written.
 */
RunOutcome simulate_run(const SimulationConfig& cfg, const RunRequest& req, Rng& rng,
                        std::ostream* trace = nullptr);

// Below this reception probability a static link is sampled by thinning.
inline constexpr double weak_link_bound = 0.02;

}  // namespace ntnsim
