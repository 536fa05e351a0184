#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "ntnsim/channel.hpp"
#include "ntnsim/gateways.hpp"
#include "ntnsim/orbit.hpp"
#include "ntnsim/random.hpp"

namespace ntnsim {

// Exact rational coding rate, e.g. 1/3.
struct CodingRate {
    int num = 1;
    int den = 3;

    double value() const { return static_cast<double>(num) / den; }
};

struct LrFhssConfig {
    std::size_t n_channels = 35;
    std::size_t header_copies = 3;
    double header_duration_s = 0.233472;
    double fragment_duration_s = 0.1024;
    CodingRate coding_rate{1, 3};
    std::size_t payload_bytes = 10;
    double channel_width_hz = 488.0;  // informational
    // Consecutive header copies go out on different channels.
    bool distinct_header_channels = true;
    // When set, a colliding unit only destroys a unit at gateways where the
    // collider itself is received above sensitivity.
    bool collision_requires_collider_above_gamma = false;

    std::size_t fragments() const;
    // ceil(f * CR) fragments must get through.
    std::size_t fragments_needed() const;
    std::size_t units() const { return header_copies + fragments(); }
    void validate() const;
};

enum class UnitKind : std::uint8_t { header, fragment };

struct Unit {
    UnitKind kind = UnitKind::header;
    std::uint16_t channel = 0;
    double start_s = 0.0;
    double duration_s = 0.0;

    double end_s() const { return start_s + duration_s; }
};

// Headers first, then fragments, back to back in time.
struct TransmissionRecord {
    std::uint32_t device_id = 0;
    double start_s = 0.0;
    std::vector<Unit> units;

    double end_s() const { return units.empty() ? start_s : units.back().end_s(); }
};

struct UnitOutcome {
    bool erased = false;
    bool collided = false;

    bool received() const { return !erased && !collided; }
};

struct PacketDecision {
    std::vector<bool> per_gateway_decoded;
    bool network_decoded = false;
};

// Per-unit link evaluation at one gateway.
struct LinkSample {
    double distance_m = 0.0;
    double elevation_rad = 0.0;  // NaN for terrestrial links
    double pathloss_db = 0.0;    // gains excluded
    double fading_db = 0.0;
    double received_power_dbm = 0.0;
    bool erased = false;
};

// ceil((b + 3) / (6 CR)), in exact integer arithmetic.
std::size_t fragment_count(std::size_t payload_bytes, CodingRate cr);

double time_on_air(const LrFhssConfig& cfg);

// header_copies + f channel indices in [0, n_channels).
std::vector<std::uint16_t> generate_hop_sequence(const LrFhssConfig& cfg, Rng& rng);

// Lays out one packet's units starting at start_s on the given hop sequence.
TransmissionRecord make_transmission(std::uint32_t device_id, double start_s,
                                     std::span<const std::uint16_t> hops, const LrFhssConfig& cfg);

/**
 * Unslotted ALOHA traffic over [0, horizon). Each device's first packet
 * arrives after an exponential gap; every later one an exponential gap after
 * the previous packet ends, so a device never overlaps itself. Records come
 * out grouped by device, in time order within a device.
 */
std::vector<TransmissionRecord> schedule_traffic(std::size_t n_devices, double horizon_s,
                                                 double mean_interval_s, const LrFhssConfig& cfg,
                                                 Rng& rng);

/**
 * Evaluates every unit of tx at every gateway with an explicit fading draw per
 * unit and gateway. Satellite geometry is taken at each unit's start time;
 * laps may be null when the set has no LEO. Result is indexed
 * [gateway][unit].
 */
std::vector<std::vector<LinkSample>> evaluate_links(const TransmissionRecord& tx, Point2 device,
                                                    const GatewaySet& gateways,
                                                    const ChannelConfig& channel,
                                                    const RegionConfig& region,
                                                    const LapSchedule* laps, Rng& rng);

// Flattened unit for the collision sweep.
struct TimedUnit {
    double start_s;
    double end_s;
    std::uint32_t channel;
    std::uint32_t id;
};

/**
 * Calls f(id_a, id_b) once for every pair of units that share a channel and
 * overlap for a nonzero time. Reorders units.
 */
template <typename F>
void for_each_overlap(std::vector<TimedUnit>& units, F&& f)
{
    std::sort(units.begin(), units.end(), [](const TimedUnit& a, const TimedUnit& b) {
        if (a.channel != b.channel) return a.channel < b.channel;
        if (a.start_s != b.start_s) return a.start_s < b.start_s;
        return a.id < b.id;
    });
    for (std::size_t i = 0; i < units.size(); ++i) {
        const TimedUnit& a = units[i];
        for (std::size_t j = i + 1; j < units.size(); ++j) {
            const TimedUnit& b = units[j];
            if (b.channel != a.channel || b.start_s >= a.end_s) break;
            if (a.start_s < b.end_s) f(a.id, b.id);
        }
    }
}

struct UnitRef {
    std::size_t tx = 0;
    std::size_t unit = 0;
};

// Every overlap is destructive. Result is indexed [tx][unit].
std::vector<std::vector<bool>> detect_collisions(std::span<const TransmissionRecord> all_tx);

// Only colliders for which audible(collider) holds destroy a unit (the
// collider-above-sensitivity rule at one gateway).
std::vector<std::vector<bool>> detect_collisions(std::span<const TransmissionRecord> all_tx,
                                                 const std::function<bool(UnitRef)>& audible);

bool gateway_decodes(std::size_t headers_received, std::size_t fragments_received,
                     const LrFhssConfig& cfg);

// outcomes is indexed [gateway][unit]; units follow the record layout.
PacketDecision decode_packet(const std::vector<std::vector<UnitOutcome>>& outcomes,
                             const LrFhssConfig& cfg);

// CSV header for per-unit traces.
void write_trace_header(std::ostream& out);

}  // namespace ntnsim
