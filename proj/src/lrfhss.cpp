#include "ntnsim/lrfhss.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace ntnsim {

std::size_t fragment_count(std::size_t payload_bytes, CodingRate cr)
{
    if (cr.num <= 0 || cr.den <= 0) throw std::invalid_argument("coding rate must be positive");
    // (b + 3) / (6 num / den) = (b + 3) den / (6 num)
    const auto numer = (payload_bytes + 3) * static_cast<std::size_t>(cr.den);
    const auto denom = 6 * static_cast<std::size_t>(cr.num);
    return (numer + denom - 1) / denom;
}

std::size_t LrFhssConfig::fragments() const { return fragment_count(payload_bytes, coding_rate); }

std::size_t LrFhssConfig::fragments_needed() const
{
    const auto num = static_cast<std::size_t>(coding_rate.num);
    const auto den = static_cast<std::size_t>(coding_rate.den);
    return (fragments() * num + den - 1) / den;
}

void LrFhssConfig::validate() const
{
    if (n_channels == 0) throw std::invalid_argument("need at least one channel");
    if (n_channels > std::numeric_limits<std::uint16_t>::max())
        throw std::invalid_argument("too many channels");
    if (coding_rate.num <= 0 || coding_rate.den <= 0 || coding_rate.num > coding_rate.den)
        throw std::invalid_argument("coding rate must lie in (0, 1]");
    if (!(header_duration_s > 0.0) || !(fragment_duration_s > 0.0))
        throw std::invalid_argument("unit durations must be positive");
    if (distinct_header_channels && n_channels < header_copies)
        throw std::invalid_argument("distinct header channels need n_channels >= header copies");
}

double time_on_air(const LrFhssConfig& cfg)
{
    return static_cast<double>(cfg.header_copies) * cfg.header_duration_s +
           static_cast<double>(cfg.fragments()) * cfg.fragment_duration_s;
}

namespace {

std::uint16_t draw_channel(std::size_t n, Rng& rng)
{
    const auto c = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
    return static_cast<std::uint16_t>(std::min(c, n - 1));
}

}  // namespace

std::vector<std::uint16_t> generate_hop_sequence(const LrFhssConfig& cfg, Rng& rng)
{
    if (cfg.n_channels == 0) throw std::invalid_argument("need at least one channel");
    if (cfg.distinct_header_channels && cfg.n_channels < cfg.header_copies)
        throw std::invalid_argument("distinct header channels need n_channels >= header copies");

    std::vector<std::uint16_t> hops;
    hops.reserve(cfg.units());
    for (std::size_t h = 0; h < cfg.header_copies; ++h) {
        std::uint16_t c = draw_channel(cfg.n_channels, rng);
        if (cfg.distinct_header_channels && h > 0)
            while (c == hops.back()) c = draw_channel(cfg.n_channels, rng);
        hops.push_back(c);
    }
    const std::size_t f = cfg.fragments();
    for (std::size_t i = 0; i < f; ++i) hops.push_back(draw_channel(cfg.n_channels, rng));
    return hops;
}

TransmissionRecord make_transmission(std::uint32_t device_id, double start_s,
                                     std::span<const std::uint16_t> hops, const LrFhssConfig& cfg)
{
    TransmissionRecord tx;
    tx.device_id = device_id;
    tx.start_s = start_s;
    tx.units.reserve(hops.size());
    double t = start_s;
    for (std::size_t i = 0; i < hops.size(); ++i) {
        Unit u;
        u.kind = i < cfg.header_copies ? UnitKind::header : UnitKind::fragment;
        u.channel = hops[i];
        u.start_s = t;
        u.duration_s = u.kind == UnitKind::header ? cfg.header_duration_s : cfg.fragment_duration_s;
        t += u.duration_s;
        tx.units.push_back(u);
    }
    return tx;
}

std::vector<TransmissionRecord> schedule_traffic(std::size_t n_devices, double horizon_s,
                                                 double mean_interval_s, const LrFhssConfig& cfg,
                                                 Rng& rng)
{
    if (!(horizon_s > 0.0)) throw std::invalid_argument("traffic horizon must be positive");
    if (!(mean_interval_s > 0.0)) throw std::invalid_argument("mean interval must be positive");
    std::vector<TransmissionRecord> out;
    if (std::isinf(mean_interval_s)) return out;

    const double toa = time_on_air(cfg);
    auto gap = [&] { return -mean_interval_s * std::log(uniform_open0(rng)); };
    for (std::size_t dev = 0; dev < n_devices; ++dev) {
        for (double t = gap(); t < horizon_s; t += toa + gap()) {
            const auto hops = generate_hop_sequence(cfg, rng);
            out.push_back(make_transmission(static_cast<std::uint32_t>(dev), t, hops, cfg));
        }
    }
    return out;
}

std::vector<std::vector<LinkSample>> evaluate_links(const TransmissionRecord& tx, Point2 device,
                                                    const GatewaySet& gateways,
                                                    const ChannelConfig& channel,
                                                    const RegionConfig& region,
                                                    const LapSchedule* laps, Rng& rng)
{
    const double gamma = channel.link.sensitivity_dbm;
    std::vector<std::vector<LinkSample>> out(gateways.size());
    for (std::size_t g = 0; g < gateways.size(); ++g) {
        const LinkKind kind = gateways.kind(g);
        out[g].reserve(tx.units.size());
        for (const Unit& unit : tx.units) {
            LinkSample s;
            if (kind == LinkKind::terrestrial) {
                s.distance_m = std::max(terrestrial_distance(device, gateways.terrestrial.at(g)), 1.0);
                s.elevation_rad = std::numeric_limits<double>::quiet_NaN();
                s.pathloss_db = terrestrial_pathloss_db(s.distance_m, channel.terrestrial);
                s.fading_db = sample_shadow_fading_db(channel.terrestrial, rng);
            } else {
                if (kind == LinkKind::haps) {
                    s.distance_m = haps_distance(device, *gateways.haps);
                    s.elevation_rad = haps_elevation(device, *gateways.haps, region);
                } else {
                    if (!laps) throw std::invalid_argument("LEO gateway needs a lap schedule");
                    const LookAngle look =
                        device_elevation_and_distance(device, laps->state_at(unit.start_s));
                    s.distance_m = look.distance_m;
                    s.elevation_rad = look.elevation_rad;
                }
                s.pathloss_db = fspl_db(s.distance_m, channel.link);
                if (s.elevation_rad <= 0.0) {
                    // Below the device horizon: nothing gets through.
                    s.fading_db = -std::numeric_limits<double>::infinity();
                } else {
                    const double gain = sample_ntn_fading(
                        shadowed_rice_params(s.elevation_rad, channel.fading), rng);
                    s.fading_db = 10.0 * std::log10(gain);
                }
            }
            s.received_power_dbm = received_power_dbm(kind, s.distance_m, channel, s.fading_db);
            s.erased = s.received_power_dbm < gamma;
            out[g].push_back(s);
        }
    }
    return out;
}

namespace {

std::vector<TimedUnit> flatten(std::span<const TransmissionRecord> all_tx,
                               std::vector<UnitRef>& refs)
{
    std::vector<TimedUnit> units;
    for (std::size_t t = 0; t < all_tx.size(); ++t) {
        for (std::size_t u = 0; u < all_tx[t].units.size(); ++u) {
            const Unit& unit = all_tx[t].units[u];
            units.push_back({unit.start_s, unit.end_s(), unit.channel,
                             static_cast<std::uint32_t>(refs.size())});
            refs.push_back({t, u});
        }
    }
    return units;
}

std::vector<std::vector<bool>> empty_flags(std::span<const TransmissionRecord> all_tx)
{
    std::vector<std::vector<bool>> flags;
    flags.reserve(all_tx.size());
    for (const auto& tx : all_tx) flags.emplace_back(tx.units.size(), false);
    return flags;
}

}  // namespace

std::vector<std::vector<bool>> detect_collisions(std::span<const TransmissionRecord> all_tx)
{
    return detect_collisions(all_tx, [](UnitRef) { return true; });
}

std::vector<std::vector<bool>> detect_collisions(std::span<const TransmissionRecord> all_tx,
                                                 const std::function<bool(UnitRef)>& audible)
{
    std::vector<UnitRef> refs;
    auto units = flatten(all_tx, refs);
    auto flags = empty_flags(all_tx);
    for_each_overlap(units, [&](std::uint32_t a, std::uint32_t b) {
        const UnitRef ra = refs[a];
        const UnitRef rb = refs[b];
        if (audible(rb)) flags[ra.tx][ra.unit] = true;
        if (audible(ra)) flags[rb.tx][rb.unit] = true;
    });
    return flags;
}

bool gateway_decodes(std::size_t headers_received, std::size_t fragments_received,
                     const LrFhssConfig& cfg)
{
    return headers_received >= 1 && fragments_received >= cfg.fragments_needed();
}

PacketDecision decode_packet(const std::vector<std::vector<UnitOutcome>>& outcomes,
                             const LrFhssConfig& cfg)
{
    PacketDecision d;
    d.per_gateway_decoded.reserve(outcomes.size());
    for (const auto& units : outcomes) {
        std::size_t headers = 0;
        std::size_t fragments = 0;
        for (std::size_t i = 0; i < units.size(); ++i) {
            if (!units[i].received()) continue;
            if (i < cfg.header_copies) ++headers;
            else ++fragments;
        }
        const bool ok = gateway_decodes(headers, fragments, cfg);
        d.per_gateway_decoded.push_back(ok);
        d.network_decoded = d.network_decoded || ok;
    }
    return d;
}

void write_trace_header(std::ostream& out)
{
    out << "device_id,packet_start_s,gateway_id,unit_index,kind,channel,erased,collided,received\n";
}

}  // namespace ntnsim
