#include "ntnsim/simulation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <limits>
#include <ostream>

#include "ntnsim/kernels.hpp"
#include "ntnsim/lrfhss.hpp"
#include "ntnsim/orbit.hpp"

namespace ntnsim {

std::string Scenario::name() const
{
    std::string out;
    auto add = [&](const std::string& part) { out += (out.empty() ? "" : "+") + part; };
    if (leo) add("LEO");
    if (haps) add("HAPS");
    if (terrestrial_bs > 0) add("TN(" + std::to_string(terrestrial_bs) + ")");
    return out;
}

Scenario parse_scenario(std::string_view text)
{
    Scenario s;
    std::string upper;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));

    auto fail = [&](const std::string& why) -> void {
        throw ConfigError("scenario '" + std::string(text) + "': " + why, "run.scenario");
    };
    if (upper.empty()) fail("empty scenario");

    std::size_t pos = 0;
    while (pos <= upper.size()) {
        const auto plus = upper.find('+', pos);
        const std::string part = upper.substr(pos, plus == std::string::npos ? std::string::npos : plus - pos);
        pos = plus == std::string::npos ? upper.size() + 1 : plus + 1;

        if (part == "LEO") {
            s.leo = true;
        } else if (part == "HAPS") {
            s.haps = true;
        } else if (part.rfind("TN", 0) == 0) {
            std::string digits = part.substr(2);
            if (!digits.empty() && digits.front() == '(' && digits.back() == ')')
                digits = digits.substr(1, digits.size() - 2);
            if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit))
                fail("bad terrestrial count in '" + part + "'");
            s.terrestrial_bs = std::stoul(digits);
            if (s.terrestrial_bs == 0) fail("TN(0) has no gateways");
        } else {
            fail("unknown component '" + part + "'");
        }
    }
    return s;
}

std::vector<ErasureSample> RunOutcome::erasure_samples() const
{
    std::vector<ErasureSample> out;
    out.reserve(devices.size());
    for (const auto& d : devices)
        if (d.units > 0)
            out.push_back({d.position, static_cast<double>(d.erased_units) / static_cast<double>(d.units)});
    return out;
}

double RunOutcome::mean_device_erasure() const
{
    MeanAccumulator acc;
    for (const auto& s : erasure_samples()) acc.add(s.mean_erasure);
    return acc.mean();
}

double RunOutcome::success_rate() const
{
    std::vector<std::size_t> decoded_per;
    std::vector<std::size_t> packets_per;
    for (const auto& d : devices) {
        decoded_per.push_back(d.decoded);
        packets_per.push_back(d.packets);
    }
    return run_success_rate(decoded_per, packets_per);
}

GatewaySet build_gateways(const Scenario& scenario, const SimulationConfig& cfg, Rng& rng,
                          const BasestationLayout* fixed_layout)
{
    GatewaySet gw;
    if (scenario.terrestrial_bs > 0)
        gw.terrestrial = fixed_layout ? *fixed_layout
                                      : deploy_basestations(scenario.terrestrial_bs, cfg.region, rng);
    if (scenario.haps) gw.haps = cfg.haps;
    gw.leo = scenario.leo;
    if (gw.empty()) throw ConfigError("scenario has no gateways", "run.scenario");
    return gw;
}

namespace {

// Reception lists per unit, CSR layout: the gateways at which each unit
// arrives above sensitivity, ascending.
struct ReceptionTable {
    std::vector<std::uint32_t> offsets{0};
    std::vector<std::uint32_t> gateway;
    std::vector<std::uint8_t> entry_collided;

    std::size_t units() const { return offsets.size() - 1; }
    std::size_t begin(std::size_t u) const { return offsets[u]; }
    std::size_t end(std::size_t u) const { return offsets[u + 1]; }
    bool heard_at(std::size_t u, std::uint32_t g) const
    {
        return std::binary_search(gateway.begin() + static_cast<std::ptrdiff_t>(begin(u)),
                                  gateway.begin() + static_cast<std::ptrdiff_t>(end(u)), g);
    }
};

struct StaticLink {
    std::uint32_t gateway;
    double probability;
};

class ReceptionSampler {
public:
    ReceptionSampler(const SimulationConfig& cfg, const GatewaySet& gw, const LapSchedule* laps)
        : cfg_(cfg), gw_(gw), laps_(laps), kernels_(kernels::active())
    {
        for (const auto& p : gw.terrestrial.inner) push_site(p);
        for (const auto& p : gw.terrestrial.guard) push_site(p);
        log1m_bound_ = std::log1p(-weak_link_bound);
    }

    // Samples every unit of one device's packets and appends to the table.
    void sample_device(Point2 dev, std::span<const TransmissionRecord> packets, Rng& rng,
                       ReceptionTable& table)
    {
        std::size_t n_units = 0;
        for (const auto& tx : packets) n_units += tx.units.size();
        if (n_units == 0) return;

        classify_static_links(dev);

        // Strong links: one uniform per unit, compared in batch.
        const std::size_t n_strong = strong_.size();
        masks_.resize(n_strong * n_units);
        bits_.resize(n_units);
        uniforms_.resize(n_units);
        for (std::size_t s = 0; s < n_strong; ++s) {
            for (auto& b : bits_) b = rng();
            kernels_.uniforms(bits_, uniforms_);
            kernels_.less_scalar_mask(uniforms_, strong_[s].probability,
                                      std::span(masks_).subspan(s * n_units, n_units));
        }

        // LEO: gamma gain per unit against the unit's own threshold.
        if (gw_.leo) {
            gains_.assign(n_units, 0.0);
            thresholds_.assign(n_units, std::numeric_limits<double>::infinity());
            std::size_t k = 0;
            for (const auto& tx : packets) {
                for (const auto& unit : tx.units) {
                    const LookAngle look = device_elevation_and_distance(dev, laps_->state_at(unit.start_s));
                    if (look.elevation_rad > 0.0) {
                        const NtnFadingParams p = shadowed_rice_params(look.elevation_rad, cfg_.channel.fading);
                        thresholds_[k] = ntn_gain_threshold(LinkKind::leo, look.distance_m, cfg_.channel);
                        gains_[k] = sample_ntn_fading(p, rng);
                    }
                    ++k;
                }
            }
            leo_erased_.resize(n_units);
            kernels_.less_mask(gains_, thresholds_, leo_erased_);
        }

        const auto leo_id = static_cast<std::uint32_t>(gw_.leo_index());
        for (std::size_t k = 0; k < n_units; ++k) {
            const std::size_t first = table.gateway.size();
            for (std::size_t s = 0; s < n_strong; ++s)
                if (masks_[s * n_units + k]) table.gateway.push_back(strong_[s].gateway);
            sample_weak(rng, table.gateway);
            if (gw_.leo && !leo_erased_[k]) table.gateway.push_back(leo_id);
            std::sort(table.gateway.begin() + static_cast<std::ptrdiff_t>(first), table.gateway.end());
            table.offsets.push_back(static_cast<std::uint32_t>(table.gateway.size()));
        }
    }

private:
    void push_site(Point2 p)
    {
        xs_.push_back(p.x);
        ys_.push_back(p.y);
    }

    void classify_static_links(Point2 dev)
    {
        strong_.clear();
        weak_.clear();
        auto file = [&](std::uint32_t g, double p) {
            if (p <= 0.0) return;
            (p >= weak_link_bound ? strong_ : weak_).push_back({g, p});
        };

        const std::size_t n_terr = xs_.size();
        if (n_terr > 0) {
            range2_.resize(n_terr);
            kernels_.squared_ranges(xs_, ys_, dev.x, dev.y, 0.0, range2_);
            for (std::size_t j = 0; j < n_terr; ++j) {
                const double d = std::max(std::sqrt(range2_[j]), 1.0);
                file(static_cast<std::uint32_t>(j), terrestrial_reception_probability(d, cfg_.channel));
            }
        }
        if (gw_.haps) {
            const double d = haps_distance(dev, *gw_.haps);
            const double elev = haps_elevation(dev, *gw_.haps, cfg_.region);
            const double p = elev > 0.0 ? ntn_reception_probability(LinkKind::haps, d, elev, cfg_.channel) : 0.0;
            file(static_cast<std::uint32_t>(gw_.haps_index()), p);
        }
    }

    // Each weak link becomes a candidate with probability weak_link_bound
    // (geometric skips) and is kept with probability p / bound.
    void sample_weak(Rng& rng, std::vector<std::uint32_t>& out)
    {
        const std::size_t n = weak_.size();
        std::size_t pos = 0;
        while (pos < n) {
            const double skip = std::floor(std::log(uniform_open0(rng)) / log1m_bound_);
            if (skip >= static_cast<double>(n - pos)) break;
            pos += static_cast<std::size_t>(skip);
            if (uniform01(rng) * weak_link_bound < weak_[pos].probability) out.push_back(weak_[pos].gateway);
            ++pos;
        }
    }

    const SimulationConfig& cfg_;
    const GatewaySet& gw_;
    const LapSchedule* laps_;
    const kernels::KernelTable& kernels_;
    double log1m_bound_ = 0.0;

    std::vector<double> xs_, ys_, range2_;
    std::vector<StaticLink> strong_, weak_;
    std::vector<std::uint64_t> bits_;
    std::vector<double> uniforms_, gains_, thresholds_;
    std::vector<std::uint8_t> masks_, leo_erased_;
};

// Marks collisions on the reception table. Returns per-unit "overlapped"
// flags (any overlap at all); entry flags are filled for the
// collider-above-sensitivity rule.
std::vector<std::uint8_t> apply_collisions(const std::vector<TransmissionRecord>& traffic,
                                           ReceptionTable& table, bool collider_must_be_heard,
                                           std::vector<std::vector<std::uint32_t>>* neighbours)
{
    std::vector<TimedUnit> units;
    units.reserve(table.units());
    std::uint32_t id = 0;
    for (const auto& tx : traffic)
        for (const auto& u : tx.units) units.push_back({u.start_s, u.end_s(), u.channel, id++});

    std::vector<std::uint8_t> overlapped(table.units(), 0);
    table.entry_collided.assign(table.gateway.size(), 0);
    if (neighbours) neighbours->assign(table.units(), {});

    for_each_overlap(units, [&](std::uint32_t a, std::uint32_t b) {
        overlapped[a] = overlapped[b] = 1;
        if (neighbours) {
            (*neighbours)[a].push_back(b);
            (*neighbours)[b].push_back(a);
        }
        if (!collider_must_be_heard) return;
        // Gateways hearing both: each destroys the other there.
        std::size_t i = table.begin(a), j = table.begin(b);
        while (i < table.end(a) && j < table.end(b)) {
            if (table.gateway[i] < table.gateway[j]) ++i;
            else if (table.gateway[j] < table.gateway[i]) ++j;
            else {
                table.entry_collided[i++] = 1;
                table.entry_collided[j++] = 1;
            }
        }
    });
    return overlapped;
}

struct GatewayCount {
    std::uint32_t gateway;
    std::uint32_t headers;
    std::uint32_t fragments;
};

}  // namespace

RunOutcome simulate_run(const SimulationConfig& cfg, const RunRequest& req, Rng& rng,
                        std::ostream* trace)
{
    if (req.n_devices == 0) throw std::invalid_argument("a run needs at least one device");
    if (!(req.duration_s > 0.0)) throw std::invalid_argument("run duration must be positive");

    const LrFhssConfig& mac = cfg.lrfhss;
    const auto devices = deploy_devices(req.n_devices, cfg.region, rng);
    const GatewaySet gateways = build_gateways(req.scenario, cfg, rng, req.fixed_layout);
    const auto traffic = schedule_traffic(req.n_devices, req.duration_s, cfg.mean_interval_s, mac, rng);

    std::optional<LapSchedule> laps;
    if (gateways.leo)
        laps = LapSchedule::cover(req.duration_s + time_on_air(mac), derive_constants(cfg.orbit), rng);

    RunOutcome out;
    out.gateways = gateways.size();
    out.devices.resize(req.n_devices);
    for (std::size_t i = 0; i < req.n_devices; ++i) out.devices[i].position = devices[i];

    // Traffic is grouped by device.
    ReceptionTable table;
    ReceptionSampler sampler(cfg, gateways, laps ? &*laps : nullptr);
    std::vector<std::size_t> first_unit_of_tx(traffic.size() + 1, 0);
    for (std::size_t t = 0, begin = 0; begin < traffic.size(); begin = t) {
        const std::uint32_t dev = traffic[begin].device_id;
        while (t < traffic.size() && traffic[t].device_id == dev) ++t;
        sampler.sample_device(devices[dev], std::span(traffic).subspan(begin, t - begin), rng, table);
    }
    for (std::size_t t = 0; t < traffic.size(); ++t)
        first_unit_of_tx[t + 1] = first_unit_of_tx[t] + traffic[t].units.size();

    for (std::size_t t = 0; t < traffic.size(); ++t) {
        DeviceOutcome& d = out.devices[traffic[t].device_id];
        for (std::size_t u = first_unit_of_tx[t]; u < first_unit_of_tx[t + 1]; ++u) {
            ++d.units;
            if (table.begin(u) == table.end(u)) ++d.erased_units;
        }
        d.packets += 1;
    }

    const bool success = req.mode != MetricMode::erasure;
    const bool heard_rule = mac.collision_requires_collider_above_gamma;
    std::vector<std::uint8_t> overlapped;
    std::vector<std::vector<std::uint32_t>> neighbours;
    if (success)
        overlapped = apply_collisions(traffic, table, heard_rule, trace ? &neighbours : nullptr);

    auto entry_lost = [&](std::size_t u, std::size_t e) {
        return heard_rule ? table.entry_collided[e] != 0 : overlapped[u] != 0;
    };

    if (success) {
        std::vector<GatewayCount> counts;
        for (std::size_t t = 0; t < traffic.size(); ++t) {
            counts.clear();
            for (std::size_t u = first_unit_of_tx[t], k = 0; u < first_unit_of_tx[t + 1]; ++u, ++k) {
                const bool header = k < mac.header_copies;
                for (std::size_t e = table.begin(u); e < table.end(u); ++e) {
                    if (entry_lost(u, e)) continue;
                    const std::uint32_t g = table.gateway[e];
                    auto it = std::find_if(counts.begin(), counts.end(),
                                           [g](const GatewayCount& c) { return c.gateway == g; });
                    if (it == counts.end()) it = counts.insert(counts.end(), {g, 0, 0});
                    (header ? it->headers : it->fragments) += 1;
                }
            }
            const bool decoded = std::any_of(counts.begin(), counts.end(), [&](const GatewayCount& c) {
                return gateway_decodes(c.headers, c.fragments, mac);
            });
            if (decoded) out.devices[traffic[t].device_id].decoded += 1;
        }
    }

    for (const auto& d : out.devices) {
        out.units += d.units;
        out.erased_units += d.erased_units;
        out.packets += d.packets;
        out.decoded += d.decoded;
    }

    if (trace) {
        write_trace_header(*trace);
        for (std::size_t t = 0; t < traffic.size(); ++t) {
            const auto& tx = traffic[t];
            for (std::size_t k = 0; k < tx.units.size(); ++k) {
                const std::size_t u = first_unit_of_tx[t] + k;
                for (std::uint32_t g = 0; g < gateways.size(); ++g) {
                    const bool erased = !table.heard_at(u, g);
                    bool collided = false;
                    if (success) {
                        if (!heard_rule) {
                            collided = overlapped[u] != 0;
                        } else {
                            for (std::uint32_t v : neighbours[u])
                                collided = collided || table.heard_at(v, g);
                        }
                    }
                    *trace << tx.device_id << ',' << tx.start_s << ',' << g << ',' << k << ','
                           << (tx.units[k].kind == UnitKind::header ? "header" : "fragment") << ','
                           << tx.units[k].channel << ',' << erased << ',' << collided << ','
                           << (!erased && !collided) << '\n';
                }
            }
        }
    }
    return out;
}

}  // namespace ntnsim
