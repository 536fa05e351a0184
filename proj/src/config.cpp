#include "ntnsim/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>

namespace ntnsim {

ConfigError::ConfigError(std::string message, std::string key, std::size_t line)
    : std::runtime_error(std::move(message)), key_(std::move(key)), line_(line)
{
}

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view what, std::string_view value)
{
    throw std::invalid_argument("expected " + std::string(what) + ", got '" + std::string(value) + "'");
}

double parse_double(std::string_view v)
{
    v = trim(v);
    if (v == "inf" || v == "infinity") return std::numeric_limits<double>::infinity();
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value("a number", v);
    return out;
}

std::uint64_t parse_u64(std::string_view v)
{
    v = trim(v);
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value("a non-negative integer", v);
    return out;
}

std::size_t parse_size(std::string_view v) { return static_cast<std::size_t>(parse_u64(v)); }

bool parse_bool(std::string_view v)
{
    v = trim(v);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    bad_value("true or false", v);
}

std::vector<std::string_view> split(std::string_view v, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (pos <= v.size()) {
        const auto next = v.find(sep, pos);
        parts.push_back(trim(v.substr(pos, next == std::string_view::npos ? v.npos : next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return parts;
}

std::vector<std::size_t> parse_size_list(std::string_view v)
{
    std::vector<std::size_t> out;
    for (auto part : split(v, ','))
        if (!part.empty()) out.push_back(parse_size(part));
    if (out.empty()) bad_value("a comma-separated list", v);
    return out;
}

CodingRate parse_fraction(std::string_view v)
{
    const auto parts = split(v, '/');
    CodingRate cr;
    if (parts.size() == 2) {
        cr.num = static_cast<int>(parse_u64(parts[0]));
        cr.den = static_cast<int>(parse_u64(parts[1]));
    } else if (parts.size() == 1 && parse_double(parts[0]) == 1.0) {
        cr = {1, 1};
    } else {
        bad_value("a fraction like 1/3", v);
    }
    if (cr.num <= 0 || cr.den <= 0) bad_value("a positive fraction", v);
    return cr;
}

// "0:24,5000:20" -> tiers in USD per device per year.
std::vector<PriceTier> parse_tiers(std::string_view v)
{
    std::vector<PriceTier> out;
    for (auto part : split(v, ',')) {
        if (part.empty()) continue;
        const auto kv = split(part, ':');
        if (kv.size() != 2) bad_value("tiers like 0:24,5000:20", v);
        out.push_back({parse_size(kv[0]), usd(parse_double(kv[1]))});
    }
    if (out.empty()) bad_value("at least one price tier", v);
    return out;
}

// Shortest text that reads back to the same double.
std::string fmt(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// Fewest digits whose degree value converts back to the same radians.
std::string fmt_degrees(double rad)
{
    const double deg = rad_to_deg(rad);
    for (int digits = 1; digits <= 17; ++digits) {
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, deg, std::chars_format::general, digits);
        double back = 0.0;
        std::from_chars(buf, res.ptr, back);
        if (deg_to_rad(back) == rad) return fmt(back);
    }
    return fmt(deg);
}

std::string fmt_list(const std::vector<std::size_t>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

struct Binding {
    std::string key;
    std::string unit;
    std::function<void(SimulationConfig&, std::string_view)> set;
    std::function<std::string(const SimulationConfig&)> get;
};

template <typename Access>
Binding real(std::string key, std::string unit, Access a)
{
    return {std::move(key), std::move(unit),
            [a](SimulationConfig& c, std::string_view v) { a(c) = parse_double(v); },
            [a](const SimulationConfig& c) { return fmt(a(c)); }};
}

template <typename Access>
Binding degrees(std::string key, Access a)
{
    return {std::move(key), "deg",
            [a](SimulationConfig& c, std::string_view v) { a(c) = deg_to_rad(parse_double(v)); },
            [a](const SimulationConfig& c) { return fmt_degrees(a(c)); }};
}

template <typename Access>
Binding count(std::string key, std::string unit, Access a)
{
    return {std::move(key), std::move(unit),
            [a](SimulationConfig& c, std::string_view v) { a(c) = parse_size(v); },
            [a](const SimulationConfig& c) { return std::to_string(a(c)); }};
}

template <typename Access>
Binding flag(std::string key, Access a)
{
    return {std::move(key), "bool",
            [a](SimulationConfig& c, std::string_view v) { a(c) = parse_bool(v); },
            [a](const SimulationConfig& c) {
                return std::string(a(c) ? "true" : "false");
            }};
}

template <typename Access>
Binding money(std::string key, std::string unit, Access a)
{
    return {std::move(key), std::move(unit),
            [a](SimulationConfig& c, std::string_view v) { a(c) = usd(parse_double(v)); },
            [a](const SimulationConfig& c) { return fmt(to_usd(a(c))); }};
}

template <typename Access>
Binding list(std::string key, Access a)
{
    return {std::move(key), "comma list",
            [a](SimulationConfig& c, std::string_view v) { a(c) = parse_size_list(v); },
            [a](const SimulationConfig& c) { return fmt_list(a(c)); }};
}

const std::vector<Binding>& bindings()
{
    using C = SimulationConfig;
    static const std::vector<Binding> table = {
        real("region.radius_m", "m", [](auto& c) -> auto& { return c.region.radius_m; }),
        real("region.guard_radius_m", "m", [](auto& c) -> auto& { return c.region.guard_radius_m; }),
        real("region.min_bs_separation_m", "m", [](auto& c) -> auto& { return c.region.min_bs_separation_m; }),
        real("region.earth_radius_m", "m", [](auto& c) -> auto& { return c.region.earth_radius_m; }),
        count("region.placement_attempts", "attempts per BS", [](auto& c) -> auto& { return c.region.placement_attempts; }),

        real("haps.altitude_m", "m", [](auto& c) -> auto& { return c.haps.altitude_m; }),

        real("orbit.altitude_m", "m", [](auto& c) -> auto& { return c.orbit.altitude_m; }),
        degrees("orbit.inclination_deg", [](auto& c) -> auto& { return c.orbit.inclination_rad; }),
        degrees("orbit.min_elevation_deg", [](auto& c) -> auto& { return c.orbit.min_elevation_rad; }),
        real("orbit.earth_radius_m", "m", [](auto& c) -> auto& { return c.orbit.earth_radius_m; }),
        real("orbit.mu_earth", "m^3/s^2", [](auto& c) -> auto& { return c.orbit.mu_earth; }),
        real("orbit.sidereal_day_s", "s", [](auto& c) -> auto& { return c.orbit.sidereal_day_s; }),
        {"orbit.central_angle", "corrected|printed",
         [](C& c, std::string_view v) {
             v = trim(v);
             if (v == "corrected") c.orbit.central_angle = CentralAngleForm::corrected;
             else if (v == "printed") c.orbit.central_angle = CentralAngleForm::printed;
             else bad_value("corrected or printed", v);
         },
         [](const C& c) {
             return std::string(c.orbit.central_angle == CentralAngleForm::printed ? "printed" : "corrected");
         }},
        {"orbit.range_mode", "paper|exact_slant",
         [](C& c, std::string_view v) {
             v = trim(v);
             if (v == "paper") c.orbit.range_mode = RangeMode::paper;
             else if (v == "exact_slant") c.orbit.range_mode = RangeMode::exact_slant;
             else bad_value("paper or exact_slant", v);
         },
         [](const C& c) {
             return std::string(c.orbit.range_mode == RangeMode::exact_slant ? "exact_slant" : "paper");
         }},

        real("link.tx_power_dbm", "dBm", [](auto& c) -> auto& { return c.channel.link.tx_power_dbm; }),
        real("link.carrier_hz", "Hz", [](auto& c) -> auto& { return c.channel.link.carrier_hz; }),
        real("link.tx_gain_dbi", "dBi", [](auto& c) -> auto& { return c.channel.link.tx_gain_dbi; }),
        real("link.rx_gain_haps_dbi", "dBi", [](auto& c) -> auto& { return c.channel.link.rx_gain_haps_dbi; }),
        real("link.rx_gain_sat_dbi", "dBi", [](auto& c) -> auto& { return c.channel.link.rx_gain_sat_dbi; }),
        real("link.rx_gain_terr_dbi", "dBi", [](auto& c) -> auto& { return c.channel.link.rx_gain_terr_dbi; }),
        real("link.sensitivity_dbm", "dBm", [](auto& c) -> auto& { return c.channel.link.sensitivity_dbm; }),
        real("link.speed_of_light", "m/s", [](auto& c) -> auto& { return c.channel.link.speed_of_light; }),

        real("terrestrial.ref_distance_m", "m", [](auto& c) -> auto& { return c.channel.terrestrial.ref_distance_m; }),
        real("terrestrial.pathloss_ref_db", "dB", [](auto& c) -> auto& { return c.channel.terrestrial.pathloss_ref_db; }),
        real("terrestrial.exponent", "-", [](auto& c) -> auto& { return c.channel.terrestrial.exponent; }),
        real("terrestrial.shadow_sigma_db", "dB", [](auto& c) -> auto& { return c.channel.terrestrial.shadow_sigma_db; }),

        degrees("fading.min_elevation_deg", [](auto& c) -> auto& { return c.channel.fading.min_elevation_rad; }),

        count("lrfhss.channels", "count", [](auto& c) -> auto& { return c.lrfhss.n_channels; }),
        count("lrfhss.header_copies", "count", [](auto& c) -> auto& { return c.lrfhss.header_copies; }),
        real("lrfhss.header_duration_s", "s", [](auto& c) -> auto& { return c.lrfhss.header_duration_s; }),
        real("lrfhss.fragment_duration_s", "s", [](auto& c) -> auto& { return c.lrfhss.fragment_duration_s; }),
        {"lrfhss.coding_rate", "fraction",
         [](C& c, std::string_view v) { c.lrfhss.coding_rate = parse_fraction(v); },
         [](const C& c) {
             return std::to_string(c.lrfhss.coding_rate.num) + "/" + std::to_string(c.lrfhss.coding_rate.den);
         }},
        count("lrfhss.payload_bytes", "bytes", [](auto& c) -> auto& { return c.lrfhss.payload_bytes; }),
        real("lrfhss.channel_width_hz", "Hz", [](auto& c) -> auto& { return c.lrfhss.channel_width_hz; }),
        flag("lrfhss.distinct_header_channels", [](auto& c) -> auto& { return c.lrfhss.distinct_header_channels; }),
        flag("lrfhss.collision_requires_collider_above_gamma",
             [](auto& c) -> auto& { return c.lrfhss.collision_requires_collider_above_gamma; }),

        real("traffic.mean_interval_s", "s", [](auto& c) -> auto& { return c.mean_interval_s; }),

        money("cost.haps_capex_usd", "USD", [](auto& c) -> auto& { return c.cost.haps_capex; }),
        money("cost.haps_opex_usd", "USD/year", [](auto& c) -> auto& { return c.cost.haps_opex_year; }),
        {"cost.leo_price_tiers", "min_devices:USD/device/year list",
         [](C& c, std::string_view v) { c.cost.leo_prices = parse_tiers(v); },
         [](const C& c) {
             std::string s;
             for (std::size_t i = 0; i < c.cost.leo_prices.size(); ++i)
                 s += (i ? "," : "") + std::to_string(c.cost.leo_prices[i].min_devices) + ":" +
                      fmt(to_usd(c.cost.leo_prices[i].per_device_year));
             return s;
         }},
        money("cost.tower_lease_usd", "USD/year per BS", [](auto& c) -> auto& { return c.cost.tower_lease_year; }),
        real("cost.discount", "rate", [](auto& c) -> auto& { return c.cost.discount; }),
        {"cost.horizon_years", "years",
         [](C& c, std::string_view v) { c.cost.horizon_years = static_cast<int>(parse_u64(v)); },
         [](const C& c) { return std::to_string(c.cost.horizon_years); }},

        {"run.scenario", "name",
         [](C& c, std::string_view v) { c.run.scenario = std::string(trim(v)); },
         [](const C& c) { return c.run.scenario; }},
        count("run.devices", "count", [](auto& c) -> auto& { return c.run.devices; }),
        list("run.sweep_devices", [](auto& c) -> auto& { return c.run.sweep_devices; }),
        count("run.runs", "count", [](auto& c) -> auto& { return c.run.runs; }),
        real("run.duration_s", "s", [](auto& c) -> auto& { return c.run.duration_s; }),
        {"run.seed", "integer",
         [](C& c, std::string_view v) {
             if (v == "auto") c.run.seed.reset();
             else c.run.seed = parse_u64(v);
         },
         [](const C& c) { return c.run.seed ? std::to_string(*c.run.seed) : std::string("auto"); }},
        count("run.workers", "threads, 0 = all cores", [](auto& c) -> auto& { return c.run.workers; }),
        flag("run.fixed_layout", [](auto& c) -> auto& { return c.run.fixed_layout; }),
        real("run.heatmap_bin_m", "m", [](auto& c) -> auto& { return c.run.heatmap_bin_m; }),
        count("run.radial_rings", "count", [](auto& c) -> auto& { return c.run.radial_rings; }),
        count("run.violin_bins", "count", [](auto& c) -> auto& { return c.run.violin_bins; }),
        count("run.cost_max_devices", "count", [](auto& c) -> auto& { return c.run.cost_max_devices; }),
        count("run.cost_step", "count", [](auto& c) -> auto& { return c.run.cost_step; }),
        list("run.cost_station_counts", [](auto& c) -> auto& { return c.run.cost_station_counts; }),
        real("run.orbit_trace_step_s", "s", [](auto& c) -> auto& { return c.run.orbit_trace_step_s; }),
    };
    return table;
}

const Binding* find_binding(std::string_view key)
{
    for (const auto& b : bindings())
        if (b.key == key) return &b;
    return nullptr;
}

}  // namespace

void set_config_value(SimulationConfig& cfg, std::string_view key, std::string_view value)
{
    const Binding* b = find_binding(trim(key));
    if (!b) throw ConfigError("unknown key '" + std::string(trim(key)) + "'", std::string(trim(key)));
    try {
        b->set(cfg, value);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(b->key + ": " + e.what(), b->key);
    }
}

void apply_config_text(SimulationConfig& cfg, std::string_view text, std::string_view origin)
{
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? text.npos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::string where = std::string(origin) + ":" + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(where + ": expected 'key = value'", {}, line_no);
        const auto key = trim(line.substr(0, eq));
        try {
            set_config_value(cfg, key, trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(where + ": " + e.what(), e.key(), line_no);
        }
    }
}

SimulationConfig load_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    SimulationConfig cfg;
    apply_config_text(cfg, ss.str(), path);
    return cfg;
}

void SimulationConfig::validate() const
{
    auto check = [](const char* key, auto&& fn) {
        try {
            fn();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string(key) + ": " + e.what(), key);
        } catch (const ParameterOutOfRange& e) {
            throw ConfigError(std::string(key) + ": " + e.what(), key);
        }
    };
    check("region", [&] { region.validate(); });
    check("haps", [&] { haps.validate(); });
    check("orbit", [&] { orbit.validate(); });
    check("link", [&] { channel.link.validate(); });
    check("terrestrial", [&] { channel.terrestrial.validate(); });
    check("fading.min_elevation_deg", [&] { channel.validate(); });
    check("lrfhss", [&] { lrfhss.validate(); });
    if (!(mean_interval_s > 0.0))
        throw ConfigError("traffic.mean_interval_s: must be positive", "traffic.mean_interval_s");
    if (cost.horizon_years < 0 || cost.discount < 0.0)
        throw ConfigError("cost: horizon and discount must be non-negative", "cost.discount");
    if (run.runs == 0) throw ConfigError("run.runs: need at least one run", "run.runs");
    if (!(run.duration_s > 0.0)) throw ConfigError("run.duration_s: must be positive", "run.duration_s");
    if (!(run.heatmap_bin_m > 0.0)) throw ConfigError("run.heatmap_bin_m: must be positive", "run.heatmap_bin_m");
    if (run.radial_rings == 0) throw ConfigError("run.radial_rings: must be positive", "run.radial_rings");
    if (run.violin_bins == 0) throw ConfigError("run.violin_bins: must be positive", "run.violin_bins");
    if (run.cost_step == 0) throw ConfigError("run.cost_step: must be positive", "run.cost_step");
}

std::vector<ConfigKey> config_keys()
{
    std::vector<ConfigKey> out;
    for (const auto& b : bindings()) out.push_back({b.key, b.unit});
    return out;
}

std::vector<std::pair<std::string, std::string>> config_entries(const SimulationConfig& cfg)
{
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& b : bindings()) out.emplace_back(b.key, b.get(cfg));
    return out;
}

std::uint64_t config_hash(const SimulationConfig& cfg)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&](std::string_view s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& [key, value] : config_entries(cfg)) {
        if (key == "run.seed" || key == "run.workers") continue;
        feed(key);
        feed("=");
        feed(value);
        feed("\n");
    }
    return h;
}

std::string hex64(std::uint64_t v)
{
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

}  // namespace ntnsim
