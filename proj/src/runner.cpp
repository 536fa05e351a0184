#include "ntnsim/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ntnsim/orbit.hpp"

namespace ntnsim {

namespace {

constexpr std::uint64_t layout_stream_tag = 0xFFFF'FFFF'FFFF'FFFFULL;
constexpr std::uint64_t orbit_stream_tag = 0xFFFF'FFFF'FFFF'FFFEULL;

const char* mode_name(MetricMode m)
{
    switch (m) {
    case MetricMode::erasure: return "erasure";
    case MetricMode::success: return "success";
    case MetricMode::both: return "both";
    }
    return "?";
}

std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.precision(12);
    return out;
}

nlohmann::json metadata_json(const SimulationConfig& cfg, const std::string& scenario,
                             std::optional<std::uint64_t> seed, bool seed_generated)
{
    nlohmann::json j;
    j["config_hash"] = hex64(config_hash(cfg));
    j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
    j["seed_source"] = seed_generated ? "entropy" : "given";
    j["scenario"] = scenario;
    j["version"] = artifact_version;
    return j;
}

void write_summary(const std::filesystem::path& path, const nlohmann::json& j)
{
    auto out = open_output(path);
    out << j.dump(2) << '\n';
}

std::string seed_header(const ScenarioSpec& spec, const SimulationConfig& cfg)
{
    std::string h = metadata_header(cfg, spec.scenario.name(), spec.master_seed);
    if (spec.seed_generated) h += "# seed_source=entropy\n";
    return h;
}

}  // namespace

void ScenarioSpec::validate() const
{
    if (n_runs < 1) throw ConfigError("run.runs must be at least 1", "run.runs");
    if (!(duration_s > 0.0) || !std::isfinite(duration_s))
        throw ConfigError("run.duration_s must be positive", "run.duration_s");
    if (scenario.terrestrial_bs == 0 && !scenario.haps && !scenario.leo)
        throw ConfigError("scenario has no gateways", "run.scenario");
    if (mode == MetricMode::erasure && n_devices == 0)
        throw ConfigError("run.devices must be at least 1", "run.devices");
    if (mode != MetricMode::erasure) {
        if (sweep_devices.empty()) throw ConfigError("device sweep is empty", "run.sweep_devices");
        for (auto n : sweep_devices)
            if (n == 0) throw ConfigError("zero devices: no packets to measure", "run.sweep_devices");
    }
}

ScenarioSpec make_spec(const SimulationConfig& cfg, MetricMode mode)
{
    ScenarioSpec s;
    s.scenario = parse_scenario(cfg.run.scenario);
    s.n_devices = cfg.run.devices;
    s.sweep_devices = cfg.run.sweep_devices;
    s.n_runs = cfg.run.runs;
    s.duration_s = cfg.run.duration_s;
    s.mode = mode;
    s.seed_generated = !cfg.run.seed.has_value();
    s.master_seed = cfg.run.seed ? *cfg.run.seed : entropy_seed();
    s.fixed_layout = cfg.run.fixed_layout;
    s.workers = resolve_workers(cfg.run.workers);
    s.validate();
    return s;
}

Rng seed_management(std::uint64_t master_seed, std::uint64_t run_index, std::uint64_t sweep_point)
{
    return make_stream(master_seed, run_index, sweep_point);
}

std::size_t resolve_workers(std::size_t requested)
{
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

std::optional<BasestationLayout> shared_layout(const ScenarioSpec& spec, const SimulationConfig& cfg)
{
    if (!spec.fixed_layout || spec.scenario.terrestrial_bs == 0) return std::nullopt;
    Rng rng = make_stream(spec.master_seed, 0, layout_stream_tag);
    return deploy_basestations(spec.scenario.terrestrial_bs, cfg.region, rng);
}

struct ErasurePartial {
    std::vector<ErasureSample> samples;
    double mean = 0.0;
    std::size_t units = 0;
    std::size_t erased = 0;
    std::string trace;
};

}  // namespace

ErasureReport run_erasure_experiment(const ScenarioSpec& spec, const SimulationConfig& cfg,
                                     const ExperimentHooks& hooks)
{
    spec.validate();
    cfg.validate();
    const auto layout = shared_layout(spec, cfg);

    ErasureReport report{spec, HeatmapGrid(cfg.region.radius_m, cfg.run.heatmap_bin_m), {}, {}, {}, 0, 0, 0, {}};
    RadialProfileBuilder radial(cfg.region.radius_m, cfg.run.radial_rings);
    std::vector<double> values;

    RunRequest req;
    req.scenario = spec.scenario;
    req.n_devices = spec.n_devices;
    req.duration_s = spec.duration_s;
    req.mode = MetricMode::erasure;
    req.fixed_layout = layout ? &*layout : nullptr;

    const std::function<ErasurePartial(std::size_t)> work = [&](std::size_t run) {
        Rng rng = seed_management(spec.master_seed, run);
        std::ostringstream trace;
        trace.precision(12);
        const bool tracing = hooks.keep_trace && run == 0;
        const RunOutcome o = simulate_run(cfg, req, rng, tracing ? &trace : nullptr);
        return ErasurePartial{o.erasure_samples(), o.mean_device_erasure(), o.units, o.erased_units,
                              tracing ? trace.str() : std::string{}};
    };
    const std::function<void(std::size_t, ErasurePartial&&)> merge = [&](std::size_t run, ErasurePartial&& p) {
        for (const auto& s : p.samples) {
            report.heatmap.add(s);
            radial.add(s);
            values.push_back(s.mean_erasure);
        }
        if (!std::isnan(p.mean)) report.run_means.add(p.mean);
        report.units += p.units;
        report.erased_units += p.erased;
        report.samples += p.samples.size();
        if (run == 0) report.trace_csv = std::move(p.trace);
        if (hooks.progress) hooks.progress(run + 1, spec.n_runs);
    };
    run_ordered(spec.n_runs, spec.workers, work, merge);

    report.radial = radial.rings();
    if (!values.empty()) report.violin = distribution_summary(std::move(values), cfg.run.violin_bins);
    return report;
}

SuccessReport run_success_experiment(const ScenarioSpec& spec, const SimulationConfig& cfg,
                                     const ExperimentHooks& hooks)
{
    if (spec.mode == MetricMode::erasure) {
        ScenarioSpec copy = spec;
        copy.mode = MetricMode::success;
        copy.validate();
    } else {
        spec.validate();
    }
    cfg.validate();
    const auto layout = shared_layout(spec, cfg);

    SuccessReport report{spec, {}, {}, {}};
    const std::size_t total = spec.n_runs * spec.sweep_devices.size();
    std::size_t done = 0;

    for (std::size_t n : spec.sweep_devices) {
        RunRequest req;
        req.scenario = spec.scenario;
        req.n_devices = n;
        req.duration_s = spec.duration_s;
        req.mode = MetricMode::success;
        req.fixed_layout = layout ? &*layout : nullptr;

        struct Partial {
            double rate;
            std::size_t packets;
            std::size_t decoded;
        };
        std::vector<double> rates;
        std::size_t packets = 0, decoded = 0;
        const std::function<Partial(std::size_t)> work = [&](std::size_t run) {
            Rng rng = seed_management(spec.master_seed, run, n);
            const RunOutcome o = simulate_run(cfg, req, rng);
            return Partial{o.success_rate(), o.packets, o.decoded};
        };
        const std::function<void(std::size_t, Partial&&)> merge = [&](std::size_t, Partial&& p) {
            rates.push_back(p.rate);
            packets += p.packets;
            decoded += p.decoded;
            if (hooks.progress) hooks.progress(++done, total);
        };
        run_ordered(spec.n_runs, spec.workers, work, merge);

        report.points.push_back(success_statistics(rates, n));
        report.packets.push_back(packets);
        report.decoded.push_back(decoded);
    }
    return report;
}

CostReport run_cost_report(const SimulationConfig& cfg)
{
    cfg.validate();
    CostReport r;
    r.station_counts = cfg.run.cost_station_counts;
    r.horizon_years = cfg.cost.horizon_years;

    std::vector<std::size_t> grid;
    for (std::size_t n = 0; n <= cfg.run.cost_max_devices; n += cfg.run.cost_step) grid.push_back(n);
    if (grid.back() != cfg.run.cost_max_devices) grid.push_back(cfg.run.cost_max_devices);
    r.rows = cost_sweep(cfg.cost, grid, r.station_counts);

    const CostModel haps = haps_cost_model(cfg.cost);
    const CostModel leo = leo_cost_model(cfg.cost);
    r.crossovers.push_back({"LEO", "HAPS", crossover_devices(leo, haps)});
    for (std::size_t m : r.station_counts) {
        const CostModel tn = terrestrial_cost_model(cfg.cost, m);
        const std::string name = "TN(" + std::to_string(m) + ")";
        r.crossovers.push_back({"LEO", name, crossover_devices(leo, tn)});
        r.crossovers.push_back({"HAPS", name, crossover_devices(haps, tn)});
    }
    return r;
}

std::string metadata_header(const SimulationConfig& cfg, const std::string& scenario,
                            std::optional<std::uint64_t> seed)
{
    std::ostringstream h;
    h << "# config_hash=" << hex64(config_hash(cfg)) << '\n'
      << "# seed=" << (seed ? std::to_string(*seed) : std::string("none")) << '\n'
      << "# scenario=" << scenario << '\n'
      << "# version=" << artifact_version << '\n';
    return h.str();
}

std::vector<std::filesystem::path> write_erasure_outputs(const ErasureReport& r,
                                                         const SimulationConfig& cfg,
                                                         const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    const std::string header = seed_header(r.spec, cfg);
    std::vector<std::filesystem::path> files;
    auto emit = [&](const char* name, auto&& body) {
        const auto path = dir / name;
        auto out = open_output(path);
        out << header;
        body(out);
        files.push_back(path);
    };
    emit("heatmap.csv", [&](std::ostream& o) { write_heatmap_csv(o, r.heatmap); });
    emit("radial_profile.csv", [&](std::ostream& o) { write_radial_csv(o, r.radial); });
    emit("violin_stats.csv", [&](std::ostream& o) { write_violin_stats_csv(o, r.violin); });
    emit("violin_hist.csv", [&](std::ostream& o) { write_violin_hist_csv(o, r.violin); });
    if (!r.trace_csv.empty())
        emit("trace_run0.csv", [&](std::ostream& o) { o << r.trace_csv; });

    nlohmann::json j;
    j["metadata"] = metadata_json(cfg, r.spec.scenario.name(), r.spec.master_seed, r.spec.seed_generated);
    j["command"] = mode_name(MetricMode::erasure);
    j["devices"] = r.spec.n_devices;
    j["runs"] = r.spec.n_runs;
    j["duration_s"] = r.spec.duration_s;
    j["fixed_layout"] = r.spec.fixed_layout;
    j["mean_device_erasure"] = r.run_means.mean();
    j["mean_device_erasure_se"] = r.run_means.std_error();
    j["unit_erasure"] = r.units ? static_cast<double>(r.erased_units) / static_cast<double>(r.units) : NAN;
    j["units"] = r.units;
    j["device_samples"] = r.samples;
    j["violin"] = {{"median", r.violin.median}, {"q1", r.violin.q1}, {"q3", r.violin.q3},
                   {"min", r.violin.min}, {"max", r.violin.max}, {"mean", r.violin.mean}};
    nlohmann::json rings = nlohmann::json::array();
    for (const auto& ring : r.radial)
        rings.push_back({{"inner_m", ring.inner_m}, {"outer_m", ring.outer_m},
                         {"mean", ring.mean ? nlohmann::json(*ring.mean) : nlohmann::json(nullptr)},
                         {"count", ring.count}});
    j["radial_profile"] = rings;
    const auto path = dir / "summary.json";
    write_summary(path, j);
    files.push_back(path);
    return files;
}

std::vector<std::filesystem::path> write_success_outputs(const SuccessReport& r,
                                                         const SimulationConfig& cfg,
                                                         const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> files;
    {
        const auto path = dir / "success_curve.csv";
        auto out = open_output(path);
        out << seed_header(r.spec, cfg);
        write_success_curve_csv(out, r.points);
        files.push_back(path);
    }
    nlohmann::json j;
    j["metadata"] = metadata_json(cfg, r.spec.scenario.name(), r.spec.master_seed, r.spec.seed_generated);
    j["command"] = mode_name(MetricMode::success);
    j["runs"] = r.spec.n_runs;
    j["duration_s"] = r.spec.duration_s;
    j["fixed_layout"] = r.spec.fixed_layout;
    nlohmann::json pts = nlohmann::json::array();
    for (std::size_t i = 0; i < r.points.size(); ++i)
        pts.push_back({{"devices", r.points[i].n_devices}, {"mean", r.points[i].mean},
                       {"ci95", r.points[i].ci95}, {"runs", r.points[i].runs},
                       {"packets", r.packets[i]}, {"decoded", r.decoded[i]}});
    j["points"] = pts;
    const auto path = dir / "summary.json";
    write_summary(path, j);
    files.push_back(path);
    return files;
}

std::vector<std::filesystem::path> write_cost_outputs(const CostReport& r,
                                                      const SimulationConfig& cfg,
                                                      const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    const std::string header = metadata_header(cfg, "cost", std::nullopt);
    std::vector<std::filesystem::path> files;
    {
        const auto path = dir / "cost_sweep.csv";
        auto out = open_output(path);
        out << header;
        write_cost_sweep_csv(out, r.rows, r.station_counts, r.horizon_years);
        files.push_back(path);
    }
    {
        const auto path = dir / "crossover.csv";
        auto out = open_output(path);
        out << header << "first,second,devices\n";
        for (const auto& c : r.crossovers)
            out << c.first << ',' << c.second << ',' << (c.devices ? std::to_string(*c.devices) : "none") << '\n';
        files.push_back(path);
    }
    nlohmann::json j;
    j["metadata"] = metadata_json(cfg, "cost", std::nullopt, false);
    j["command"] = "cost";
    const CostModel haps = haps_cost_model(cfg.cost);
    j["haps_npv_usd"] = to_usd(npv_total(haps, 0, 0));
    j["leo_npv_usd_per_device"] = to_usd(npv_total(leo_cost_model(cfg.cost), 1, 0));
    nlohmann::json tn = nlohmann::json::object();
    for (std::size_t m : r.station_counts)
        tn[std::to_string(m)] = to_usd(npv_total(terrestrial_cost_model(cfg.cost, m), 0, m));
    j["terrestrial_npv_usd"] = tn;
    nlohmann::json cross = nlohmann::json::array();
    for (const auto& c : r.crossovers)
        cross.push_back({{"first", c.first}, {"second", c.second},
                         {"devices", c.devices ? nlohmann::json(*c.devices) : nlohmann::json(nullptr)}});
    j["crossovers"] = cross;
    const auto path = dir / "summary.json";
    write_summary(path, j);
    files.push_back(path);
    return files;
}

std::vector<std::filesystem::path> write_orbit_trace(const SimulationConfig& cfg,
                                                     std::uint64_t seed, bool seed_generated,
                                                     const std::filesystem::path& dir)
{
    cfg.validate();
    std::filesystem::create_directories(dir);
    const OrbitDerived d = derive_constants(cfg.orbit);
    Rng rng = make_stream(seed, 0, orbit_stream_tag);
    const LapSample lap = sample_lap(d, rng);

    std::vector<std::filesystem::path> files;
    {
        const auto path = dir / "orbit_trace.csv";
        auto out = open_output(path);
        out << metadata_header(cfg, "LEO", seed);
        if (seed_generated) out << "# seed_source=entropy\n";
        write_orbit_trace_csv(out, lap, d, cfg.run.orbit_trace_step_s);
        files.push_back(path);
    }
    nlohmann::json j;
    j["metadata"] = metadata_json(cfg, "LEO", seed, seed_generated);
    j["command"] = "orbit-trace";
    j["omega_s_rad_s"] = d.omega_s;
    j["omega_rad_s"] = d.omega;
    j["gamma0_deg"] = rad_to_deg(d.gamma0);
    j["max_lap_s"] = d.max_lap_s;
    j["lap_duration_s"] = lap.duration_s;
    j["lap_azimuth_deg"] = rad_to_deg(lap.azimuth_rad);
    const auto path = dir / "summary.json";
    write_summary(path, j);
    files.push_back(path);
    return files;
}

}  // namespace ntnsim
