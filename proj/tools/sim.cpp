// sim: command-line front end for the hybrid NTN/TN IoT simulator.

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ntnsim/config.hpp"
#include "ntnsim/geometry.hpp"
#include "ntnsim/kernels.hpp"
#include "ntnsim/runner.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_placement = 3;
constexpr int exit_runtime = 4;

struct Options {
    std::string config_path;
    std::string scenario;
    std::string devices;
    std::string runs;
    std::string duration;
    std::string seed;
    std::string workers;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    bool fixed_layout = false;
    bool trace = false;
    bool quiet = false;
};

// "90", "90s", "15m", "24h" -> seconds.
std::string duration_seconds(const std::string& text)
{
    if (text.empty()) throw ntnsim::ConfigError("empty duration", "run.duration_s");
    double scale = 1.0;
    std::string number = text;
    switch (std::tolower(static_cast<unsigned char>(text.back()))) {
    case 's': number.pop_back(); break;
    case 'm': scale = 60.0; number.pop_back(); break;
    case 'h': scale = 3600.0; number.pop_back(); break;
    case 'd': scale = 86400.0; number.pop_back(); break;
    default: break;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(number, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != number.size())
        throw ntnsim::ConfigError("bad duration '" + text + "'", "run.duration_s");
    std::ostringstream os;
    os.precision(17);
    os << v * scale;
    return os.str();
}

ntnsim::SimulationConfig build_config(const Options& o, bool sweep)
{
    ntnsim::SimulationConfig cfg = o.config_path.empty() ? ntnsim::SimulationConfig{}
                                                         : ntnsim::load_config_file(o.config_path);
    for (const auto& kv : o.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ntnsim::ConfigError("--set expects key=value, got '" + kv + "'");
        ntnsim::apply_config_text(cfg, kv, "--set");
    }
    if (!o.scenario.empty()) ntnsim::set_config_value(cfg, "run.scenario", o.scenario);
    if (!o.devices.empty()) ntnsim::set_config_value(cfg, sweep ? "run.sweep_devices" : "run.devices", o.devices);
    if (!o.runs.empty()) ntnsim::set_config_value(cfg, "run.runs", o.runs);
    if (!o.duration.empty()) ntnsim::set_config_value(cfg, "run.duration_s", duration_seconds(o.duration));
    if (!o.seed.empty()) ntnsim::set_config_value(cfg, "run.seed", o.seed);
    if (!o.workers.empty()) ntnsim::set_config_value(cfg, "run.workers", o.workers);
    if (o.fixed_layout) cfg.run.fixed_layout = true;
    cfg.validate();
    return cfg;
}

void list_files(const std::vector<std::filesystem::path>& files)
{
    for (const auto& f : files) std::cout << f.string() << '\n';
}

ntnsim::ExperimentHooks hooks_for(const Options& o)
{
    ntnsim::ExperimentHooks h;
    h.keep_trace = o.trace;
    if (!o.quiet) {
        h.progress = [last = std::chrono::steady_clock::now()](std::size_t done, std::size_t total) mutable {
            const auto now = std::chrono::steady_clock::now();
            if (done == total || now - last > std::chrono::seconds(2)) {
                std::cerr << "runs " << done << '/' << total << '\n';
                last = now;
            }
        };
    }
    return h;
}

void announce_seed(const ntnsim::ScenarioSpec& spec)
{
    if (spec.seed_generated) std::cerr << "generated seed " << spec.master_seed << '\n';
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Monte Carlo simulator for LR-FHSS IoT over terrestrial, HAPS and LEO gateways"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub, bool with_run_flags) {
        sub->add_option("--config", o.config_path, "key = value configuration file")->check(CLI::ExistingFile);
        sub->add_option("--set", o.overrides, "extra key=value override (repeatable)");
        sub->add_option("--out-dir", o.out_dir, "output directory");
        sub->add_option("--seed", o.seed, "master seed (default: from entropy)");
        sub->add_flag("--quiet", o.quiet, "no progress on stderr");
        if (!with_run_flags) return;
        sub->add_option("--scenario", o.scenario, "TN(M), HAPS, LEO or a '+' combination");
        sub->add_option("--runs", o.runs, "Monte Carlo runs");
        sub->add_option("--duration", o.duration, "run length, e.g. 3600, 90m, 24h");
        sub->add_option("--workers", o.workers, "worker threads (0: all cores)");
        sub->add_flag("--fixed-layout", o.fixed_layout, "one base-station layout for every run");
    };

    auto* erasure = app.add_subcommand("erasure", "erasure maps, radial profile and violin summary");
    common(erasure, true);
    erasure->add_option("--devices", o.devices, "devices per run");
    erasure->add_flag("--trace", o.trace, "write the per-unit trace of run 0");

    auto* success = app.add_subcommand("success", "success probability over a device sweep");
    common(success, true);
    success->add_option("--devices", o.devices, "comma-separated device counts");

    auto* cost = app.add_subcommand("cost", "NPV cost curves and crossovers");
    common(cost, false);

    auto* orbit = app.add_subcommand("orbit-trace", "satellite position over one sampled lap");
    common(orbit, false);

    auto* keys = app.add_subcommand("keys", "list configuration keys with units and defaults");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_config;
    }

    try {
        if (*keys) {
            const ntnsim::SimulationConfig defaults;
            const auto entries = ntnsim::config_entries(defaults);
            const auto units = ntnsim::config_keys();
            for (std::size_t i = 0; i < entries.size(); ++i)
                std::cout << entries[i].first << " = " << entries[i].second << "    # " << units[i].unit << '\n';
            return 0;
        }
        if (!o.quiet) std::cerr << "kernels: " << ntnsim::kernels::isa_name(ntnsim::kernels::active().isa) << '\n';
        if (*erasure) {
            const auto cfg = build_config(o, false);
            const auto spec = ntnsim::make_spec(cfg, ntnsim::MetricMode::erasure);
            announce_seed(spec);
            const auto report = ntnsim::run_erasure_experiment(spec, cfg, hooks_for(o));
            list_files(ntnsim::write_erasure_outputs(report, cfg, o.out_dir));
        } else if (*success) {
            const auto cfg = build_config(o, true);
            const auto spec = ntnsim::make_spec(cfg, ntnsim::MetricMode::success);
            announce_seed(spec);
            const auto report = ntnsim::run_success_experiment(spec, cfg, hooks_for(o));
            list_files(ntnsim::write_success_outputs(report, cfg, o.out_dir));
        } else if (*cost) {
            const auto cfg = build_config(o, false);
            list_files(ntnsim::write_cost_outputs(ntnsim::run_cost_report(cfg), cfg, o.out_dir));
        } else if (*orbit) {
            const auto cfg = build_config(o, false);
            const bool generated = !cfg.run.seed.has_value();
            const std::uint64_t seed = generated ? ntnsim::entropy_seed() : *cfg.run.seed;
            if (generated) std::cerr << "generated seed " << seed << '\n';
            list_files(ntnsim::write_orbit_trace(cfg, seed, generated, o.out_dir));
        }
    } catch (const ntnsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const ntnsim::PlacementInfeasible& e) {
        std::cerr << "infeasible placement: " << e.what() << '\n';
        return exit_placement;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
    return 0;
}
