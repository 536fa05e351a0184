#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>

#include "ntnsim/config.hpp"

using namespace ntnsim;

TEST_CASE("defaults validate")
{
    SimulationConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.lrfhss.fragments() == 7);
    CHECK(cfg.region.radius_m == 80e3);
}

TEST_CASE("key = value parsing")
{
    SimulationConfig cfg;
    apply_config_text(cfg, R"(
# comment line
region.radius_m = 50000
orbit.inclination_deg = 45   # trailing comment
lrfhss.coding_rate = 2/3
run.scenario = HAPS+TN(10)
run.sweep_devices = 10, 20
run.fixed_layout = true
)");
    CHECK(cfg.region.radius_m == 50000.0);
    CHECK(cfg.orbit.inclination_rad == doctest::Approx(deg_to_rad(45.0)));
    CHECK(cfg.lrfhss.coding_rate.num == 2);
    CHECK(cfg.lrfhss.coding_rate.den == 3);
    CHECK(cfg.run.scenario == "HAPS+TN(10)");
    CHECK(cfg.run.sweep_devices == std::vector<std::size_t>{10, 20});
    CHECK(cfg.run.fixed_layout);
}

TEST_CASE("diagnostics carry key and line")
{
    SimulationConfig cfg;
    try {
        apply_config_text(cfg, "region.radius_m = 1\nno.such.key = 3\n", "test.cfg");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 2);
        CHECK(e.key() == "no.such.key");
        CHECK(std::string(e.what()).find("test.cfg:2") != std::string::npos);
    }
    try {
        apply_config_text(cfg, "\n\nregion.radius_m = abc\n");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
        CHECK(e.key() == "region.radius_m");
    }
    CHECK_THROWS_AS(apply_config_text(cfg, "just some words"), ConfigError);
    CHECK_THROWS_AS(load_config_file("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("validation names the key")
{
    SimulationConfig cfg;
    cfg.run.runs = 0;
    try {
        cfg.validate();
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "run.runs");
    }
    SimulationConfig low;
    set_config_value(low, "fading.min_elevation_deg", "10");
    CHECK_THROWS_AS(low.validate(), ConfigError);
}

TEST_CASE("round trip and hash")
{
    SimulationConfig cfg;
    set_config_value(cfg, "link.sensitivity_dbm", "-130.5");
    set_config_value(cfg, "cost.leo_price_tiers", "0:24,5000:20");

    std::string text;
    for (const auto& [k, v] : config_entries(cfg)) text += k + " = " + v + "\n";
    SimulationConfig back;
    apply_config_text(back, text);
    CHECK(config_entries(back) == config_entries(cfg));
    CHECK(config_hash(back) == config_hash(cfg));

    SimulationConfig seeded = cfg;
    set_config_value(seeded, "run.seed", "99");
    set_config_value(seeded, "run.workers", "8");
    CHECK(config_hash(seeded) == config_hash(cfg));
    set_config_value(seeded, "region.radius_m", "70000");
    CHECK(config_hash(seeded) != config_hash(cfg));

    std::set<std::string> keys;
    for (const auto& k : config_keys()) CHECK(keys.insert(k.key).second);
    CHECK(keys.count("orbit.altitude_m"));
    CHECK(hex64(0xABCULL) == "0000000000000abc");
}

TEST_CASE("config file")
{
    const std::string path = "ntnsim_test_config.cfg";
    {
        std::ofstream out(path);
        out << "haps.altitude_m = 20000\n";
    }
    const auto cfg = load_config_file(path);
    CHECK(cfg.haps.altitude_m == 20000.0);
    std::remove(path.c_str());
}
