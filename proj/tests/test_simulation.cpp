#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <string>

#include "ntnsim/kernels.hpp"
#include "ntnsim/lrfhss.hpp"
#include "ntnsim/orbit.hpp"
#include "ntnsim/simulation.hpp"

using namespace ntnsim;

namespace {

struct TraceRow {
    std::size_t device;
    std::size_t gateway;
    std::size_t unit;
    bool header;
    bool erased;
    bool collided;
};

std::vector<TraceRow> parse_trace(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::vector<TraceRow> rows;
    while (std::getline(in, line)) {
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
        REQUIRE(f.size() == 9);
        rows.push_back({std::stoul(f[0]), std::stoul(f[2]), std::stoul(f[3]), f[4] == "header", f[6] == "1",
                        f[7] == "1"});
    }
    return rows;
}

}  // namespace

TEST_CASE("scenario names")
{
    CHECK(parse_scenario("LEO") == Scenario{0, false, true});
    CHECK(parse_scenario("haps+tn(20)") == Scenario{20, true, false});
    CHECK(parse_scenario("LEO+HAPS+TN10") == Scenario{10, true, true});
    CHECK(parse_scenario(" TN( 5 ) ").terrestrial_bs == 5);
    CHECK(parse_scenario("TN(20)+HAPS+LEO").name() == "LEO+HAPS+TN(20)");
    CHECK_THROWS_AS(parse_scenario("TN(0)"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("TN0"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(""), ConfigError);
    CHECK_THROWS_AS(parse_scenario("GEO"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("HAPS+"), ConfigError);
}

TEST_CASE("fast link sampler agrees with literal draws")
{
    SimulationConfig cfg;
    cfg.mean_interval_s = 1.0;
    const double horizon = 120000.0;
    const std::uint64_t seed = 31;

    // deploy_devices is the first draw of a run, so the device position is known.
    Rng probe(seed);
    const Point2 dev = deploy_devices(1, cfg.region, probe)[0];

    BasestationLayout layout;
    for (double d : {3e3, 12e3, 20e3, 45e3, 70e3, 110e3}) layout.inner.push_back({dev.x + d, dev.y});

    RunRequest req;
    req.scenario = Scenario{layout.size(), true, true};
    req.n_devices = 1;
    req.duration_s = horizon;
    req.fixed_layout = &layout;

    Rng rng(seed);
    std::ostringstream trace;
    const RunOutcome o = simulate_run(cfg, req, rng, &trace);
    const auto rows = parse_trace(trace.str());
    const std::size_t n_gw = layout.size() + 2;
    REQUIRE(rows.size() == o.units * n_gw);

    std::vector<double> fast(n_gw, 0.0);
    for (const auto& r : rows) fast[r.gateway] += r.erased ? 0.0 : 1.0;
    for (auto& f : fast) f /= static_cast<double>(o.units);

    GatewaySet gw;
    gw.terrestrial = layout;
    gw.haps = cfg.haps;
    gw.leo = true;
    Rng lit(seed + 1);
    const auto laps = LapSchedule::cover(horizon, derive_constants(cfg.orbit), lit);
    const auto tx0 = make_transmission(0, 0.0, std::vector<std::uint16_t>(cfg.lrfhss.units(), 0), cfg.lrfhss);
    std::vector<double> literal(n_gw, 0.0);
    std::size_t units = 0;
    for (int k = 0; k < 30000; ++k) {
        auto tx = tx0;
        const double shift = uniform01(lit) * (horizon - 2.0);
        for (auto& u : tx.units) u.start_s += shift;
        const auto links = evaluate_links(tx, dev, gw, cfg.channel, cfg.region, &laps, lit);
        for (std::size_t g = 0; g < n_gw; ++g)
            for (const auto& s : links[g]) literal[g] += s.erased ? 0.0 : 1.0;
        units += tx.units.size();
    }
    for (auto& l : literal) l /= static_cast<double>(units);

    for (std::size_t g = 0; g + 1 < n_gw; ++g) {
        const double p = g < layout.size()
                             ? terrestrial_reception_probability(terrestrial_distance(dev, layout.at(g)), cfg.channel)
                             : ntn_reception_probability(LinkKind::haps, haps_distance(dev, cfg.haps),
                                                         haps_elevation(dev, cfg.haps, cfg.region), cfg.channel);
        const double sd_fast = std::sqrt(p * (1 - p) / static_cast<double>(o.units));
        const double sd_lit = std::sqrt(p * (1 - p) / static_cast<double>(units));
        INFO("gateway " << g << " p=" << p << " fast=" << fast[g] << " literal=" << literal[g]);
        CHECK(std::abs(fast[g] - p) <= 5 * sd_fast + 1e-4);
        CHECK(std::abs(literal[g] - p) <= 5 * sd_lit + 1e-4);
    }
    // LEO varies with the lap draws; compare the long-run averages.
    INFO("leo fast=" << fast.back() << " literal=" << literal.back());
    CHECK(std::abs(fast.back() - literal.back()) < 0.03);
}

TEST_CASE("erasure run bookkeeping")
{
    SimulationConfig cfg;
    RunRequest req;
    req.scenario = parse_scenario("HAPS+TN(10)");
    req.n_devices = 50;
    req.duration_s = 7200.0;
    Rng rng(3);
    std::ostringstream trace;
    const RunOutcome o = simulate_run(cfg, req, rng, &trace);
    CHECK(o.gateways == 10 + 150 + 1);
    const auto rows = parse_trace(trace.str());
    REQUIRE(rows.size() == o.units * o.gateways);

    std::size_t erased = 0;
    for (std::size_t i = 0; i < rows.size(); i += o.gateways) {
        bool all = true;
        for (std::size_t g = 0; g < o.gateways; ++g) {
            all = all && rows[i + g].erased;
            CHECK_FALSE(rows[i + g].collided);
        }
        erased += all;
    }
    CHECK(erased == o.erased_units);
    CHECK(o.decoded == 0);

    for (const auto& s : o.erasure_samples()) {
        CHECK(s.mean_erasure >= 0.0);
        CHECK(s.mean_erasure <= 1.0);
    }
}

TEST_CASE("success decisions follow the trace")
{
    for (bool heard : {false, true}) {
        SimulationConfig cfg;
        cfg.lrfhss.collision_requires_collider_above_gamma = heard;
        cfg.lrfhss.n_channels = 4;
        RunRequest req;
        req.scenario = parse_scenario("LEO+HAPS+TN(10)");
        req.n_devices = 300;
        req.duration_s = 1800.0;
        req.mode = MetricMode::success;
        Rng rng(12);
        std::ostringstream trace;
        const RunOutcome o = simulate_run(cfg, req, rng, &trace);
        const auto rows = parse_trace(trace.str());
        REQUIRE(rows.size() == o.units * o.gateways);

        const std::size_t per_packet = cfg.lrfhss.units() * o.gateways;
        std::size_t decoded = 0, collided_rows = 0;
        for (std::size_t base = 0; base < rows.size(); base += per_packet) {
            std::vector<std::size_t> headers(o.gateways, 0), fragments(o.gateways, 0);
            for (std::size_t i = base; i < base + per_packet; ++i) {
                const auto& r = rows[i];
                collided_rows += r.collided;
                if (r.erased || r.collided) continue;
                (r.header ? headers : fragments)[r.gateway] += 1;
            }
            bool ok = false;
            for (std::size_t g = 0; g < o.gateways; ++g) ok = ok || gateway_decodes(headers[g], fragments[g], cfg.lrfhss);
            decoded += ok;
        }
        CHECK(collided_rows > 0);
        CHECK(decoded == o.decoded);
        CHECK(o.packets * cfg.lrfhss.units() == o.units);
    }
}

TEST_CASE("collider-above-sensitivity rule only removes collisions")
{
    SimulationConfig cfg;
    RunRequest req;
    req.scenario = parse_scenario("HAPS+TN(10)");
    req.n_devices = 3000;
    req.duration_s = 3600.0;
    req.mode = MetricMode::success;

    Rng a(8), b(8);
    const RunOutcome all = simulate_run(cfg, req, a);
    cfg.lrfhss.collision_requires_collider_above_gamma = true;
    const RunOutcome heard = simulate_run(cfg, req, b);
    CHECK(all.packets == heard.packets);
    CHECK(all.erased_units == heard.erased_units);
    CHECK(heard.decoded >= all.decoded);
    for (std::size_t i = 0; i < all.devices.size(); ++i) CHECK(heard.devices[i].decoded >= all.devices[i].decoded);
}

TEST_CASE("a lone device never collides")
{
    SimulationConfig cfg;
    RunRequest req;
    req.scenario = parse_scenario("HAPS");
    req.n_devices = 1;
    req.duration_s = 36000.0;
    req.mode = MetricMode::success;
    Rng rng(5);
    std::ostringstream trace;
    const RunOutcome o = simulate_run(cfg, req, rng, &trace);
    for (const auto& r : parse_trace(trace.str())) CHECK_FALSE(r.collided);
    REQUIRE(o.packets > 0);
}

TEST_CASE("ISA choice does not change results")
{
    SimulationConfig cfg;
    RunRequest req;
    req.scenario = parse_scenario("LEO+HAPS+TN(20)");
    req.n_devices = 400;
    req.duration_s = 3600.0;
    req.mode = MetricMode::success;

    const auto initial = kernels::active().isa;
    kernels::select(kernels::Isa::scalar);
    Rng a(44);
    const RunOutcome s = simulate_run(cfg, req, a);
    kernels::select(kernels::Isa::avx2);
    Rng b(44);
    const RunOutcome v = simulate_run(cfg, req, b);
    kernels::select(initial);
    CHECK(s.units == v.units);
    CHECK(s.erased_units == v.erased_units);
    CHECK(s.decoded == v.decoded);
}

TEST_CASE("run preconditions")
{
    SimulationConfig cfg;
    RunRequest req;
    req.scenario = parse_scenario("HAPS");
    req.duration_s = 100.0;
    Rng rng(1);
    CHECK_THROWS(simulate_run(cfg, req, rng));
    req.n_devices = 5;
    req.duration_s = 0.0;
    CHECK_THROWS(simulate_run(cfg, req, rng));
}
