#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ntnsim/cost.hpp"

using namespace ntnsim;

TEST_CASE("annuity factor")
{
    const double closed = (1.0 - std::pow(1.05, -20)) / 0.05;
    CHECK(annuity_factor(0.05, 20) == doctest::Approx(closed).epsilon(1e-14));
    CHECK(annuity_factor(0.0, 20) == 20.0);
    CHECK(annuity_factor(0.05, 0) == 0.0);
}

TEST_CASE("NPV")
{
    const CostParams p;
    const CostModel haps = haps_cost_model(p);
    CHECK(std::abs(to_usd(npv_total(haps, 0, 0)) - 4'373'866.0) <= 5.0);

    CostModel zero_years = haps;
    zero_years.horizon_years = 0;
    CHECK(npv_total(zero_years, 0, 0) == usd(4'000'000));

    CostModel undiscounted = haps;
    undiscounted.discount = 0.0;
    CHECK(npv_total(undiscounted, 0, 0) == usd(4'000'000 + 20 * 30'000));
}

TEST_CASE("architecture costs")
{
    const auto c = scenario_costs(10'000, 20);
    CHECK(std::abs(to_usd(c.leo) - 2'990'930.0) <= 10.0);
    CHECK(std::abs(to_usd(c.terrestrial) - 3'140'477.0) <= 10.0);
    CHECK(scenario_costs(0, 20).leo == 0);
    CHECK(scenario_costs(0, 20).haps == scenario_costs(50'000, 20).haps);
}

TEST_CASE("volume price tiers")
{
    CostModel m;
    m.device_prices = {{0, usd(24)}, {5000, usd(20)}, {20000, usd(15)}};
    CHECK(m.device_price(1) == usd(24));
    CHECK(m.device_price(5000) == usd(20));
    CHECK(m.device_price(19999) == usd(20));
    CHECK(m.device_price(25000) == usd(15));
}

TEST_CASE("crossovers")
{
    const CostParams p;
    const auto leo = leo_cost_model(p);
    const auto haps = haps_cost_model(p);
    const auto n = crossover_devices(leo, haps);
    REQUIRE(n);
    CHECK(std::abs(static_cast<long>(*n) - 14626) <= 2);
    CHECK(npv_total(leo, *n, 0) >= npv_total(haps, *n, 0));
    CHECK(npv_total(leo, *n - 1, 0) < npv_total(haps, *n - 1, 0));

    const auto tn = crossover_devices(leo, terrestrial_cost_model(p, 20));
    REQUIRE(tn);
    CHECK(std::abs(static_cast<long>(*tn) - 10500) <= 2);

    CHECK(crossover_devices(haps, haps) == 0u);
    CHECK(crossover_devices(haps, leo) == 0u);
    CHECK_FALSE(crossover_devices(leo, haps, 10'000).has_value());
}

TEST_CASE("sweep export")
{
    const CostParams p;
    const std::vector<std::size_t> grid{0, 1000, 2000};
    const std::vector<std::size_t> stations{10, 20};
    const auto rows = cost_sweep(p, grid, stations);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].haps == rows[2].haps);
    CHECK(rows[2].leo - rows[1].leo == rows[1].leo - rows[0].leo);
    CHECK(rows[0].terrestrial.size() == 2);

    std::ostringstream out;
    write_cost_sweep_csv(out, rows, stations, p.horizon_years);
    const std::string s = out.str();
    CHECK(s.rfind("n_devices,cost_haps,cost_leo,cost_terrestrial_10,cost_terrestrial_20,annual_haps,annual_leo,"
                  "annual_terrestrial_10,annual_terrestrial_20\n",
                  0) == 0);
}
