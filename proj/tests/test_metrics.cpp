#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "ntnsim/lrfhss.hpp"
#include "ntnsim/metrics.hpp"

using namespace ntnsim;

TEST_CASE("erasure probability")
{
    CHECK(erasure_probability(std::vector<bool>(10, false)) == 0.0);
    std::vector<bool> half(10, false);
    for (int i = 0; i < 5; ++i) half[i] = true;
    CHECK(erasure_probability(half) == 0.5);
    CHECK_THROWS_AS(erasure_probability(std::vector<bool>{}), std::invalid_argument);

    // Lost only when lost everywhere.
    std::vector<std::vector<bool>> per_gw{{true, true, false, true}, {true, false, false, true}};
    CHECK(erasure_probability(per_gw) == 0.5);
}

TEST_CASE("terrestrial erasure at 10 km from literal draws")
{
    LrFhssConfig mac;
    ChannelConfig ch;
    RegionConfig region;
    GatewaySet gw;
    gw.terrestrial.inner = {{0, 0}};
    const auto tx = make_transmission(0, 0.0, std::vector<std::uint16_t>(mac.units(), 0), mac);
    Rng rng(77);
    std::vector<bool> erased;
    erased.reserve(1'000'000);
    while (erased.size() < 1'000'000) {
        const auto links = evaluate_links(tx, {10e3, 0}, gw, ch, region, nullptr, rng);
        for (const auto& s : links[0]) erased.push_back(s.erased);
    }
    CHECK(std::abs(erasure_probability(erased) - 0.508) < 0.005);
}

TEST_CASE("mean accumulator")
{
    MeanAccumulator a, b;
    for (double x : {1.0, 2.0, 3.0}) a.add(x);
    for (double x : {4.0, 5.0}) b.add(x);
    a.merge(b);
    CHECK(a.mean() == doctest::Approx(3.0));
    CHECK(a.variance() == doctest::Approx(2.5));
    CHECK(a.std_error() == doctest::Approx(std::sqrt(2.5 / 5)));
    MeanAccumulator one;
    one.add(7.0);
    CHECK(one.variance() == 0.0);
}

TEST_CASE("radial profile")
{
    Rng rng(4);
    RegionConfig region;
    std::vector<ErasureSample> samples;
    for (const auto& p : deploy_devices(20000, region, rng)) samples.push_back({p, 0.3});
    for (const auto& r : radial_profile(samples, 8, region.radius_m)) {
        REQUIRE(r.mean);
        CHECK(*r.mean == doctest::Approx(0.3));
    }

    const auto single = radial_profile(std::vector<ErasureSample>{{{15e3, 0}, 0.7}}, 8, 80e3);
    std::size_t filled = 0;
    for (const auto& r : single) filled += r.mean.has_value();
    CHECK(filled == 1);
    CHECK(single[1].mean.value() == 0.7);

    // Samples past the radius fold into the last ring.
    const auto edge = radial_profile(std::vector<ErasureSample>{{{80e3, 0}, 0.2}}, 4, 80e3);
    CHECK(edge[3].count == 1);
}

TEST_CASE("heatmap")
{
    HeatmapGrid one = build_heatmap(std::vector<ErasureSample>{{{0.0, 0.0}, 0.4}}, 80e3, 4000.0);
    std::size_t nonempty = 0;
    for (std::size_t iy = 0; iy < one.bins_per_side(); ++iy)
        for (std::size_t ix = 0; ix < one.bins_per_side(); ++ix) nonempty += one.mean(ix, iy).has_value();
    CHECK(nonempty == 1);
    CHECK(one.bins_per_side() == 40);

    Rng rng(9);
    std::vector<ErasureSample> field;
    for (const auto& p : deploy_devices(5000, RegionConfig{}, rng)) field.push_back({p, 0.25});
    const HeatmapGrid g = build_heatmap(field, 80e3, 4000.0);
    for (std::size_t iy = 0; iy < g.bins_per_side(); ++iy)
        for (std::size_t ix = 0; ix < g.bins_per_side(); ++ix) {
            if (auto m = g.mean(ix, iy)) CHECK(*m == doctest::Approx(0.25));
            if (g.count(ix, iy) > 0) CHECK(g.touches_disk(ix, iy));
        }
    CHECK_FALSE(g.touches_disk(0, 0));
    CHECK(g.weighted_mean() == doctest::Approx(0.25));

    // Merge equals building from the union.
    HeatmapGrid a(80e3, 4000.0), b(80e3, 4000.0), all(80e3, 4000.0);
    for (std::size_t i = 0; i < field.size(); ++i) {
        (i % 2 ? a : b).add(field[i]);
        all.add(field[i]);
    }
    a.merge(b);
    for (std::size_t iy = 0; iy < all.bins_per_side(); ++iy)
        for (std::size_t ix = 0; ix < all.bins_per_side(); ++ix) CHECK(a.count(ix, iy) == all.count(ix, iy));
}

TEST_CASE("success statistics")
{
    const std::vector<std::size_t> sent{2, 0, 4}, all{2, 0, 4}, none{0, 0, 0};
    CHECK(run_success_rate(all, sent) == 1.0);
    CHECK(run_success_rate(none, sent) == 0.0);
    CHECK(std::isnan(run_success_rate(none, none)));
    const std::vector<std::size_t> part{1, 0, 1};
    CHECK(run_success_rate(part, sent) == doctest::Approx(0.375));

    const std::vector<double> means{0.4, 0.6};
    const auto p = success_statistics(means, 100);
    CHECK(p.mean == doctest::Approx(0.5));
    CHECK(p.runs == 2);
    CHECK(p.ci95 == doctest::Approx(1.96 * std::sqrt(0.02 / 2)));

    const std::vector<double> with_nan{0.4, std::nan(""), 0.6};
    CHECK(success_statistics(with_nan, 10).runs == 2);
}

TEST_CASE("distribution summary")
{
    const auto flat = distribution_summary(std::vector<double>(50, 0.3));
    CHECK(flat.iqr() == 0.0);
    CHECK(flat.median == doctest::Approx(0.3));

    const auto two = distribution_summary({0.0, 1.0});
    CHECK(two.mean == 0.5);
    CHECK(two.median == 0.5);

    const std::vector<double> sorted{1.0, 2.0, 3.0, 4.0};
    CHECK(sorted_quantile(sorted, 0.25) == doctest::Approx(1.75));
    CHECK(sorted_quantile(sorted, 0.5) == doctest::Approx(2.5));
    CHECK(sorted_quantile(sorted, 1.0) == 4.0);

    Rng rng(1);
    std::vector<double> u(10000);
    for (auto& x : u) x = uniform01(rng);
    const auto s = distribution_summary(u, 20);
    const double width = 1.0 / 20;
    CHECK(std::accumulate(s.density.begin(), s.density.end(), 0.0) * width == doctest::Approx(1.0));
    CHECK(s.q1 == doctest::Approx(0.25).epsilon(0.05));
    CHECK_THROWS(distribution_summary({}));
}

TEST_CASE("CSV exports")
{
    std::ostringstream out;
    write_success_curve_csv(out, std::vector<SuccessPoint>{{100, 0.9, 0.01, 5}});
    CHECK(out.str() == "n_devices,mean,ci95,runs\n100,0.9,0.01,5\n");

    std::ostringstream r;
    write_radial_csv(r, radial_profile(std::vector<ErasureSample>{{{1.0, 0.0}, 0.5}}, 2, 10.0));
    CHECK(r.str() == "ring_inner_m,ring_outer_m,mean_erasure,n,std_error\n0,5,0.5,1,0\n5,10,,0,0\n");
}
