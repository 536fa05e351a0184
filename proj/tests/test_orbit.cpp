#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ntnsim/orbit.hpp"

using namespace ntnsim;

namespace {

// Density written independently, in terms of the distance xc to the upper
// limit T_m so the endpoint singularity stays resolvable.
double reference_pdf(double xc, const OrbitDerived& d)
{
    const double wt = d.gamma0 - d.omega * xc;
    return d.omega * std::cos(d.gamma0) * std::tan(wt) /
           (d.gamma0 * std::sqrt(std::sin(d.omega * xc) * std::sin(2.0 * d.gamma0 - d.omega * xc)));
}

double quad_cdf(double t, const OrbitDerived& d)
{
    boost::math::quadrature::tanh_sinh<double> integrator;
    // Lap durations s in [0, t] map to xc = T_m - s in [T_m - t, T_m].
    return integrator.integrate([&](double xc) { return reference_pdf(xc, d); }, d.max_lap_s - t,
                                d.max_lap_s);
}

// Integral of the library density itself over (0, T_m) after t = T_m (1 - v^2).
double integrated_lap_pdf(const OrbitDerived& d)
{
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double v) { return lap_pdf(d.max_lap_s * (1.0 - v * v), d) * 2.0 * d.max_lap_s * v; }, 0.0, 1.0,
        15, 1e-12);
}

}  // namespace

TEST_CASE("derived orbit constants")
{
    const OrbitDerived d = derive_constants(OrbitConfig{});
    CHECK(d.omega_s == doctest::Approx(1.0491e-3).epsilon(1e-4));
    CHECK(d.omega == doctest::Approx(5.063e-4).epsilon(1e-4));
    CHECK(d.gamma0 == doctest::Approx(0.2230).epsilon(1e-3));
    CHECK(d.max_lap_s == doctest::Approx(440.6).epsilon(2.5e-3));

    // 50-digit evaluation of the same constants.
    using big = boost::multiprecision::cpp_bin_float_50;
    const big re = 6.3781e6, hs = 750e3, mu = 3.986004418e14, ts = 86164.1;
    const big pi = boost::math::constants::pi<big>();
    const big rs = re + hs;
    const big ws = sqrt(mu / (rs * rs * rs));
    const big w = (ws - 2 * pi / ts * cos(pi / 3)) / 2;
    const big a0 = pi / 9;
    const big g0 = acos(re / rs * cos(a0)) - a0;
    CHECK(d.max_lap_s == doctest::Approx(static_cast<double>(g0 / w)).epsilon(1e-12));
}

TEST_CASE("degenerate horizon")
{
    OrbitConfig cfg;
    cfg.min_elevation_rad = std::numbers::pi / 2 - 1e-12;
    const OrbitDerived d = derive_constants(cfg);
    CHECK(d.gamma0 == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(d.max_lap_s == doctest::Approx(0.0).epsilon(1e-5));
}

TEST_CASE("lap density")
{
    const OrbitDerived d = derive_constants(OrbitConfig{});
    CHECK(lap_pdf(0.0, d) == 0.0);
    CHECK(lap_pdf(-1.0, d) == 0.0);
    CHECK(lap_pdf(d.max_lap_s + 1.0, d) == 0.0);
    CHECK(lap_pdf(1e-6, d) < 1e-9);
    CHECK(quad_cdf(d.max_lap_s, d) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(integrated_lap_pdf(d) == doctest::Approx(1.0).epsilon(1e-6));

    for (double f : {0.1, 0.3, 0.5, 0.8, 0.95, 0.999})
        CHECK(lap_cdf(f * d.max_lap_s, d) == doctest::Approx(quad_cdf(f * d.max_lap_s, d)).epsilon(1e-8));
}

TEST_CASE("inverse CDF and sampling")
{
    const OrbitDerived d = derive_constants(OrbitConfig{});
    CHECK(lap_quantile(1.0, d) == doctest::Approx(d.max_lap_s));
    CHECK(lap_quantile(0.0, d) == doctest::Approx(0.0));
    for (double u : {0.05, 0.25, 0.5, 0.75, 0.99})
        CHECK(lap_cdf(lap_quantile(u, d), d) == doctest::Approx(u).epsilon(1e-9));

    Rng rng(11);
    std::vector<double> s(20000);
    for (auto& x : s) {
        x = sample_lap_duration(d, rng);
        REQUIRE(x > 0.0);
        REQUIRE(x <= d.max_lap_s);
    }
    std::sort(s.begin(), s.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < s.size(); i += 97) {
        const double f = quad_cdf(s[i], d);
        ks = std::max({ks, std::abs(f - static_cast<double>(i) / s.size()),
                       std::abs(f - static_cast<double>(i + 1) / s.size())});
    }
    CHECK(ks < 0.02);
}

TEST_CASE("central angle and elevation over a pass")
{
    const OrbitDerived d = derive_constants(OrbitConfig{});
    const LapSample lap{300.0, 0.0};
    CHECK(central_angle(0.0, lap, d) == doctest::Approx(d.gamma0));
    CHECK(central_angle(lap.duration_s, lap, d) == doctest::Approx(d.gamma0));

    const LapSample full{d.max_lap_s, 1.0};
    CHECK(central_angle(d.max_lap_s / 2, full, d) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(elevation_at_origin(d.max_lap_s / 2, full, d) == doctest::Approx(std::numbers::pi / 2));

    CHECK(std::abs(elevation_at_origin(0.0, lap, d) - deg_to_rad(20.0)) < 1e-9);
    CHECK(std::abs(elevation_at_origin(lap.duration_s, lap, d) - deg_to_rad(20.0)) < 1e-9);

    // Elevation rises to mid-pass and falls after it.
    double prev = elevation_at_origin(0.0, lap, d);
    for (double t = 10.0; t <= 150.0; t += 10.0) {
        const double e = elevation_at_origin(t, lap, d);
        CHECK(e > prev);
        prev = e;
    }
}

TEST_CASE("printed central-angle form misses the pass end")
{
    OrbitConfig cfg;
    cfg.central_angle = CentralAngleForm::printed;
    const OrbitDerived d = derive_constants(cfg);
    const LapSample lap{300.0, 0.0};
    CHECK(central_angle(0.0, lap, d) == doctest::Approx(d.gamma0));
    CHECK(std::abs(central_angle(lap.duration_s, lap, d) - d.gamma0) > 1e-3);
}

TEST_CASE("satellite position")
{
    const OrbitDerived d = derive_constants(OrbitConfig{});
    const LapSample lap{d.max_lap_s, 0.0};
    const auto top = satellite_state(d.max_lap_s / 2, lap, d);
    CHECK(top.x_m == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(top.z_m == doctest::Approx(750e3));

    const auto start = satellite_state(0.0, lap, d);
    CHECK(start.x_m == doctest::Approx(704.77e3).epsilon(1e-5));
    CHECK(start.y_m == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(start.z_m == doctest::Approx(256.52e3).epsilon(3e-5));

    const LapSample other{250.0, 2.0};
    for (double t = 0.0; t <= 250.0; t += 25.0) {
        const auto s = satellite_state(t, other, d);
        CHECK(std::sqrt(s.x_m * s.x_m + s.y_m * s.y_m + s.z_m * s.z_m) == doctest::Approx(750e3));
    }
}

TEST_CASE("exact slant range")
{
    OrbitConfig cfg;
    cfg.range_mode = RangeMode::exact_slant;
    const OrbitDerived d = derive_constants(cfg);
    const LapSample lap{d.max_lap_s, 0.0};
    const auto s0 = satellite_state(0.0, lap, d);
    CHECK(std::sqrt(s0.x_m * s0.x_m + s0.z_m * s0.z_m) == doctest::Approx(1677e3).epsilon(2e-3));
    const auto top = satellite_state(d.max_lap_s / 2, lap, d);
    CHECK(top.z_m == doctest::Approx(750e3).epsilon(1e-9));
}

TEST_CASE("look angle from a device")
{
    const SatelliteState over{0.0, 0.0, 750e3, std::numbers::pi / 2};
    auto la = device_elevation_and_distance({0, 0}, over);
    CHECK(la.elevation_rad == doctest::Approx(std::numbers::pi / 2));
    CHECK(la.distance_m == doctest::Approx(750e3));

    la = device_elevation_and_distance({80e3, 0}, over);
    CHECK(rad_to_deg(la.elevation_rad) == doctest::Approx(83.91).epsilon(1e-4));
    CHECK(la.distance_m == doctest::Approx(754.25e3).epsilon(1e-5));

    const SatelliteState side{300e3, 100e3, 400e3, 0.5};
    la = device_elevation_and_distance({300e3, 100e3}, side);
    CHECK(la.elevation_rad == doctest::Approx(std::numbers::pi / 2));
    CHECK(la.distance_m == doctest::Approx(400e3));
}

TEST_CASE("lap schedule covers the horizon")
{
    const OrbitDerived d = derive_constants(OrbitConfig{});
    Rng rng(4);
    const auto sched = LapSchedule::cover(7200.0, d, rng);
    CHECK(sched.starts().front() == 0.0);
    CHECK(sched.end() >= 7200.0);
    for (std::size_t i = 1; i < sched.laps().size(); ++i)
        CHECK(sched.starts()[i] == doctest::Approx(sched.starts()[i - 1] + sched.laps()[i - 1].duration_s));
    for (double t = 0.0; t < 7200.0; t += 13.7) {
        const auto s = sched.state_at(t);
        CHECK(s.elevation_origin_rad >= deg_to_rad(20.0) - 1e-9);
    }
}

TEST_CASE("orbit trace export")
{
    const OrbitDerived d = derive_constants(OrbitConfig{});
    std::ostringstream out;
    write_orbit_trace_csv(out, LapSample{100.0, 0.0}, d, 10.0);
    const std::string s = out.str();
    CHECK(s.rfind("t_s,elevation_origin_deg,xc_m,yc_m,zc_m\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 12);
}

TEST_CASE("config validation")
{
    OrbitConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.altitude_m = -1.0;
    CHECK_THROWS(cfg.validate());
}
