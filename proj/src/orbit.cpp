#include "ntnsim/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace ntnsim {

void OrbitConfig::validate() const
{
    if (!(altitude_m > 0.0)) throw std::invalid_argument("satellite altitude must be positive");
    if (!(min_elevation_rad > 0.0 && min_elevation_rad < std::numbers::pi / 2))
        throw std::invalid_argument("minimum elevation must lie in (0, 90) degrees");
    if (!(earth_radius_m > 0.0)) throw std::invalid_argument("earth radius must be positive");
    if (!(mu_earth > 0.0)) throw std::invalid_argument("gravitational parameter must be positive");
    if (!(sidereal_day_s > 0.0)) throw std::invalid_argument("sidereal day must be positive");
    if (!(derive_constants(*this).omega > 0.0))
        throw std::invalid_argument("effective pass rate is not positive for this orbit");
}

OrbitDerived derive_constants(const OrbitConfig& cfg)
{
    OrbitDerived d;
    d.altitude_m = cfg.altitude_m;
    d.earth_radius_m = cfg.earth_radius_m;
    d.central_angle = cfg.central_angle;
    d.range_mode = cfg.range_mode;

    d.orbit_radius_m = cfg.altitude_m + cfg.earth_radius_m;
    const double rs = d.orbit_radius_m;
    d.omega_s = std::sqrt(cfg.mu_earth / (rs * rs * rs));
    d.omega_e = 2.0 * std::numbers::pi / cfg.sidereal_day_s;
    d.omega = (d.omega_s - d.omega_e * std::cos(cfg.inclination_rad)) / 2.0;
    const double arg = std::clamp(cfg.earth_radius_m / rs * std::cos(cfg.min_elevation_rad), -1.0, 1.0);
    d.gamma0 = std::max(0.0, std::acos(arg) - cfg.min_elevation_rad);
    d.max_lap_s = d.omega > 0.0 ? d.gamma0 / d.omega : 0.0;
    return d;
}

double lap_pdf(double tc, const OrbitDerived& d)
{
    if (!(tc > 0.0) || tc > d.max_lap_s) return 0.0;
    const double c = std::cos(d.gamma0);
    // cos^2(wt) - cos^2(g0), written as a product to keep precision near T_m.
    const double gap = std::sin(d.gamma0 - d.omega * tc) * std::sin(d.gamma0 + d.omega * tc);
    if (gap <= 0.0) return std::numeric_limits<double>::infinity();
    return d.omega * c * std::tan(d.omega * tc) / (d.gamma0 * std::sqrt(gap));
}

double lap_cdf(double tc, const OrbitDerived& d)
{
    if (!(tc > 0.0)) return 0.0;
    if (tc >= d.max_lap_s) return 1.0;
    const double ratio = std::cos(d.gamma0) / std::cos(d.omega * tc);
    return 1.0 - std::acos(std::min(ratio, 1.0)) / d.gamma0;
}

double lap_quantile(double u, const OrbitDerived& d)
{
    u = std::clamp(u, 0.0, 1.0);
    const double ratio = std::cos(d.gamma0) / std::cos(d.gamma0 * (1.0 - u));
    return std::acos(std::min(ratio, 1.0)) / d.omega;
}

double sample_lap_duration(const OrbitDerived& d, Rng& rng)
{
    if (!(d.max_lap_s > 0.0)) throw std::invalid_argument("lap sampling needs T_m > 0");
    for (;;) {
        const double t = lap_quantile(uniform_open0(rng), d);
        if (t > 0.0) return std::min(t, d.max_lap_s);
    }
}

LapSample sample_lap(const OrbitDerived& d, Rng& rng)
{
    LapSample lap;
    lap.duration_s = sample_lap_duration(d, rng);
    lap.azimuth_rad = 2.0 * std::numbers::pi * uniform01(rng);
    return lap;
}

double central_angle(double t, const LapSample& lap, const OrbitDerived& d)
{
    const double w = d.omega;
    const double tc = lap.duration_s;
    if (d.central_angle == CentralAngleForm::printed)
        return std::abs(w * t / 2.0 - w * tc) + d.gamma0 - w * tc;
    return 2.0 * w * std::abs(t - tc / 2.0) + d.gamma0 - w * tc;
}

double elevation_at_origin(double t, const LapSample& lap, const OrbitDerived& d)
{
    const double theta = central_angle(t, lap, d);
    if (theta <= 0.0) return std::numbers::pi / 2;
    const double rs = d.orbit_radius_m;
    return std::atan((rs * std::cos(theta) - d.earth_radius_m) / (rs * std::sin(theta)));
}

SatelliteState satellite_state(double t, const LapSample& lap, const OrbitDerived& d)
{
    SatelliteState s;
    s.elevation_origin_rad = elevation_at_origin(t, lap, d);
    const double ca = std::cos(s.elevation_origin_rad);
    const double sa = std::sin(s.elevation_origin_rad);

    double range = d.altitude_m;
    if (d.range_mode == RangeMode::exact_slant) {
        const double rs = d.orbit_radius_m;
        const double re = d.earth_radius_m;
        range = std::sqrt(rs * rs - re * re * ca * ca) - re * sa;
    }
    s.x_m = range * ca * std::cos(lap.azimuth_rad);
    s.y_m = range * ca * std::sin(lap.azimuth_rad);
    s.z_m = range * sa;
    return s;
}

LookAngle device_elevation_and_distance(Point2 dev, const SatelliteState& sat)
{
    const double dx = sat.x_m - dev.x;
    const double dy = sat.y_m - dev.y;
    const double ground2 = dx * dx + dy * dy;
    return {std::atan2(sat.z_m, std::sqrt(ground2)), std::sqrt(ground2 + sat.z_m * sat.z_m)};
}

LapSchedule LapSchedule::cover(double horizon_s, const OrbitDerived& d, Rng& rng)
{
    LapSchedule sched;
    sched.derived_ = d;
    double t = 0.0;
    do {
        const LapSample lap = sample_lap(d, rng);
        sched.laps_.push_back(lap);
        sched.starts_.push_back(t);
        t += lap.duration_s;
    } while (t < horizon_s);
    sched.end_ = t;
    return sched;
}

SatelliteState LapSchedule::state_at(double t) const
{
    auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
    const std::size_t i = it == starts_.begin() ? 0 : static_cast<std::size_t>(it - starts_.begin()) - 1;
    const LapSample& lap = laps_[i];
    const double offset = std::clamp(t - starts_[i], 0.0, lap.duration_s);
    return satellite_state(offset, lap, derived_);
}

void write_orbit_trace_csv(std::ostream& out, const LapSample& lap, const OrbitDerived& d,
                           double step_s)
{
    if (!(step_s > 0.0)) throw std::invalid_argument("trace step must be positive");
    out << std::setprecision(12) << "t_s,elevation_origin_deg,xc_m,yc_m,zc_m\n";
    const auto steps = static_cast<std::size_t>(std::floor(lap.duration_s / step_s));
    for (std::size_t i = 0; i <= steps + 1; ++i) {
        const double t = std::min(static_cast<double>(i) * step_s, lap.duration_s);
        const SatelliteState s = satellite_state(t, lap, d);
        out << t << ',' << rad_to_deg(s.elevation_origin_rad) << ',' << s.x_m << ',' << s.y_m << ','
            << s.z_m << '\n';
        if (t >= lap.duration_s) break;
    }
}

}  // namespace ntnsim
