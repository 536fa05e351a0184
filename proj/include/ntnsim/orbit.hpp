#pragma once

#include <cstddef>
#include <iosfwd>
#include <numbers>
#include <vector>

#include "ntnsim/geometry.hpp"
#include "ntnsim/random.hpp"

namespace ntnsim {

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

// How the central angle of a pass evolves in time.
//  corrected: 2w|t - tc/2| + g0 - w tc, symmetric about mid-pass.
//  printed:   |w t / 2 - w tc| + g0 - w tc, kept for comparison runs.
enum class CentralAngleForm { corrected, printed };

// paper: satellite on a sphere of radius h_S about the region center.
// exact_slant: true slant range sqrt(r_S^2 - R_e^2 cos^2 a) - R_e sin a.
enum class RangeMode { paper, exact_slant };

struct OrbitConfig {
    double altitude_m = 750e3;
    double inclination_rad = deg_to_rad(60.0);
    double min_elevation_rad = deg_to_rad(20.0);
    double earth_radius_m = 6.3781e6;
    double mu_earth = 3.986004418e14;  // m^3/s^2
    double sidereal_day_s = 86164.1;
    CentralAngleForm central_angle = CentralAngleForm::corrected;
    RangeMode range_mode = RangeMode::paper;

    void validate() const;
};

struct OrbitDerived {
    double omega_s = 0.0;   // satellite angular rate (rad/s)
    double omega_e = 0.0;   // earth rotation rate (rad/s)
    double omega = 0.0;     // effective pass rate (rad/s)
    double gamma0 = 0.0;    // central angle at the minimum elevation (rad)
    double max_lap_s = 0.0; // T_m = gamma0 / omega
    double orbit_radius_m = 0.0;

    double altitude_m = 0.0;
    double earth_radius_m = 0.0;
    CentralAngleForm central_angle = CentralAngleForm::corrected;
    RangeMode range_mode = RangeMode::paper;
};

struct LapSample {
    double duration_s = 0.0;
    double azimuth_rad = 0.0;
};

struct SatelliteState {
    double x_m = 0.0;
    double y_m = 0.0;
    double z_m = 0.0;
    double elevation_origin_rad = 0.0;
};

struct LookAngle {
    double elevation_rad = 0.0;
    double distance_m = 0.0;
};

OrbitDerived derive_constants(const OrbitConfig& cfg);

// Density of the lap duration. Diverges at t_c = T_m, where +inf is returned;
// integrate it, never evaluate it pointwise at the endpoint.
double lap_pdf(double tc, const OrbitDerived& d);

// Closed-form CDF of lap_pdf: 1 - arccos(cos g0 / cos(w t)) / g0.
double lap_cdf(double tc, const OrbitDerived& d);

// Inverse of lap_cdf: arccos(cos g0 / cos(g0 (1 - u))) / w.
double lap_quantile(double u, const OrbitDerived& d);

double sample_lap_duration(const OrbitDerived& d, Rng& rng);

// Duration plus a fresh azimuth, uniform on [0, 2 pi).
LapSample sample_lap(const OrbitDerived& d, Rng& rng);

double central_angle(double t, const LapSample& lap, const OrbitDerived& d);

// Elevation of the satellite seen from the region center, in (0, pi/2].
double elevation_at_origin(double t, const LapSample& lap, const OrbitDerived& d);

SatelliteState satellite_state(double t, const LapSample& lap, const OrbitDerived& d);

LookAngle device_elevation_and_distance(Point2 dev, const SatelliteState& sat);

/**
 * Back-to-back laps covering [0, horizon). The first lap starts at t = 0 and
 * every lap draws its own duration and azimuth, so exactly one satellite is
 * visible at any time.
 */
class LapSchedule {
public:
    static LapSchedule cover(double horizon_s, const OrbitDerived& d, Rng& rng);

    const std::vector<LapSample>& laps() const { return laps_; }
    const std::vector<double>& starts() const { return starts_; }
    double end() const { return end_; }

    // Satellite state at absolute time t (clamped to the covered span).
    SatelliteState state_at(double t) const;

    const OrbitDerived& orbit() const { return derived_; }

private:
    OrbitDerived derived_;
    std::vector<LapSample> laps_;
    std::vector<double> starts_;
    double end_ = 0.0;
};

// CSV time series t_s,elevation_origin_deg,xc_m,yc_m,zc_m over one lap.
void write_orbit_trace_csv(std::ostream& out, const LapSample& lap, const OrbitDerived& d,
                           double step_s);

}  // namespace ntnsim
