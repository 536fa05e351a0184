#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "ntnsim/random.hpp"

namespace ntnsim {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

// Devices sit at ground level (z = 0).
using DevicePosition = Point2;

struct RegionConfig {
    double radius_m = 80e3;
    double guard_radius_m = 240e3;
    double min_bs_separation_m = 20e3;
    double earth_radius_m = 6.3781e6;
    std::size_t placement_attempts = 10000;  // per base station

    void validate() const;
};

// The HAPS hovers above the region center.
struct HapsConfig {
    double altitude_m = 30e3;

    void validate() const;
};

struct BasestationLayout {
    std::vector<Point2> inner;  // inside the study disk
    std::vector<Point2> guard;  // inside the annulus (R, R + R_g]

    std::size_t size() const { return inner.size() + guard.size(); }
    // Inner stations first, then guard stations.
    Point2 at(std::size_t i) const { return i < inner.size() ? inner[i] : guard[i - inner.size()]; }
};

class PlacementInfeasible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Uniform in area over the disk of radius R. Throws std::invalid_argument for n == 0.
std::vector<DevicePosition> deploy_devices(std::size_t n, const RegionConfig& region, Rng& rng);

// Number of guard-annulus stations that keeps the inner station density.
std::size_t guard_bs_count(std::size_t m, const RegionConfig& region);

/**
 * Places m stations in the disk and guard_bs_count(m) in the annulus by
 * rejection sampling, keeping every pair at least min_bs_separation_m apart.
 * Throws PlacementInfeasible when one station exhausts placement_attempts.
 */
BasestationLayout deploy_basestations(std::size_t m, const RegionConfig& region, Rng& rng);

double haps_distance(Point2 dev, const HapsConfig& haps);

// Elevation (rad) of the HAPS seen from a device, spherical-earth form.
double haps_elevation(Point2 dev, const HapsConfig& haps, const RegionConfig& region);

double terrestrial_distance(Point2 dev, Point2 bs);

// CSV with columns kind,x_m,y_m; kind is device, bs_inner or bs_guard.
void write_layout_csv(std::ostream& out, std::span<const DevicePosition> devices,
                      const BasestationLayout& layout);

}  // namespace ntnsim
