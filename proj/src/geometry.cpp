#include "ntnsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <string>

namespace ntnsim {

void RegionConfig::validate() const
{
    if (!(radius_m > 0.0)) throw std::invalid_argument("region radius must be positive");
    if (!(guard_radius_m >= 0.0)) throw std::invalid_argument("guard radius must be non-negative");
    if (!(min_bs_separation_m >= 0.0))
        throw std::invalid_argument("minimum BS separation must be non-negative");
    if (!(earth_radius_m > 0.0)) throw std::invalid_argument("earth radius must be positive");
    if (placement_attempts == 0) throw std::invalid_argument("placement attempts must be positive");
}

void HapsConfig::validate() const
{
    if (!(altitude_m > 0.0)) throw std::invalid_argument("HAPS altitude must be positive");
}

namespace {

Point2 polar(double r, double phi) { return {r * std::cos(phi), r * std::sin(phi)}; }

Point2 sample_disk(double radius, Rng& rng)
{
    const double r = radius * std::sqrt(uniform01(rng));
    return polar(r, 2.0 * std::numbers::pi * uniform01(rng));
}

// Uniform in area over (inner, outer].
Point2 sample_annulus(double inner, double outer, Rng& rng)
{
    const double u = uniform_open0(rng);
    const double r = std::sqrt(inner * inner + u * (outer * outer - inner * inner));
    return polar(r, 2.0 * std::numbers::pi * uniform01(rng));
}

bool far_enough(Point2 p, const std::vector<Point2>& placed, double min_sep2)
{
    for (const auto& q : placed) {
        const double dx = p.x - q.x;
        const double dy = p.y - q.y;
        if (dx * dx + dy * dy < min_sep2) return false;
    }
    return true;
}

}  // namespace

std::vector<DevicePosition> deploy_devices(std::size_t n, const RegionConfig& region, Rng& rng)
{
    if (n == 0) throw std::invalid_argument("deploy_devices: need at least one device");
    std::vector<DevicePosition> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(sample_disk(region.radius_m, rng));
    return out;
}

std::size_t guard_bs_count(std::size_t m, const RegionConfig& region)
{
    const double ratio = region.guard_radius_m / region.radius_m;
    return static_cast<std::size_t>(std::llround(static_cast<double>(m) * ratio * (2.0 + ratio)));
}

BasestationLayout deploy_basestations(std::size_t m, const RegionConfig& region, Rng& rng)
{
    BasestationLayout layout;
    const std::size_t mg = guard_bs_count(m, region);
    const double min_sep2 = region.min_bs_separation_m * region.min_bs_separation_m;

    // Checked against every placed station, inner and guard alike.
    std::vector<Point2> placed;
    placed.reserve(m + mg);

    auto place = [&](auto&& draw, const char* where, std::size_t index) {
        for (std::size_t attempt = 0; attempt < region.placement_attempts; ++attempt) {
            const Point2 p = draw();
            if (far_enough(p, placed, min_sep2)) {
                placed.push_back(p);
                return p;
            }
        }
        throw PlacementInfeasible("cannot place " + std::string(where) + " base station " +
                                  std::to_string(index) + " after " +
                                  std::to_string(region.placement_attempts) + " attempts");
    };

    for (std::size_t i = 0; i < m; ++i)
        layout.inner.push_back(place([&] { return sample_disk(region.radius_m, rng); }, "inner", i));
    const double outer = region.radius_m + region.guard_radius_m;
    for (std::size_t i = 0; i < mg; ++i)
        layout.guard.push_back(
            place([&] { return sample_annulus(region.radius_m, outer, rng); }, "guard", i));
    return layout;
}

double haps_distance(Point2 dev, const HapsConfig& haps)
{
    return std::sqrt(dev.x * dev.x + dev.y * dev.y + haps.altitude_m * haps.altitude_m);
}

double haps_elevation(Point2 dev, const HapsConfig& haps, const RegionConfig& region)
{
    const double rho2 = dev.x * dev.x + dev.y * dev.y;
    const double h = haps.altitude_m;
    const double re = region.earth_radius_m;
    const double s = (h * re - rho2) / std::sqrt((rho2 + re * re) * (rho2 + h * h));
    return std::asin(std::clamp(s, -1.0, 1.0));
}

double terrestrial_distance(Point2 dev, Point2 bs) { return std::hypot(dev.x - bs.x, dev.y - bs.y); }

void write_layout_csv(std::ostream& out, std::span<const DevicePosition> devices,
                      const BasestationLayout& layout)
{
    out << std::setprecision(12) << "kind,x_m,y_m\n";
    auto row = [&](const char* kind, Point2 p) { out << kind << ',' << p.x << ',' << p.y << '\n'; };
    for (const auto& d : devices) row("device", d);
    for (const auto& b : layout.inner) row("bs_inner", b);
    for (const auto& b : layout.guard) row("bs_guard", b);
}

}  // namespace ntnsim
