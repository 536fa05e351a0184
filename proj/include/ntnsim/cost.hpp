#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace ntnsim {

// Currency is carried in integer cents; discounting is done in double and
// rounded back to the nearest cent.
using Cents = std::int64_t;

constexpr Cents usd(double dollars) { return static_cast<Cents>(dollars * 100.0 + (dollars >= 0 ? 0.5 : -0.5)); }
constexpr double to_usd(Cents c) { return static_cast<double>(c) / 100.0; }

// Volume price: the tier with the largest min_devices not above N applies to
// every device.
struct PriceTier {
    std::size_t min_devices = 0;
    Cents per_device_year = 0;
};

struct CostModel {
    Cents capex = 0;
    Cents opex_fixed_year = 0;
    std::vector<PriceTier> device_prices;
    Cents opex_per_bs_year = 0;
    double discount = 0.05;
    int horizon_years = 20;

    Cents device_price(std::size_t n_devices) const;
    Cents opex_per_year(std::size_t n_devices, std::size_t n_bs) const;
};

// Table values for the three ownership models.
struct CostParams {
    Cents haps_capex = usd(4'000'000);
    Cents haps_opex_year = usd(30'000);
    std::vector<PriceTier> leo_prices{{0, usd(24)}};
    Cents tower_lease_year = usd(12'600);
    double discount = 0.05;
    int horizon_years = 20;
};

// sum_{n=1..years} (1 + discount)^-n, summed term by term.
double annuity_factor(double discount, int years);

// CAPEX + sum_{n=1..years} OPEX / (1 + discount)^n, rounded to cents.
Cents npv_total(const CostModel& model, std::size_t n_devices, std::size_t n_bs);

CostModel haps_cost_model(const CostParams& p);
CostModel leo_cost_model(const CostParams& p);
// Tower leasing for a fixed number of stations, independent of devices.
CostModel terrestrial_cost_model(const CostParams& p, std::size_t n_bs);

struct ArchitectureCosts {
    Cents haps = 0;
    Cents leo = 0;
    Cents terrestrial = 0;
};

ArchitectureCosts scenario_costs(std::size_t n_devices, std::size_t n_bs_terrestrial,
                                 const CostParams& p = {});

/**
 * Smallest device count N with cost_a(N) >= cost_b(N), found by bisection;
 * both costs must be monotone in N. Returns 0 when a already costs at least
 * as much with no devices, and nullopt when no N up to cap qualifies.
 */
std::optional<std::size_t> crossover_devices(const CostModel& a, const CostModel& b,
                                             std::size_t cap = 1'000'000'000);

struct CostSweepRow {
    std::size_t n_devices = 0;
    Cents haps = 0;
    Cents leo = 0;
    std::vector<Cents> terrestrial;  // one per station count
};

std::vector<CostSweepRow> cost_sweep(const CostParams& p, std::span<const std::size_t> devices,
                                     std::span<const std::size_t> station_counts);

// Total NPV columns plus annualized (NPV / years) columns.
void write_cost_sweep_csv(std::ostream& out, std::span<const CostSweepRow> rows,
                          std::span<const std::size_t> station_counts, int horizon_years);

}  // namespace ntnsim
