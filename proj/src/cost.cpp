#include "ntnsim/cost.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace ntnsim {

Cents CostModel::device_price(std::size_t n_devices) const
{
    Cents price = 0;
    std::size_t best = 0;
    bool found = false;
    for (const auto& tier : device_prices) {
        if (tier.min_devices <= n_devices && (!found || tier.min_devices >= best)) {
            best = tier.min_devices;
            price = tier.per_device_year;
            found = true;
        }
    }
    return price;
}

Cents CostModel::opex_per_year(std::size_t n_devices, std::size_t n_bs) const
{
    return opex_fixed_year + device_price(n_devices) * static_cast<Cents>(n_devices) +
           opex_per_bs_year * static_cast<Cents>(n_bs);
}

double annuity_factor(double discount, int years)
{
    if (years < 0) throw std::invalid_argument("horizon must be non-negative");
    if (discount < 0.0) throw std::invalid_argument("discount must be non-negative");
    double sum = 0.0;
    double factor = 1.0;
    for (int n = 1; n <= years; ++n) {
        factor /= 1.0 + discount;
        sum += factor;
    }
    return sum;
}

Cents npv_total(const CostModel& model, std::size_t n_devices, std::size_t n_bs)
{
    const double opex = static_cast<double>(model.opex_per_year(n_devices, n_bs));
    return model.capex + std::llround(opex * annuity_factor(model.discount, model.horizon_years));
}

CostModel haps_cost_model(const CostParams& p)
{
    CostModel m;
    m.capex = p.haps_capex;
    m.opex_fixed_year = p.haps_opex_year;
    m.discount = p.discount;
    m.horizon_years = p.horizon_years;
    return m;
}

CostModel leo_cost_model(const CostParams& p)
{
    CostModel m;
    m.device_prices = p.leo_prices;
    m.discount = p.discount;
    m.horizon_years = p.horizon_years;
    return m;
}

CostModel terrestrial_cost_model(const CostParams& p, std::size_t n_bs)
{
    CostModel m;
    m.opex_fixed_year = p.tower_lease_year * static_cast<Cents>(n_bs);
    m.discount = p.discount;
    m.horizon_years = p.horizon_years;
    return m;
}

ArchitectureCosts scenario_costs(std::size_t n_devices, std::size_t n_bs_terrestrial,
                                 const CostParams& p)
{
    ArchitectureCosts c;
    c.haps = npv_total(haps_cost_model(p), n_devices, 0);
    c.leo = npv_total(leo_cost_model(p), n_devices, 0);
    c.terrestrial = npv_total(terrestrial_cost_model(p, n_bs_terrestrial), n_devices, 0);
    return c;
}

std::optional<std::size_t> crossover_devices(const CostModel& a, const CostModel& b,
                                             std::size_t cap)
{
    auto reached = [&](std::size_t n) { return npv_total(a, n, 0) >= npv_total(b, n, 0); };
    if (reached(0)) return 0;
    if (!reached(cap)) return std::nullopt;
    std::size_t lo = 0;  // not reached
    std::size_t hi = cap;  // reached
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        (reached(mid) ? hi : lo) = mid;
    }
    return hi;
}

std::vector<CostSweepRow> cost_sweep(const CostParams& p, std::span<const std::size_t> devices,
                                     std::span<const std::size_t> station_counts)
{
    const CostModel haps = haps_cost_model(p);
    const CostModel leo = leo_cost_model(p);
    std::vector<CostSweepRow> rows;
    for (std::size_t n : devices) {
        CostSweepRow row;
        row.n_devices = n;
        row.haps = npv_total(haps, n, 0);
        row.leo = npv_total(leo, n, 0);
        for (std::size_t m : station_counts)
            row.terrestrial.push_back(npv_total(terrestrial_cost_model(p, m), n, 0));
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_cost_sweep_csv(std::ostream& out, std::span<const CostSweepRow> rows,
                          std::span<const std::size_t> station_counts, int horizon_years)
{
    out << "n_devices,cost_haps,cost_leo";
    for (std::size_t m : station_counts) out << ",cost_terrestrial_" << m;
    out << ",annual_haps,annual_leo";
    for (std::size_t m : station_counts) out << ",annual_terrestrial_" << m;
    out << '\n' << std::fixed << std::setprecision(2);

    const double years = horizon_years > 0 ? horizon_years : 1;
    for (const auto& row : rows) {
        out << row.n_devices << ',' << to_usd(row.haps) << ',' << to_usd(row.leo);
        for (Cents c : row.terrestrial) out << ',' << to_usd(c);
        out << ',' << to_usd(row.haps) / years << ',' << to_usd(row.leo) / years;
        for (Cents c : row.terrestrial) out << ',' << to_usd(c) / years;
        out << '\n';
    }
    out << std::defaultfloat;
}

}  // namespace ntnsim
