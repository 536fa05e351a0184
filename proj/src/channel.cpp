#include "ntnsim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

namespace ntnsim {

double LinkBudgetConfig::rx_gain_dbi(LinkKind kind) const
{
    switch (kind) {
    case LinkKind::terrestrial: return rx_gain_terr_dbi;
    case LinkKind::haps: return rx_gain_haps_dbi;
    case LinkKind::leo: return rx_gain_sat_dbi;
    }
    return 0.0;
}

void LinkBudgetConfig::validate() const
{
    if (!(carrier_hz > 0.0)) throw std::invalid_argument("carrier frequency must be positive");
    if (!(speed_of_light > 0.0)) throw std::invalid_argument("speed of light must be positive");
}

void TerrestrialChannelConfig::validate() const
{
    if (!(exponent > 0.0)) throw std::invalid_argument("path loss exponent must be positive");
    if (!(shadow_sigma_db >= 0.0)) throw std::invalid_argument("shadow sigma must be non-negative");
    if (!(ref_distance_m > 0.0)) throw std::invalid_argument("reference distance must be positive");
}

void ChannelConfig::validate() const
{
    link.validate();
    terrestrial.validate();
    // The floor itself must give a usable gamma law.
    shadowed_rice_params(fading.min_elevation_rad, fading);
}

double terrestrial_pathloss_db(double d_m, const TerrestrialChannelConfig& cfg)
{
    if (!(d_m > 0.0)) throw std::domain_error("terrestrial path loss needs a positive distance");
    return cfg.pathloss_ref_db + 10.0 * cfg.exponent * std::log10(d_m / cfg.ref_distance_m);
}

double fspl_db(double d_m, const LinkBudgetConfig& cfg)
{
    if (!(d_m > 0.0)) throw std::domain_error("free-space path loss needs a positive distance");
    return 20.0 * std::log10(4.0 * std::numbers::pi * d_m / cfg.wavelength_m());
}

NtnFadingParams shadowed_rice_fit(double a)
{
    NtnFadingParams p;
    p.b0 = ((-4.7943e-8 * a + 5.5784e-6) * a - 2.1344e-4) * a + 3.2710e-2;
    p.m = ((6.3739e-5 * a + 5.8533e-4) * a - 1.5973e-1) * a + 3.5156;
    p.omega = ((1.4428e-5 * a - 2.3798e-3) * a + 1.2702e-1) * a - 1.4864;

    const double s = 2.0 * p.b0 + p.omega;
    const double denom = 4.0 * p.m * p.b0 * p.b0 + 4.0 * p.m * p.b0 * p.omega + p.omega * p.omega;
    p.shape_k = p.m * s * s / denom;
    p.scale_theta = denom / (p.m * s);
    return p;
}

NtnFadingParams shadowed_rice_params(double elevation_rad, const FadingConfig& cfg)
{
    const double rad = std::clamp(elevation_rad, cfg.min_elevation_rad, std::numbers::pi / 2);
    const double deg = rad_to_deg(rad);
    const NtnFadingParams p = shadowed_rice_fit(deg);
    if (!(p.b0 > 0.0 && p.m > 0.0 && p.omega > 0.0 && p.shape_k > 0.0 && p.scale_theta > 0.0))
        throw ParameterOutOfRange("shadowed-Rice fit gives non-positive parameters at " +
                                  std::to_string(deg) + " degrees");
    return p;
}

double sample_ntn_fading(const NtnFadingParams& params, Rng& rng)
{
    std::gamma_distribution<double> gamma(params.shape_k, params.scale_theta);
    return gamma(rng);
}

double sample_shadow_fading_db(const TerrestrialChannelConfig& cfg, Rng& rng)
{
    if (cfg.shadow_sigma_db == 0.0) return 0.0;
    std::normal_distribution<double> normal(0.0, cfg.shadow_sigma_db);
    return normal(rng);
}

double mean_received_power_dbm(LinkKind kind, double d_m, const ChannelConfig& cfg)
{
    const double loss = kind == LinkKind::terrestrial ? terrestrial_pathloss_db(d_m, cfg.terrestrial)
                                                      : fspl_db(d_m, cfg.link);
    return cfg.link.tx_power_dbm + cfg.link.tx_gain_dbi + cfg.link.rx_gain_dbi(kind) - loss;
}

double received_power_dbm(LinkKind kind, double d_m, const ChannelConfig& cfg, double fading_db)
{
    return mean_received_power_dbm(kind, d_m, cfg) + fading_db;
}

double received_power_dbm(LinkKind kind, double d_m, std::optional<double> elevation_rad,
                          const ChannelConfig& cfg, Rng& rng)
{
    if (kind == LinkKind::terrestrial)
        return received_power_dbm(kind, d_m, cfg, sample_shadow_fading_db(cfg.terrestrial, rng));
    if (!elevation_rad) throw std::invalid_argument("NTN link needs an elevation angle");
    const double base = mean_received_power_dbm(kind, d_m, cfg);
    const double gain = sample_ntn_fading(shadowed_rice_params(*elevation_rad, cfg.fading), rng);
    return base + 10.0 * std::log10(gain);
}

double ntn_gain_threshold(LinkKind kind, double d_m, const ChannelConfig& cfg)
{
    return std::pow(10.0, (cfg.link.sensitivity_dbm - mean_received_power_dbm(kind, d_m, cfg)) / 10.0);
}

double terrestrial_reception_probability(double d_m, const ChannelConfig& cfg)
{
    const double margin = mean_received_power_dbm(LinkKind::terrestrial, d_m, cfg) -
                          cfg.link.sensitivity_dbm;
    const double sigma = cfg.terrestrial.shadow_sigma_db;
    if (sigma == 0.0) return margin >= 0.0 ? 1.0 : 0.0;
    // P[margin + sigma Z >= 0] = Phi(margin / sigma)
    return 0.5 * std::erfc(-margin / (sigma * std::numbers::sqrt2));
}

double ntn_reception_probability(LinkKind kind, double d_m, double elevation_rad,
                                 const ChannelConfig& cfg)
{
    const NtnFadingParams p = shadowed_rice_params(elevation_rad, cfg.fading);
    const double g = ntn_gain_threshold(kind, d_m, cfg);
    return boost::math::gamma_q(p.shape_k, g / p.scale_theta);
}

}  // namespace ntnsim
