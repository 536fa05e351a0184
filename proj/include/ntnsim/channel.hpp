#pragma once

#include <optional>
#include <stdexcept>

#include "ntnsim/orbit.hpp"
#include "ntnsim/random.hpp"

namespace ntnsim {

enum class LinkKind { terrestrial, haps, leo };

struct LinkBudgetConfig {
    double tx_power_dbm = 14.0;
    double carrier_hz = 868e6;
    double tx_gain_dbi = 0.0;
    double rx_gain_haps_dbi = 6.0;
    double rx_gain_sat_dbi = 13.5;
    double rx_gain_terr_dbi = 6.0;
    double sensitivity_dbm = -132.0;
    double speed_of_light = 3e8;

    double rx_gain_dbi(LinkKind kind) const;
    double wavelength_m() const { return speed_of_light / carrier_hz; }
    void validate() const;
};

// Log-distance path loss with log-normal shadowing.
struct TerrestrialChannelConfig {
    double ref_distance_m = 1000.0;
    double pathloss_ref_db = 128.96;
    double exponent = 2.32;
    double shadow_sigma_db = 7.8;

    void validate() const;
};

struct FadingConfig {
    // Elevations below this floor use the floor's fit parameters.
    double min_elevation_rad = deg_to_rad(20.0);
};

struct ChannelConfig {
    LinkBudgetConfig link;
    TerrestrialChannelConfig terrestrial;
    FadingConfig fading;

    void validate() const;
};

// Shadowed-Rice parameters and the gamma law that approximates |r|^2.
struct NtnFadingParams {
    double b0 = 0.0;
    double m = 0.0;
    double omega = 0.0;
    double shape_k = 0.0;
    double scale_theta = 0.0;

    double mean_power() const { return 2.0 * b0 + omega; }
};

class ParameterOutOfRange : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// B + 10 eta log10(d / d0). Throws std::domain_error for d <= 0.
double terrestrial_pathloss_db(double d_m, const TerrestrialChannelConfig& cfg);

// 20 log10(4 pi d / lambda), gains excluded. Throws std::domain_error for d <= 0.
double fspl_db(double d_m, const LinkBudgetConfig& cfg);

// The elevation cubics evaluated as-is (alpha in degrees), no clamping or checks.
NtnFadingParams shadowed_rice_fit(double elevation_deg);

/**
 * Fit parameters at a link elevation given in radians. Elevations below the
 * configured floor are clamped to it; values above 90 degrees to 90. Throws
 * ParameterOutOfRange if any of b0, m, Omega, k, theta is not positive.
 */
NtnFadingParams shadowed_rice_params(double elevation_rad, const FadingConfig& cfg = {});

// One Gamma(k, theta) power-gain draw (linear).
double sample_ntn_fading(const NtnFadingParams& params, Rng& rng);

// One N(0, sigma_SF^2) draw in dB.
double sample_shadow_fading_db(const TerrestrialChannelConfig& cfg, Rng& rng);

// Transmit power plus gains minus path loss: everything but the fading term.
double mean_received_power_dbm(LinkKind kind, double d_m, const ChannelConfig& cfg);

// Deterministic part plus a given fading term in dB (shadow offset, or
// 10 log10 of the gamma gain for NTN links).
double received_power_dbm(LinkKind kind, double d_m, const ChannelConfig& cfg, double fading_db);

// Draws the fading term. elevation_rad is required for haps/leo links.
double received_power_dbm(LinkKind kind, double d_m, std::optional<double> elevation_rad,
                          const ChannelConfig& cfg, Rng& rng);

// Smallest linear fading gain that keeps an NTN link at or above sensitivity.
double ntn_gain_threshold(LinkKind kind, double d_m, const ChannelConfig& cfg);

// P[p_rx >= sensitivity] for one unit, closed form.
double terrestrial_reception_probability(double d_m, const ChannelConfig& cfg);
double ntn_reception_probability(LinkKind kind, double d_m, double elevation_rad,
                                 const ChannelConfig& cfg);

}  // namespace ntnsim
