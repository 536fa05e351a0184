#pragma once

#include <cstddef>
#include <optional>

#include "ntnsim/channel.hpp"
#include "ntnsim/geometry.hpp"

namespace ntnsim {

/**
 * Receivers active in one scenario. Gateway indices run over the terrestrial
 * stations first (inner, then guard), then the HAPS, then the LEO satellite.
 */
struct GatewaySet {
    BasestationLayout terrestrial;
    std::optional<HapsConfig> haps;
    bool leo = false;

    std::size_t size() const { return terrestrial.size() + (haps ? 1 : 0) + (leo ? 1 : 0); }
    bool empty() const { return size() == 0; }
    LinkKind kind(std::size_t gateway) const;
    std::size_t haps_index() const { return terrestrial.size(); }
    std::size_t leo_index() const { return terrestrial.size() + (haps ? 1 : 0); }
};

}  // namespace ntnsim
