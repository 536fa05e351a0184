#include "ntnsim/gateways.hpp"

#include <stdexcept>

namespace ntnsim {

LinkKind GatewaySet::kind(std::size_t gateway) const
{
    if (gateway < terrestrial.size()) return LinkKind::terrestrial;
    if (haps && gateway == haps_index()) return LinkKind::haps;
    if (leo && gateway == leo_index()) return LinkKind::leo;
    throw std::out_of_range("gateway index out of range");
}

}  // namespace ntnsim
