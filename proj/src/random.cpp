#include "ntnsim/random.hpp"

namespace ntnsim {

Rng make_stream(std::uint64_t master_seed, std::uint64_t index, std::uint64_t tag)
{
    auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
    auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(master_seed), hi(master_seed), lo(index), hi(index),
                      lo(tag), hi(tag), 0x6e746e73u};
    return Rng(seq);
}

std::uint64_t entropy_seed()
{
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

}  // namespace ntnsim
