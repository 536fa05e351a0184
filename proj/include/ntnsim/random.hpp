#pragma once

#include <bit>
#include <cstdint>
#include <random>

namespace ntnsim {

// Every stochastic operation takes its stream explicitly; one stream per run.
using Rng = std::mt19937_64;

// Maps the top 52 bits of a raw draw onto [0, 1). The batched kernels use the
// same bit trick, so scalar and vector paths agree exactly.
inline double to_unit_interval(std::uint64_t bits)
{
    return std::bit_cast<double>((bits >> 12) | 0x3FF0000000000000ULL) - 1.0;
}

inline double uniform01(Rng& rng) { return to_unit_interval(rng()); }

// Uniform on (0, 1]; safe as a log() argument.
inline double uniform_open0(Rng& rng) { return 1.0 - uniform01(rng); }

/**
 * Derives an independent stream from a master seed and a stream counter.
 *
 * The counter is hashed together with the seed through std::seed_seq, so
 * streams for distinct (seed, index, tag) triples do not overlap in practice
 * and the mapping does not depend on which worker asks for it.
 */
Rng make_stream(std::uint64_t master_seed, std::uint64_t index, std::uint64_t tag = 0);

// Fresh 64-bit seed from the OS entropy source.
std::uint64_t entropy_seed();

}  // namespace ntnsim
