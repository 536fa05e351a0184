#pragma once

#include <cstdint>
#include <span>

// Batched inner loops of the link sampler. Each kernel has a scalar reference
// and, where the CPU allows it, an AVX2 variant. Variants must produce
// bit-identical output; the dispatcher picks one at first use.
namespace ntnsim::kernels {

enum class Isa { scalar, avx2 };

// out[i] = (xs[i] - px)^2 + (ys[i] - py)^2 + pz^2, summed in that order.
using SquaredRangesFn = void (*)(std::span<const double> xs, std::span<const double> ys, double px,
                                 double py, double pz, std::span<double> out);

// out[i] = bits[i] mapped to [0, 1) with to_unit_interval().
using UniformsFn = void (*)(std::span<const std::uint64_t> bits, std::span<double> out);

// out[i] = a[i] < b[i] ? 1 : 0 (false for NaN).
using LessMaskFn = void (*)(std::span<const double> a, std::span<const double> b,
                            std::span<std::uint8_t> out);

// out[i] = a[i] < threshold ? 1 : 0.
using LessScalarMaskFn = void (*)(std::span<const double> a, double threshold,
                                  std::span<std::uint8_t> out);

struct KernelTable {
    Isa isa;
    SquaredRangesFn squared_ranges;
    UniformsFn uniforms;
    LessMaskFn less_mask;
    LessScalarMaskFn less_scalar_mask;
};

namespace scalar {
void squared_ranges(std::span<const double> xs, std::span<const double> ys, double px, double py,
                    double pz, std::span<double> out);
void uniforms(std::span<const std::uint64_t> bits, std::span<double> out);
void less_mask(std::span<const double> a, std::span<const double> b, std::span<std::uint8_t> out);
void less_scalar_mask(std::span<const double> a, double threshold, std::span<std::uint8_t> out);
}  // namespace scalar

namespace avx2 {
void squared_ranges(std::span<const double> xs, std::span<const double> ys, double px, double py,
                    double pz, std::span<double> out);
void uniforms(std::span<const std::uint64_t> bits, std::span<double> out);
void less_mask(std::span<const double> a, std::span<const double> b, std::span<std::uint8_t> out);
void less_scalar_mask(std::span<const double> a, double threshold, std::span<std::uint8_t> out);
}  // namespace avx2

// True when the AVX2 variants are compiled in and the CPU runs them.
bool avx2_available();

// Active table. Defaults to the best available ISA; NTNSIM_ISA=scalar in the
// environment forces the reference kernels.
const KernelTable& active();

// Switches the active table (tests and benchmarks). Requesting an unavailable
// ISA leaves the scalar table active. Not safe while kernels are running.
void select(Isa isa);

const char* isa_name(Isa isa);

}  // namespace ntnsim::kernels
