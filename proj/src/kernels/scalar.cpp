#include "ntnsim/kernels.hpp"
#include "ntnsim/random.hpp"

namespace ntnsim::kernels::scalar {

void squared_ranges(std::span<const double> xs, std::span<const double> ys, double px, double py,
                    double pz, std::span<double> out)
{
    const double pz2 = pz * pz;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double dx = xs[i] - px;
        const double dy = ys[i] - py;
        out[i] = (dx * dx + dy * dy) + pz2;
    }
}

void uniforms(std::span<const std::uint64_t> bits, std::span<double> out)
{
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = to_unit_interval(bits[i]);
}

void less_mask(std::span<const double> a, std::span<const double> b, std::span<std::uint8_t> out)
{
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] < b[i] ? 1 : 0;
}

void less_scalar_mask(std::span<const double> a, double threshold, std::span<std::uint8_t> out)
{
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] < threshold ? 1 : 0;
}

}  // namespace ntnsim::kernels::scalar
