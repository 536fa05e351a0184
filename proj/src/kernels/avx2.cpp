// Compiled with -mavx2; only reached through the dispatcher after a CPU check.
#include <immintrin.h>

#include "ntnsim/kernels.hpp"

namespace ntnsim::kernels::avx2 {

namespace {

constexpr std::size_t lanes = 4;

inline void store_mask(int bits, std::uint8_t* out)
{
    out[0] = static_cast<std::uint8_t>(bits & 1);
    out[1] = static_cast<std::uint8_t>((bits >> 1) & 1);
    out[2] = static_cast<std::uint8_t>((bits >> 2) & 1);
    out[3] = static_cast<std::uint8_t>((bits >> 3) & 1);
}

}  // namespace

void squared_ranges(std::span<const double> xs, std::span<const double> ys, double px, double py,
                    double pz, std::span<double> out)
{
    const std::size_t n = out.size();
    const std::size_t body = n - n % lanes;
    const __m256d vpx = _mm256_set1_pd(px);
    const __m256d vpy = _mm256_set1_pd(py);
    const double pz2 = pz * pz;
    const __m256d vpz2 = _mm256_set1_pd(pz2);
    for (std::size_t i = 0; i < body; i += lanes) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs.data() + i), vpx);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys.data() + i), vpy);
        const __m256d xy = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
        _mm256_storeu_pd(out.data() + i, _mm256_add_pd(xy, vpz2));
    }
    for (std::size_t i = body; i < n; ++i) {
        const double dx = xs[i] - px;
        const double dy = ys[i] - py;
        out[i] = (dx * dx + dy * dy) + pz2;
    }
}

void uniforms(std::span<const std::uint64_t> bits, std::span<double> out)
{
    const std::size_t n = out.size();
    const std::size_t body = n - n % lanes;
    const __m256i exponent = _mm256_set1_epi64x(0x3FF0000000000000LL);
    const __m256d one = _mm256_set1_pd(1.0);
    for (std::size_t i = 0; i < body; i += lanes) {
        const __m256i raw =
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(bits.data() + i));
        const __m256i mant = _mm256_or_si256(_mm256_srli_epi64(raw, 12), exponent);
        _mm256_storeu_pd(out.data() + i, _mm256_sub_pd(_mm256_castsi256_pd(mant), one));
    }
    scalar::uniforms(bits.subspan(body), out.subspan(body));
}

void less_mask(std::span<const double> a, std::span<const double> b, std::span<std::uint8_t> out)
{
    const std::size_t n = out.size();
    const std::size_t body = n - n % lanes;
    for (std::size_t i = 0; i < body; i += lanes) {
        const __m256d lt = _mm256_cmp_pd(_mm256_loadu_pd(a.data() + i),
                                         _mm256_loadu_pd(b.data() + i), _CMP_LT_OQ);
        store_mask(_mm256_movemask_pd(lt), out.data() + i);
    }
    scalar::less_mask(a.subspan(body), b.subspan(body), out.subspan(body));
}

void less_scalar_mask(std::span<const double> a, double threshold, std::span<std::uint8_t> out)
{
    const std::size_t n = out.size();
    const std::size_t body = n - n % lanes;
    const __m256d t = _mm256_set1_pd(threshold);
    for (std::size_t i = 0; i < body; i += lanes) {
        const __m256d lt = _mm256_cmp_pd(_mm256_loadu_pd(a.data() + i), t, _CMP_LT_OQ);
        store_mask(_mm256_movemask_pd(lt), out.data() + i);
    }
    scalar::less_scalar_mask(a.subspan(body), threshold, out.subspan(body));
}

}  // namespace ntnsim::kernels::avx2
