#include <atomic>
#include <cstdlib>
#include <string_view>

#include "ntnsim/kernels.hpp"

namespace ntnsim::kernels {

namespace {

constexpr KernelTable scalar_table{Isa::scalar, scalar::squared_ranges, scalar::uniforms,
                                   scalar::less_mask, scalar::less_scalar_mask};

#ifdef NTNSIM_HAVE_AVX2
constexpr KernelTable avx2_table{Isa::avx2, avx2::squared_ranges, avx2::uniforms, avx2::less_mask,
                                 avx2::less_scalar_mask};
#endif

const KernelTable* table_for(Isa isa)
{
#ifdef NTNSIM_HAVE_AVX2
    if (isa == Isa::avx2 && avx2_available()) return &avx2_table;
#endif
    (void)isa;
    return &scalar_table;
}

const KernelTable* initial_table()
{
    const char* env = std::getenv("NTNSIM_ISA");
    if (env && std::string_view(env) == "scalar") return &scalar_table;
    return table_for(Isa::avx2);
}

std::atomic<const KernelTable*>& current()
{
    static std::atomic<const KernelTable*> table{initial_table()};
    return table;
}

}  // namespace

bool avx2_available()
{
#if defined(NTNSIM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    static const bool ok = __builtin_cpu_supports("avx2");
    return ok;
#else
    return false;
#endif
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(Isa isa) { current().store(table_for(isa), std::memory_order_release); }

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

}  // namespace ntnsim::kernels
