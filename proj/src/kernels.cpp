#include "rptf/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace rptf::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if RPTF_HAVE_AVX2_PATH && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa initial_isa() noexcept {
    // RPTF_ISA=scalar pins the reference path for a whole process.
    if (const char* env = std::getenv("RPTF_ISA"); env && std::string(env) == "scalar")
        return Isa::Scalar;
    return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& selected() noexcept {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

}  // namespace

Isa active_isa() noexcept { return selected().load(std::memory_order_relaxed); }

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) noexcept { return isa == Isa::Scalar || cpu_has_avx2(); }

bool force_isa(Isa isa) noexcept {
    if (!isa_available(isa)) return false;
    selected().store(isa, std::memory_order_relaxed);
    return true;
}

#if RPTF_HAVE_AVX2_PATH
#define RPTF_DISPATCH(call) \
    (active_isa() == Isa::Avx2 ? avx2::call : scalar::call)
#else
#define RPTF_DISPATCH(call) (scalar::call)
#endif

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    return RPTF_DISPATCH(dot(a, b));
}

double sum_squares(std::span<const double> a) noexcept { return RPTF_DISPATCH(sum_squares(a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
    RPTF_DISPATCH(axpy(alpha, x, y));
}

void matvec(std::span<const double> m, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y) noexcept {
    RPTF_DISPATCH(matvec(m, rows, cols, x, y));
}

double quadform(std::span<const double> m, std::size_t n, std::span<const double> x) noexcept {
    return RPTF_DISPATCH(quadform(m, n, x));
}

#undef RPTF_DISPATCH

}  // namespace rptf::kernels
