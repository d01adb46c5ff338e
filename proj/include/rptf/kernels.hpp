#pragma once
// Dense double-precision kernels used by the SDP solvers, rounding and the
// brute-force oracles. Every kernel has a portable scalar reference and an
// AVX2/FMA variant; the variant is chosen once per process from CPUID.

#include <cstddef>
#include <span>
#include <string_view>

namespace rptf::kernels {

enum class Isa { Scalar, Avx2 };

/// Instruction set the dispatched entry points currently use.
Isa active_isa() noexcept;
std::string_view isa_name(Isa isa) noexcept;
bool isa_available(Isa isa) noexcept;

/// Forces a specific ISA (tests and benchmarks). Returns false and leaves the
/// selection unchanged when the CPU lacks it.
bool force_isa(Isa isa) noexcept;

// Dispatched entry points. Spans must have equal length where paired.
double dot(std::span<const double> a, std::span<const double> b) noexcept;
double sum_squares(std::span<const double> a) noexcept;
// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept;
// y = M x for a row-major rows x cols matrix
void matvec(std::span<const double> m, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y) noexcept;
// x^T M x for a row-major n x n matrix
double quadform(std::span<const double> m, std::size_t n, std::span<const double> x) noexcept;

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b) noexcept;
double sum_squares(std::span<const double> a) noexcept;
void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept;
void matvec(std::span<const double> m, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y) noexcept;
double quadform(std::span<const double> m, std::size_t n, std::span<const double> x) noexcept;
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define RPTF_HAVE_AVX2_PATH 1
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b) noexcept;
double sum_squares(std::span<const double> a) noexcept;
void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept;
void matvec(std::span<const double> m, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y) noexcept;
double quadform(std::span<const double> m, std::size_t n, std::span<const double> x) noexcept;
}  // namespace avx2
#else
#define RPTF_HAVE_AVX2_PATH 0
#endif

}  // namespace rptf::kernels
