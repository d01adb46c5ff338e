#include "rptf/kernels.hpp"
#include "rptf/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace rptf;

namespace {

std::vector<double> random_vec(std::size_t n, Rng& r) {
    std::vector<double> v(n);
    r.fill_normal(v);
    return v;
}

double rel(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(a) + std::abs(b)); }

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar and avx2 kernels agree") {
#if RPTF_HAVE_AVX2_PATH
    if (!kernels::isa_available(kernels::Isa::Avx2)) {
        MESSAGE("AVX2 not available on this CPU; only the scalar path is exercised");
        return;
    }
    Rng r(11);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 13u, 16u, 31u, 64u, 129u}) {
        const auto a = random_vec(n, r), b = random_vec(n, r);
        CHECK(rel(kernels::scalar::dot(a, b), kernels::avx2::dot(a, b)) < 1e-13);
        CHECK(rel(kernels::scalar::sum_squares(a), kernels::avx2::sum_squares(a)) < 1e-13);

        auto y1 = b, y2 = b;
        kernels::scalar::axpy(0.37, a, y1);
        kernels::avx2::axpy(0.37, a, y2);
        for (std::size_t i = 0; i < n; ++i) CHECK(rel(y1[i], y2[i]) < 1e-14);

        const std::size_t rows = n / 2 + 1;
        const auto m = random_vec(rows * n, r);
        std::vector<double> o1(rows), o2(rows);
        kernels::scalar::matvec(m, rows, n, a, o1);
        kernels::avx2::matvec(m, rows, n, a, o2);
        for (std::size_t i = 0; i < rows; ++i) CHECK(rel(o1[i], o2[i]) < 1e-13);

        const auto q = random_vec(n * n, r);
        CHECK(rel(kernels::scalar::quadform(q, n, a), kernels::avx2::quadform(q, n, a)) < 1e-12);
    }
#else
    MESSAGE("no AVX2 path on this architecture");
#endif
}

TEST_CASE("dispatch can be forced and restored") {
    const auto before = kernels::active_isa();
    CHECK(kernels::force_isa(kernels::Isa::Scalar));
    CHECK(kernels::active_isa() == kernels::Isa::Scalar);
    const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
    CHECK(kernels::dot(a, b) == doctest::Approx(32.0));
    kernels::force_isa(before);
    CHECK(kernels::active_isa() == before);
    CHECK(kernels::dot(a, b) == doctest::Approx(32.0));
}

TEST_CASE("matvec and quadform on known values") {
    const std::vector<double> m{1, 2, 3, 4};
    const std::vector<double> x{1, -1};
    std::vector<double> y(2);
    kernels::matvec(m, 2, 2, x, y);
    CHECK(y[0] == -1.0);
    CHECK(y[1] == -1.0);
    CHECK(kernels::quadform(m, 2, x) == doctest::Approx(1 - 2 - 3 + 4));
}

}
