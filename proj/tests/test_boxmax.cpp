#include "rptf/boxmax.hpp"
#include "rptf/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace rptf;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

QuadPoly bilinear(double coef = 1.0, double c = 0.0) {
    Matrix A = Matrix::Zero(2, 2);
    A(0, 1) = A(1, 0) = 0.5 * coef;
    return QuadPoly(A, Vector::Zero(2), c);
}

}  // namespace

TEST_SUITE("boxmax") {

TEST_CASE("linear maximizer") {
    auto r = maximize_linear(vec({3, -2}), 1.0, 0.5);
    CHECK(r.x_hat == vec({0.5, -0.5}));
    CHECK(r.value == 3.5);
    CHECK(maximize_linear(vec({0, 0}), 7.0, 1.0).value == 7.0);
    r = maximize_linear(vec({1, 1, 1}), 0.0, 2.0);
    CHECK(r.x_hat == vec({2, 2, 2}));
    CHECK(r.value == 6.0);
}

TEST_CASE("relaxation objective and embedding") {
    Rng rng(4);
    Matrix A = Matrix::Random(3, 3);
    const QuadPoly g(A, vec({0.2, -0.1, 0.4}), -0.3);
    const SdpInstance inst = build_sdp(g, 0.7);
    const Vector x = vec({0.7, -0.2, 0.5});
    RowMatrix U = RowMatrix::Zero(4, 5);
    U(0, 0) = 1.0;
    for (int i = 0; i < 3; ++i) U(i + 1, 0) = x[i];
    CHECK(inst.objective(U) == doctest::Approx(g(x)).epsilon(1e-12));

    const SdpInstance cst = build_sdp(QuadPoly(Matrix::Zero(2, 2), Vector::Zero(2), 2.5), 1.0);
    RowMatrix V = RowMatrix::Zero(3, 4);
    V(0, 0) = 1.0;
    V(1, 1) = 0.3;
    V(2, 2) = -1.0;
    CHECK(cst.objective(V) == doctest::Approx(2.5));
}

TEST_CASE("relaxation values") {
    Matrix A1(1, 1);
    A1(0, 0) = 1.0;
    CHECK(solve_sdp(build_sdp(QuadPoly(A1, vec({0}), 0.0), 2.0), {}, 1).objective == doctest::Approx(4.0).epsilon(1e-5));
    CHECK(solve_sdp(build_sdp(bilinear(), 1.0), {}, 1).objective == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(solve_sdp(build_sdp(QuadPoly(Matrix::Zero(2, 2), Vector::Zero(2), -3.0), 1.0), {}, 1).objective ==
          doctest::Approx(-3.0));
}

TEST_CASE("rank-one solutions round to themselves") {
    const QuadPoly g = bilinear();
    SdpSolution sol;
    sol.delta = 1.0;
    sol.U = RowMatrix::Zero(3, 4);
    sol.U(0, 0) = 1.0;
    sol.U(1, 0) = 0.4;
    sol.U(2, 0) = -0.9;
    RoundingOptions ro;
    ro.trials = 16;
    for (std::uint64_t s = 0; s < 5; ++s) {
        const BoxMaxResult r = gaussian_round(sol, g, ro, s);
        CHECK(r.x_hat[0] == doctest::Approx(0.4).epsilon(1e-15));
        CHECK(r.x_hat[1] == doctest::Approx(-0.9).epsilon(1e-15));
    }
}

TEST_CASE("rounding reaches the bilinear maximum") {
    int hits = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        const BoxMaxResult r = maximize_quadratic(bilinear(), 1.0, 1.0 / std::exp(8.0), s);
        hits += r.value >= 1.0 - 1e-9;
    }
    CHECK(hits >= 198);
}

TEST_CASE("maximize_quadratic edge cases") {
    const Vector b = vec({1, -2, 0.5});
    const QuadPoly lin = QuadPoly::linear(b, 0.25);
    const BoxMaxResult a = maximize_quadratic(lin, 0.3, 0.05, 9);
    const BoxMaxResult e = maximize_linear(b, 0.25, 0.3);
    CHECK(a.value == e.value);
    CHECK(a.x_hat == e.x_hat);
    CHECK(a.blowup == 1.0);

    const BoxMaxResult m = maximize_quadratic(bilinear(1.0, -1.0), 1.5, 0.01, 3);
    CHECK(m.value >= 1.25 - 1e-9);
    CHECK(m.linf <= rounding_gamma(2) * 1.5 * (1 + 1e-12));

    const BoxMaxResult c = maximize_quadratic(QuadPoly(Matrix::Zero(2, 2), Vector::Zero(2), -3.0), 1.0, 0.01, 3);
    CHECK(c.value == -3.0);
    REQUIRE(c.sdp_value.has_value());
    CHECK(*c.sdp_value < 0.0);
}

TEST_CASE("brute force oracles") {
    auto v = brute_force_boxmax(bilinear(), 1.0, BruteMode::Vertex);
    CHECK(v.value == 1.0);
    CHECK(v.x_hat[0] * v.x_hat[1] == 1.0);

    Matrix A1(1, 1);
    A1(0, 0) = 1.0;
    CHECK(brute_force_boxmax(QuadPoly(A1, vec({0}), 0.0), 2.0, BruteMode::Grid).value == doctest::Approx(4.0));

    A1(0, 0) = -1.0;
    const QuadPoly dip(A1, vec({0.6}), -0.09);  // -(x - 0.3)^2
    auto g = brute_force_boxmax(dip, 1.0, BruteMode::Grid, 1001);
    CHECK(g.value == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(g.x_hat[0] == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(brute_force_boxmax(dip, 1.0, BruteMode::Faces).value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("face enumeration agrees with a fine grid") {
    Rng r(21);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 1 + r.below(3);
        Matrix A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        Vector b(static_cast<Eigen::Index>(n));
        for (auto& x : A.reshaped()) x = r.uniform(-1, 1);
        for (auto& x : b) x = r.uniform(-1, 1);
        const QuadPoly g(A, b, 0.0);
        const double f = brute_force_boxmax(g, 0.8, BruteMode::Faces).value;
        const double gr = brute_force_boxmax(g, 0.8, BruteMode::Grid, 201).value;
        CHECK(f >= gr - 1e-12);
        CHECK(f - gr <= 1e-4);
    }
}

TEST_CASE("rounding trial count and acceptance radius") {
    CHECK(rounding_trials(0.01) == static_cast<int>(std::ceil(8 * std::log(100.0))));
    CHECK(rounding_gamma(1) == 1.0);
    CHECK(rounding_gamma(2) == doctest::Approx(std::max(1.0, 4 * std::sqrt(std::log(2.0)))));
}

}
