#include "rptf/boxmax.hpp"
#include "rptf/errors.hpp"
#include "rptf/poly.hpp"
#include "rptf/rng.hpp"

#include <doctest.h>

using namespace rptf;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (auto r : rows) {
        Eigen::Index j = 0;
        for (double x : r) M(i, j++) = x;
        ++i;
    }
    return M;
}

QuadPoly random_poly(std::size_t n, Rng& r) {
    Matrix A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Vector b(static_cast<Eigen::Index>(n));
    for (auto& v : A.reshaped()) v = r.uniform(-1, 1);
    for (auto& v : b) v = r.uniform(-1, 1);
    return QuadPoly(A, b, r.uniform(-1, 1));
}

}  // namespace

TEST_SUITE("poly") {

TEST_CASE("evaluation") {
    CHECK(QuadPoly(Matrix::Zero(2, 2), Vector::Zero(2), 5.0)(vec({0.3, -7})) == 5.0);
    CHECK(QuadPoly(mat({{0, 0.5}, {0.5, 0}}), Vector::Zero(2), 0.0)(vec({1, 1})) == 1.0);
    CHECK(QuadPoly(mat({{1}}), vec({2}), -1.0)(vec({3})) == 14.0);
}

TEST_CASE("construction symmetrizes bit for bit") {
    const QuadPoly g(mat({{1, 3}, {1, 0}}), Vector::Zero(2), 0.0);
    CHECK(g.A()(0, 1) == 2.0);
    CHECK(g.A()(0, 1) == g.A()(1, 0));
    CHECK(g.degree() == 2);
    CHECK(QuadPoly::linear(vec({1, 0}), 0).degree() == 1);
    CHECK(QuadPoly::linear(vec({0, 0}), 3).degree() == 0);
}

TEST_CASE("dimension mismatch throws") {
    const QuadPoly g(Matrix::Zero(2, 2), Vector::Zero(2), 0.0);
    CHECK_THROWS_AS(g(vec({1, 2, 3})), DimensionError);
    CHECK_THROWS_AS(QuadPoly(Matrix::Zero(2, 3), Vector::Zero(2), 0.0), DimensionError);
}

TEST_CASE("shift") {
    const QuadPoly lin = QuadPoly::linear(vec({1, -2}), 0.5);
    const QuadPoly h = shift(lin, vec({3, 1}));
    CHECK(h.A().isZero());
    CHECK(h.b() == lin.b());
    CHECK(h.c() == doctest::Approx(1.5));

    const QuadPoly sq(mat({{1}}), vec({0}), 0.0);
    const QuadPoly hs = shift(sq, vec({1}));
    CHECK(hs.A()(0, 0) == 1.0);
    CHECK(hs.b()[0] == 2.0);
    CHECK(hs.c() == 1.0);

    Rng r(3);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + r.below(6);
        const QuadPoly g = random_poly(n, r);
        Vector x0(static_cast<Eigen::Index>(n)), z(static_cast<Eigen::Index>(n));
        for (auto& v : x0) v = r.uniform(-2, 2);
        for (auto& v : z) v = r.uniform(-2, 2);
        const double direct = g(Vector(x0 + z));
        CHECK(std::abs(shift(g, x0)(z) - direct) <= 1e-12 * (1.0 + std::abs(direct)));
    }
}

TEST_CASE("negate_for_label") {
    Rng r(5);
    const QuadPoly g = random_poly(3, r);
    const Vector x = vec({0.1, -0.4, 0.9});
    CHECK(negate_for_label(g, +1)(x) == doctest::Approx(-g(x)));
    CHECK(negate_for_label(g, -1)(x) == doctest::Approx(g(x)));
    CHECK_THROWS_AS(negate_for_label(g, 0), PreconditionError);
}

TEST_CASE("robust empirical error with the exact oracle") {
    const PtfClassifier f(QuadPoly::linear(vec({1}), 0.0));
    LabeledSet S(1);
    S.add(vec({1}), +1);
    S.add(vec({-1}), -1);
    CHECK(robust_empirical_error(f, S, 0.5, exact_box_oracle()) == 0.0);
    CHECK(robust_empirical_error(f, S, 1.5, exact_box_oracle()) == 1.0);

    const PtfClassifier q(QuadPoly(mat({{0, -0.5}, {-0.5, 0}}), Vector::Zero(2), 1.0));
    LabeledSet T(2);
    T.add(vec({0, 0}), +1);
    CHECK(robust_empirical_error(q, T, 1.0, exact_box_oracle()) == 0.0);
    CHECK(empirical_error(q, T) == 0.0);
}

TEST_CASE("labeled set validation") {
    LabeledSet S(2);
    CHECK_THROWS_AS(S.add(vec({1}), 1), DimensionError);
    CHECK_THROWS_AS(S.add(vec({1, 2}), 0), PreconditionError);
    S.add(vec({1, 2}), -1);
    CHECK(S.size() == 1);
}

TEST_CASE("flip rule follows sgn(0) = +1") {
    CHECK(flip_from_value(0.1, +1));
    CHECK_FALSE(flip_from_value(0.0, +1));
    CHECK(flip_from_value(0.0, -1));
    CHECK_FALSE(flip_from_value(-0.1, -1));
}

}
