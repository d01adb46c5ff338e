#include "rptf/learner.hpp"
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

LabeledSet two_points() {
    LabeledSet S(1);
    S.add(vec({1}), +1);
    S.add(vec({-1}), -1);
    return S;
}

}  // namespace

TEST_SUITE("learner") {

TEST_CASE("feature layout round trip") {
    Rng r(2);
    for (int degree : {1, 2}) {
        const std::size_t n = 3;
        const std::size_t D = feature_dim(n, degree);
        CHECK(D == (degree == 2 ? 10u : 4u));
        Vector w(static_cast<Eigen::Index>(D));
        for (auto& v : w) v = r.uniform(-1, 1);
        const QuadPoly g = poly_from_coeff(w, n, degree);
        const Vector x = vec({0.3, -1.2, 0.7});
        CHECK(g(x) == doctest::Approx(w.dot(features(x, degree))).epsilon(1e-13));
        CHECK((coeff_from_poly(g, degree) - w).norm() < 1e-14);
    }
}

TEST_CASE("separation oracle on the two-point set") {
    const LabeledSet S = two_points();
    OracleContext ctx;
    ctx.S = &S;
    ctx.degree = 1;
    ctx.delta = 0.5;
    ctx.gamma = 1.0;
    ctx.kappa = 1e-6;
    Vector theta = vec({1, 0, 0.4, 0.4});
    const OracleReport cut = separation_oracle(theta, ctx, 1);
    REQUIRE(cut.cut.has_value());
    CHECK(cut.cut->kind == Cut::Kind::Robust);

    theta = vec({1, 0, 0.6, 0.6});
    CHECK_FALSE(separation_oracle(theta, ctx, 1).cut.has_value());

    // Margin violation on point 0 is reported before any robust cut.
    theta = vec({0.1, 0, 0.6, 0.0});
    const OracleReport m = separation_oracle(theta, ctx, 1);
    REQUIRE(m.cut.has_value());
    CHECK(m.cut->kind == Cut::Kind::Margin);
    CHECK(m.cut->index == 0);
    CHECK(m.box_calls == 0);
}

TEST_CASE("constant classifier is feasible on all-positive data") {
    LabeledSet S(1);
    S.add(vec({0.3}), +1);
    S.add(vec({-2}), +1);
    OracleContext ctx;
    ctx.S = &S;
    ctx.degree = 1;
    ctx.delta = 10.0;
    ctx.kappa = 1e-6;
    const Vector theta = vec({0, 1, 0, 0});
    CHECK_FALSE(separation_oracle(theta, ctx, 0).cut.has_value());
}

TEST_CASE("learning on separable and contradictory data") {
    for (LearnMethod method : {LearnMethod::Ellipsoid, LearnMethod::CuttingPlane}) {
        LearnOptions opts;
        opts.method = method;
        const LearnResult r = robust_learn(two_points(), 1, 0.5, 0.1, 3, opts);
        CHECK(r.status == LearnStatus::Success);
        CHECK(r.train_robust_error == 0.0);

        LabeledSet bad(1);
        bad.add(vec({0}), +1);
        bad.add(vec({0}), -1);
        CHECK(robust_learn(bad, 1, 0.1, 0.1, 3, opts).status == LearnStatus::Infeasible);
    }
}

TEST_CASE("sample size") {
    CHECK(sample_size(1, 1, 0.1, 0.5) == static_cast<std::size_t>(std::ceil(8 * (2 + std::log(2.0)) / 0.01)));
    CHECK(sample_size(1, 1, 0.1, 0.5) == 2155);
    const std::size_t a = sample_size(2, 2, 0.1, 0.05), b = sample_size(2, 2, 0.05, 0.05);
    CHECK(b >= 4 * a - 3);
    CHECK(b <= 4 * a);
    CHECK(feature_dim(2, 2) == 6);
}

TEST_CASE("ellipsoid cuts shrink the volume") {
    Ellipsoid E(Vector::Zero(3), 1.0);
    const double v0 = E.log_volume();
    CHECK(E.cut(vec({1, 0, 0}), 0.0) == doctest::Approx(0.0));
    CHECK(E.log_volume() < v0);
    CHECK(E.center()[0] < 0.0);
    CHECK(E.cut(vec({-1, 0, 0}), -5.0) >= 1.0);
}

}
