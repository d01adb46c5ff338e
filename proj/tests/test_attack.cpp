#include "rptf/attack.hpp"
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

PtfClassifier one_minus_x1x2() {
    Matrix A = Matrix::Zero(2, 2);
    A(0, 1) = A(1, 0) = -0.5;
    return PtfClassifier(QuadPoly(A, Vector::Zero(2), 1.0));
}

}  // namespace

TEST_SUITE("attack") {

TEST_CASE("linear attack is exact") {
    const PtfClassifier f(QuadPoly::linear(vec({1, 0}), -0.5));
    const AttackOutcome o = attack_ptf(f, vec({0, 0}), 1.0, 0.01, std::nullopt, 1);
    CHECK(o.verdict == Verdict::Found);
    REQUIRE(o.z.has_value());
    CHECK(*o.z == vec({1, 0}));
    CHECK(o.margin == 0.5);
    CHECK(o.gamma_used == 1.0);

    const PtfClassifier g(QuadPoly::linear(vec({1}), -2.0));
    const AttackOutcome c = attack_ptf(g, vec({0}), 1.0, 0.01, std::nullopt, 1);
    CHECK(c.verdict == Verdict::Certified);
    REQUIRE(c.certificate_value.has_value());
    CHECK(*c.certificate_value == -1.0);
}

TEST_CASE("quadratic attack finds the corner flip") {
    const AttackOutcome o = attack_ptf(one_minus_x1x2(), vec({0, 0}), 1.5, 0.01, std::nullopt, 2);
    CHECK(o.verdict == Verdict::Found);
    CHECK(o.flip_value >= 1.25 - 1e-9);
    CHECK(o.linf <= 4 * std::sqrt(std::log(2.0)) * 1.5 * (1 + 1e-12));
    REQUIRE(o.z.has_value());
    CHECK(one_minus_x1x2().classify(*o.z) == -1);
}

TEST_CASE("label mode needs a label") {
    AttackOptions opts;
    opts.mode = FlipMode::Label;
    CHECK_THROWS(attack_ptf(one_minus_x1x2(), vec({0, 0}), 1.0, 0.1, std::nullopt, 0, opts));
}

TEST_CASE("batch summaries") {
    const PtfClassifier f(QuadPoly::linear(vec({1, 0}), -0.5));
    LabeledSet S(2);
    S.add(vec({0, 0}), -1);
    const BatchResult r = batch_attack(f, S, 1.0, 0.01, 3);
    CHECK(r.summary.found == 1);

    LabeledSet T(2);
    T.add(vec({3, 0}), +1);
    T.add(vec({-3, 1}), -1);
    const BatchResult c = batch_attack(f, T, 1.0, 0.01, 3);
    CHECK(c.summary.found == 0);
    CHECK(c.summary.certified == 2);
    CHECK(c.summary.robust_accuracy_lower == 1.0);
    CHECK(c.summary.robust_accuracy_upper == 1.0);
}

TEST_CASE("batch results do not depend on the number of jobs") {
    Rng r(8);
    Matrix A(3, 3);
    for (auto& v : A.reshaped()) v = r.uniform(-1, 1);
    const PtfClassifier f(QuadPoly(A, vec({0.1, 0.2, -0.3}), 0.05));
    LabeledSet S(3);
    for (int i = 0; i < 24; ++i) {
        const Vector x = vec({r.uniform(-1, 1), r.uniform(-1, 1), r.uniform(-1, 1)});
        S.add(x, f.classify(x));
    }
    const BatchResult a = batch_attack(f, S, 0.3, 0.01, 77, {}, 1);
    const BatchResult b = batch_attack(f, S, 0.3, 0.01, 77, {}, 4);
    for (std::size_t i = 0; i < S.size(); ++i) {
        CHECK(a.outcomes[i].verdict == b.outcomes[i].verdict);
        CHECK(a.outcomes[i].flip_value == b.outcomes[i].flip_value);
    }
}

TEST_CASE("certificates never contradict the exact oracle") {
    Rng r(12);
    int bad = 0;
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 1 + r.below(5);
        Matrix A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        Vector b(static_cast<Eigen::Index>(n)), x(static_cast<Eigen::Index>(n));
        for (auto& v : A.reshaped()) v = r.uniform(-1, 1);
        for (auto& v : b) v = r.uniform(-1, 1);
        for (auto& v : x) v = r.uniform(-1, 1);
        const PtfClassifier f(QuadPoly(A, b, r.uniform(-1, 1)));
        const double delta = r.uniform(0.05, 0.6);
        const AttackOutcome o = attack_ptf(f, x, delta, 0.01, std::nullopt, t);
        const int y = f.classify(x);
        const QuadPoly h = negate_for_label(shift(f.poly(), x), y);
        const double exact = brute_force_boxmax(h, delta, BruteMode::Faces).value;
        if (o.verdict == Verdict::Certified && flip_from_value(exact, y)) ++bad;
    }
    CHECK(bad == 0);
}

}
