// Acceptance suite: one PASS/FAIL line per criterion. Optional arguments
// select criteria by number, e.g. `rptf_acceptance 2 3`.

#include "rptf/attack.hpp"
#include "rptf/boxmax.hpp"
#include "rptf/hardness.hpp"
#include "rptf/io.hpp"
#include "rptf/learner.hpp"
#include "rptf/neural.hpp"
#include "rptf/rng.hpp"

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

using namespace rptf;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void verdict(int id, bool pass, const char* name, const std::string& detail) {
    std::printf("%s  criterion %2d  %-34s %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

Vector uniform_vec(std::size_t n, double lo, double hi, Rng& r) {
    Vector v(static_cast<Eigen::Index>(n));
    for (auto& x : v) x = r.uniform(lo, hi);
    return v;
}

// ---------------------------------------------------------------- instance families

struct QuadCase {
    QuadPoly g;
    double delta;
    double oracle;  // exact (or grid + exact) box maximum
    double scale;
    const char* oracle_name;
};

// 200 zero-diagonal instances (vertex oracle) and 100 general ones (grid
// oracle for n <= 3, exact faces for n = 4, 5).
std::vector<QuadCase> quad_family() {
    std::vector<QuadCase> out;
    Rng r(2024);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + r.below(11);
        Matrix A = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = r.uniform(-1, 1);
        QuadPoly g(A, uniform_vec(n, -1, 1, r), r.uniform(-1, 1));
        const double delta = r.uniform(0.1, 2.0);
        const double ex = brute_force_boxmax(g, delta, BruteMode::Vertex).value;
        out.push_back({g, delta, ex, build_sdp(g, delta).scale(), "vertex"});
    }
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 2 + r.below(4);
        Matrix A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = r.uniform(-1, 1);
        QuadPoly g(A, uniform_vec(n, -1, 1, r), r.uniform(-1, 1));
        const double delta = r.uniform(0.1, 2.0);
        double ex = brute_force_boxmax(g, delta, BruteMode::Faces).value;
        const char* name = "faces";
        if (n <= 3) {
            ex = std::max(ex, brute_force_boxmax(g, delta, BruteMode::Grid, 401).value);
            name = "grid";
        }
        out.push_back({g, delta, ex, build_sdp(g, delta).scale(), name});
    }
    return out;
}

TwoLayerNet random_net(std::size_t n, std::size_t k, Rng& r) {
    TwoLayerNet net;
    net.W.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n));
    net.V.resize(1, static_cast<Eigen::Index>(k));
    net.v_prime.resize(static_cast<Eigen::Index>(n));
    for (auto& v : net.W.reshaped()) v = r.normal();
    for (auto& v : net.V.reshaped()) v = r.normal();
    for (auto& v : net.v_prime) v = 0.3 * r.normal();
    return net;
}

// ---------------------------------------------------------------- criteria

void criterion1() {
    Rng r(1);
    int agree = 0;
    const int total = 1000;
    const auto t0 = Clock::now();
    for (int t = 0; t < total; ++t) {
        const std::size_t n = 1 + r.below(32);
        const Vector b = uniform_vec(n, -1, 1, r);
        const double c = r.uniform(-1, 1);
        const double delta = r.uniform() < 0.5 ? 0.1 : 1.0;
        const Vector x = uniform_vec(n, -1, 1, r);
        const PtfClassifier f(QuadPoly::linear(b, c));
        const AttackOutcome o = attack_ptf(f, x, delta, 0.01, std::nullopt, static_cast<std::uint64_t>(t));
        const int y = sgn(b.dot(x) + c);
        long double l1 = 0.0L;
        for (auto v : b) l1 += std::abs(static_cast<long double>(v));
        const long double value = static_cast<long double>(delta) * l1 -
                                  static_cast<long double>(y) * (static_cast<long double>(b.dot(x)) + c);
        const bool flip = value > 0.0L || (value == 0.0L && y < 0);
        agree += (o.verdict == (flip ? Verdict::Found : Verdict::Certified));
    }
    const double secs = since(t0);
    verdict(1, agree == total && secs < 2.0, "degree-1 exactness",
            fmt("%d/%d verdicts match, %.3f s (< 2 s)", agree, total, secs));
}

void criteria2and3(bool want2, bool want3) {
    const auto fam = quad_family();
    int valid = 0, reach = 0, radius_ok = 0, accepted = 0;
    double worst_gap = 0.0;
    int idx = 0;
    for (const auto& qc : fam) {
        SdpSolution sol = solve_sdp(build_sdp(qc.g, qc.delta), {}, static_cast<std::uint64_t>(idx));
        const double slack = 1e-6 * qc.scale;
        valid += sol.objective >= qc.oracle - slack;
        worst_gap = std::max(worst_gap, (qc.oracle - sol.objective) / qc.scale);
        RoundingOptions ro;
        ro.trials = 64;
        ro.cap = rounding_gamma(qc.g.n());
        const BoxMaxResult br = gaussian_round(sol, qc.g, ro, static_cast<std::uint64_t>(idx) + 7777);
        reach += br.within_cap && br.value >= qc.oracle - slack;
        if (br.within_cap) {
            ++accepted;
            radius_ok += br.linf <= ro.cap * qc.delta * (1.0 + 1e-12);
        }
        ++idx;
    }
    const int total = static_cast<int>(fam.size());
    if (want2)
        verdict(2, valid == total, "relaxation validity",
                fmt("%d/%d with sdp >= oracle - 1e-6 scale (worst shortfall %.2e scale)", valid, total,
                    std::max(0.0, worst_gap)));
    if (want3)
        verdict(3, reach >= static_cast<int>(std::ceil(0.99 * total)) && radius_ok == accepted, "rounding guarantee",
                fmt("%d/%d reach the oracle max (need 99%%), %d/%d accepted within C sqrt(ln n) delta", reach, total,
                    radius_ok, accepted));
}

void criterion4() {
    Rng r(44);
    int pass = 0;
    const int instances = 20, samples = 100000;
    std::string worst;
    double worst_z = 0.0;
    for (int t = 0; t < instances; ++t) {
        const std::size_t n = 2 + r.below(7);
        Matrix A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (auto& v : A.reshaped()) v = r.uniform(-1, 1);
        const QuadPoly g(A, uniform_vec(n, -1, 1, r), r.uniform(-1, 1));
        const double delta = r.uniform(0.2, 1.5);
        const SdpInstance inst = build_sdp(g, delta);
        const SdpSolution sol = solve_sdp(inst, {}, static_cast<std::uint64_t>(t));
        const double target = inst.objective(sol.U);
        RoundingOptions ro;
        ro.trials = 1;
        ro.cap = 0.0;
        // Welford; a rank-1 solution makes every trial identical, where the
        // naive second-moment formula cancels badly.
        double mean = 0.0, m2 = 0.0;
        for (int s = 0; s < samples; ++s) {
            const double v = gaussian_round(sol, g, ro, mix64(static_cast<std::uint64_t>(t) * 1000003ULL + s)).value;
            const double d = v - mean;
            mean += d / (s + 1);
            m2 += d * (v - mean);
        }
        const double se = std::sqrt(m2 / (samples - 1) / samples);
        // Evaluation round-off floor for (near) deterministic rounding.
        const double floor = 1e-12 * inst.scale();
        const double z = std::abs(mean - target) / std::max(se, floor);
        pass += z <= 3.0;
        worst_z = std::max(worst_z, z);
    }
    verdict(4, pass >= 18, "expectation identity",
            fmt("%d/%d instances within 3 SE over 1e5 trials (worst %.2f SE)", pass, instances, worst_z));
}

void criterion5() {
    Rng r(55);
    int quad_cert = 0, quad_bad = 0, quad_total = 0;
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 1 + r.below(7);
        Matrix A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        const bool zero_diag = t % 2 == 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
                        (zero_diag && i == j) ? 0.0 : r.uniform(-1, 1);
        const PtfClassifier f(QuadPoly(A, uniform_vec(n, -1, 1, r), r.uniform(-1, 1)));
        const Vector x = uniform_vec(n, -1, 1, r);
        const double delta = r.uniform(0.02, 0.6);
        const AttackOutcome o = attack_ptf(f, x, delta, 0.01, std::nullopt, static_cast<std::uint64_t>(t));
        const int y = f.classify(x);
        const QuadPoly h = negate_for_label(shift(f.poly(), x), y);
        const double ex = brute_force_boxmax(h, delta, zero_diag && n > 1 ? BruteMode::Vertex : BruteMode::Faces).value;
        ++quad_total;
        if (o.verdict == Verdict::Certified) {
            ++quad_cert;
            quad_bad += flip_from_value(ex, y);
        }
    }
    int net_cert = 0, net_bad = 0, net_total = 0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + r.below(6), k = 1 + r.below(6);
        const TwoLayerNet net = random_net(n, k, r);
        Vector x(static_cast<Eigen::Index>(n));
        for (auto& v : x) v = r.normal();
        const double fx = net.forward(x)[0];
        if (fx == 0.0) continue;
        const double delta = r.uniform(0.02, 0.8);
        const AttackOutcome o = attack_net(net, x, delta, static_cast<std::uint64_t>(t));
        const NetMaxResult ex = exact_net_max(net, x, delta);
        ++net_total;
        if (o.verdict == Verdict::Certified) {
            ++net_cert;
            net_bad += flip_from_value(ex.value, sgn(fx));
        }
    }
    verdict(5, quad_bad == 0 && net_bad == 0, "certificate soundness",
            fmt("quadratic %d certified / %d, %d contradicted; net %d certified / %d, %d contradicted", quad_cert,
                quad_total, quad_bad, net_cert, net_total, net_bad));
}

// Realizable 2-D data with every point at least 2 delta from a random line
// in l_inf terms.
LabeledSet linear_margin_data(const Vector& a, double c, double delta, std::size_t m, Rng& r) {
    LabeledSet S(2);
    const double l1 = a.cwiseAbs().sum();
    while (S.size() < m) {
        const Vector x = uniform_vec(2, -1, 1, r);
        const double d = a.dot(x) + c;
        if (std::abs(d) < 2.0 * delta * l1) continue;
        S.add(x, sgn(d));
    }
    return S;
}

void criterion6() {
    Rng r(66);
    const double delta = 0.1, eps = 0.1, eta = 0.1;
    const std::size_t m_test = sample_size(1, 2, eps, eta);
    int success = 0, held = 0;
    const int runs = 50;
    double worst = 0.0;
    const auto t0 = Clock::now();
    for (int t = 0; t < runs; ++t) {
        const double th = r.uniform(0, 2 * M_PI);
        Vector a(2);
        a << std::cos(th), std::sin(th);
        const double c = r.uniform(-0.3, 0.3);
        const LabeledSet S = linear_margin_data(a, c, delta, 100, r);
        LearnOptions lo;
        lo.method = LearnMethod::Ellipsoid;
        const LearnResult res = robust_learn(S, 1, delta, eta, static_cast<std::uint64_t>(t), lo);
        const double train = robust_empirical_error(res.f, S, delta, exact_box_oracle());
        success += res.status == LearnStatus::Success && train == 0.0;
        const LabeledSet T = linear_margin_data(a, c, delta, m_test, r);
        const double test = robust_empirical_error(res.f, T, delta, exact_box_oracle());
        worst = std::max(worst, test);
        held += test <= 2 * eps;
    }
    verdict(6, success == runs && held >= 45, "robust learning, degree 1",
            fmt("%d/%d Success with zero train error, %d/%d held-out error <= 0.2 on %zu points (worst %.4f), %.1f s",
                success, runs, held, runs, m_test, worst, since(t0)));
}

void criterion7() {
    Rng r(77);
    const double delta = 0.1;
    const double gamma = 4.0 * std::sqrt(std::log(2.0));
    Matrix A = Matrix::Zero(2, 2);
    A(0, 1) = A(1, 0) = -0.5;
    const QuadPoly target(A, Vector::Zero(2), 1.0);
    int ok = 0;
    const int runs = 20;
    const auto t0 = Clock::now();
    for (int t = 0; t < runs; ++t) {
        LabeledSet S(2);
        while (S.size() < 30) {
            const Vector x = uniform_vec(2, -2, 2, r);
            const int y = sgn(target(x));
            const QuadPoly h = negate_for_label(shift(target, x), y);
            const double worst = std::max(brute_force_boxmax(h, delta, BruteMode::Grid, 101).value,
                                          brute_force_boxmax(h, delta, BruteMode::Faces).value);
            if (worst > -0.05) continue;
            S.add(x, y);
        }
        LearnOptions lo;
        lo.method = LearnMethod::Ellipsoid;
        const LearnResult res = robust_learn(S, 2, delta, 0.1, static_cast<std::uint64_t>(t), lo);
        const double err = robust_empirical_error(res.f, S, delta / gamma, exact_box_oracle());
        ok += res.status == LearnStatus::Success && err == 0.0;
    }
    verdict(7, ok >= 19, "robust learning, degree 2",
            fmt("%d/%d Success with zero error at delta/%.3f, %.1f s", ok, runs, gamma, since(t0)));
}

void criterion8() {
    Rng r(88);
    int ok = 0, total = 0;
    double worst = 0.0;
    while (total < 100) {
        const std::size_t n = 1 + r.below(8), k = 1 + r.below(6);
        const TwoLayerNet net = random_net(n, k, r);
        Vector x(static_cast<Eigen::Index>(n)), z(static_cast<Eigen::Index>(n));
        for (auto& v : x) v = r.normal();
        const double delta = r.uniform(0.05, 2.0);
        for (auto& v : z) v = r.uniform(-delta, delta);
        const double fx = net.forward(x)[0];
        if (fx == 0.0) continue;
        ++total;
        const NnOptInstance inst = reduce_net(net, x, delta);
        const double truth = -static_cast<double>(sgn(fx)) * net.forward(Vector(x + z))[0];
        const double rel = std::abs(inst.objective(z) - truth) / std::max(1.0, std::abs(truth));
        worst = std::max(worst, rel);
        ok += rel <= 1e-9;
    }
    verdict(8, ok == total, "net objective identity", fmt("%d/%d within 1e-9 relative (worst %.2e)", ok, total, worst));
}

void criterion9() {
    Rng r(99);
    int family = 0, found = 0, pgd = 0, dominated = 0, tries = 0;
    const auto t0 = Clock::now();
    while (family < 150 && tries < 5000) {
        ++tries;
        const std::size_t n = 2 + r.below(7), k = 2 + r.below(5);
        const TwoLayerNet net = random_net(n, k, r);
        Vector x(static_cast<Eigen::Index>(n));
        for (auto& v : x) v = r.normal();
        if (net.forward(x)[0] == 0.0) continue;
        const double delta = r.uniform(0.05, 1.0);
        const NnOptInstance inst = reduce_net(net, x, delta);
        if (brute_force_net(inst, 200000).value < 0.05 * inst.scale) continue;
        ++family;
        const std::uint64_t seed = static_cast<std::uint64_t>(tries);
        const AttackOutcome o = attack_net(net, x, delta, seed);
        const bool hit = o.verdict == Verdict::Found && o.linf <= net_gamma(n, k) * delta * (1.0 + 1e-12);
        found += hit;
        if (pgd_attack(net, x, delta, PgdOptions{}, seed).verdict == Verdict::Found) {
            ++pgd;
            dominated += hit;
        }
    }
    const bool pass = family >= 100 && found >= static_cast<int>(std::ceil(0.9 * family)) &&
                      dominated >= static_cast<int>(std::ceil(0.95 * pgd));
    verdict(9, pass, "net attack completeness",
            fmt("%d/%d found within 4 sqrt(ln n ln k) delta, %d/%d of PGD successes, %.1f s", found, family,
                dominated, pgd, since(t0)));
}

Matrix sign_matrix(std::size_t n, Rng& r, double mag = 1.0) {
    Matrix A = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = r.uniform() < 0.5 ? -mag : mag;
    return A;
}

double qp_max_abs(const Matrix& A) {
    const std::size_t n = static_cast<std::size_t>(A.rows());
    double best = 0.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        Vector x(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) x[static_cast<Eigen::Index>(i)] = (mask >> i & 1) ? 1.0 : -1.0;
        best = std::max(best, std::abs(x.dot(A * x)));
    }
    return best;
}

void criterion10() {
    Rng r(1010);
    int sets = 0, zero_err = 0;
    int robust_sets = 0, robust_ok = 0;
    std::size_t touching = 0;
    int rank_total = 0, rank_ok = 0;
    int pair_sets = 0, pair_ok = 0;
    double worst_cos = 1.0;
    auto plain = [&](const GadgetInstance& g) {
        ++sets;
        zero_err += empirical_error(g.intended(), g.S) == 0.0;
    };
    auto pairs = [&](const GadgetInstance& g) {
        ++pair_sets;
        pair_ok += verify_pair_separation(g).ok;
    };
    for (std::size_t n = 2; n <= 5; ++n)
        for (int t = 0; t < 3; ++t) plain(gen_main_gadget(sign_matrix(n, r), 101.0 + 100.0 * t));
    // YES-case main gadgets at n = 2.
    for (int t = 0; t < 5; ++t) {
        const Matrix A = sign_matrix(2, r, 11.0);
        const double s = std::max(101.0, 2.0 * qp_max_abs(A) + 1.0 + 100.0 * t);
        const GadgetInstance g = gen_main_gadget(A, s);
        plain(g);
        RobustnessOptions ro;
        ro.method = RobustnessMethod::Grid;
        const RobustnessVerdict v = verify_no_robust_ptf_candidates(g, g.intended(), g.delta, ro);
        ++robust_sets;
        robust_ok += v.robust;
        touching += v.touching.size();
    }
    // YES-case appendix gadgets at n = 2, m = 12.
    for (int t = 0; t < 5; ++t) {
        const Matrix A = sign_matrix(2, r);
        const GadgetInstance g = gen_appendix_gadget(A, qp_max_abs(A) + 1.0, 0.01, 12, static_cast<std::uint64_t>(t));
        plain(g);
        pairs(g);
        RobustnessOptions ro;
        ro.method = RobustnessMethod::Grid;
        const RobustnessVerdict v = verify_no_robust_ptf_candidates(g, g.intended(), g.delta, ro);
        ++robust_sets;
        robust_ok += v.robust;
        touching += v.touching.size();
    }
    for (std::size_t n : {2u, 3u})
        for (int seed = 0; seed < 20; ++seed) {
            const GadgetInstance g =
                gen_appendix_gadget(sign_matrix(n, r), 10.0, 0.01, (n + 1) * (n + 1) + 3, static_cast<std::uint64_t>(seed));
            plain(g);
            pairs(g);
            const RankReport rk = verify_uniqueness_rank(g);
            ++rank_total;
            rank_ok += rk.rank == rk.r - 1 && rk.cosine >= 1.0 - 1e-8;
            worst_cos = std::min(worst_cos, rk.cosine);
        }
    for (std::size_t n : {3u, 4u}) {
        const GadgetInstance g = gen_redundant_gadget(sign_matrix(n, r), 20.0, 0.01, 5);
        plain(g);
        pairs(g);
    }
    const bool pass = zero_err == sets && robust_ok == robust_sets && rank_ok == rank_total && pair_ok == pair_sets;
    verdict(10, pass, "gadget structure",
            fmt("(a) %d/%d zero plain error (b) %d/%d robust, %zu boundary contacts (c) %d/%d rank r-1, min cos-1 "
                "%.1e (d) %d/%d exact pairs",
                zero_err, sets, robust_ok, robust_sets, touching, rank_ok, rank_total, worst_cos - 1.0, pair_ok,
                pair_sets));
}

std::string determinism_bundle(int jobs) {
    std::string out;
    Rng r(1111);
    // Degree-2 attack report.
    Matrix A(4, 4);
    for (auto& v : A.reshaped()) v = r.uniform(-1, 1);
    const PtfClassifier f(QuadPoly(A, uniform_vec(4, -1, 1, r), 0.1));
    LabeledSet S(4);
    for (int i = 0; i < 40; ++i) {
        const Vector x = uniform_vec(4, -1, 1, r);
        S.add(x, f.classify(x));
    }
    const io::json cfg{{"seed", 5}};
    out += io::dump(io::attack_report(batch_attack(f, S, 0.2, 0.01, 5, {}, jobs), cfg));
    // Net attack outcomes.
    const TwoLayerNet net = random_net(5, 4, r);
    BatchResult nb;
    nb.outcomes.resize(S.size());
    parallel_for(S.size(), jobs, [&](std::size_t i) {
        Rng local(7, i);
        const Vector x = uniform_vec(5, -1, 1, local);
        nb.outcomes[i] = attack_net(net, x, 0.3, example_seed(9, i));
    });
    nb.summary = summarize(nb.outcomes);
    out += io::dump(io::attack_report(nb, cfg));
    // Learner report with transcript.
    LabeledSet L(2);
    while (L.size() < 40) {
        const Vector x = uniform_vec(2, -1, 1, r);
        if (std::abs(x[0] - x[1]) < 0.3) continue;
        L.add(x, sgn(x[0] - x[1]));
    }
    LearnOptions lo;
    lo.record_transcript = true;
    const LearnResult lr = robust_learn(L, 1, 0.1, 0.1, 3, lo);
    out += io::dump(io::learn_report(lr, cfg)) + io::transcript_jsonl(lr);
    // Gadget and its checks.
    const GadgetInstance g = gen_appendix_gadget(sign_matrix(3, r), 7.0, 0.01, 19, 4);
    out += io::dump(io::gadget_to_json(g));
    RobustnessOptions ro;
    ro.jobs = jobs;
    out += io::dump(io::rounded(io::robustness_json(verify_no_robust_ptf_candidates(g, g.intended(), g.delta, ro))));
    out += io::dump(io::rounded(io::rank_json(verify_uniqueness_rank(g))));
    return out;
}

void criterion11() {
    const std::string a = determinism_bundle(1);
    const std::string b = determinism_bundle(1);
    const std::string c = determinism_bundle(3);
    verdict(11, a == b && a == c, "determinism",
            fmt("%zu-byte report bundle; repeat %s, jobs=3 %s", a.size(), a == b ? "identical" : "DIFFERS",
                a == c ? "identical" : "DIFFERS"));
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    auto want = [&](int id) { return only.empty() || only.count(id) > 0; };
    const auto t0 = Clock::now();
    try {
        if (want(1)) criterion1();
        if (want(2) || want(3)) criteria2and3(want(2), want(3));
        if (want(4)) criterion4();
        if (want(5)) criterion5();
        if (want(6)) criterion6();
        if (want(7)) criterion7();
        if (want(8)) criterion8();
        if (want(9)) criterion9();
        if (want(10)) criterion10();
        if (want(11)) criterion11();
    } catch (const std::exception& e) {
        std::printf("FAIL  aborted: %s\n", e.what());
        return 1;
    }
    std::printf("%s  %d failing criteria, %.1f s total\n", failures ? "FAIL" : "PASS", failures, since(t0));
    return failures ? 1 : 0;
}
