// rptf: adversarial examples, certificates and robust learning for
// low-degree PTFs and two-layer ReLU nets.

#include "rptf/attack.hpp"
#include "rptf/errors.hpp"
#include "rptf/hardness.hpp"
#include "rptf/io.hpp"
#include "rptf/learner.hpp"
#include "rptf/neural.hpp"
#include "rptf/rng.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace rptf;
using io::json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kValidation = 2, kNonConvergence = 3 };

struct Common {
    std::uint64_t seed = 0;
    int jobs = 1;
    bool timings = false;
    bool verbose = false;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-")
        std::cout << text;
    else
        io::write_text_file(out, text);
}

void add_timing(json& report, const Common& c, Clock::time_point t0) {
    if (c.timings) report["timings"] = json{{"wall_seconds", io::round_sig(seconds_since(t0), 6)}};
}

// Random symmetric zero-diagonal +-1 matrix.
Matrix random_sign_matrix(std::size_t n, std::uint64_t seed) {
    Rng r(seed, 0xa11ce);
    Matrix A = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = r.uniform() < 0.5 ? -1.0 : 1.0;
            A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
        }
    return A;
}

// ---------------------------------------------------------------- attack / certify

struct AttackArgs {
    std::string model, data, out, mode = "label";
    double delta = 0.1, eta = 0.01, gamma_constant = 4.0, trials_constant = 8.0;
};

int run_attack(const AttackArgs& a, const Common& c, const std::string& command) {
    const auto t0 = Clock::now();
    const PtfClassifier f(io::poly_from_json(io::read_json_file(a.model)));
    const LabeledSet S = io::read_csv_file(a.data);
    if (S.dim() != f.n())
        throw DimensionError("data has " + std::to_string(S.dim()) + " features, model expects " +
                             std::to_string(f.n()));
    AttackOptions opts;
    opts.mode = a.mode == "model" ? FlipMode::Model : FlipMode::Label;
    opts.quad.gamma_constant = a.gamma_constant;
    opts.quad.trials_constant = a.trials_constant;
    opts.quad.sdp.verbose = c.verbose;
    const BatchResult res = batch_attack(f, S, a.delta, a.eta, c.seed, opts, c.jobs);

    json config{{"command", command},  {"model", a.model}, {"data", a.data},
                {"delta", a.delta},    {"eta", a.eta},     {"mode", a.mode},
                {"gamma_constant", a.gamma_constant}, {"trials_constant", a.trials_constant},
                {"seed", c.seed}};
    json report = io::attack_report(res, config);
    if (command == "certify")
        report["all_certified"] = res.summary.certified == res.summary.total;
    add_timing(report, c, t0);
    emit(a.out, io::dump(report));
    std::fprintf(stderr, "%s: %zu points, found %zu, certified %zu, unknown %zu\n", command.c_str(),
                 res.summary.total, res.summary.found, res.summary.certified, res.summary.unknown);
    return res.summary.errors > 0 ? kNonConvergence : kOk;
}

// ---------------------------------------------------------------- attack-net

struct NetArgs {
    std::string model, data, out;
    double delta = 0.1, alpha = 1.0;
    int trials = 256;
    bool no_warm_start = false;
};

int run_attack_net(const NetArgs& a, const Common& c) {
    const auto t0 = Clock::now();
    const TwoLayerNet net = io::net_from_json(io::read_json_file(a.model));
    const LabeledSet S = io::read_csv_file(a.data);
    if (S.dim() != net.n())
        throw DimensionError("data has " + std::to_string(S.dim()) + " features, net expects " +
                             std::to_string(net.n()));
    NetAttackOptions opts;
    opts.alpha = a.alpha;
    opts.round.trials = a.trials;
    opts.pgd_warm_start = !a.no_warm_start;
    opts.sdp.verbose = c.verbose;
    BatchResult res;
    res.outcomes.resize(S.size());
    parallel_for(S.size(), c.jobs, [&](std::size_t i) {
        try {
            res.outcomes[i] = attack_net(net, S[i].x, a.delta, example_seed(c.seed, i), opts);
        } catch (const std::exception& e) {
            res.outcomes[i] = AttackOutcome{};
            res.outcomes[i].error = e.what();
        }
    });
    res.summary = summarize(res.outcomes);
    json config{{"command", "attack-net"}, {"model", a.model}, {"data", a.data}, {"delta", a.delta},
                {"alpha", a.alpha},        {"trials", a.trials}, {"pgd_warm_start", !a.no_warm_start},
                {"seed", c.seed}};
    json report = io::attack_report(res, config);
    add_timing(report, c, t0);
    emit(a.out, io::dump(report));
    std::fprintf(stderr, "attack-net: %zu points, found %zu, certified %zu, unknown %zu\n", res.summary.total,
                 res.summary.found, res.summary.certified, res.summary.unknown);
    return res.summary.errors > 0 ? kNonConvergence : kOk;
}

// ---------------------------------------------------------------- learn

struct LearnArgs {
    std::string data, out, report, transcript, method = "cutting-plane";
    int degree = 1;
    double delta = 0.1, epsilon = 0.1, eta = 0.1, max_seconds = 0.0;
    long max_iterations = 0;
};

int run_learn(const LearnArgs& a, const Common& c) {
    const auto t0 = Clock::now();
    const LabeledSet S = io::read_csv_file(a.data);
    LearnOptions opts;
    opts.method = a.method == "ellipsoid" ? LearnMethod::Ellipsoid : LearnMethod::CuttingPlane;
    opts.max_iterations = a.max_iterations;
    opts.max_seconds = a.max_seconds;
    opts.record_transcript = !a.transcript.empty();
    opts.quad.sdp.verbose = c.verbose;
    const LearnResult r = robust_learn(S, a.degree, a.delta, a.eta, c.seed, opts);
    const std::size_t recommended = sample_size(a.degree, S.dim(), a.epsilon, a.eta);

    json config{{"command", "learn"}, {"data", a.data},   {"degree", a.degree},
                {"delta", a.delta},   {"epsilon", a.epsilon}, {"eta", a.eta},
                {"method", a.method}, {"max_iterations", a.max_iterations},
                {"max_seconds", a.max_seconds}, {"seed", c.seed}};
    json report = io::learn_report(r, config);
    report["sample_size"] = json{{"m", S.size()}, {"recommended", recommended}};
    add_timing(report, c, t0);

    std::string model_text = io::dump(io::poly_to_json(r.f.poly()));
    if (!a.report.empty()) io::write_text_file(a.report, io::dump(report));
    if (!a.transcript.empty()) io::write_text_file(a.transcript, io::transcript_jsonl(r));
    if (a.out.empty())
        std::cout << (a.report.empty() ? io::dump(report) : model_text);
    else
        io::write_text_file(a.out, model_text);
    std::fprintf(stderr, "learn: %s after %ld iterations, train robust error %.6g at gamma %.6g\n",
                 std::string(learn_status_name(r.status)).c_str(), r.iterations, r.train_robust_error,
                 r.achieved_gamma);
    if (S.size() < recommended)
        std::fprintf(stderr, "learn: note: %zu points, sample-size suggests %zu\n", S.size(), recommended);
    return r.status == LearnStatus::BudgetExhausted ? kNonConvergence : kOk;
}

// ---------------------------------------------------------------- gadgets

struct GadgetArgs {
    std::string kind = "main", out, matrix;
    std::size_t n = 3, m = 0;
    double s = 101.0, beta = -1.0, delta = 0.01, rho_constant = 10.0;
    double epsilon = -1.0;
    bool jitter = false, no_event = false;
};

int run_gen_gadget(const GadgetArgs& a, const Common& c) {
    Matrix A = a.matrix.empty() ? random_sign_matrix(a.n, c.seed)
                                : io::matrix_from_json(io::read_json_file(a.matrix), "matrix");
    const GadgetKind kind = parse_gadget_kind(a.kind);
    // Default beta exceeds every +-1 quadratic form value, so the instance is a YES case.
    const double nn_ = static_cast<double>(A.rows());
    const double beta = a.beta >= 0.0 ? a.beta : nn_ * (nn_ - 1.0) + 1.0;
    GadgetInstance g;
    AppendixOptions ao;
    ao.rho_constant = a.rho_constant;
    ao.enforce_event = !a.no_event;
    switch (kind) {
        case GadgetKind::Main: g = gen_main_gadget(A, a.s); break;
        case GadgetKind::Appendix: {
            const std::size_t nn = static_cast<std::size_t>(A.rows());
            const std::size_t m = a.m ? a.m : (nn + 1) * (nn + 1) + 3;
            g = gen_appendix_gadget(A, beta, a.delta, m, c.seed, ao);
            break;
        }
        case GadgetKind::Redundant: {
            RedundantOptions ro;
            ro.appendix = ao;
            ro.jitter = a.jitter;
            if (a.epsilon >= 0.0) ro.epsilon = a.epsilon;
            g = gen_redundant_gadget(A, beta, a.delta, c.seed, ro);
            break;
        }
    }
    g.seed = c.seed;
    for (const auto& w : g.warnings) std::fprintf(stderr, "gen-gadget: warning: %s\n", w.c_str());
    emit(a.out, io::dump(io::gadget_to_json(g)));
    std::fprintf(stderr, "gen-gadget: %s, n = %zu, %zu points\n", a.kind.c_str(), g.n(), g.S.size());
    return kOk;
}

struct VerifyArgs {
    std::string in, out, check = "all", method = "auto";
    double delta_prime = -1.0, tie_tolerance = 1e-9;
    int grid_points = 101;
};

int run_verify_gadget(const VerifyArgs& a, const Common& c) {
    const auto t0 = Clock::now();
    const GadgetInstance g = io::gadget_from_json(io::read_json_file(a.in));
    const bool all = a.check == "all";
    const double dp = a.delta_prime > 0.0 ? a.delta_prime : g.delta;
    json checks = json::object();
    bool ok = true;

    if (all || a.check == "counts") {
        const std::size_t n = g.n();
        std::size_t expected = 0;
        switch (g.kind) {
            case GadgetKind::Main: expected = main_gadget_count(n); break;
            case GadgetKind::Appendix: expected = 2 * g.m + 1; break;
            case GadgetKind::Redundant: expected = 3 * n * n * n; break;
        }
        const double plain = empirical_error(g.intended(), g.S);
        const bool cok = expected == g.S.size() && plain == 0.0;
        checks["counts"] = json{{"expected", expected}, {"actual", g.S.size()}, {"intended_plain_error", plain},
                                {"ok", cok}};
        ok = ok && cok;
    }
    if (all || a.check == "robustness") {
        RobustnessOptions ro;
        ro.grid_points = a.grid_points;
        ro.tie_tolerance = a.tie_tolerance;
        ro.seed = c.seed;
        ro.jobs = c.jobs;
        if (a.method == "grid") ro.method = RobustnessMethod::Grid;
        if (a.method == "exact") ro.method = RobustnessMethod::Exact;
        if (a.method == "sdp") ro.method = RobustnessMethod::Sdp;
        const RobustnessVerdict v = verify_no_robust_ptf_candidates(g, g.intended(), dp, ro);
        json j = io::robustness_json(v);
        j["delta_prime"] = dp;
        checks["robustness"] = j;
        ok = ok && v.robust;
    }
    if ((all && g.kind != GadgetKind::Main) || a.check == "rank") {
        const RankReport r = verify_uniqueness_rank(g);
        json j = io::rank_json(r);
        const bool rok = r.rank + 1 == r.r && r.cosine >= 1.0 - 1e-8;
        j["ok"] = rok;
        checks["rank"] = j;
        ok = ok && rok;
    }
    if ((all && g.kind != GadgetKind::Main) || a.check == "pairs") {
        const PairCheck p = verify_pair_separation(g);
        checks["pairs"] = io::pair_check_json(p);
        ok = ok && p.ok;
    }
    json config{{"command", "verify-gadget"}, {"in", a.in},        {"check", a.check},
                {"method", a.method},         {"delta_prime", dp}, {"grid_points", a.grid_points},
                {"tie_tolerance", a.tie_tolerance}, {"seed", c.seed}};
    json report{{"schema", "gadget-check/1"},
                {"config", config},
                {"kind", std::string(gadget_kind_name(g.kind))},
                {"n", g.n()},
                {"points", g.S.size()},
                {"checks", checks},
                {"ok", ok}};
    report = io::rounded(report);
    add_timing(report, c, t0);
    emit(a.out, io::dump(report));
    std::fprintf(stderr, "verify-gadget: %s\n", ok ? "all checks passed" : "some checks failed");
    return kOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
    std::string out;
    std::size_t n = 8, k = 6, batches = 4, batch_size = 25, classes = 1;
    double delta = 0.3, alpha = 1.0;
};

TwoLayerNet random_net(std::size_t n, std::size_t k, std::size_t classes, Rng& r) {
    TwoLayerNet net;
    net.W.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n));
    net.V.resize(static_cast<Eigen::Index>(classes), static_cast<Eigen::Index>(k));
    net.v_prime = Vector::Zero(static_cast<Eigen::Index>(n));
    for (auto& v : net.W.reshaped()) v = r.normal() / std::sqrt(static_cast<double>(n));
    for (auto& v : net.V.reshaped()) v = r.normal();
    for (auto& v : net.v_prime) v = 0.1 * r.normal();
    return net;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

int run_bench(const BenchArgs& a, const Common& c) {
    const auto t0 = Clock::now();
    const std::size_t total = a.batches * a.batch_size;
    std::vector<char> pgd_ok(total), sdp_ok(total), cert(total);
    parallel_for(total, c.jobs, [&](std::size_t i) {
        Rng r = Rng(c.seed, 0xbe4c).derive(1, i);
        const TwoLayerNet net = random_net(a.n, a.k, a.classes, r);
        Vector x(static_cast<Eigen::Index>(a.n));
        for (auto& v : x) v = r.normal();
        NetAttackOptions opts;
        opts.alpha = a.alpha;
        // Keep the two attacks independent for the comparison.
        opts.pgd_warm_start = false;
        const std::uint64_t s = example_seed(c.seed, i);
        try {
            pgd_ok[i] = pgd_attack(net, x, a.delta, opts.pgd, s).verdict == Verdict::Found;
            const AttackOutcome o = attack_net(net, x, a.delta, s, opts);
            sdp_ok[i] = o.verdict == Verdict::Found;
            cert[i] = o.verdict == Verdict::Certified;
        } catch (const std::exception&) {
        }
    });
    std::size_t pass = 0, pass_sdp = 0, fail = 0, fail_sdp = 0, certified = 0;
    std::vector<double> rate_pass, rate_fail;
    for (std::size_t b = 0; b < a.batches; ++b) {
        std::size_t bp = 0, bps = 0, bf = 0, bfs = 0;
        for (std::size_t i = b * a.batch_size; i < (b + 1) * a.batch_size; ++i) {
            if (pgd_ok[i]) {
                ++bp;
                bps += sdp_ok[i] != 0;
            } else {
                ++bf;
                bfs += sdp_ok[i] != 0;
            }
            certified += cert[i] != 0;
        }
        pass += bp;
        pass_sdp += bps;
        fail += bf;
        fail_sdp += bfs;
        if (bp) rate_pass.push_back(static_cast<double>(bps) / static_cast<double>(bp));
        if (bf) rate_fail.push_back(static_cast<double>(bfs) / static_cast<double>(bf));
    }
    json config{{"command", "bench"}, {"n", a.n},         {"k", a.k},
                {"classes", a.classes}, {"delta", a.delta}, {"alpha", a.alpha},
                {"batches", a.batches}, {"batch_size", a.batch_size}, {"seed", c.seed}};
    json table{{"pgd_pass", json{{"total", pass}, {"sdp_found", pass_sdp}, {"batch_rate_mean", mean_of(rate_pass)},
                                 {"batch_rate_std", std_of(rate_pass)}}},
               {"pgd_fail", json{{"total", fail}, {"sdp_found", fail_sdp}, {"batch_rate_mean", mean_of(rate_fail)},
                                 {"batch_rate_std", std_of(rate_fail)}}},
               {"certified", certified}};
    json report{{"schema", "bench-report/1"}, {"config", config}, {"table", table}};
    report = io::rounded(report);
    add_timing(report, c, t0);
    emit(a.out, io::dump(report));

    std::fprintf(stderr, "delta = %g          | PGD pass            | PGD fail\n", a.delta);
    std::fprintf(stderr, "SDP succeeds        | %zu of %zu            | %zu of %zu\n", pass_sdp, pass, fail_sdp,
                 fail);
    std::fprintf(stderr, "batch rate mean/std | %.3f / %.3f       | %.3f / %.3f\n", mean_of(rate_pass),
                 std_of(rate_pass), mean_of(rate_fail), std_of(rate_fail));
    std::fprintf(stderr, "certified robust    | %zu of %zu\n", certified, total);
    return kOk;
}

// ---------------------------------------------------------------- plot

std::string svg_header(int w, int h) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 "
       << w << ' ' << h << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return os.str();
}

struct Axes {
    double x0, x1, y0, y1;
    int w = 640, h = 420, pad = 56;
    double px(double x) const { return pad + (x - x0) / (x1 - x0) * (w - 2 * pad); }
    double py(double y) const { return h - pad - (y - y0) / (y1 - y0) * (h - 2 * pad); }
    std::string frame(const std::string& xl, const std::string& yl, const std::string& title) const {
        std::ostringstream os;
        os << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << w - 2 * pad << "\" height=\""
           << h - 2 * pad << "\" fill=\"none\" stroke=\"black\"/>\n";
        auto label = [&](double x, double y, const std::string& t, const char* anchor) {
            os << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\""
               << anchor << "\">" << t << "</text>\n";
        };
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", x0);
        label(pad, h - pad + 16, buf, "middle");
        std::snprintf(buf, sizeof buf, "%.3g", x1);
        label(w - pad, h - pad + 16, buf, "middle");
        std::snprintf(buf, sizeof buf, "%.3g", y0);
        label(pad - 4, h - pad, buf, "end");
        std::snprintf(buf, sizeof buf, "%.3g", y1);
        label(pad - 4, pad + 4, buf, "end");
        label(w / 2.0, h - 12, xl, "middle");
        label(14, h / 2.0, yl, "start");
        label(w / 2.0, 24, title, "middle");
        return os.str();
    }
};

void widen(double& lo, double& hi) {
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
}

std::string plot_attack(const json& r) {
    std::vector<std::tuple<double, double, std::string>> pts;
    for (const auto& e : r.at("examples")) pts.emplace_back(e.at("linf").get<double>(), e.at("flip_value").get<double>(),
                                                            e.at("verdict").get<std::string>());
    Axes ax{0, 1, -1, 1};
    if (!pts.empty()) {
        ax.x0 = ax.x1 = std::get<0>(pts[0]);
        ax.y0 = ax.y1 = std::get<1>(pts[0]);
        for (const auto& [x, y, v] : pts) {
            ax.x0 = std::min(ax.x0, x), ax.x1 = std::max(ax.x1, x);
            ax.y0 = std::min(ax.y0, y), ax.y1 = std::max(ax.y1, y);
        }
    }
    widen(ax.x0, ax.x1);
    widen(ax.y0, ax.y1);
    std::ostringstream os;
    os << svg_header(ax.w, ax.h) << ax.frame("linf of perturbation", "flip value", "attack outcomes");
    for (const auto& [x, y, v] : pts) {
        const char* col = v == "found" ? "#c0392b" : v == "certified" ? "#27ae60" : "#7f8c8d";
        os << "<circle cx=\"" << ax.px(x) << "\" cy=\"" << ax.py(y) << "\" r=\"3\" fill=\"" << col << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string plot_bench(const json& r) {
    const json& t = r.at("table");
    const double a = t.at("pgd_pass").at("total").get<double>(), as = t.at("pgd_pass").at("sdp_found").get<double>();
    const double b = t.at("pgd_fail").at("total").get<double>(), bs = t.at("pgd_fail").at("sdp_found").get<double>();
    Axes ax{0, 4, 0, std::max({a, b, 1.0})};
    std::ostringstream os;
    os << svg_header(ax.w, ax.h) << ax.frame("PGD pass | PGD fail", "count", "SDP attack vs PGD");
    auto bar = [&](double x, double v, const char* col) {
        os << "<rect x=\"" << ax.px(x) << "\" y=\"" << ax.py(v) << "\" width=\"" << ax.px(x + 0.8) - ax.px(x)
           << "\" height=\"" << ax.py(0) - ax.py(v) << "\" fill=\"" << col << "\"/>\n";
    };
    bar(0.2, a, "#bdc3c7");
    bar(1.0, as, "#2980b9");
    bar(2.2, b, "#bdc3c7");
    bar(3.0, bs, "#2980b9");
    os << "</svg>\n";
    return os.str();
}

std::string plot_transcript(std::istream& in) {
    std::vector<std::pair<double, double>> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        pts.emplace_back(j.at("iteration").get<double>(), j.at("log_volume").get<double>());
    }
    Axes ax{0, 1, 0, 1};
    if (!pts.empty()) {
        ax.x0 = ax.x1 = pts[0].first;
        ax.y0 = ax.y1 = pts[0].second;
        for (const auto& [x, y] : pts) {
            ax.x0 = std::min(ax.x0, x), ax.x1 = std::max(ax.x1, x);
            ax.y0 = std::min(ax.y0, y), ax.y1 = std::max(ax.y1, y);
        }
    }
    widen(ax.x0, ax.x1);
    widen(ax.y0, ax.y1);
    std::ostringstream os;
    os << svg_header(ax.w, ax.h) << ax.frame("iteration", "log volume", "localizer volume");
    os << "<polyline fill=\"none\" stroke=\"#2c3e50\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : pts) os << ax.px(x) << ',' << ax.py(y) << ' ';
    os << "\"/>\n</svg>\n";
    return os.str();
}

int run_plot(const std::string& in, const std::string& out) {
    std::string svg;
    if (in.size() > 6 && in.substr(in.size() - 6) == ".jsonl") {
        std::ifstream f(in);
        if (!f) throw ParseError("cannot open " + in);
        try {
            svg = plot_transcript(f);
        } catch (const json::exception& e) {
            throw ParseError(in + ": " + e.what());
        }
    } else {
        const json r = io::read_json_file(in);
        const std::string schema = r.value("schema", "");
        try {
            if (schema == "attack-report/1")
                svg = plot_attack(r);
            else if (schema == "bench-report/1")
                svg = plot_bench(r);
            else
                throw ParseError(in + ": no plot for schema '" + schema + "'");
        } catch (const json::exception& e) {
            throw ParseError(in + ": " + e.what());
        }
    }
    emit(out, svg);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adversarial examples, certificates and robust learning for PTFs and two-layer ReLU nets"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "TOML or INI file with option values (flags take precedence)");
    Common c;
    app.add_option("--seed", c.seed, "Random seed")->capture_default_str();
    app.add_option("--jobs", c.jobs, "Worker threads for batch commands")
        ->envname("RPTF_JOBS")
        ->check(CLI::Range(1, 1024))
        ->capture_default_str();
    app.add_flag("--timings", c.timings, "Add wall-clock timings to reports");
    app.add_flag("--verbose", c.verbose, "Stream solver diagnostics to standard error as JSON lines");

    const auto positive = CLI::PositiveNumber;
    const auto unit = CLI::Range(1e-300, 1.0 - 1e-16);

    AttackArgs aa;
    auto add_attack = [&](const char* name, const char* help) {
        CLI::App* s = app.add_subcommand(name, help);
        s->add_option("--model", aa.model, "PTF model JSON")->required()->check(CLI::ExistingFile);
        s->add_option("--data", aa.data, "Labeled CSV")->required()->check(CLI::ExistingFile);
        s->add_option("--delta", aa.delta, "Perturbation radius")->check(positive)->capture_default_str();
        s->add_option("--eta", aa.eta, "Failure probability")->check(unit)->capture_default_str();
        s->add_option("--mode", aa.mode, "Flip against the label or the model's prediction")
            ->check(CLI::IsMember({"label", "model"}))
            ->capture_default_str();
        s->add_option("--gamma-constant", aa.gamma_constant, "C in the C sqrt(log n) acceptance radius")
            ->check(positive)
            ->capture_default_str();
        s->add_option("--trials-constant", aa.trials_constant, "K in ceil(K ln(1/eta)) rounding trials")
            ->check(positive)
            ->capture_default_str();
        s->add_option("--out", aa.out, "Report path (default: standard output)");
        return s;
    };
    CLI::App* attack = add_attack("attack", "Search adversarial examples or certify robustness per point");
    CLI::App* certify = add_attack("certify", "Same as attack; reports whether every point is certified");

    NetArgs na;
    CLI::App* attack_net_cmd = app.add_subcommand("attack-net", "Attack or certify a two-layer ReLU net per point");
    attack_net_cmd->add_option("--model", na.model, "Net JSON")->required()->check(CLI::ExistingFile);
    attack_net_cmd->add_option("--data", na.data, "CSV of points (labels are ignored)")
        ->required()
        ->check(CLI::ExistingFile);
    attack_net_cmd->add_option("--delta", na.delta, "Perturbation radius")->check(positive)->capture_default_str();
    attack_net_cmd->add_option("--alpha", na.alpha, "Relaxation radius is alpha * delta")
        ->check(positive)
        ->capture_default_str();
    attack_net_cmd->add_option("--trials", na.trials, "Rounding trials")->check(CLI::Range(1, 1 << 20))->capture_default_str();
    attack_net_cmd->add_flag("--no-warm-start", na.no_warm_start, "Do not seed the relaxation from PGD");
    attack_net_cmd->add_option("--out", na.out, "Report path (default: standard output)");

    LearnArgs la;
    CLI::App* learn = app.add_subcommand("learn", "Robust ERM over degree-1 or degree-2 PTFs");
    learn->add_option("--data", la.data, "Labeled CSV")->required()->check(CLI::ExistingFile);
    learn->add_option("--degree", la.degree, "1 or 2")->check(CLI::IsMember({1, 2}))->capture_default_str();
    learn->add_option("--delta", la.delta, "Robustness radius")->check(positive)->capture_default_str();
    learn->add_option("--epsilon", la.epsilon, "Target error (for the sample-size check)")
        ->check(unit)
        ->capture_default_str();
    learn->add_option("--eta", la.eta, "Failure probability")->check(unit)->capture_default_str();
    learn->add_option("--method", la.method, "Localizer")
        ->check(CLI::IsMember({"ellipsoid", "cutting-plane"}))
        ->capture_default_str();
    learn->add_option("--max-iterations", la.max_iterations, "0 uses the volume bound")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    learn->add_option("--max-seconds", la.max_seconds, "Wall-clock budget, 0 disables")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    learn->add_option("--out", la.out, "Model JSON path");
    learn->add_option("--report", la.report, "Report JSON path");
    learn->add_option("--transcript", la.transcript, "Cut transcript (JSON lines)");

    GadgetArgs ga;
    CLI::App* gen = app.add_subcommand("gen-gadget", "Generate a point set from a QP instance");
    gen->add_option("--kind", ga.kind, "main, appendix or redundant")
        ->check(CLI::IsMember({"main", "appendix", "redundant"}))
        ->capture_default_str();
    gen->add_option("--n", ga.n, "QP dimension (random +-1 matrix)")->check(CLI::Range(1, 64))->capture_default_str();
    gen->add_option("--matrix", ga.matrix, "JSON matrix instead of a random one")->check(CLI::ExistingFile);
    gen->add_option("--s", ga.s, "QP threshold (main)")->capture_default_str();
    gen->add_option("--beta", ga.beta, "QP threshold (appendix, redundant); default n(n-1)+1")->capture_default_str();
    gen->add_option("--delta", ga.delta, "Radius (appendix, redundant)")->check(positive)->capture_default_str();
    gen->add_option("--m", ga.m, "Base samples (appendix); 0 uses (n+1)^2 + 3")->capture_default_str();
    gen->add_option("--rho-constant", ga.rho_constant, "C in rho = C delta n^1.5 m")
        ->check(positive)
        ->capture_default_str();
    gen->add_option("--epsilon", ga.epsilon, "Removal fraction to check (redundant)");
    gen->add_flag("--jitter", ga.jitter, "Jitter the repeated (0, alpha) points");
    gen->add_flag("--no-event", ga.no_event, "Do not resample points that miss the gradient event");
    gen->add_option("--out", ga.out, "Gadget JSON path (default: standard output)");

    VerifyArgs va;
    CLI::App* verify = app.add_subcommand("verify-gadget", "Check counts, robustness, rank and pair separation");
    verify->add_option("--in", va.in, "Gadget JSON")->required()->check(CLI::ExistingFile);
    verify->add_option("--check", va.check, "Which check")
        ->check(CLI::IsMember({"all", "counts", "robustness", "rank", "pairs"}))
        ->capture_default_str();
    verify->add_option("--method", va.method, "Robustness oracle")
        ->check(CLI::IsMember({"auto", "grid", "exact", "sdp"}))
        ->capture_default_str();
    verify->add_option("--delta-prime", va.delta_prime, "Radius for the robustness check (default: gadget delta)");
    verify->add_option("--grid-points", va.grid_points, "Grid points per axis")
        ->check(CLI::Range(3, 2001))
        ->capture_default_str();
    verify->add_option("--tie-tolerance", va.tie_tolerance, "Relative tolerance for boundary contact")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    verify->add_option("--out", va.out, "Report path (default: standard output)");

    BenchArgs ba;
    CLI::App* bench = app.add_subcommand("bench", "Relaxation attack versus PGD on random nets");
    bench->add_option("--n", ba.n, "Input dimension")->check(CLI::Range(1, 64))->capture_default_str();
    bench->add_option("--k", ba.k, "Hidden units")->check(CLI::Range(1, 64))->capture_default_str();
    bench->add_option("--classes", ba.classes, "Output rows (1 = binary)")
        ->check(CLI::Range(1, 16))
        ->capture_default_str();
    bench->add_option("--delta", ba.delta, "Perturbation radius")->check(positive)->capture_default_str();
    bench->add_option("--alpha", ba.alpha, "Relaxation radius factor")->check(positive)->capture_default_str();
    bench->add_option("--batches", ba.batches, "Batches")->check(CLI::Range(1, 1000))->capture_default_str();
    bench->add_option("--batch-size", ba.batch_size, "Instances per batch")
        ->check(CLI::Range(1, 100000))
        ->capture_default_str();
    bench->add_option("--out", ba.out, "Report path (default: standard output)");

    int ss_degree = 1;
    std::size_t ss_n = 2;
    double ss_eps = 0.1, ss_eta = 0.1;
    CLI::App* ss = app.add_subcommand("sample-size", "Print the number of samples the learner needs");
    ss->add_option("--degree", ss_degree, "1 or 2")->check(CLI::IsMember({1, 2}))->capture_default_str();
    ss->add_option("--n", ss_n, "Dimension")->check(CLI::Range(1, 100000))->capture_default_str();
    ss->add_option("--epsilon", ss_eps, "Target error")->check(unit)->capture_default_str();
    ss->add_option("--eta", ss_eta, "Failure probability")->check(unit)->capture_default_str();

    std::string plot_in, plot_out;
    CLI::App* plot = app.add_subcommand("plot", "SVG from an attack or bench report, or a learner transcript");
    plot->add_option("--in", plot_in, "Report JSON or transcript .jsonl")->required()->check(CLI::ExistingFile);
    plot->add_option("--out", plot_out, "SVG path (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "rptf: %s\n", e.what());
        return kValidation;
    }

    try {
        if (attack->parsed()) return run_attack(aa, c, "attack");
        if (certify->parsed()) return run_attack(aa, c, "certify");
        if (attack_net_cmd->parsed()) return run_attack_net(na, c);
        if (learn->parsed()) return run_learn(la, c);
        if (gen->parsed()) return run_gen_gadget(ga, c);
        if (verify->parsed()) return run_verify_gadget(va, c);
        if (bench->parsed()) return run_bench(ba, c);
        if (ss->parsed()) {
            std::printf("%zu\n", sample_size(ss_degree, ss_n, ss_eps, ss_eta));
            return kOk;
        }
        if (plot->parsed()) return run_plot(plot_in, plot_out);
    } catch (const ParseError& e) {
        std::fprintf(stderr, "rptf: %s\n", e.what());
        return kValidation;
    } catch (const DimensionError& e) {
        std::fprintf(stderr, "rptf: %s\n", e.what());
        return kValidation;
    } catch (const PreconditionError& e) {
        std::fprintf(stderr, "rptf: %s\n", e.what());
        return kValidation;
    } catch (const SdpConvergenceError& e) {
        std::fprintf(stderr, "rptf: %s\n", e.what());
        return kNonConvergence;
    } catch (const NnConvergenceError& e) {
        std::fprintf(stderr, "rptf: %s\n", e.what());
        return kNonConvergence;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "rptf: %s\n", e.what());
        return kFailure;
    }
    return kOk;
}
