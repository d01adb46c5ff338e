#include "rptf/hardness.hpp"

#include "rptf/attack.hpp"
#include "rptf/errors.hpp"
#include "rptf/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace rptf {

namespace {

void require_zero_diag_symmetric(const Matrix& A, const char* who) {
    if (A.rows() != A.cols()) throw DimensionError(std::string(who) + ": A must be square");
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        if (A(i, i) != 0.0) throw PreconditionError(std::string(who) + ": A must have a zero diagonal");
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            if (!std::isfinite(A(i, j))) throw PreconditionError(std::string(who) + ": non-finite entry in A");
    }
}

Matrix symmetrized(const Matrix& A) { return 0.5 * (A + A.transpose()); }

Vector point(std::size_t n, double z) {
    Vector p = Vector::Zero(static_cast<Eigen::Index>(n + 1));
    p[static_cast<Eigen::Index>(n)] = z;
    return p;
}

double quad_form(const Matrix& A, const Vector& x) { return x.dot(A * x); }

// Largest power of two q such that every value in [-bound, bound] that is a
// multiple of q is exactly representable.
double grid_quantum(double bound) {
    int e = 0;
    std::frexp(bound, &e);  // bound < 2^e
    return std::ldexp(1.0, e - 52);
}

double snap(double v, double q) { return std::nearbyint(v / q) * q; }

std::size_t choose2(std::size_t n) { return n * (n - 1) / 2; }

}  // namespace

std::string_view gadget_kind_name(GadgetKind k) noexcept {
    switch (k) {
        case GadgetKind::Main: return "main";
        case GadgetKind::Appendix: return "appendix";
        case GadgetKind::Redundant: return "redundant";
    }
    return "main";
}

GadgetKind parse_gadget_kind(std::string_view s) {
    if (s == "main") return GadgetKind::Main;
    if (s == "appendix") return GadgetKind::Appendix;
    if (s == "redundant") return GadgetKind::Redundant;
    throw ParseError("unknown gadget kind '" + std::string(s) + "'");
}

PtfClassifier GadgetInstance::intended() const {
    const std::size_t d = n() + 1;
    Matrix Ap = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    Ap.topLeftCorner(A.rows(), A.cols()) = A;
    Vector b = Vector::Zero(static_cast<Eigen::Index>(d));
    b[static_cast<Eigen::Index>(n())] = -1.0;
    QuadPoly g(Ap, b, 0.0);
    if (kind == GadgetKind::Main) return PtfClassifier(g);
    return PtfClassifier(g.scaled(-1.0));
}

std::size_t main_gadget_count(std::size_t n) { return 6 + 4 * n + 12 * choose2(n); }

GadgetInstance gen_main_gadget(const Matrix& A_in, double s, const MainGadgetOptions& opts) {
    const std::size_t n = static_cast<std::size_t>(A_in.rows());
    if (n < 2) throw PreconditionError("gen_main_gadget: n must be at least 2");
    require_zero_diag_symmetric(A_in, "gen_main_gadget");
    if (!(s > 100.0)) throw PreconditionError("gen_main_gadget: s must exceed 100");
    Matrix A = symmetrized(A_in);

    double min_abs = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double a = std::abs(A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
            if (a > 0.0) min_abs = std::min(min_abs, a);
        }
    if (!std::isfinite(min_abs)) throw PreconditionError("gen_main_gadget: A is all zero");

    GadgetInstance g;
    g.kind = GadgetKind::Main;
    const double nd = static_cast<double>(n);
    g.epsilon = 200.0 / (nd * nd);
    const double thr = std::max(opts.min_entry, opts.entry_over_eps * g.epsilon);
    g.scale_factor = min_abs > thr ? 1.0 : 1.1 * thr / min_abs;
    A *= g.scale_factor;
    min_abs *= g.scale_factor;
    g.A = A;
    g.s = s * g.scale_factor;
    g.delta = 1.0 / g.s;
    const double boost = std::max(1.0, 1.0 / (g.epsilon + min_abs));
    g.tau_prime = opts.tau_prime_constant * (nd * nd / g.epsilon) * boost;
    g.tau = opts.tau_constant * (nd / g.epsilon) * boost;
    g.gamma_gadget = 4.0 * nd * g.tau;

    LabeledSet S(n + 1);
    for (double z : {1.0, g.tau_prime, 2.0 * g.delta}) {
        S.add(point(n, z), -1);
        S.add(point(n, -z), +1);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (double sx : {1.0, -1.0})
            for (double sz : {1.0, -1.0}) {
                Vector p = point(n, sz * g.gamma_gadget);
                p[static_cast<Eigen::Index>(i)] = sx * g.tau;
                S.add(std::move(p), sz > 0 ? -1 : +1);
            }
    // Pair points: S3 (z = 2, label -1), S4 (doubled entries, z = 1), S5 (z = -2, label +1).
    for (int family = 3; family <= 5; ++family)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double a = A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                double e = 1.0 / std::sqrt(2.0 * (g.epsilon + std::abs(a)));
                if (family == 4) e *= 2.0;
                const double z = family == 3 ? 2.0 : family == 4 ? 1.0 : -2.0;
                for (double si : {1.0, -1.0})
                    for (double sj : {1.0, -1.0}) {
                        Vector p = point(n, z);
                        p[static_cast<Eigen::Index>(i)] = si * e;
                        p[static_cast<Eigen::Index>(j)] = sj * e;
                        int y = family == 3 ? -1 : +1;
                        if (family == 4) y = a == 0.0 ? -1 : sgn(a * si * sj);
                        S.add(std::move(p), y);
                    }
            }
    S.set_delta(g.delta);
    g.S = std::move(S);
    return g;
}

namespace {

struct PairSamples {
    Matrix x;  // m x n
    Vector z;
    double delta = 0.0;
    double rho = 0.0;
    std::vector<std::string> warnings;
};

PairSamples sample_pairs(const Matrix& A, double delta, std::size_t m, std::uint64_t seed,
                         const AppendixOptions& opts) {
    const std::size_t n = static_cast<std::size_t>(A.rows());
    PairSamples ps;
    const double nd = static_cast<double>(n);
    ps.rho = opts.rho ? *opts.rho : opts.rho_constant * delta * std::pow(nd, 1.5) * static_cast<double>(m);
    if (!(ps.rho > 0.0)) throw PreconditionError("gadget: rho must be positive");
    std::vector<double> row_l1(n);
    for (std::size_t i = 0; i < n; ++i) row_l1[i] = A.row(static_cast<Eigen::Index>(i)).cwiseAbs().sum();

    Rng base(seed, 0x9ad9e7);
    ps.x.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    std::size_t resampled = 0;
    for (std::size_t l = 0; l < m; ++l) {
        Rng r = base.derive(1, l);
        Vector x(static_cast<Eigen::Index>(n));
        for (int attempt = 0;; ++attempt) {
            for (auto& v : x) v = ps.rho * r.normal();
            if (!opts.enforce_event) break;
            bool ok = true;
            for (std::size_t i = 0; i < n && ok; ++i)
                if (row_l1[i] > 0.0)
                    ok = std::abs(A.row(static_cast<Eigen::Index>(i)).dot(x)) > delta * row_l1[i];
            if (ok) break;
            if (attempt + 1 >= opts.max_resamples)
                throw PreconditionError("gadget: sampling event not reached; increase rho");
            ++resampled;
        }
        ps.x.row(static_cast<Eigen::Index>(l)) = x.transpose();
    }
    if (resampled > 0) ps.warnings.push_back("resampled " + std::to_string(resampled) + " base points");

    // Put x, z and delta on one dyadic grid so that x +- delta and z +- delta
    // are computed exactly.
    ps.z.resize(static_cast<Eigen::Index>(m));
    double bound = 4.0 * delta;
    for (std::size_t l = 0; l < m; ++l) {
        const Vector x = ps.x.row(static_cast<Eigen::Index>(l)).transpose();
        bound = std::max(bound, 2.0 * (x.cwiseAbs().maxCoeff() + delta));
        bound = std::max(bound, 2.0 * (std::abs(quad_form(A, x)) + delta));
    }
    const double q = grid_quantum(bound);
    ps.delta = snap(delta, q);
    if (!(ps.delta > 0.0)) throw PreconditionError("gadget: delta is too small relative to the samples");
    if (ps.delta != delta) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "delta rounded to the sample grid (relative change %.3g)",
                      std::abs(ps.delta - delta) / delta);
        ps.warnings.emplace_back(buf);
    }
    for (std::size_t l = 0; l < m; ++l) {
        for (std::size_t i = 0; i < n; ++i) {
            double& v = ps.x(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(i));
            v = snap(v, q);
        }
        const Vector x = ps.x.row(static_cast<Eigen::Index>(l)).transpose();
        ps.z[static_cast<Eigen::Index>(l)] = snap(quad_form(A, x), q);
    }
    return ps;
}

void emit_pairs(GadgetInstance& g, LabeledSet& S) {
    const std::size_t n = g.n();
    const QuadPoly p(g.A, Vector::Zero(static_cast<Eigen::Index>(n)), 0.0);
    for (std::size_t l = 0; l < g.m; ++l) {
        const Vector x = g.base_x.row(static_cast<Eigen::Index>(l)).transpose();
        const double z = g.base_z[static_cast<Eigen::Index>(l)];
        const Vector grad = p.gradient(x);
        Vector u(static_cast<Eigen::Index>(n + 1)), v(static_cast<Eigen::Index>(n + 1));
        for (std::size_t i = 0; i < n; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            const double si = sgn(grad[ii]);
            u[ii] = x[ii] - g.delta * si;
            v[ii] = x[ii] + g.delta * si;
        }
        const auto zi = static_cast<Eigen::Index>(n);
        u[zi] = z + g.delta;
        v[zi] = z - g.delta;
        const int yu = sgn(u[zi] - p(Vector(u.head(zi))));
        const int yv = sgn(v[zi] - p(Vector(v.head(zi))));
        const std::size_t iu = S.size();
        S.add(std::move(u), yu);
        S.add(std::move(v), yv);
        g.pairs.emplace_back(iu, iu + 1);
    }
}

void check_pair_args(const Matrix& A, double beta, double delta, const char* who) {
    require_zero_diag_symmetric(A, who);
    if (A.rows() < 1) throw PreconditionError(std::string(who) + ": n must be at least 1");
    if (!(delta > 0.0) || !std::isfinite(delta)) throw PreconditionError(std::string(who) + ": delta must be positive");
    if (!std::isfinite(beta)) throw PreconditionError(std::string(who) + ": beta must be finite");
}

}  // namespace

GadgetInstance gen_appendix_gadget(const Matrix& A_in, double beta, double delta, std::size_t m,
                                   std::uint64_t seed, const AppendixOptions& opts) {
    check_pair_args(A_in, beta, delta, "gen_appendix_gadget");
    const std::size_t n = static_cast<std::size_t>(A_in.rows());
    if (m <= (n + 1) * (n + 1)) throw PreconditionError("gen_appendix_gadget: m must exceed (n+1)^2");

    GadgetInstance g;
    g.kind = GadgetKind::Appendix;
    g.A = symmetrized(A_in);
    g.beta = beta;
    g.m = m;
    g.seed = seed;
    PairSamples ps = sample_pairs(g.A, delta, m, seed, opts);
    g.delta = ps.delta;
    g.rho = ps.rho;
    g.base_x = std::move(ps.x);
    g.base_z = std::move(ps.z);
    g.warnings = std::move(ps.warnings);
    g.alpha = g.delta * g.delta * beta + g.delta;

    LabeledSet S(n + 1);
    emit_pairs(g, S);
    S.add(point(n, g.alpha), +1);
    g.type_a = 1;
    S.set_delta(g.delta);
    g.S = std::move(S);
    return g;
}

RedundancyCheck redundancy_check(std::size_t n, double epsilon) {
    RedundancyCheck rc;
    rc.n = n;
    rc.epsilon = epsilon;
    const std::size_t n3 = n * n * n;
    rc.total = 3 * n3;
    rc.removed = static_cast<std::size_t>(std::floor(epsilon * static_cast<double>(rc.total)));
    rc.type_a_survives = rc.removed < n3;
    rc.intact_pairs_min = rc.removed >= n3 ? 0 : n3 - rc.removed;
    rc.pairs_needed = (n + 1) * (n + 1);
    rc.pairs_ok = rc.intact_pairs_min >= rc.pairs_needed;
    rc.ok = rc.type_a_survives && rc.pairs_ok;
    return rc;
}

GadgetInstance gen_redundant_gadget(const Matrix& A_in, double beta, double delta, std::uint64_t seed,
                                    const RedundantOptions& opts) {
    check_pair_args(A_in, beta, delta, "gen_redundant_gadget");
    const std::size_t n = static_cast<std::size_t>(A_in.rows());
    if (n > 8) throw PreconditionError("gen_redundant_gadget: n must be at most 8");
    const std::size_t n3 = n * n * n;
    if (n3 <= (n + 1) * (n + 1)) throw PreconditionError("gen_redundant_gadget: n^3 must exceed (n+1)^2");

    GadgetInstance g;
    g.kind = GadgetKind::Redundant;
    g.A = symmetrized(A_in);
    g.beta = beta;
    g.m = n3;
    g.seed = seed;
    PairSamples ps = sample_pairs(g.A, delta, n3, seed, opts.appendix);
    g.delta = ps.delta;
    g.rho = ps.rho;
    g.base_x = std::move(ps.x);
    g.base_z = std::move(ps.z);
    g.warnings = std::move(ps.warnings);
    g.alpha = g.delta * g.delta * beta + g.delta;
    if (opts.epsilon) {
        g.epsilon = *opts.epsilon;
        const RedundancyCheck rc = redundancy_check(n, *opts.epsilon);
        if (!rc.ok)
            g.warnings.push_back("removing " + std::to_string(rc.removed) + " of " + std::to_string(rc.total) +
                                 " points can break the counting argument at n = " + std::to_string(n));
    }

    LabeledSet S(n + 1);
    Rng jr(seed, 0x7a11e7);
    for (std::size_t c = 0; c < n3; ++c) {
        Vector p = point(n, g.alpha);
        if (opts.jitter)
            for (auto& v : p) v += 1e-9 * g.delta * jr.uniform(-1.0, 1.0);
        S.add(std::move(p), +1);
    }
    g.type_a = n3;
    emit_pairs(g, S);
    S.set_delta(g.delta);
    g.S = std::move(S);
    return g;
}

std::size_t monomial_rank_dim(std::size_t n) { return (n + 1) * n / 2 + 2 * n + 3; }

Vector monomial_row(const Vector& x, double z) {
    const std::size_t n = static_cast<std::size_t>(x.size());
    Vector f(static_cast<Eigen::Index>(monomial_rank_dim(n)));
    Eigen::Index k = 0;
    f[k++] = 1.0;
    for (std::size_t i = 0; i < n; ++i) f[k++] = x[static_cast<Eigen::Index>(i)];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) f[k++] = x[static_cast<Eigen::Index>(i)] * x[static_cast<Eigen::Index>(j)];
    for (std::size_t i = 0; i < n; ++i) f[k++] = x[static_cast<Eigen::Index>(i)] * z;
    f[k++] = z * z;
    f[k++] = z;
    return f;
}

RankReport verify_uniqueness_rank(const GadgetInstance& inst, double rel_threshold) {
    if (inst.kind == GadgetKind::Main) throw PreconditionError("verify_uniqueness_rank: needs sampled base points");
    const std::size_t n = inst.n();
    const std::size_t m = static_cast<std::size_t>(inst.base_x.rows());
    if (m <= (n + 1) * (n + 1)) throw PreconditionError("verify_uniqueness_rank: m must exceed (n+1)^2");
    RankReport rep;
    rep.r = monomial_rank_dim(n);
    Matrix M(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(rep.r));
    for (std::size_t l = 0; l < m; ++l)
        M.row(static_cast<Eigen::Index>(l)) =
            monomial_row(inst.base_x.row(static_cast<Eigen::Index>(l)).transpose(),
                         inst.base_z[static_cast<Eigen::Index>(l)])
                .transpose();
    Vector colscale = M.colwise().norm().transpose();
    for (auto& c : colscale) c = c > 0.0 ? 1.0 / c : 1.0;
    const Matrix Ms = M * colscale.asDiagonal();
    Eigen::JacobiSVD<Matrix> svd(Ms, Eigen::ComputeFullV);
    rep.singular_values = svd.singularValues();
    const double smax = rep.singular_values.size() ? rep.singular_values[0] : 0.0;
    rep.rank = 0;
    for (auto s : rep.singular_values)
        if (s > rel_threshold * smax) ++rep.rank;

    Vector nv = colscale.asDiagonal() * svd.matrixV().col(static_cast<Eigen::Index>(rep.r) - 1);
    nv.normalize();
    const auto zi = static_cast<Eigen::Index>(rep.r) - 1;
    if (nv[zi] < 0.0) nv = -nv;
    rep.null_vector = nv;

    rep.expected = Vector::Zero(static_cast<Eigen::Index>(rep.r));
    Eigen::Index k = 1 + static_cast<Eigen::Index>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double a = inst.A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            rep.expected[k++] = i == j ? -a : -2.0 * a;
        }
    rep.expected[zi] = 1.0;
    rep.expected.normalize();
    rep.cosine = std::abs(rep.null_vector.dot(rep.expected));
    return rep;
}

RobustnessVerdict verify_no_robust_ptf_candidates(const GadgetInstance& inst, const PtfClassifier& candidate,
                                                  double delta_prime, const RobustnessOptions& opts) {
    const std::size_t d = inst.n() + 1;
    if (candidate.n() != d) throw DimensionError("verify_no_robust_ptf_candidates: candidate dimension mismatch");
    RobustnessVerdict out;
    out.plain_error = empirical_error(candidate, inst.S);
    RobustnessMethod method = opts.method;
    if (method == RobustnessMethod::Auto)
        method = d <= 3 ? RobustnessMethod::Grid : d <= 8 ? RobustnessMethod::Exact : RobustnessMethod::Sdp;
    switch (method) {
        case RobustnessMethod::Grid: out.method = "grid"; break;
        case RobustnessMethod::Exact: out.method = "exact"; break;
        default: out.method = "sdp"; break;
    }
    // 0 robust, 1 touching, 2 strict flip
    std::vector<char> state(inst.S.size(), 0);
    parallel_for(inst.S.size(), opts.jobs, [&](std::size_t i) {
        const LabeledPoint& pt = inst.S[i];
        const QuadPoly h = negate_for_label(shift(candidate.poly(), pt.x), pt.y);
        const double tol = opts.tie_tolerance * (1.0 + std::abs(h.c()) + delta_prime * h.b().cwiseAbs().sum() +
                                                 delta_prime * delta_prime * h.A().cwiseAbs().sum());
        double best;
        if (method == RobustnessMethod::Sdp) {
            AttackOptions ao;
            ao.mode = FlipMode::Label;
            const AttackOutcome o =
                attack_ptf(candidate, pt.x, delta_prime, 0.01, pt.y, example_seed(opts.seed, i), ao);
            if (o.verdict == Verdict::Certified) return;
            best = o.flip_value;
            state[i] = best > tol ? 2 : 1;
            if (o.verdict == Verdict::Unknown) state[i] = 2;
            return;
        }
        if (h.degree() <= 1) {
            best = maximize_linear(h.b(), h.c(), delta_prime).value;
        } else {
            best = brute_force_boxmax(h, delta_prime, BruteMode::Faces).value;
            if (method == RobustnessMethod::Grid)
                best = std::max(best, brute_force_boxmax(h, delta_prime, BruteMode::Grid, opts.grid_points).value);
        }
        if (!flip_from_value(best, pt.y)) return;
        state[i] = best > tol ? 2 : 1;
    });
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (state[i] == 2) out.failing.push_back(i);
        if (state[i] == 1) out.touching.push_back(i);
    }
    out.non_robust = out.failing.size();
    out.robust = out.plain_error == 0.0 && out.non_robust == 0;
    return out;
}

PairCheck verify_pair_separation(const GadgetInstance& inst) {
    PairCheck pc;
    pc.pairs = inst.pairs.size();
    const double two_delta = 2.0 * inst.delta;
    for (const auto& [iu, iv] : inst.pairs) {
        const Vector& u = inst.S[iu].x;
        const Vector& v = inst.S[iv].x;
        bool ok = u.size() == v.size();
        for (Eigen::Index k = 0; ok && k < u.size(); ++k) {
            const double diff = std::abs(v[k] - u[k]);
            // The difference must be exact: the rounding error of v - u is zero.
            const double back = u[k] + (v[k] - u[k]);
            ok = diff == two_delta && back == v[k];
        }
        if (ok) ++pc.exact;
    }
    pc.ok = pc.pairs > 0 && pc.exact == pc.pairs;
    return pc;
}

}  // namespace rptf
