#include "rptf/neural.hpp"

#include "rptf/errors.hpp"
#include "rptf/kernels.hpp"
#include "rptf/lp.hpp"
#include "rptf/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

namespace rptf {

namespace {

constexpr std::uint64_t kNetInitTag = 0x6e01;
constexpr std::uint64_t kNetRoundTag = 0x6e02;
constexpr std::uint64_t kPgdTag = 0x6e03;

Vector relu(const Vector& t) { return t.cwiseMax(0.0); }

double linf_of(const Vector& z) { return z.size() ? z.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

void TwoLayerNet::validate() const {
    if (V.cols() != W.rows())
        throw DimensionError("TwoLayerNet: V has " + std::to_string(V.cols()) + " columns, W has " +
                             std::to_string(W.rows()) + " rows");
    if (V.rows() < 1) throw DimensionError("TwoLayerNet: V needs at least one row");
    if (v_prime.size() != W.cols())
        throw DimensionError("TwoLayerNet: v_prime length differs from the input dimension");
}

Vector TwoLayerNet::forward(const Vector& x) const {
    if (x.size() != W.cols()) throw DimensionError("TwoLayerNet::forward: input dimension mismatch");
    return (V * relu(W * x)).array() + v_prime.dot(x);
}

int TwoLayerNet::predict(const Vector& x) const {
    const Vector out = forward(x);
    if (out.size() == 1) return sgn(out[0]);
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < out.size(); ++i)
        if (out[i] > out[best]) best = i;
    return static_cast<int>(best);
}

std::pair<int, int> target_second_best(const TwoLayerNet& net, const Vector& x) {
    const Vector out = net.forward(x);
    if (out.size() < 2) throw PreconditionError("target_second_best: needs at least two classes");
    Eigen::Index first = 0;
    for (Eigen::Index i = 1; i < out.size(); ++i)
        if (out[i] > out[first]) first = i;
    Eigen::Index second = first == 0 ? 1 : 0;
    for (Eigen::Index i = 0; i < out.size(); ++i)
        if (i != first && out[i] > out[second]) second = i;
    return {static_cast<int>(first), static_cast<int>(second)};
}

double BinaryScore::operator()(const Vector& x) const { return v.dot(relu(W * x)) + v_prime.dot(x); }

Vector BinaryScore::gradient(const Vector& x) const {
    const Vector pre = W * x;
    Vector gate(pre.size());
    for (Eigen::Index j = 0; j < pre.size(); ++j) gate[j] = pre[j] > 0.0 ? v[j] : 0.0;
    return W.transpose() * gate + v_prime;
}

BinaryScore binary_score(const TwoLayerNet& net, std::optional<std::pair<int, int>> target) {
    net.validate();
    BinaryScore s;
    s.W = net.W;
    if (net.classes() == 1) {
        if (target) throw PreconditionError("binary_score: class pair given for a binary net");
        s.v = net.V.row(0).transpose();
        s.v_prime = net.v_prime;
        return s;
    }
    const auto [i, j] = target ? *target : std::pair<int, int>{0, 1};
    const int c = static_cast<int>(net.classes());
    if (i < 0 || j < 0 || i >= c || j >= c || i == j) throw PreconditionError("binary_score: bad class pair");
    s.v = (net.V.row(i) - net.V.row(j)).transpose();
    s.v_prime = Vector::Zero(static_cast<Eigen::Index>(net.n()));
    return s;
}

double NnOptInstance::objective(const Vector& z, const Vector& y) const {
    double f = c0 + c1.dot(z) - (beta + B * z).lpNorm<1>();
    if (A.rows() > 0) f += y.dot(A * z) + c2.dot(y);
    return f;
}

double NnOptInstance::objective(const Vector& z) const {
    double f = c0 + c1.dot(z) - (beta + B * z).lpNorm<1>();
    if (A.rows() > 0) f += (A * z + c2).lpNorm<1>();
    return f;
}

NnOptInstance reduce_net(const TwoLayerNet& net, const Vector& x_star, double delta,
                         std::optional<std::pair<int, int>> target) {
    net.validate();
    if (static_cast<std::size_t>(x_star.size()) != net.n()) throw DimensionError("reduce_net: x* dimension mismatch");
    if (!(delta > 0.0)) throw PreconditionError("reduce_net: delta must be > 0");
    if (net.classes() > 1 && !target) target = target_second_best(net, x_star);
    const BinaryScore f = binary_score(net, target);
    const double fx = f(x_star);
    if (fx == 0.0) throw PreconditionError("reduce_net: f(x*) = 0, the label is ambiguous");

    NnOptInstance inst;
    inst.ell = fx > 0.0 ? 1 : -1;
    inst.delta = delta;
    const auto n = static_cast<Eigen::Index>(net.n());
    const auto k = static_cast<Eigen::Index>(net.k());
    for (Eigen::Index j = 0; j < k; ++j) {
        if (-inst.ell * f.v[j] >= 0.0) inst.rows_a.push_back(static_cast<int>(j));
        else inst.rows_b.push_back(static_cast<int>(j));
    }
    inst.A.resize(static_cast<Eigen::Index>(inst.rows_a.size()), n);
    inst.B.resize(static_cast<Eigen::Index>(inst.rows_b.size()), n);
    for (std::size_t r = 0; r < inst.rows_a.size(); ++r) {
        const int j = inst.rows_a[r];
        inst.A.row(static_cast<Eigen::Index>(r)) = 0.5 * std::abs(f.v[j]) * f.W.row(j);
    }
    for (std::size_t r = 0; r < inst.rows_b.size(); ++r) {
        const int j = inst.rows_b[r];
        inst.B.row(static_cast<Eigen::Index>(r)) = 0.5 * std::abs(f.v[j]) * f.W.row(j);
    }
    inst.c2 = inst.A * x_star;
    inst.beta = inst.B * x_star;
    const Vector lin = 0.5 * f.W.transpose() * f.v + f.v_prime;
    inst.c1 = -static_cast<double>(inst.ell) * lin;
    inst.c0 = -static_cast<double>(inst.ell) * lin.dot(x_star);

    double s = f.v_prime.lpNorm<1>() * delta;
    for (Eigen::Index j = 0; j < k; ++j) s += std::abs(f.v[j]) * f.W.row(j).lpNorm<1>() * delta;
    inst.scale = std::max(1.0, s);
    return inst;
}

double nn_sdp_objective(const NnOptInstance& inst, const RowMatrix& U, const RowMatrix& Vy) {
    const auto n = static_cast<Eigen::Index>(inst.n());
    const auto m1 = static_cast<Eigen::Index>(inst.m1());
    const auto m2 = static_cast<Eigen::Index>(inst.m2());
    const Vector u0 = U.row(0).transpose();
    Vector t(n);
    for (Eigen::Index i = 0; i < n; ++i) t[i] = U.row(i + 1).dot(u0.transpose());
    double f = inst.c0 + inst.c1.dot(t);
    for (Eigen::Index j = 0; j < m1; ++j) {
        f += inst.c2[j] * Vy.row(j).dot(u0.transpose());
        for (Eigen::Index i = 0; i < n; ++i) f += inst.A(j, i) * Vy.row(j).dot(U.row(i + 1));
    }
    for (Eigen::Index j = 0; j < m2; ++j) f -= std::abs(inst.beta[j] + inst.B.row(j).dot(t));
    return f;
}

namespace {

struct NnAscent {
    const NnOptInstance& inst;
    Eigen::Index n, m1, m2, d;
    double rad;     // u_i radius
    double vrad;    // v_j radius
    double mu = 0.0;
    RowMatrix U;
    RowMatrix Vy;
    Vector s;  // beta + B t

    NnAscent(const NnOptInstance& in, Eigen::Index rank, double v_shrink)
        : inst(in), n(static_cast<Eigen::Index>(in.n())), m1(static_cast<Eigen::Index>(in.m1())),
          m2(static_cast<Eigen::Index>(in.m2())), d(rank), rad(in.delta), vrad(v_shrink),
          U(RowMatrix::Zero(n + 1, rank)), Vy(RowMatrix::Zero(m1, rank)) {
        U(0, 0) = 1.0;
    }

    void refresh_s() {
        s = inst.beta;
        for (Eigen::Index i = 0; i < n; ++i)
            if (m2 > 0) s += inst.B.col(i) * U(i + 1, 0);
    }

    void init_random(Rng rng) {
        std::vector<double> buf(static_cast<std::size_t>(d));
        for (Eigen::Index i = 1; i <= n; ++i) {
            rng.fill_normal(buf);
            const double nr = std::sqrt(kernels::sum_squares(buf));
            for (Eigen::Index c = 0; c < d; ++c) U(i, c) = rad * buf[c] / nr;
        }
        for (Eigen::Index j = 0; j < m1; ++j) {
            rng.fill_normal(buf);
            const double nr = std::sqrt(kernels::sum_squares(buf));
            for (Eigen::Index c = 0; c < d; ++c) Vy(j, c) = vrad * buf[c] / nr;
        }
        refresh_s();
    }

    void init_warm(const Vector& z, Rng rng) {
        const double noise = 1e-3;
        const Vector az = inst.A * z + inst.c2;
        for (Eigen::Index i = 1; i <= n; ++i) {
            const double t = std::clamp(z[i - 1], -rad, rad);
            U(i, 0) = t;
            double room = std::sqrt(std::max(0.0, rad * rad - t * t));
            for (Eigen::Index c = 1; c < d; ++c) U(i, c) = noise * std::min(room, rad) * rng.normal() / std::sqrt(static_cast<double>(d));
            const double perp = U.row(i).tail(d - 1).norm();
            if (perp > room && perp > 0.0) U.row(i).tail(d - 1) *= room / perp;
        }
        for (Eigen::Index j = 0; j < m1; ++j) {
            Vy(j, 0) = vrad * (az[j] >= 0.0 ? 1.0 : -1.0) * std::sqrt(1.0 - noise * noise);
            for (Eigen::Index c = 1; c < d; ++c) Vy(j, c) = vrad * noise * rng.normal() / std::sqrt(static_cast<double>(d));
            const double nr = Vy.row(j).norm();
            if (nr > vrad) Vy.row(j) *= vrad / nr;
        }
        refresh_s();
    }

    double smooth_abs(double t) const { return std::sqrt(t * t + mu * mu); }

    double smoothed_objective() const {
        double f = inst.c0;
        for (Eigen::Index i = 0; i < n; ++i) f += inst.c1[i] * U(i + 1, 0);
        for (Eigen::Index j = 0; j < m1; ++j) {
            f += inst.c2[j] * Vy(j, 0);
            for (Eigen::Index i = 0; i < n; ++i)
                if (inst.A(j, i) != 0.0) f += inst.A(j, i) * Vy.row(j).dot(U.row(i + 1));
        }
        for (Eigen::Index j = 0; j < m2; ++j) f -= smooth_abs(s[j]);
        return f;
    }

    void update_v(Eigen::Index j) {
        Eigen::RowVectorXd L = Eigen::RowVectorXd::Zero(d);
        for (Eigen::Index i = 0; i < n; ++i)
            if (inst.A(j, i) != 0.0) L += inst.A(j, i) * U.row(i + 1);
        L[0] += inst.c2[j];
        const double nr = L.norm();
        if (nr > 0.0) Vy.row(j) = vrad * L / nr;
    }

    void update_u(Eigen::Index i) {
        Eigen::RowVectorXd M = Eigen::RowVectorXd::Zero(d);
        for (Eigen::Index j = 0; j < m1; ++j)
            if (inst.A(j, i) != 0.0) M += inst.A(j, i) * Vy.row(j);
        M[0] += inst.c1[i];
        const double l0 = M[0];
        const double c = M.tail(d - 1).norm();
        const double told = U(i + 1, 0);
        Vector kap(m2);
        for (Eigen::Index j = 0; j < m2; ++j) kap[j] = s[j] - inst.B(j, i) * told;

        auto deriv = [&](double t) {
            double g = l0;
            if (c > 0.0) g -= c * t / std::sqrt(std::max(rad * rad - t * t, 1e-300));
            for (Eigen::Index j = 0; j < m2; ++j) {
                const double bj = inst.B(j, i);
                if (bj == 0.0) continue;
                const double q = kap[j] + bj * t;
                g -= bj * q / smooth_abs(q);
            }
            return g;
        };
        double t;
        if (c == 0.0 && deriv(-rad) <= 0.0) {
            t = -rad;
        } else if (c == 0.0 && deriv(rad) >= 0.0) {
            t = rad;
        } else {
            double lo = -rad, hi = rad;
            for (int it = 0; it < 80 && hi - lo > 1e-16 * rad; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (deriv(mid) > 0.0) lo = mid;
                else hi = mid;
            }
            t = 0.5 * (lo + hi);
        }
        const double room = std::sqrt(std::max(0.0, rad * rad - t * t));
        U(i + 1, 0) = t;
        if (c > 0.0) {
            U.row(i + 1).tail(d - 1) = room * M.tail(d - 1) / c;
        } else {
            const double cur = U.row(i + 1).tail(d - 1).norm();
            if (cur > room) U.row(i + 1).tail(d - 1) *= room / cur;
        }
        for (Eigen::Index j = 0; j < m2; ++j) s[j] = kap[j] + inst.B(j, i) * t;
    }

    double sweep() {
        for (Eigen::Index j = 0; j < m1; ++j) update_v(j);
        for (Eigen::Index i = 0; i < n; ++i) update_u(i);
        return smoothed_objective();
    }

    double feasibility() const {
        double w = 0.0;
        for (Eigen::Index i = 1; i <= n; ++i) w = std::max(w, U.row(i).squaredNorm() - rad * rad);
        for (Eigen::Index j = 0; j < m1; ++j) w = std::max(w, Vy.row(j).squaredNorm() - vrad * vrad);
        return std::max(w, 0.0);
    }
};

}  // namespace

NnSdpSolution solve_nn_sdp(const NnOptInstance& inst, const NnSdpOptions& opts, std::uint64_t seed,
                           const std::optional<Vector>& warm) {
    if (!(opts.tol > 0.0)) throw PreconditionError("solve_nn_sdp: tol must be > 0");
    if (!(inst.delta > 0.0)) throw PreconditionError("solve_nn_sdp: delta must be > 0");
    if (!(opts.mu_start >= opts.mu_end && opts.mu_end > 0.0))
        throw PreconditionError("solve_nn_sdp: need mu_start >= mu_end > 0");
    if (!(opts.v_shrink > 0.0 && opts.v_shrink <= 1.0)) throw PreconditionError("solve_nn_sdp: v_shrink must lie in (0,1]");
    const auto n = static_cast<Eigen::Index>(inst.n());
    const auto m1 = static_cast<Eigen::Index>(inst.m1());
    const Eigen::Index d = opts.rank > 0 ? opts.rank : std::max<Eigen::Index>(2, n + m1 + 1);
    if (warm && warm->size() != n) throw DimensionError("solve_nn_sdp: warm start dimension mismatch");

    double bscale = 1.0;
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(inst.m2()); ++j)
        bscale = std::max(bscale, std::abs(inst.beta[j]) + inst.B.row(j).lpNorm<1>() * inst.delta);
    const double stall = 1e-3 * opts.tol * inst.scale;

    NnSdpSolution best;
    best.objective = -std::numeric_limits<double>::infinity();
    bool converged_any = false;
    const int runs = std::max(1, opts.restarts) + (warm ? 1 : 0);
    int total_sweeps = 0;
    for (int r = 0; r < runs; ++r) {
        NnAscent ca(inst, d, opts.v_shrink);
        const Rng rng = Rng(seed).derive(kNetInitTag, static_cast<std::uint64_t>(r));
        if (warm && r == runs - 1) ca.init_warm(*warm, rng);
        else ca.init_random(rng);
        bool converged = true;
        int sweeps = 0;
        for (double mu = opts.mu_start; mu >= opts.mu_end * (1.0 - 1e-12); mu /= 10.0) {
            ca.mu = mu * bscale;
            double f = ca.smoothed_objective();
            bool stage_done = false;
            while (!stage_done) {
                if (total_sweeps >= opts.max_sweeps) break;
                const double next = ca.sweep();
                ++sweeps;
                ++total_sweeps;
                if (opts.verbose)
                    std::fprintf(stderr,
                                 "{\"event\":\"nn_sdp_sweep\",\"restart\":%d,\"mu\":%.3g,\"sweep\":%d,"
                                 "\"objective\":%.12g}\n",
                                 r, ca.mu, sweeps, next);
                stage_done = next - f <= stall;
                f = next;
            }
            if (!stage_done) {
                converged = false;
                break;
            }
        }
        converged_any = converged_any || converged;
        const double exact = nn_sdp_objective(inst, ca.U, ca.Vy);
        if (exact > best.objective) {
            best.objective = exact;
            best.U = ca.U;
            best.Vy = ca.Vy;
            best.sweeps = sweeps;
            best.feasibility = ca.feasibility();
        }
    }
    best.delta = inst.delta;
    best.r = Vector(static_cast<Eigen::Index>(inst.m2()));
    for (Eigen::Index j = 0; j < best.r.size(); ++j) {
        double v = inst.beta[j];
        for (Eigen::Index i = 0; i < n; ++i) v += inst.B(j, i) * best.U(i + 1, 0);
        best.r[j] = std::abs(v);
    }
    if (!converged_any) throw NnConvergenceError("solve_nn_sdp: sweep budget exhausted", std::move(best));
    return best;
}

double rounding_epsilon(std::size_t m1, double a) {
    if (m1 <= 1) return 1.0;
    const double e = a / std::sqrt(std::log(static_cast<double>(m1)));
    return std::clamp(e, std::numeric_limits<double>::min(), 1.0);
}

double net_gamma(std::size_t n, std::size_t k, double C) {
    if (n < 2 || k < 2) return 1.0;
    return std::max(1.0, C * std::sqrt(std::log(static_cast<double>(n)) * std::log(static_cast<double>(k))));
}

NnRounding round_nn(const NnSdpSolution& sol, const NnOptInstance& inst, const NnRoundOptions& opts,
                    std::uint64_t seed) {
    if (opts.trials < 1) throw PreconditionError("round_nn: trials must be >= 1");
    const auto n = static_cast<Eigen::Index>(inst.n());
    const auto m1 = static_cast<Eigen::Index>(inst.m1());
    const Eigen::Index d = sol.U.cols();
    const double eps = rounding_epsilon(inst.m1(), opts.a);
    const double limit = opts.cap > 0.0 ? opts.cap * (1.0 + 1e-12) : 0.0;

    Vector zeta(d);
    Vector z(n), y(m1);
    NnRounding in, any;
    bool have_in = false, have_any = false;
    for (int t = 0; t < opts.trials; ++t) {
        Rng rng = Rng(seed).derive(kNetRoundTag, static_cast<std::uint64_t>(t));
        zeta[0] = 0.0;
        for (Eigen::Index c = 1; c < d; ++c) zeta[c] = rng.normal();
        for (Eigen::Index i = 0; i < n; ++i) z[i] = sol.U(i + 1, 0) + sol.U.row(i + 1).dot(zeta.transpose()) / eps;
        for (Eigen::Index j = 0; j < m1; ++j)
            y[j] = std::clamp(sol.Vy(j, 0) + eps * sol.Vy.row(j).dot(zeta.transpose()), -1.0, 1.0);
        const double v = inst.objective(z);
        const double linf = linf_of(z);
        const bool inside = limit <= 0.0 || linf <= limit;
        if (inside && (!have_in || v > in.value)) {
            in = NnRounding{z, y, v, linf, true, 0};
            have_in = true;
        }
        if (!have_any || v > any.value) {
            any = NnRounding{z, y, v, linf, false, 0};
            have_any = true;
        }
    }
    NnRounding out = have_in ? in : any;
    out.within_cap = have_in;
    out.trials = opts.trials;
    return out;
}

namespace {

struct PgdBest {
    Vector z;
    double value = -std::numeric_limits<double>::infinity();
    bool flipped = false;
};

PgdBest pgd_search(const TwoLayerNet& net, const BinaryScore& f, const Vector& x_star, double delta,
                   const PgdOptions& opts, std::uint64_t seed) {
    const double step = opts.step_size > 0.0 ? opts.step_size : delta / 10.0;
    const auto n = x_star.size();
    const double fx = f(x_star);
    const double ell = fx >= 0.0 ? 1.0 : -1.0;
    const int pred = net.predict(x_star);
    PgdBest best;
    best.z = Vector::Zero(n);
    for (int r = 0; r < std::max(1, opts.restarts); ++r) {
        Rng rng = Rng(seed).derive(kPgdTag, static_cast<std::uint64_t>(r));
        Vector z(n);
        for (Eigen::Index i = 0; i < n; ++i) z[i] = r == 0 ? 0.0 : rng.uniform(-delta, delta);
        for (int s = 0; s <= opts.steps; ++s) {
            const Vector x = x_star + z;
            const double v = -ell * f(x);
            const bool flip = net.predict(x) != pred;
            if ((flip && !best.flipped) || (flip == best.flipped && v > best.value)) {
                best.value = v;
                best.z = z;
                best.flipped = flip;
            }
            if (s == opts.steps) break;
            const Vector g = -ell * f.gradient(x);
            for (Eigen::Index i = 0; i < n; ++i) {
                const double dir = g[i] > 0.0 ? 1.0 : (g[i] < 0.0 ? -1.0 : 0.0);
                z[i] = std::clamp(z[i] + step * dir, -delta, delta);
            }
        }
    }
    return best;
}

}  // namespace

AttackOutcome pgd_attack(const TwoLayerNet& net, const Vector& x_star, double delta, const PgdOptions& opts,
                         std::uint64_t seed, std::optional<std::pair<int, int>> target) {
    net.validate();
    if (!(delta > 0.0)) throw PreconditionError("pgd_attack: delta must be > 0");
    if (static_cast<std::size_t>(x_star.size()) != net.n()) throw DimensionError("pgd_attack: x* dimension mismatch");
    if (net.classes() > 1 && !target) target = target_second_best(net, x_star);
    const BinaryScore f = binary_score(net, target);
    const PgdBest best = pgd_search(net, f, x_star, delta, opts, seed);
    AttackOutcome out;
    out.gamma_used = 1.0;
    out.flip_value = best.value;
    out.linf = linf_of(best.z);
    out.margin = f(x_star + best.z);
    if (best.flipped) {
        out.verdict = Verdict::Found;
        out.z = best.z;
    }
    return out;
}

AttackOutcome attack_net(const TwoLayerNet& net, const Vector& x_star, double delta, std::uint64_t seed,
                         const NetAttackOptions& opts) {
    net.validate();
    if (!(delta > 0.0)) throw PreconditionError("attack_net: delta must be > 0");
    if (!(opts.alpha > 0.0)) throw PreconditionError("attack_net: alpha must be > 0");
    auto target = opts.target;
    if (net.classes() > 1 && !target) target = target_second_best(net, x_star);
    NnOptInstance inst = reduce_net(net, x_star, delta, target);
    const BinaryScore f = binary_score(net, target);
    const double gamma = net_gamma(net.n(), net.k(), opts.gamma_constant);

    std::optional<Vector> warm;
    if (opts.pgd_warm_start) {
        PgdOptions po = opts.pgd;
        if (po.step_size <= 0.0) po.step_size = opts.alpha * delta / 10.0;
        warm = pgd_search(net, f, x_star, opts.alpha * delta, po, Rng(seed).derive(kPgdTag, 99).next_u64()).z;
    }

    inst.delta = opts.alpha * delta;
    const NnSdpSolution sol = solve_nn_sdp(inst, opts.sdp, seed, warm);
    NnRoundOptions ro = opts.round;
    ro.cap = gamma * delta;
    const NnRounding rd = round_nn(sol, inst, ro, seed);

    AttackOutcome out;
    out.gamma_used = gamma;
    out.sdp_value = sol.objective;
    out.flip_value = rd.value;
    out.linf = rd.linf;
    out.margin = f(x_star + rd.z);
    const int pred = net.predict(x_star);
    if (rd.within_cap && rd.value > 0.0 && net.predict(x_star + rd.z) != pred) {
        out.verdict = Verdict::Found;
        out.z = rd.z;
        return out;
    }
    const double slack = opts.sdp.tol * inst.scale;
    if (opts.alpha >= 1.0 && sol.objective + slack < 0.0) {
        out.verdict = Verdict::Certified;
        out.certificate_value = sol.objective + slack;
        return out;
    }
    out.verdict = Verdict::Unknown;
    return out;
}

namespace {

double golden_max(const std::function<double(double)>& f, double lo, double hi, double& arg) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 60; ++it) {
        if (fc >= fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    arg = fc >= fd ? c : d;
    return std::max(fc, fd);
}

}  // namespace

NetMaxResult brute_force_net(const NnOptInstance& inst, long budget) {
    const auto n = static_cast<Eigen::Index>(inst.n());
    if (n > 16) throw PreconditionError("brute_force_net: limited to n <= 16");
    const double delta = inst.delta;
    int per = static_cast<int>(std::floor(std::pow(static_cast<double>(std::max(budget, 1L)), 1.0 / static_cast<double>(std::max<Eigen::Index>(n, 1)))));
    if (per % 2 == 0) --per;
    per = std::max(per, 3);
    NetMaxResult res;
    res.value = -std::numeric_limits<double>::infinity();
    auto consider = [&](const Vector& z) {
        const double v = inst.objective(z);
        ++res.evaluations;
        if (v > res.value) {
            res.value = v;
            res.z = z;
        }
    };
    const double h = 2.0 * delta / (per - 1);
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    Vector z = Vector::Constant(n, -delta);
    for (;;) {
        consider(z);
        Eigen::Index p = 0;
        for (; p < n; ++p) {
            if (++idx[p] < per) {
                z[p] = idx[p] == per - 1 ? delta : -delta + h * idx[p];
                break;
            }
            idx[p] = 0;
            z[p] = -delta;
        }
        if (p == n) break;
    }
    // grid with an odd count already contains every vertex
    Vector y = res.z;
    for (Eigen::Index i = 0; i < n; ++i) {
        double arg = y[i];
        const double v = golden_max(
            [&](double t) {
                Vector w = y;
                w[i] = t;
                return inst.objective(w);
            },
            std::max(-delta, y[i] - h), std::min(delta, y[i] + h), arg);
        res.evaluations += 62;
        if (v > inst.objective(y)) y[i] = arg;
    }
    consider(y);
    return res;
}

NetMaxResult exact_net_max(const TwoLayerNet& net, const Vector& x_star, double delta,
                           std::optional<std::pair<int, int>> target) {
    net.validate();
    if (net.classes() > 1 && !target) target = target_second_best(net, x_star);
    const BinaryScore f = binary_score(net, target);
    const auto n = static_cast<Eigen::Index>(net.n());
    const auto k = static_cast<Eigen::Index>(net.k());
    if (k > 12) throw PreconditionError("exact_net_max: limited to k <= 12");
    const double fx = f(x_star);
    const double ell = fx >= 0.0 ? 1.0 : -1.0;
    const Vector pre = f.W * x_star;

    NetMaxResult res;
    res.value = -std::numeric_limits<double>::infinity();
    Matrix G(k + 2 * n, n);
    Vector h(k + 2 * n);
    G.bottomRows(2 * n) << Matrix::Identity(n, n), -Matrix::Identity(n, n);
    h.tail(2 * n).setConstant(delta);
    for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << k); ++pattern) {
        Vector c = f.v_prime;
        for (Eigen::Index j = 0; j < k; ++j) {
            const bool on = (pattern >> j) & 1u;
            if (on) {
                c += f.v[j] * f.W.row(j).transpose();
                G.row(j) = -f.W.row(j);
                h[j] = pre[j];
            } else {
                G.row(j) = f.W.row(j);
                h[j] = -pre[j];
            }
        }
        const lp::Result r = lp::maximize(-ell * c, G, h);
        ++res.evaluations;
        if (r.status != lp::Status::Optimal) continue;
        const Vector z = r.x.cwiseMax(-delta).cwiseMin(delta);
        const double v = -ell * f(x_star + z);
        if (v > res.value) {
            res.value = v;
            res.z = z;
        }
    }
    return res;
}

TwoLayerNet fit_net_sgd(const LabeledSet& S, std::size_t hidden, int epochs, double lr, std::uint64_t seed) {
    if (S.empty()) throw PreconditionError("fit_net_sgd: empty data");
    const auto n = static_cast<Eigen::Index>(S.dim());
    const auto k = static_cast<Eigen::Index>(hidden);
    Rng rng(seed);
    TwoLayerNet net;
    net.W.resize(k, n);
    net.V.resize(1, k);
    net.v_prime = Vector::Zero(n);
    for (Eigen::Index j = 0; j < k; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) net.W(j, i) = rng.normal() / std::sqrt(static_cast<double>(n));
        net.V(0, j) = rng.normal() / std::sqrt(static_cast<double>(k));
    }
    const double m = static_cast<double>(S.size());
    for (int e = 0; e < epochs; ++e) {
        Matrix gW = Matrix::Zero(k, n);
        Vector gv = Vector::Zero(k);
        Vector gp = Vector::Zero(n);
        for (const auto& p : S) {
            const Vector pre = net.W * p.x;
            const Vector act = relu(pre);
            const double out = net.V.row(0).dot(act) + net.v_prime.dot(p.x);
            if (p.y * out >= 1.0) continue;
            gv -= p.y * act;
            gp -= p.y * p.x;
            for (Eigen::Index j = 0; j < k; ++j)
                if (pre[j] > 0.0) gW.row(j) -= p.y * net.V(0, j) * p.x.transpose();
        }
        net.W -= (lr / m) * gW;
        net.V.row(0) -= (lr / m) * gv.transpose();
        net.v_prime -= (lr / m) * gp;
    }
    return net;
}

}  // namespace rptf
