#include "rptf/boxmax.hpp"

#include "rptf/errors.hpp"
#include "rptf/kernels.hpp"
#include "rptf/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <vector>

namespace rptf {

namespace {

constexpr std::uint64_t kInitTag = 0x51d1;
constexpr std::uint64_t kRoundTag = 0x70d2;

double linf_norm(const Vector& x) { return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff(); }

BoxMaxResult finish(Vector x, double value, double delta) {
    BoxMaxResult r;
    r.linf = linf_norm(x);
    r.blowup = delta > 0.0 ? r.linf / delta : 1.0;
    r.x_hat = std::move(x);
    r.value = value;
    return r;
}

std::span<const double> row_span(const RowMatrix& U, Eigen::Index i) {
    return {U.data() + i * U.cols(), static_cast<std::size_t>(U.cols())};
}

std::span<double> row_span(RowMatrix& U, Eigen::Index i) {
    return {U.data() + i * U.cols(), static_cast<std::size_t>(U.cols())};
}

double feasibility_of(const RowMatrix& U, double delta) {
    double worst = std::abs(kernels::sum_squares(row_span(U, 0)) - 1.0);
    for (Eigen::Index i = 1; i < U.rows(); ++i)
        worst = std::max(worst, kernels::sum_squares(row_span(U, i)) - delta * delta);
    return std::max(worst, 0.0);
}

}  // namespace

BoxMaxResult maximize_linear(const Vector& b, double c, double delta) {
    if (!(delta >= 0.0)) throw PreconditionError("maximize_linear: delta must be >= 0");
    Vector x(b.size());
    for (Eigen::Index i = 0; i < b.size(); ++i) x[i] = b[i] > 0.0 ? delta : b[i] < 0.0 ? -delta : 0.0;
    auto r = finish(std::move(x), delta * b.lpNorm<1>() + c, delta);
    r.blowup = 1.0;
    // The linear maximum is exact, so it is its own upper bound.
    r.sdp_value = r.value;
    return r;
}

double SdpInstance::scale() const {
    const double n = static_cast<double>(g.n());
    const double amax = g.n() ? g.A().cwiseAbs().maxCoeff() : 0.0;
    const double bmax = g.n() ? g.b().cwiseAbs().maxCoeff() : 0.0;
    return std::max({1.0, amax * n * delta * delta, bmax * n * delta, std::abs(g.c())});
}

double SdpInstance::objective(const RowMatrix& U) const {
    const auto n = static_cast<Eigen::Index>(g.n());
    if (U.rows() != n + 1) throw DimensionError("SdpInstance::objective: U has wrong row count");
    double f = g.c() * kernels::sum_squares(row_span(U, 0));
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto ui = row_span(U, i + 1);
        f += g.b()[i] * kernels::dot(ui, row_span(U, 0));
        for (Eigen::Index j = 0; j < n; ++j) {
            const double a = g.A()(i, j);
            if (a != 0.0) f += a * kernels::dot(ui, row_span(U, j + 1));
        }
    }
    return f;
}

SdpInstance build_sdp(const QuadPoly& g, double delta) {
    if (!(delta > 0.0)) throw PreconditionError("build_sdp: delta must be > 0");
    return SdpInstance{g, delta};
}

namespace {

// One restart of block-coordinate ascent with u_0 pinned to e_0. The vector
// program is invariant under rotations, so pinning u_0 loses nothing and
// makes u_i_perp the trailing d-1 coordinates of row i.
struct CoordinateAscent {
    const SdpInstance& inst;
    const SdpOptions& opts;
    Eigen::Index n;
    Eigen::Index d;
    RowMatrix U;
    RowMatrix AU;  // row i = sum_j A_ij u_j
    std::vector<double> ell;

    CoordinateAscent(const SdpInstance& in, const SdpOptions& o, Eigen::Index rank)
        : inst(in), opts(o), n(static_cast<Eigen::Index>(in.g.n())), d(rank),
          U(RowMatrix::Zero(n + 1, rank)), AU(RowMatrix::Zero(n, rank)),
          ell(static_cast<std::size_t>(rank)) {
        U(0, 0) = 1.0;
    }

    void init(Rng rng) {
        const double delta = inst.delta;
        for (Eigen::Index i = 1; i <= n; ++i) {
            auto row = row_span(U, i);
            rng.fill_normal(row);
            const double nrm = std::sqrt(kernels::sum_squares(row));
            for (auto& v : row) v *= delta / nrm;
        }
        const Matrix& A = inst.g.A();
        for (Eigen::Index i = 0; i < n; ++i) {
            auto out = row_span(AU, i);
            std::fill(out.begin(), out.end(), 0.0);
            for (Eigen::Index j = 0; j < n; ++j)
                if (A(i, j) != 0.0) kernels::axpy(A(i, j), row_span(U, j + 1), out);
        }
    }

    double objective() const {
        double f = inst.g.c();
        for (Eigen::Index i = 0; i < n; ++i)
            f += kernels::dot(row_span(U, i + 1), row_span(AU, i)) + inst.g.b()[i] * U(i + 1, 0);
        return f;
    }

    // max_{||u|| <= delta} a ||u||^2 + <ell, u>
    void update(Eigen::Index i) {
        const Matrix& A = inst.g.A();
        const double delta = inst.delta;
        const double a = A(i, i);
        auto ui = row_span(U, i + 1);
        const auto aui = row_span(AU, i);
        for (Eigen::Index k = 0; k < d; ++k) ell[k] = 2.0 * (aui[k] - a * ui[k]);
        ell[0] += inst.g.b()[i];
        const double lnorm = std::sqrt(kernels::sum_squares(ell));

        std::vector<double> next(static_cast<std::size_t>(d), 0.0);
        if (lnorm > 0.0) {
            const double s = a >= 0.0 ? delta : std::min(delta, lnorm / (2.0 * -a));
            for (Eigen::Index k = 0; k < d; ++k) next[k] = s * ell[k] / lnorm;
        } else if (a > 0.0) {
            const double cur = std::sqrt(kernels::sum_squares(ui));
            if (cur > 0.0) {
                for (Eigen::Index k = 0; k < d; ++k) next[k] = ui[k] * delta / cur;
            } else {
                next[d > 1 ? 1 : 0] = delta;
            }
        }
        // else: zero vector is optimal

        for (Eigen::Index k = 0; k < d; ++k) next[k] -= ui[k];
        for (Eigen::Index r = 0; r < n; ++r)
            if (A(r, i) != 0.0) kernels::axpy(A(r, i), next, row_span(AU, r));
        kernels::axpy(1.0, next, ui);
    }
};

}  // namespace

SdpSolution solve_sdp(const SdpInstance& inst, const SdpOptions& opts, std::uint64_t seed) {
    if (!(opts.tol > 0.0)) throw PreconditionError("solve_sdp: tol must be > 0");
    if (!(inst.delta > 0.0)) throw PreconditionError("solve_sdp: delta must be > 0");
    const auto n = static_cast<Eigen::Index>(inst.g.n());
    const Eigen::Index d = opts.rank > 0 ? opts.rank : n + 2;
    const double scale = inst.scale();
    // Sweeps are monotone; stop once a full sweep gains less than this.
    const double stall = 1e-3 * opts.tol * scale;

    SdpSolution best;
    best.objective = -std::numeric_limits<double>::infinity();
    double last_improvement = 0.0;
    bool any_converged = false;
    const int restarts = std::max(1, opts.restarts);

    for (int r = 0; r < restarts; ++r) {
        CoordinateAscent ca(inst, opts, d);
        ca.init(Rng(seed).derive(kInitTag, static_cast<std::uint64_t>(r)));
        double f = ca.objective();
        bool converged = n == 0;
        int sweep = 0;
        for (; sweep < opts.max_sweeps && !converged; ++sweep) {
            for (Eigen::Index i = 0; i < n; ++i) ca.update(i);
            const double next = ca.objective();
            last_improvement = next - f;
            f = next;
            if (opts.verbose)
                std::fprintf(stderr,
                             "{\"event\":\"sdp_sweep\",\"restart\":%d,\"sweep\":%d,"
                             "\"objective\":%.12g,\"improvement\":%.6g}\n",
                             r, sweep, f, last_improvement);
            if (last_improvement <= stall) converged = true;
        }
        any_converged = any_converged || converged;
        if (f > best.objective) {
            best.U = std::move(ca.U);
            best.objective = f;
            best.sweeps = sweep;
        }
    }
    best.objective = inst.objective(best.U);
    best.feasibility = feasibility_of(best.U, inst.delta);
    best.delta = inst.delta;
    best.restarts_run = restarts;
    if (!any_converged)
        throw SdpConvergenceError("solve_sdp: no restart converged within max_sweeps", std::move(best),
                                  last_improvement);
    return best;
}

double rounding_gamma(std::size_t n, double C) {
    if (n < 2) return 1.0;
    return std::max(1.0, C * std::sqrt(std::log(static_cast<double>(n))));
}

BoxMaxResult gaussian_round(const SdpSolution& sol, const QuadPoly& g, const RoundingOptions& opts,
                            std::uint64_t seed) {
    if (opts.trials < 1) throw PreconditionError("gaussian_round: trials must be >= 1");
    const Eigen::Index n = sol.U.rows() - 1;
    const Eigen::Index d = sol.U.cols();
    if (static_cast<std::size_t>(n) != g.n()) throw DimensionError("gaussian_round: dimension mismatch");

    const std::span<const double> body{sol.U.data() + d, static_cast<std::size_t>(n * d)};
    bool degenerate = true;
    for (Eigen::Index i = 1; i <= n && degenerate; ++i)
        for (Eigen::Index k = 1; k < d; ++k)
            if (sol.U(i, k) != 0.0) {
                degenerate = false;
                break;
            }

    const double limit = opts.cap > 0.0 ? opts.cap * sol.delta * (1.0 + 1e-12) : 0.0;
    std::vector<double> w(static_cast<std::size_t>(d));
    Vector x(n);
    BoxMaxResult best_in;
    BoxMaxResult best_any;
    bool have_in = false;
    bool have_any = false;
    const int trials = degenerate ? 1 : opts.trials;
    for (int t = 0; t < trials; ++t) {
        w[0] = 1.0;
        Rng rng = Rng(seed).derive(kRoundTag, static_cast<std::uint64_t>(t));
        for (Eigen::Index k = 1; k < d; ++k) w[k] = degenerate ? 0.0 : rng.normal();
        kernels::matvec(body, static_cast<std::size_t>(n), static_cast<std::size_t>(d), w,
                        {x.data(), static_cast<std::size_t>(n)});
        const double v = g(x);
        const double linf = linf_norm(x);
        const bool inside = limit <= 0.0 || linf <= limit;
        if (inside && (!have_in || v > best_in.value)) {
            best_in = finish(x, v, sol.delta);
            have_in = true;
        }
        if (!have_any || v > best_any.value) {
            best_any = finish(x, v, sol.delta);
            have_any = true;
        }
    }
    BoxMaxResult out = have_in ? std::move(best_in) : std::move(best_any);
    out.within_cap = have_in;
    out.trials_used = trials;
    out.sdp_value = sol.objective;
    return out;
}

int rounding_trials(double eta, double K) {
    if (!(eta > 0.0 && eta < 1.0)) throw PreconditionError("rounding_trials: eta must lie in (0,1)");
    return std::max(1, static_cast<int>(std::ceil(K * std::log(1.0 / eta))));
}

BoxMaxResult maximize_quadratic(const QuadPoly& g, double delta, double eta, std::uint64_t seed,
                                const QuadMaxOptions& opts) {
    if (!(eta > 0.0 && eta < 1.0)) throw PreconditionError("maximize_quadratic: eta must lie in (0,1)");
    if (!(delta >= 0.0)) throw PreconditionError("maximize_quadratic: delta must be >= 0");
    if (g.degree() <= 1) return maximize_linear(g.b(), g.c(), delta);
    if (delta == 0.0) return finish(Vector::Zero(static_cast<Eigen::Index>(g.n())), g.c(), 0.0);

    const SdpInstance inst = build_sdp(g, delta);
    const SdpSolution sol = solve_sdp(inst, opts.sdp, seed);
    RoundingOptions ro;
    ro.trials = rounding_trials(eta, opts.trials_constant);
    ro.cap = rounding_gamma(g.n(), opts.gamma_constant);
    BoxMaxResult r = gaussian_round(sol, g, ro, seed);
    r.sdp_slack = opts.sdp.tol * inst.scale();
    if (opts.clip) {
        r.x_hat = r.x_hat.cwiseMax(-delta).cwiseMin(delta);
        r.value = g(r.x_hat);
        r.linf = linf_norm(r.x_hat);
        r.blowup = r.linf / delta;
    }
    return r;
}

namespace {

BoxMaxResult vertex_enumeration(const QuadPoly& g, double delta) {
    const auto n = static_cast<Eigen::Index>(g.n());
    if (!g.has_zero_diagonal())
        throw PreconditionError("brute_force_boxmax: vertex mode needs a zero diagonal");
    if (n > 24) throw PreconditionError("brute_force_boxmax: vertex mode limited to n <= 24");
    const Matrix& A = g.A();
    Vector x = Vector::Constant(n, -delta);
    Vector ax = A * x;
    double value = g(x);
    double best = value;
    Vector best_x = x;
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < count; ++k) {
        // Gray code: flip the lowest set bit of k.
        const auto i = static_cast<Eigen::Index>(__builtin_ctzll(k));
        const double step = -2.0 * x[i];
        value += step * (2.0 * ax[i] + g.b()[i]);
        ax += A.col(i) * step;
        x[i] += step;
        if ((k & 4095u) == 0) {
            ax = A * x;
            value = g(x);
        }
        if (value > best) {
            best = value;
            best_x = x;
        }
    }
    return finish(std::move(best_x), 0.0, delta);
}

double golden_max_1d(const std::function<double(double)>& f, double lo, double hi, double& arg) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 80 && b - a > 1e-15 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    arg = fc >= fd ? c : d;
    return std::max(fc, fd);
}

BoxMaxResult grid_search(const QuadPoly& g, double delta, int points) {
    const auto n = static_cast<Eigen::Index>(g.n());
    if (n > 6) throw PreconditionError("brute_force_boxmax: grid mode limited to n <= 6");
    if (points < 2) throw PreconditionError("brute_force_boxmax: grid needs >= 2 points per axis");
    if (n == 0) return finish(Vector(), g.c(), delta);
    const double total = std::pow(static_cast<double>(points), static_cast<double>(n));
    if (total > 2.5e8)
        throw PreconditionError("brute_force_boxmax: grid of " + std::to_string(total) +
                                " points exceeds the evaluation limit");

    const double h = 2.0 * delta / (points - 1);
    auto coord = [&](int k) { return k == points - 1 ? delta : -delta + h * k; };
    const Matrix& A = g.A();
    const Eigen::Index last = n - 1;
    const double a_last = A(last, last);

    std::vector<int> idx(static_cast<std::size_t>(last), 0);
    Vector x = Vector::Constant(n, -delta);
    double best = -std::numeric_limits<double>::infinity();
    Vector best_x = x;
    for (;;) {
        // g restricted to the last axis: a t^2 + beta t + gamma
        x[last] = 0.0;
        const double gamma = g(x);
        const double beta = g.b()[last] + 2.0 * A.row(last).head(last).dot(x.head(last));
        for (int k = 0; k < points; ++k) {
            const double t = coord(k);
            const double v = (a_last * t + beta) * t + gamma;
            if (v > best) {
                best = v;
                best_x = x;
                best_x[last] = t;
            }
        }
        Eigen::Index p = 0;
        for (; p < last; ++p) {
            if (++idx[p] < points) {
                x[p] = coord(idx[p]);
                break;
            }
            idx[p] = 0;
            x[p] = -delta;
        }
        if (p == last) break;
    }

    // one coordinatewise golden-section pass around the best cell
    Vector y = best_x;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double lo = std::max(-delta, y[i] - h);
        const double hi = std::min(delta, y[i] + h);
        double arg = y[i];
        const double v = golden_max_1d(
            [&](double t) {
                Vector z = y;
                z[i] = t;
                return g(z);
            },
            lo, hi, arg);
        if (v > g(y)) y[i] = arg;
    }
    if (g(y) > g(best_x)) best_x = y;
    return finish(std::move(best_x), 0.0, delta);
}

BoxMaxResult face_enumeration(const QuadPoly& g, double delta) {
    const auto n = static_cast<Eigen::Index>(g.n());
    if (n > 12) throw PreconditionError("brute_force_boxmax: face mode limited to n <= 12");
    const Matrix& A = g.A();
    std::vector<int> state(static_cast<std::size_t>(n), 0);  // 0 free, 1 = -delta, 2 = +delta
    double best = -std::numeric_limits<double>::infinity();
    Vector best_x = Vector::Zero(n);
    Vector x(n);
    std::vector<Eigen::Index> freev;
    for (;;) {
        freev.clear();
        for (Eigen::Index i = 0; i < n; ++i) {
            if (state[i] == 0) freev.push_back(i);
            else x[i] = state[i] == 1 ? -delta : delta;
        }
        bool ok = true;
        if (!freev.empty()) {
            const auto k = static_cast<Eigen::Index>(freev.size());
            Matrix M(k, k);
            Vector rhs(k);
            for (Eigen::Index r = 0; r < k; ++r) {
                const Eigen::Index i = freev[r];
                rhs[r] = -0.5 * g.b()[i];
                for (Eigen::Index j = 0; j < n; ++j)
                    if (state[j] != 0) rhs[r] -= A(i, j) * x[j];
                for (Eigen::Index c = 0; c < k; ++c) M(r, c) = A(i, freev[c]);
            }
            Eigen::FullPivLU<Matrix> lu(M);
            lu.setThreshold(1e-12);
            if (!lu.isInvertible()) {
                ok = false;
            } else {
                const Vector sol = lu.solve(rhs);
                for (Eigen::Index r = 0; r < k && ok; ++r) {
                    if (!(std::abs(sol[r]) <= delta * (1.0 + 1e-12))) ok = false;
                    else x[freev[r]] = std::clamp(sol[r], -delta, delta);
                }
            }
        }
        if (ok) {
            const double v = g(x);
            if (v > best) {
                best = v;
                best_x = x;
            }
        }
        Eigen::Index p = 0;
        for (; p < n; ++p) {
            if (++state[p] < 3) break;
            state[p] = 0;
        }
        if (p == n) break;
    }
    return finish(std::move(best_x), 0.0, delta);
}

}  // namespace

BoxMaxResult brute_force_boxmax(const QuadPoly& g, double delta, BruteMode mode, int grid_points) {
    if (!(delta >= 0.0)) throw PreconditionError("brute_force_boxmax: delta must be >= 0");
    BoxMaxResult r;
    switch (mode) {
        case BruteMode::Vertex: r = vertex_enumeration(g, delta); break;
        case BruteMode::Grid: r = grid_search(g, delta, grid_points); break;
        case BruteMode::Faces: r = face_enumeration(g, delta); break;
    }
    r.value = g(r.x_hat);
    return r;
}

BoxOracle exact_box_oracle() {
    return [](const QuadPoly& h, double delta) {
        if (h.degree() <= 1) return maximize_linear(h.b(), h.c(), delta).value;
        const BruteMode mode = h.has_zero_diagonal() && h.n() <= 24 ? BruteMode::Vertex : BruteMode::Faces;
        return brute_force_boxmax(h, delta, mode).value;
    };
}

BoxOracle sdp_box_oracle(double eta, std::uint64_t seed, QuadMaxOptions opts) {
    auto calls = std::make_shared<std::uint64_t>(0);
    return [=](const QuadPoly& h, double delta) {
        const std::uint64_t k = (*calls)++;
        return maximize_quadratic(h, delta, eta, mix64(seed ^ mix64(k)), opts).value;
    };
}

}  // namespace rptf
