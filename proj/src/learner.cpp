#include "rptf/learner.hpp"

#include "rptf/errors.hpp"
#include "rptf/lp.hpp"
#include "rptf/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace rptf {

std::size_t feature_dim(std::size_t n, int degree) {
    if (degree == 1) return n + 1;
    if (degree == 2) return n * (n + 1) / 2 + n + 1;
    throw PreconditionError("feature_dim: degree must be 1 or 2");
}

Vector features(const Vector& x, int degree) {
    const auto n = static_cast<std::size_t>(x.size());
    Vector psi(static_cast<Eigen::Index>(feature_dim(n, degree)));
    Eigen::Index k = 0;
    if (degree == 2)
        for (Eigen::Index i = 0; i < x.size(); ++i)
            for (Eigen::Index j = i; j < x.size(); ++j) psi[k++] = x[i] * x[j];
    for (Eigen::Index i = 0; i < x.size(); ++i) psi[k++] = x[i];
    psi[k] = 1.0;
    return psi;
}

QuadPoly poly_from_coeff(const Vector& w, std::size_t n, int degree) {
    if (static_cast<std::size_t>(w.size()) != feature_dim(n, degree))
        throw DimensionError("poly_from_coeff: coefficient vector has the wrong length");
    const auto N = static_cast<Eigen::Index>(n);
    Matrix A = Matrix::Zero(N, N);
    Eigen::Index k = 0;
    if (degree == 2)
        for (Eigen::Index i = 0; i < N; ++i)
            for (Eigen::Index j = i; j < N; ++j, ++k) {
                if (i == j) {
                    A(i, i) = w[k];
                } else {
                    A(i, j) = 0.5 * w[k];
                    A(j, i) = 0.5 * w[k];
                }
            }
    Vector b = w.segment(k, N);
    return QuadPoly(std::move(A), std::move(b), w[k + N]);
}

Vector coeff_from_poly(const QuadPoly& g, int degree) {
    const auto N = static_cast<Eigen::Index>(g.n());
    Vector w(static_cast<Eigen::Index>(feature_dim(g.n(), degree)));
    Eigen::Index k = 0;
    if (degree == 2)
        for (Eigen::Index i = 0; i < N; ++i)
            for (Eigen::Index j = i; j < N; ++j) w[k++] = i == j ? g.A()(i, i) : 2.0 * g.A()(i, j);
    else if (!g.A().isZero(0.0))
        throw PreconditionError("coeff_from_poly: quadratic part present for degree 1");
    w.segment(k, N) = g.b();
    w[k + N] = g.c();
    return w;
}

std::string_view cut_kind_name(Cut::Kind k) noexcept {
    switch (k) {
        case Cut::Kind::Norm: return "norm";
        case Cut::Kind::Margin: return "margin";
        case Cut::Kind::Robust: break;
    }
    return "robust";
}

std::string_view learn_status_name(LearnStatus s) noexcept {
    switch (s) {
        case LearnStatus::Success: return "success";
        case LearnStatus::Infeasible: return "infeasible";
        case LearnStatus::BudgetExhausted: break;
    }
    return "budget_exhausted";
}

OracleReport separation_oracle(const Vector& theta, const OracleContext& ctx, std::uint64_t seed) {
    if (ctx.S == nullptr) throw PreconditionError("separation_oracle: no data");
    const LabeledSet& S = *ctx.S;
    const std::size_t n = S.dim();
    const auto D = static_cast<Eigen::Index>(feature_dim(n, ctx.degree));
    const auto m = static_cast<Eigen::Index>(S.size());
    if (theta.size() != D + m) throw DimensionError("separation_oracle: iterate has the wrong length");
    const Vector w = theta.head(D);
    const Vector r = theta.tail(m);
    OracleReport rep;

    const double wn = w.norm();
    if (wn > 1.0) {
        Cut c;
        c.kind = Cut::Kind::Norm;
        c.a = Vector::Zero(D + m);
        c.a.head(D) = w / wn;
        c.b = 1.0;
        rep.cut = std::move(c);
        return rep;
    }

    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& p = S[static_cast<std::size_t>(i)];
        const Vector psi = features(p.x, ctx.degree);
        if (p.y * w.dot(psi) < r[i] + ctx.kappa) {
            Cut c;
            c.kind = Cut::Kind::Margin;
            c.index = static_cast<std::size_t>(i);
            c.a = Vector::Zero(D + m);
            c.a.head(D) = -p.y * psi;
            c.a[D + i] = 1.0;
            c.b = -ctx.kappa;
            rep.cut = std::move(c);
            return rep;
        }
    }

    const QuadPoly g = poly_from_coeff(w, n, ctx.degree);
    const double budget = ctx.delta / ctx.gamma;
    const Rng base(seed);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& p = S[static_cast<std::size_t>(i)];
        const QuadPoly shifted = negate_for_label(shift(g, p.x), p.y);
        const QuadPoly drop(shifted.A(), shifted.b(), 0.0);
        std::optional<BoxMaxResult> best;
        for (int attempt = 0; attempt < 2 && !best; ++attempt) {
            ++rep.box_calls;
            try {
                best = maximize_quadratic(drop, budget, ctx.eta_prime,
                                          base.derive(static_cast<std::uint64_t>(attempt), i).next_u64(),
                                          ctx.quad);
            } catch (const SdpConvergenceError& e) {
                rep.notes.push_back("point " + std::to_string(i) + ": " + e.what());
            }
        }
        if (!best) continue;
        if (!best->within_cap) {
            rep.notes.push_back("point " + std::to_string(i) + ": rounding left the gamma ball");
            continue;
        }
        if (best->value > r[i]) {
            Cut c;
            c.kind = Cut::Kind::Robust;
            c.index = static_cast<std::size_t>(i);
            c.a = Vector::Zero(D + m);
            c.a.head(D) = p.y * (features(p.x, ctx.degree) - features(p.x + best->x_hat, ctx.degree));
            c.a[D + i] = -1.0;
            c.b = 0.0;
            c.z = best->x_hat;
            rep.cut = std::move(c);
            return rep;
        }
    }
    return rep;
}

Ellipsoid::Ellipsoid(Vector center, double radius)
    : center_(std::move(center)),
      Q_(radius * Matrix::Identity(center_.size(), center_.size())),
      log_det_q_(static_cast<double>(center_.size()) * std::log(radius)) {
    if (!(radius > 0.0)) throw PreconditionError("Ellipsoid: radius must be > 0");
    if (center_.size() < 2) throw PreconditionError("Ellipsoid: dimension must be >= 2");
}

double Ellipsoid::mean_semi_axis() const { return std::exp(log_det_q_ / static_cast<double>(dim())); }

double Ellipsoid::cut(const Vector& a, double b) {
    const Vector qa = Q_.transpose() * a;
    const double s = qa.norm();
    if (!(s > 0.0)) return a.dot(center_) > b ? std::numeric_limits<double>::infinity() : -1.0;
    const double alpha = (a.dot(center_) - b) / s;
    if (alpha >= 1.0) return alpha;
    const double N = static_cast<double>(dim());
    const double al = std::max(alpha, -1.0 / N);
    const double tau = (1.0 + N * al) / (N + 1.0);
    const double sigma = 2.0 * (1.0 + N * al) / ((N + 1.0) * (1.0 + al));
    const double dil = N * N * (1.0 - al * al) / (N * N - 1.0);
    const Vector gt = qa / s;
    const Vector qg = Q_ * gt;
    center_ -= tau * qg;
    const double shrink = 1.0 - std::sqrt(std::max(0.0, 1.0 - sigma));
    Q_.noalias() -= shrink * qg * gt.transpose();
    Q_ *= std::sqrt(dil);
    log_det_q_ += 0.5 * N * std::log(dil) + 0.5 * std::log1p(-sigma);
    return alpha;
}

namespace {

struct ChebyshevCenter {
    enum class Status { Ok, Empty, Failed } status = Status::Ok;
    Vector center;
    double radius = 0.0;
};

// max rho s.t. a_k^T theta + ||a_k|| rho <= b_k, |theta_j| + rho <= bound,
// solved through its dual  min b^T lambda  s.t. G^T lambda = 0,
// h^T lambda - s = 1, lambda, s >= 0.
ChebyshevCenter chebyshev_center(const std::vector<Cut>& cuts, Eigen::Index N, double bound) {
    const auto K = static_cast<Eigen::Index>(cuts.size());
    const Eigen::Index cols = K + 2 * N + 1;
    Matrix A = Matrix::Zero(N + 1, cols);
    Vector cost = Vector::Zero(cols);
    for (Eigen::Index k = 0; k < K; ++k) {
        A.col(k).head(N) = cuts[static_cast<std::size_t>(k)].a;
        A(N, k) = cuts[static_cast<std::size_t>(k)].a.norm();
        cost[k] = cuts[static_cast<std::size_t>(k)].b;
    }
    for (Eigen::Index j = 0; j < N; ++j) {
        A(j, K + 2 * j) = 1.0;
        A(j, K + 2 * j + 1) = -1.0;
        A(N, K + 2 * j) = 1.0;
        A(N, K + 2 * j + 1) = 1.0;
        cost[K + 2 * j] = bound;
        cost[K + 2 * j + 1] = bound;
    }
    A(N, cols - 1) = -1.0;
    Vector rhs = Vector::Zero(N + 1);
    rhs[N] = 1.0;
    const lp::Result res = lp::simplex(A, rhs, cost, 200000);
    ChebyshevCenter out;
    if (res.status == lp::Status::Unbounded) {
        out.status = ChebyshevCenter::Status::Empty;
        return out;
    }
    if (res.status != lp::Status::Optimal) {
        out.status = ChebyshevCenter::Status::Failed;
        return out;
    }
    out.center = res.y.head(N);
    out.radius = res.y[N];
    return out;
}

}  // namespace

std::size_t sample_size(int degree, std::size_t n, double epsilon, double eta, double c) {
    if (degree != 1 && degree != 2) throw PreconditionError("sample_size: degree must be 1 or 2");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw PreconditionError("sample_size: epsilon must lie in (0,1)");
    if (!(eta > 0.0 && eta < 1.0)) throw PreconditionError("sample_size: eta must lie in (0,1)");
    double vc = 1.0;
    for (int k = 1; k <= degree; ++k)
        vc = vc * static_cast<double>(n + static_cast<std::size_t>(k)) / static_cast<double>(k);
    return static_cast<std::size_t>(std::ceil(c * (vc + std::log(1.0 / eta)) / (epsilon * epsilon)));
}

LearnResult robust_learn(const LabeledSet& S, int degree, double delta, double eta, std::uint64_t seed,
                         const LearnOptions& opts) {
    if (degree != 1 && degree != 2) throw PreconditionError("robust_learn: degree must be 1 or 2");
    if (!(delta >= 0.0)) throw PreconditionError("robust_learn: delta must be >= 0");
    if (!(eta > 0.0 && eta < 1.0)) throw PreconditionError("robust_learn: eta must lie in (0,1)");
    if (S.empty()) throw PreconditionError("robust_learn: empty training set");
    const auto start = std::chrono::steady_clock::now();

    const std::size_t n = S.dim();
    const auto D = static_cast<Eigen::Index>(feature_dim(n, degree));
    const auto m = static_cast<Eigen::Index>(S.size());
    const Eigen::Index N = D + m;

    double psi_max = 0.0;
    for (const auto& p : S) psi_max = std::max(psi_max, features(p.x, degree).norm());

    LearnResult res;
    res.kappa = opts.kappa ? *opts.kappa : 1e-6 * (1.0 + psi_max);
    res.achieved_gamma = degree == 1 ? 1.0 : rounding_gamma(n, opts.gamma_constant);
    const double Nd = static_cast<double>(N);
    const long T = opts.max_iterations > 0
                       ? opts.max_iterations
                       : static_cast<long>(std::ceil(10.0 * Nd * Nd *
                                                     std::log(Nd * static_cast<double>(m) / res.kappa)));
    const double radius = std::sqrt(1.0 + static_cast<double>(m) * psi_max * psi_max);

    OracleContext ctx;
    ctx.S = &S;
    ctx.degree = degree;
    ctx.delta = delta;
    ctx.gamma = res.achieved_gamma;
    ctx.eta_prime = eta / (static_cast<double>(m) * static_cast<double>(T));
    ctx.kappa = res.kappa;
    ctx.quad = opts.quad;
    ctx.quad.gamma_constant = opts.gamma_constant;

    const double floor_axis = res.kappa / 100.0;
    const Rng base(seed);
    auto timed_out = [&] {
        if (opts.max_seconds <= 0.0) return false;
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() > opts.max_seconds;
    };
    auto record = [&](const Cut& c, double depth, double logvol) {
        if (!opts.record_transcript) return;
        res.transcript.push_back({static_cast<int>(res.iterations), c.kind, c.index, depth, logvol});
    };

    Vector theta = Vector::Zero(N);
    res.status = LearnStatus::BudgetExhausted;
    if (opts.method == LearnMethod::Ellipsoid) {
        Ellipsoid E(Vector::Zero(N), radius);
        for (; res.iterations < T && !timed_out(); ++res.iterations) {
            theta = E.center();
            OracleReport rep = separation_oracle(theta, ctx, base.derive(1, static_cast<std::uint64_t>(res.iterations)).next_u64());
            res.oracle_calls += rep.box_calls;
            for (auto& note : rep.notes) res.notes.push_back(std::move(note));
            if (!rep.cut) {
                res.status = LearnStatus::Success;
                break;
            }
            const double depth = E.cut(rep.cut->a, rep.cut->b);
            record(*rep.cut, depth, E.log_volume());
            if (depth >= 1.0 || E.mean_semi_axis() < floor_axis) {
                res.status = LearnStatus::Infeasible;
                ++res.iterations;
                break;
            }
        }
        res.log_volume = E.log_volume();
        if (res.status != LearnStatus::Success) theta = E.center();
    } else {
        std::vector<Cut> cuts;
        for (; res.iterations < T && !timed_out(); ++res.iterations) {
            OracleReport rep = separation_oracle(theta, ctx, base.derive(1, static_cast<std::uint64_t>(res.iterations)).next_u64());
            res.oracle_calls += rep.box_calls;
            for (auto& note : rep.notes) res.notes.push_back(std::move(note));
            if (!rep.cut) {
                res.status = LearnStatus::Success;
                break;
            }
            const double depth = (rep.cut->a.dot(theta) - rep.cut->b) / std::max(rep.cut->a.norm(), 1e-300);
            cuts.push_back(std::move(*rep.cut));
            const ChebyshevCenter cc = chebyshev_center(cuts, N, radius);
            if (cc.status == ChebyshevCenter::Status::Failed) {
                res.notes.push_back("cutting plane: LP failed, iteration " + std::to_string(res.iterations));
                break;
            }
            const double logvol = cc.status == ChebyshevCenter::Status::Empty
                                      ? -std::numeric_limits<double>::infinity()
                                      : Nd * std::log(std::max(cc.radius, 1e-300));
            record(cuts.back(), depth, logvol);
            if (cc.status == ChebyshevCenter::Status::Empty || cc.radius < floor_axis) {
                res.status = LearnStatus::Infeasible;
                ++res.iterations;
                break;
            }
            theta = cc.center;
            res.log_volume = logvol;
        }
    }

    res.theta = theta;
    res.f = PtfClassifier(poly_from_coeff(theta.head(D), n, degree));
    const BoxOracle check = n <= 6 ? exact_box_oracle() : sdp_box_oracle(0.01, base.derive(2, 0).next_u64(), opts.quad);
    res.train_robust_error =
        robust_empirical_error(res.f, S, delta / res.achieved_gamma, check, FlipMode::Label);
    return res;
}

}  // namespace rptf
