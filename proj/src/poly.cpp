#include "rptf/poly.hpp"

#include "rptf/errors.hpp"
#include "rptf/kernels.hpp"

#include <string>

namespace rptf {

namespace {

void require_dim(std::size_t expected, std::size_t got, const char* what) {
    if (expected != got)
        throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(expected) +
                             ", got " + std::to_string(got));
}

}  // namespace

QuadPoly::QuadPoly(std::size_t n)
    : A_(Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))),
      b_(Vector::Zero(static_cast<Eigen::Index>(n))) {}

QuadPoly::QuadPoly(Matrix A, Vector b, double c) : A_(std::move(A)), b_(std::move(b)), c_(c) {
    if (A_.rows() != A_.cols()) throw DimensionError("QuadPoly: A must be square");
    require_dim(static_cast<std::size_t>(A_.rows()), static_cast<std::size_t>(b_.size()), "QuadPoly");
    const Eigen::Index n = A_.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double s = 0.5 * (A_(i, j) + A_(j, i));
            A_(i, j) = s;
            A_(j, i) = s;
        }
}

QuadPoly QuadPoly::linear(Vector b, double c) {
    const auto n = b.size();
    return QuadPoly(Matrix::Zero(n, n), std::move(b), c);
}

int QuadPoly::degree() const noexcept {
    if (!A_.isZero(0.0)) return 2;
    if (!b_.isZero(0.0)) return 1;
    return 0;
}

bool QuadPoly::has_zero_diagonal() const noexcept { return A_.diagonal().isZero(0.0); }

double QuadPoly::operator()(std::span<const double> x) const {
    require_dim(n(), x.size(), "evaluate");
    const std::size_t dim = n();
    double q = 0.0;
    if (dim > 0 && !A_.isZero(0.0))
        q = kernels::quadform({A_.data(), dim * dim}, dim, x);
    return q + kernels::dot(as_span(b_), x) + c_;
}

Vector QuadPoly::gradient(const Vector& x) const {
    require_dim(n(), static_cast<std::size_t>(x.size()), "gradient");
    return 2.0 * (A_ * x) + b_;
}

QuadPoly QuadPoly::scaled(double s) const { return QuadPoly(s * A_, s * b_, s * c_); }

double evaluate(const QuadPoly& g, const Vector& x) { return g(x); }

QuadPoly shift(const QuadPoly& g, const Vector& x0) {
    require_dim(g.n(), static_cast<std::size_t>(x0.size()), "shift");
    return QuadPoly(g.A(), 2.0 * (g.A() * x0) + g.b(), g(x0));
}

QuadPoly negate_for_label(const QuadPoly& g, int y) {
    if (y != 1 && y != -1) throw PreconditionError("negate_for_label: y must be +1 or -1");
    return g.scaled(-static_cast<double>(y));
}

LabeledSet::LabeledSet(std::size_t dim, std::optional<double> delta) : dim_(dim) {
    if (delta) set_delta(*delta);
}

void LabeledSet::add(Vector x, int y) {
    require_dim(dim_, static_cast<std::size_t>(x.size()), "LabeledSet::add");
    if (y != 1 && y != -1) throw PreconditionError("LabeledSet: labels must be +1 or -1");
    points_.push_back({std::move(x), y});
}

void LabeledSet::set_delta(double delta) {
    if (!(delta >= 0.0)) throw PreconditionError("LabeledSet: delta must be nonnegative");
    delta_ = delta;
}

double robust_empirical_error(const PtfClassifier& f, const LabeledSet& S, double delta,
                              const BoxOracle& oracle, FlipMode mode) {
    if (!(delta >= 0.0)) throw PreconditionError("robust_empirical_error: delta must be >= 0");
    require_dim(f.n(), S.dim(), "robust_empirical_error");
    if (S.empty()) return 0.0;
    std::size_t flipped = 0;
    for (const auto& p : S) {
        const int y = mode == FlipMode::Label ? p.y : f.classify(p.x);
        const QuadPoly h = negate_for_label(shift(f.poly(), p.x), y);
        const double best = delta == 0.0 ? h.c() : oracle(h, delta);
        if (flip_from_value(best, y)) ++flipped;
    }
    return static_cast<double>(flipped) / static_cast<double>(S.size());
}

double empirical_error(const PtfClassifier& f, const LabeledSet& S) {
    require_dim(f.n(), S.dim(), "empirical_error");
    if (S.empty()) return 0.0;
    std::size_t wrong = 0;
    for (const auto& p : S)
        if (f.classify(p.x) != p.y) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(S.size());
}

}  // namespace rptf
