#pragma once
// Degree <= 2 polynomials g(x) = x^T A x + b^T x + c and the threshold
// classifiers sgn(g) built on them. sgn(0) = +1 throughout.

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace rptf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline std::span<const double> as_span(const Vector& v) noexcept {
    return {v.data(), static_cast<std::size_t>(v.size())};
}

/// sgn with the +1-at-zero convention.
constexpr int sgn(double t) noexcept { return t >= 0.0 ? 1 : -1; }

class QuadPoly {
public:
    /// Constant zero polynomial in n variables.
    explicit QuadPoly(std::size_t n = 0);
    /// A is replaced by (A + A^T) / 2, which is bit-for-bit symmetric.
    QuadPoly(Matrix A, Vector b, double c);
    static QuadPoly linear(Vector b, double c);

    std::size_t n() const noexcept { return static_cast<std::size_t>(b_.size()); }
    const Matrix& A() const noexcept { return A_; }
    const Vector& b() const noexcept { return b_; }
    double c() const noexcept { return c_; }

    /// 0 for constants, 1 when A == 0, else 2.
    int degree() const noexcept;
    bool has_zero_diagonal() const noexcept;

    double operator()(std::span<const double> x) const;
    double operator()(const Vector& x) const { return (*this)(as_span(x)); }

    /// 2 A x + b
    Vector gradient(const Vector& x) const;

    QuadPoly scaled(double s) const;

private:
    Matrix A_;
    Vector b_;
    double c_ = 0.0;
};

double evaluate(const QuadPoly& g, const Vector& x);

/// h(z) = g(x0 + z), i.e. (A, 2 A x0 + b, g(x0)).
QuadPoly shift(const QuadPoly& g, const Vector& x0);

/// -y * g; y must be +1 or -1.
QuadPoly negate_for_label(const QuadPoly& g, int y);

class PtfClassifier {
public:
    PtfClassifier() = default;
    explicit PtfClassifier(QuadPoly g) : g_(std::move(g)) {}

    const QuadPoly& poly() const noexcept { return g_; }
    int degree() const noexcept { return g_.degree() == 2 ? 2 : 1; }
    std::size_t n() const noexcept { return g_.n(); }
    int classify(const Vector& x) const { return sgn(g_(x)); }

private:
    QuadPoly g_;
};

struct LabeledPoint {
    Vector x;
    int y = 1;
};

class LabeledSet {
public:
    LabeledSet() = default;
    explicit LabeledSet(std::size_t dim, std::optional<double> delta = std::nullopt);

    /// Throws DimensionError / PreconditionError on ragged points or bad labels.
    void add(Vector x, int y);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    const LabeledPoint& operator[](std::size_t i) const { return points_[i]; }
    auto begin() const noexcept { return points_.begin(); }
    auto end() const noexcept { return points_.end(); }

    std::optional<double> delta() const noexcept { return delta_; }
    void set_delta(double delta);

private:
    std::size_t dim_ = 0;
    std::vector<LabeledPoint> points_;
    std::optional<double> delta_;
};

/// Returns max_{||z||_inf <= delta} h(z) (or a lower/upper estimate of it,
/// depending on the oracle).
using BoxOracle = std::function<double(const QuadPoly& h, double delta)>;

/// Whom a perturbation has to disagree with: the given label, or the
/// classifier's own prediction at the unperturbed point.
enum class FlipMode { Label, Model };

/// Whether the best value of the flip polynomial -y*g(x+z) indicates an
/// adversarial example, given sgn(0) = +1: for y = +1 a flip needs
/// g < 0 (value > 0); for y = -1 it needs g >= 0 (value >= 0).
constexpr bool flip_from_value(double value, int y) noexcept {
    return value > 0.0 || (value == 0.0 && y < 0);
}

/// Fraction of points for which some ||z||_inf <= delta flips sgn(g(x+z))
/// away from the label (or from the model's prediction in Model mode).
/// Exact when the oracle is exact; an SDP/rounding oracle gives the
/// gamma*delta over-estimate.
double robust_empirical_error(const PtfClassifier& f, const LabeledSet& S, double delta,
                              const BoxOracle& oracle, FlipMode mode = FlipMode::Label);

/// Plain 0/1 misclassification rate.
double empirical_error(const PtfClassifier& f, const LabeledSet& S);

}  // namespace rptf
