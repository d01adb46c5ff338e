#pragma once
// Robust empirical risk minimization over degree-1/2 PTFs. The unknowns are
// the monomial coefficients w of g together with one slack r_i per sample:
//
//   y_i <w, psi(x_i)> >= r_i + kappa
//   y_i (g(x_i) - g(x_i + z)) <= r_i     for all ||z||_inf <= delta
//   ||w||_2 <= 1
//
// The second family is separated approximately by the box maximizer at
// budget delta / gamma.

#include "rptf/attack.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rptf {

/// Number of monomial coefficients: n(n+1)/2 + n + 1 (degree 2), n + 1.
std::size_t feature_dim(std::size_t n, int degree);

/// Monomials ordered as {x_i x_j}_{i<=j} (row-major), {x_i}, 1.
Vector features(const Vector& x, int degree);

/// g with A_ii = w_ii, A_ij = A_ji = w_ij / 2, b = w_x, c = w_1.
QuadPoly poly_from_coeff(const Vector& w, std::size_t n, int degree);
/// Inverse of poly_from_coeff (the degree-2 layout is used when degree = 2).
Vector coeff_from_poly(const QuadPoly& g, int degree);

/// Halfspace a^T theta <= b over theta = (w, r).
struct Cut {
    enum class Kind { Norm, Margin, Robust };
    Kind kind = Kind::Norm;
    std::size_t index = 0;  ///< sample index (Margin / Robust)
    Vector a;
    double b = 0.0;
    Vector z;  ///< perturbation behind a Robust cut
};

std::string_view cut_kind_name(Cut::Kind k) noexcept;

struct OracleContext {
    const LabeledSet* S = nullptr;
    int degree = 1;
    double delta = 0.0;
    double gamma = 1.0;
    double eta_prime = 0.1;
    double kappa = 1e-6;
    QuadMaxOptions quad;
};

struct OracleReport {
    std::optional<Cut> cut;  ///< empty: feasible
    int box_calls = 0;
    std::vector<std::string> notes;  ///< oracle failures treated as no-cut
};

/// Norm cut, then the lowest-index margin violation, then robust cuts in
/// index order. theta has D + m entries.
OracleReport separation_oracle(const Vector& theta, const OracleContext& ctx, std::uint64_t seed);

enum class LearnStatus { Success, Infeasible, BudgetExhausted };
enum class LearnMethod { Ellipsoid, CuttingPlane };

std::string_view learn_status_name(LearnStatus s) noexcept;

struct TranscriptEntry {
    int iteration = 0;
    Cut::Kind kind = Cut::Kind::Norm;
    std::size_t index = 0;
    double depth = 0.0;       ///< normalized violation of the cut at the iterate
    double log_volume = 0.0;  ///< log volume of the localizer after the cut
};

struct LearnOptions {
    /// Ellipsoid is the reference; the cutting-plane localizer is usually much faster.
    LearnMethod method = LearnMethod::CuttingPlane;
    /// 0: ceil(10 N^2 ln(N m / kappa)) with N = D + m.
    long max_iterations = 0;
    /// 0 disables the wall-clock budget.
    double max_seconds = 0.0;
    /// Overrides 1e-6 (1 + max_i ||psi(x_i)||).
    std::optional<double> kappa;
    double gamma_constant = 4.0;
    QuadMaxOptions quad;
    bool record_transcript = false;
};

struct LearnResult {
    PtfClassifier f;
    Vector theta;
    double achieved_gamma = 1.0;
    /// Robust error of f on S at delta / gamma (exact oracle for small n).
    double train_robust_error = 0.0;
    long oracle_calls = 0;
    long iterations = 0;
    double kappa = 0.0;
    double log_volume = 0.0;
    LearnStatus status = LearnStatus::BudgetExhausted;
    std::vector<TranscriptEntry> transcript;
    std::vector<std::string> notes;
};

LearnResult robust_learn(const LabeledSet& S, int degree, double delta, double eta, std::uint64_t seed,
                         const LearnOptions& opts = {});

/// ceil(c (binom(n + degree, degree) + ln(1/eta)) / epsilon^2)
std::size_t sample_size(int degree, std::size_t n, double epsilon, double eta, double c = 8.0);

/// Deep-cut ellipsoid {theta : (theta - center)^T P^{-1} (theta - center) <= 1}
/// stored through a factor P = Q Q^T.
class Ellipsoid {
public:
    Ellipsoid(Vector center, double radius);

    const Vector& center() const noexcept { return center_; }
    Matrix shape() const { return Q_ * Q_.transpose(); }
    double log_volume() const noexcept { return log_det_q_; }  ///< up to the unit-ball constant
    /// Geometric mean of the semi-axes.
    double mean_semi_axis() const;
    std::size_t dim() const noexcept { return static_cast<std::size_t>(center_.size()); }

    /// Keeps {a^T theta <= b}. Returns the depth alpha; alpha >= 1 means the
    /// ellipsoid misses the halfspace and nothing is changed.
    double cut(const Vector& a, double b);

private:
    Vector center_;
    Matrix Q_;
    double log_det_q_ = 0.0;
};

}  // namespace rptf
