#pragma once
// Maximization of degree <= 2 polynomials over the l_inf ball
// B(0, delta) = [-delta, delta]^n:
//   * exact coordinatewise rule for linear forms,
//   * vector-program relaxation solved by block-coordinate ascent on a
//     factorized Gram matrix, followed by Gaussian rounding,
//   * brute-force oracles used to verify the above on small instances.

#include "rptf/poly.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace rptf {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct BoxMaxResult {
    Vector x_hat;
    double value = 0.0;   ///< g(x_hat)
    double linf = 0.0;    ///< ||x_hat||_inf
    double blowup = 1.0;  ///< linf / delta
    int trials_used = 0;
    /// linf <= cap * delta for the cap the caller asked for (always true for
    /// exact paths).
    bool within_cap = true;
    /// Relaxation value, present when the SDP path ran.
    std::optional<double> sdp_value;
    /// tol * scale used for the relaxation, 0 on exact paths.
    double sdp_slack = 0.0;
};

/// x_i = delta * sgn(b_i) (sgn(0) = +1), value = delta ||b||_1 + c.
BoxMaxResult maximize_linear(const Vector& b, double c, double delta);

/// max sum A_ij <u_i,u_j> + sum b_i <u_i,u_0> + c
/// s.t. ||u_i||^2 <= delta^2, ||u_0||^2 = 1.
struct SdpInstance {
    QuadPoly g;
    double delta = 0.0;

    /// max(1, |A|_max n delta^2, |b|_max n delta, |c|)
    double scale() const;
    /// Objective of an arbitrary factor U (rows u_0..u_n).
    double objective(const RowMatrix& U) const;
};

SdpInstance build_sdp(const QuadPoly& g, double delta);

struct SdpSolution {
    /// (n+1) x d, rows u_0, u_1, ..., u_n. The solver keeps u_0 = e_0.
    RowMatrix U;
    double objective = 0.0;
    /// max(max_i (||u_i||^2 - delta^2)_+, | ||u_0||^2 - 1 |)
    double feasibility = 0.0;
    double delta = 0.0;
    int sweeps = 0;
    int restarts_run = 0;
};

struct SdpOptions {
    double tol = 1e-6;
    int max_sweeps = 20000;
    int restarts = 3;
    /// Factor rank d; 0 selects n + 2.
    int rank = 0;
    /// Emit one JSON line per sweep to stderr.
    bool verbose = false;
};

class SdpConvergenceError : public std::runtime_error {
public:
    SdpConvergenceError(const std::string& what, SdpSolution best, double last_improvement)
        : std::runtime_error(what), best_(std::move(best)), last_improvement_(last_improvement) {}
    const SdpSolution& best() const noexcept { return best_; }
    double last_improvement() const noexcept { return last_improvement_; }

private:
    SdpSolution best_;
    double last_improvement_;
};

/// Block-coordinate ascent; throws SdpConvergenceError after max_sweeps.
SdpSolution solve_sdp(const SdpInstance& inst, const SdpOptions& opts, std::uint64_t seed);

/// The "C sqrt(log n)" factor of the rounding guarantee, floored at 1 so that
/// n = 1 (log n = 0) still admits the exact solution.
double rounding_gamma(std::size_t n, double C = 4.0);

struct RoundingOptions {
    int trials = 64;
    /// Solutions with ||x||_inf > cap * delta are not accepted; <= 0 disables.
    double cap = 0.0;
};

/// x_i = <u_i,u_0> + <u_i_perp, zeta>, zeta standard Gaussian orthogonal to
/// u_0; returns the best accepted trial.
BoxMaxResult gaussian_round(const SdpSolution& sol, const QuadPoly& g, const RoundingOptions& opts,
                            std::uint64_t seed);

struct QuadMaxOptions {
    /// trials = ceil(K ln(1/eta))
    double trials_constant = 8.0;
    /// Acceptance radius constant C in C sqrt(log n) delta.
    double gamma_constant = 4.0;
    SdpOptions sdp;
    /// Clip the rounded point into the delta box and re-evaluate.
    bool clip = false;
};

int rounding_trials(double eta, double K = 8.0);

/// build_sdp -> solve_sdp -> gaussian_round. Degree <= 1 inputs take the exact
/// linear path (bit-identical to maximize_linear).
BoxMaxResult maximize_quadratic(const QuadPoly& g, double delta, double eta, std::uint64_t seed,
                                const QuadMaxOptions& opts = {});

enum class BruteMode {
    Vertex,  ///< all 2^n corners, exact for zero-diagonal A
    Grid,    ///< uniform grid + coordinatewise golden-section refinement
    Faces,   ///< exact: stationary point of every face of the box
};

BoxMaxResult brute_force_boxmax(const QuadPoly& g, double delta, BruteMode mode, int grid_points = 401);

/// Exact oracle for small n: Vertex when the diagonal is zero, else Faces.
BoxOracle exact_box_oracle();
/// Oracle returning the best rounded value of maximize_quadratic (within the
/// gamma*delta acceptance radius), i.e. an over-estimate of the delta-error.
BoxOracle sdp_box_oracle(double eta, std::uint64_t seed, QuadMaxOptions opts = {});

}  // namespace rptf
