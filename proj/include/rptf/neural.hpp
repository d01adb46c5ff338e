#pragma once
// Two-layer ReLU networks f(x) = V relu(W x) + <v', x>: reduction of the flip
// search to the mixed l1 problem
//
//   max_{|z|_inf <= delta} max_{|y|_inf <= 1}
//       y^T A z + c1^T z + c2^T y - ||beta + B z||_1 + c0,
//
// its vector-program relaxation with asymmetric Gaussian rounding, a PGD
// baseline and brute-force oracles.

#include "rptf/attack.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace rptf {

struct TwoLayerNet {
    Matrix W;        ///< k x n
    Matrix V;        ///< c x k; one row = binary score, else one row per class
    Vector v_prime;  ///< n (zero when absent)

    std::size_t n() const noexcept { return static_cast<std::size_t>(W.cols()); }
    std::size_t k() const noexcept { return static_cast<std::size_t>(W.rows()); }
    std::size_t classes() const noexcept { return static_cast<std::size_t>(V.rows()); }

    /// Throws DimensionError on inconsistent shapes.
    void validate() const;
    /// V relu(W x) + <v', x> per row.
    Vector forward(const Vector& x) const;
    /// Binary: sgn(score). Multiclass: argmax, lowest index on ties.
    int predict(const Vector& x) const;
};

/// (argmax, second argmax) of forward(x); ties go to the lower index.
std::pair<int, int> target_second_best(const TwoLayerNet& net, const Vector& x);

/// Binary score f = v^T relu(W x) + <v', x> used by the reduction: row 0 for
/// binary nets, V_i - V_j (v' cancels) for a class pair.
struct BinaryScore {
    Vector v;
    Vector v_prime;
    Matrix W;
    double operator()(const Vector& x) const;
    Vector gradient(const Vector& x) const;  ///< relu'(0) = 0
};

BinaryScore binary_score(const TwoLayerNet& net, std::optional<std::pair<int, int>> target);

struct NnOptInstance {
    Matrix A;  ///< m1 x n
    Matrix B;  ///< m2 x n
    Vector beta;
    Vector c1;
    Vector c2;
    double c0 = 0.0;
    double delta = 0.0;
    int ell = 1;  ///< sgn f(x*)
    std::vector<int> rows_a;  ///< hidden units behind the rows of A
    std::vector<int> rows_b;

    std::size_t n() const noexcept { return static_cast<std::size_t>(c1.size()); }
    std::size_t m1() const noexcept { return static_cast<std::size_t>(A.rows()); }
    std::size_t m2() const noexcept { return static_cast<std::size_t>(B.rows()); }

    double objective(const Vector& z, const Vector& y) const;
    /// Objective with the best y = sgn(A z + c2), i.e. -ell f(x* + z).
    double objective(const Vector& z) const;
    /// max(1, sum_j |v_j| ||W_j||_1 delta + ||v'||_1 delta), set by reduce_net.
    double scale = 1.0;
};

/// Throws PreconditionError when f(x*) = 0.
NnOptInstance reduce_net(const TwoLayerNet& net, const Vector& x_star, double delta,
                         std::optional<std::pair<int, int>> target = std::nullopt);

struct NnSdpSolution {
    RowMatrix U;   ///< (n+1) x d, u_0 = e_0
    RowMatrix Vy;  ///< m1 x d
    Vector r;      ///< |beta_j + sum_i B_ji <u_i,u_0>|
    double objective = 0.0;  ///< exact (unsmoothed) value
    double feasibility = 0.0;
    double delta = 0.0;  ///< radius used for the u_i
    int sweeps = 0;
};

struct NnSdpOptions {
    double tol = 1e-6;
    int max_sweeps = 200000;
    int restarts = 3;
    int rank = 0;  ///< 0: n + m1 + 1
    double mu_start = 1e-2;
    double mu_end = 1e-8;
    /// ||v_j|| <= shrink (1 in the final relaxation).
    double v_shrink = 1.0;
    bool verbose = false;
};

class NnConvergenceError : public std::runtime_error {
public:
    NnConvergenceError(const std::string& what, NnSdpSolution best)
        : std::runtime_error(what), best_(std::move(best)) {}
    const NnSdpSolution& best() const noexcept { return best_; }

private:
    NnSdpSolution best_;
};

/// Block-coordinate ascent with |t| ~ sqrt(t^2 + mu^2), mu annealed. An
/// optional warm start z adds one restart seeded at the rank-1 embedding.
NnSdpSolution solve_nn_sdp(const NnOptInstance& inst, const NnSdpOptions& opts, std::uint64_t seed,
                           const std::optional<Vector>& warm = std::nullopt);

double nn_sdp_objective(const NnOptInstance& inst, const RowMatrix& U, const RowMatrix& Vy);

struct NnRoundOptions {
    int trials = 256;
    /// epsilon = a / sqrt(ln m1), clamped to (0, 1]; 1 when m1 <= 1.
    double a = 1.0;
    /// Trials with ||z||_inf > cap are not accepted; <= 0 disables.
    double cap = 0.0;
};

double rounding_epsilon(std::size_t m1, double a = 1.0);

struct NnRounding {
    Vector z;
    Vector y;  ///< clamped rounded y (diagnostic)
    double value = 0.0;  ///< objective(z) with the best y
    double linf = 0.0;
    bool within_cap = true;
    int trials = 0;
};

NnRounding round_nn(const NnSdpSolution& sol, const NnOptInstance& inst, const NnRoundOptions& opts,
                    std::uint64_t seed);

/// max(1, C sqrt(ln n ln k))
double net_gamma(std::size_t n, std::size_t k, double C = 4.0);

struct PgdOptions {
    int steps = 40;
    double step_size = 0.0;  ///< 0: delta / 10
    int restarts = 5;
};

struct NetAttackOptions {
    NnSdpOptions sdp;
    NnRoundOptions round;
    double alpha = 1.0;  ///< relaxation radius delta' = alpha delta
    double gamma_constant = 4.0;
    /// Seed one relaxation restart from the best PGD point.
    bool pgd_warm_start = true;
    PgdOptions pgd;
    std::optional<std::pair<int, int>> target;
};

/// Found needs a positive rounded objective inside the cap and a flip
/// confirmed by a forward pass; Certified needs sdp < -tol scale and
/// alpha >= 1.
AttackOutcome attack_net(const TwoLayerNet& net, const Vector& x_star, double delta, std::uint64_t seed,
                         const NetAttackOptions& opts = {});

AttackOutcome pgd_attack(const TwoLayerNet& net, const Vector& x_star, double delta, const PgdOptions& opts,
                         std::uint64_t seed, std::optional<std::pair<int, int>> target = std::nullopt);

struct NetMaxResult {
    Vector z;
    double value = 0.0;  ///< -ell f(x* + z)
    long evaluations = 0;
};

/// Grid (odd points per axis, about budget points total) plus all vertices
/// and a coordinatewise refinement; a lower bound on the box maximum.
NetMaxResult brute_force_net(const NnOptInstance& inst, long budget = 200000);

/// Exact box maximum by one LP per ReLU activation pattern (k <= 12).
NetMaxResult exact_net_max(const TwoLayerNet& net, const Vector& x_star, double delta,
                           std::optional<std::pair<int, int>> target = std::nullopt);

/// Full-batch subgradient descent on the hinge loss; produces small
/// binary nets for tests.
TwoLayerNet fit_net_sgd(const LabeledSet& S, std::size_t hidden, int epochs, double lr, std::uint64_t seed);

}  // namespace rptf
