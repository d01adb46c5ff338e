#pragma once
// Point-set generators built from a quadratic program instance (A, s) and
// empirical verifiers for their structural properties. Points live in
// R^{n+1} with coordinates (x, z).

#include "rptf/boxmax.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rptf {

enum class GadgetKind { Main, Appendix, Redundant };

std::string_view gadget_kind_name(GadgetKind k) noexcept;
GadgetKind parse_gadget_kind(std::string_view s);

struct GadgetInstance {
    GadgetKind kind = GadgetKind::Main;
    LabeledSet S;
    /// Source matrix after any rescaling.
    Matrix A;
    double scale_factor = 1.0;
    double s = 0.0;  ///< threshold (main)
    double delta = 0.0;
    double epsilon = 0.0;
    double tau = 0.0;
    double tau_prime = 0.0;
    double gamma_gadget = 0.0;
    double beta = 0.0;  ///< appendix / redundant
    double alpha = 0.0;
    double rho = 0.0;
    std::size_t m = 0;  ///< number of sampled base points
    std::uint64_t seed = 0;
    /// Base samples (x^(l), z^(l)) with z = x^T A x (appendix / redundant).
    Matrix base_x;
    Vector base_z;
    /// Indices in S of the (u, v) pair built from base sample l.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    /// Points that are copies of (0, alpha).
    std::size_t type_a = 0;
    std::vector<std::string> warnings;

    std::size_t n() const noexcept { return static_cast<std::size_t>(A.rows()); }
    /// x^T A x - z (main) or z - x^T A x (appendix / redundant), in n+1 variables.
    PtfClassifier intended() const;
};

/// 6 + 4n + 12 C(n,2)
std::size_t main_gadget_count(std::size_t n);

struct MainGadgetOptions {
    /// Constants in front of tau and tau'.
    double tau_constant = 1.0;
    double tau_prime_constant = 1.0;
    /// Every nonzero |a_ij| is pushed above max(min_entry, entry_over_eps * eps).
    double min_entry = 10.0;
    double entry_over_eps = 2.0;
};

/// A symmetric with zero diagonal, s > 100, n >= 2.
GadgetInstance gen_main_gadget(const Matrix& A, double s, const MainGadgetOptions& opts = {});

struct AppendixOptions {
    /// rho = rho_constant * delta * n^{3/2} * m unless rho is given.
    double rho_constant = 10.0;
    std::optional<double> rho;
    /// Resample x until |<A_i, x>| > delta ||A_i||_1 for every nonzero row.
    bool enforce_event = true;
    int max_resamples = 1000;
};

/// m > (n+1)^2; 2m + 1 points.
GadgetInstance gen_appendix_gadget(const Matrix& A, double beta, double delta, std::size_t m, std::uint64_t seed,
                                   const AppendixOptions& opts = {});

struct RedundantOptions {
    AppendixOptions appendix;
    /// Uniform jitter of size 1e-9 delta on the (0, alpha) copies.
    bool jitter = false;
    /// Removal fraction to check the counting argument for (warnings only).
    std::optional<double> epsilon;
};

/// n^3 copies of (0, alpha) and n^3 pairs; requires n^3 > (n+1)^2 and n <= 8.
GadgetInstance gen_redundant_gadget(const Matrix& A, double beta, double delta, std::uint64_t seed,
                                    const RedundantOptions& opts = {});

struct RedundancyCheck {
    std::size_t n = 0;
    double epsilon = 0.0;
    std::size_t total = 0;
    std::size_t removed = 0;  ///< floor(epsilon * total)
    bool type_a_survives = false;
    std::size_t intact_pairs_min = 0;
    std::size_t pairs_needed = 0;  ///< (n+1)^2
    bool pairs_ok = false;
    bool ok = false;
};

/// Worst case over all removals of floor(epsilon * 3n^3) points.
RedundancyCheck redundancy_check(std::size_t n, double epsilon);

struct RankReport {
    std::size_t r = 0;
    std::size_t rank = 0;
    Vector singular_values;
    /// Null direction in monomial coordinates (1, x, x_i x_j (i<=j), x_i z, z^2, z),
    /// unit norm, sign fixed so the z coefficient is positive.
    Vector null_vector;
    Vector expected;  ///< unit coefficient vector of z - x^T A x
    double cosine = 0.0;
};

std::size_t monomial_rank_dim(std::size_t n);
Vector monomial_row(const Vector& x, double z);

RankReport verify_uniqueness_rank(const GadgetInstance& inst, double rel_threshold = 1e-8);

struct RobustnessVerdict {
    double plain_error = 0.0;
    std::size_t non_robust = 0;
    std::vector<std::size_t> failing;  ///< indices with a strict flip inside the box
    /// Points whose box only touches the decision surface (best flip value
    /// within tie_tolerance of zero); robust on the open box.
    std::vector<std::size_t> touching;
    bool robust = false;  ///< zero plain error and no strict flip at any point
    std::string method;
};

enum class RobustnessMethod { Auto, Exact, Grid, Sdp };

struct RobustnessOptions {
    /// Auto: grid for n+1 <= 3, exact faces up to 8 variables, else SDP
    /// certificates (a point counts as robust only when certified).
    RobustnessMethod method = RobustnessMethod::Auto;
    int grid_points = 101;
    /// Relative to 1 + |c| + delta' ||b||_1 + delta'^2 sum |A_ij| of the flip polynomial.
    double tie_tolerance = 1e-9;
    std::uint64_t seed = 0;
    int jobs = 1;
};

/// Checks zero plain error and delta'-robustness of a candidate PTF on S.
RobustnessVerdict verify_no_robust_ptf_candidates(const GadgetInstance& inst, const PtfClassifier& candidate,
                                                  double delta_prime, const RobustnessOptions& opts = {});

struct PairCheck {
    std::size_t pairs = 0;
    std::size_t exact = 0;  ///< pairs whose every coordinate differs by exactly 2 delta
    bool ok = false;
};

PairCheck verify_pair_separation(const GadgetInstance& inst);

}  // namespace rptf
