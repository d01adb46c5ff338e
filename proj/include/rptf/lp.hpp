#pragma once
// Small dense linear programs (cutting-plane centers, exact oracles for
// piecewise-linear objectives on tiny instances).

#include "rptf/poly.hpp"

namespace rptf::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Result {
    Status status = Status::Optimal;
    Vector x;
    /// Equality multipliers B^{-T} c_B, i.e. a dual solution.
    Vector y;
    double value = 0.0;
};

/// min c^T x  s.t.  A x = b, x >= 0. Two-phase tableau simplex, Bland's rule.
Result simplex(const Matrix& A, const Vector& b, const Vector& c, long max_pivots = 100000);

/// max c^T z  s.t.  G z <= h, z free.
Result maximize(const Vector& c, const Matrix& G, const Vector& h, long max_pivots = 100000);

}  // namespace rptf::lp
