#include "rptf/lp.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace rptf::lp {

Result simplex(const Matrix& A, const Vector& b, const Vector& c, long max_pivots) {
    const Eigen::Index rows = A.rows();
    const Eigen::Index cols = A.cols();
    // Tableau columns: original | artificial | rhs.
    Matrix T = Matrix::Zero(rows, cols + rows + 1);
    Vector sign(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        sign[r] = b[r] < 0.0 ? -1.0 : 1.0;
        T.row(r).head(cols) = sign[r] * A.row(r);
        T(r, cols + r) = 1.0;
        T(r, cols + rows) = sign[r] * b[r];
    }
    std::vector<Eigen::Index> basis(static_cast<std::size_t>(rows));
    for (Eigen::Index r = 0; r < rows; ++r) basis[r] = cols + r;
    constexpr double eps = 1e-11;
    Result res;
    long pivots = 0;

    auto run = [&](const Vector& cost, Eigen::Index usable) -> Status {
        for (;;) {
            if (pivots++ > max_pivots) return Status::IterationLimit;
            Vector cb(rows);
            for (Eigen::Index r = 0; r < rows; ++r) cb[r] = cost[basis[r]];
            Eigen::Index enter = -1;
            for (Eigen::Index j = 0; j < usable; ++j) {
                const double reduced = cost[j] - cb.dot(T.col(j));
                if (reduced < -eps) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return Status::Optimal;
            Eigen::Index leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (Eigen::Index r = 0; r < rows; ++r) {
                const double a = T(r, enter);
                if (a > eps) {
                    const double ratio = T(r, cols + rows) / a;
                    if (ratio < best - 1e-14 || (ratio <= best + 1e-14 && leave >= 0 && basis[r] < basis[leave])) {
                        best = ratio;
                        leave = r;
                    }
                }
            }
            if (leave < 0) return Status::Unbounded;
            T.row(leave) /= T(leave, enter);
            for (Eigen::Index r = 0; r < rows; ++r)
                if (r != leave && T(r, enter) != 0.0) T.row(r) -= T(r, enter) * T.row(leave);
            basis[leave] = enter;
        }
    };

    Vector phase1 = Vector::Zero(cols + rows);
    phase1.tail(rows).setOnes();
    res.status = run(phase1, cols + rows);
    if (res.status != Status::Optimal) return res;
    double art = 0.0;
    for (Eigen::Index r = 0; r < rows; ++r)
        if (basis[r] >= cols) art += T(r, cols + rows);
    if (art > 1e-9 * std::max(1.0, b.cwiseAbs().sum())) {
        res.status = Status::Infeasible;
        return res;
    }
    Vector phase2 = Vector::Zero(cols + rows);
    phase2.head(cols) = c;
    // Artificial columns stay in the tableau (they carry B^{-1}) but may not
    // re-enter; degenerate artificials left in the basis cost nothing.
    res.status = run(phase2, cols);
    if (res.status != Status::Optimal) return res;

    res.x = Vector::Zero(cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        if (basis[r] < cols) res.x[basis[r]] = T(r, cols + rows);
    Vector cb(rows);
    for (Eigen::Index r = 0; r < rows; ++r) cb[r] = phase2[basis[r]];
    // B^{-1} of the sign-adjusted system sits in the artificial block.
    const Matrix Binv = T.block(0, cols, rows, rows);
    res.y = (cb.transpose() * Binv).transpose();
    for (Eigen::Index r = 0; r < rows; ++r) res.y[r] *= sign[r];
    res.value = c.dot(res.x);
    return res;
}

Result maximize(const Vector& c, const Matrix& G, const Vector& h, long max_pivots) {
    const Eigen::Index n = G.cols();
    const Eigen::Index m = G.rows();
    // z = p - q, slack s:  [G -G I] (p, q, s) = h
    Matrix A(m, 2 * n + m);
    A << G, -G, Matrix::Identity(m, m);
    Vector cost = Vector::Zero(2 * n + m);
    cost.head(n) = -c;
    cost.segment(n, n) = c;
    Result r = simplex(A, h, cost, max_pivots);
    if (r.status == Status::Optimal) {
        r.x = (r.x.head(n) - r.x.segment(n, n)).eval();
        r.value = c.dot(r.x);
    }
    return r;
}

}  // namespace rptf::lp
