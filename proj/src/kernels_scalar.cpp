#include "rptf/kernels.hpp"

namespace rptf::kernels::scalar {

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double sum_squares(std::span<const double> a) noexcept { return dot(a, a); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void matvec(std::span<const double> m, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y) noexcept {
    for (std::size_t r = 0; r < rows; ++r) y[r] = dot(m.subspan(r * cols, cols), x);
}

double quadform(std::span<const double> m, std::size_t n, std::span<const double> x) noexcept {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r) s += x[r] * dot(m.subspan(r * n, n), x);
    return s;
}

}  // namespace rptf::kernels::scalar
