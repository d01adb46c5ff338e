#pragma once
// Counter-based random streams. A stream is identified by (seed, stream id);
// the n-th draw is a pure function of (seed, stream id, n), so per-trial and
// per-example streams are reproducible regardless of evaluation order.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace rptf {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_(mix64(mix64(seed) ^ (stream * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL))) {}

    /// Independent child stream, e.g. one per rounding trial or per example.
    [[nodiscard]] Rng derive(std::uint64_t tag, std::uint64_t index) const noexcept {
        return Rng(key_ ^ mix64(tag), index);
    }

    std::uint64_t next_u64() noexcept { return mix64(key_ + 0x9e3779b97f4a7c15ULL * (++counter_)); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) noexcept {
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
    }

    /// Standard normal via Box-Muller; pairs are cached.
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    void fill_normal(std::span<double> out) noexcept {
        for (auto& v : out) v = normal();
    }

    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace rptf
