#pragma once
// Adversarial search / robustness certification for PTFs at a single point
// and over a labeled set.

#include "rptf/boxmax.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rptf {

enum class Verdict { Found, Certified, Unknown };

std::string_view verdict_name(Verdict v) noexcept;

struct AttackOutcome {
    Verdict verdict = Verdict::Unknown;
    std::optional<Vector> z;  ///< present iff Found
    double linf = 0.0;
    /// Model value g(x* + z) at the returned perturbation (Found), or the
    /// best value seen otherwise.
    double margin = 0.0;
    /// Upper bound on the flip polynomial over the delta ball (Certified).
    std::optional<double> certificate_value;
    double gamma_used = 1.0;
    /// Best flip-polynomial value reached by the search.
    double flip_value = 0.0;
    /// Relaxation value when one was computed.
    std::optional<double> sdp_value;
    /// Error text when the point could not be processed.
    std::string error;
};

struct AttackOptions {
    FlipMode mode = FlipMode::Model;
    QuadMaxOptions quad;
};

/// Label mode needs y; model mode uses y* = sgn(g(x*)).
AttackOutcome attack_ptf(const PtfClassifier& f, const Vector& x_star, double delta, double eta,
                         std::optional<int> y, std::uint64_t seed, const AttackOptions& opts = {});

struct BatchSummary {
    std::size_t total = 0;
    std::size_t found = 0;
    std::size_t certified = 0;
    std::size_t unknown = 0;
    std::size_t errors = 0;
    /// certified / total lower-bounds the delta-robust accuracy.
    double robust_accuracy_lower = 0.0;
    /// 1 - found / total upper-bounds the delta-robust accuracy.
    double robust_accuracy_upper = 1.0;
    /// found / total lower-bounds the (gamma delta)-robust error.
    double robust_error_lower_at_gamma = 0.0;
    double gamma = 1.0;
};

struct BatchResult {
    std::vector<AttackOutcome> outcomes;
    BatchSummary summary;
};

/// Point i uses the stream derived from (seed, i), so results do not depend
/// on jobs. Per-point errors are recorded, not thrown.
BatchResult batch_attack(const PtfClassifier& f, const LabeledSet& S, double delta, double eta,
                         std::uint64_t seed, const AttackOptions& opts = {}, int jobs = 1);

BatchSummary summarize(const std::vector<AttackOutcome>& outcomes);

/// Runs body(i) for i in [0, count) on up to jobs threads.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

/// Per-example seed derived from a run seed.
std::uint64_t example_seed(std::uint64_t seed, std::size_t index) noexcept;

}  // namespace rptf
