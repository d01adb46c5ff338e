#include "rptf/attack.hpp"

#include "rptf/errors.hpp"
#include "rptf/rng.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace rptf {

std::string_view verdict_name(Verdict v) noexcept {
    switch (v) {
        case Verdict::Found: return "found";
        case Verdict::Certified: return "certified";
        case Verdict::Unknown: break;
    }
    return "unknown";
}

std::uint64_t example_seed(std::uint64_t seed, std::size_t index) noexcept {
    return Rng(seed).derive(0xe8a3, index).next_u64();
}

AttackOutcome attack_ptf(const PtfClassifier& f, const Vector& x_star, double delta, double eta,
                         std::optional<int> y, std::uint64_t seed, const AttackOptions& opts) {
    if (static_cast<std::size_t>(x_star.size()) != f.n())
        throw DimensionError("attack_ptf: x_star has dimension " + std::to_string(x_star.size()) +
                             ", model has " + std::to_string(f.n()));
    if (!(delta > 0.0)) throw PreconditionError("attack_ptf: delta must be > 0");
    if (!(eta > 0.0 && eta < 1.0)) throw PreconditionError("attack_ptf: eta must lie in (0,1)");
    int ystar = 0;
    if (opts.mode == FlipMode::Label) {
        if (!y) throw PreconditionError("attack_ptf: label mode needs a label");
        ystar = *y;
    } else {
        ystar = f.classify(x_star);
    }
    const QuadPoly h = negate_for_label(shift(f.poly(), x_star), ystar);

    AttackOutcome out;
    if (f.poly().degree() <= 1) {
        const BoxMaxResult r = maximize_linear(h.b(), h.c(), delta);
        out.gamma_used = 1.0;
        out.flip_value = r.value;
        if (flip_from_value(r.value, ystar)) {
            out.verdict = Verdict::Found;
            out.linf = r.linf;
            out.margin = f.poly()(x_star + r.x_hat);
            out.z = r.x_hat;
        } else {
            out.verdict = Verdict::Certified;
            out.certificate_value = r.value;
            out.margin = f.poly()(x_star + r.x_hat);
        }
        return out;
    }

    const BoxMaxResult r = maximize_quadratic(h, delta, eta, seed, opts.quad);
    out.gamma_used = rounding_gamma(f.n(), opts.quad.gamma_constant);
    out.flip_value = r.value;
    out.sdp_value = r.sdp_value;
    out.linf = r.linf;
    const Vector moved = x_star + r.x_hat;
    out.margin = f.poly()(moved);
    if (r.within_cap && r.value > 0.0 && f.classify(moved) != ystar) {
        out.verdict = Verdict::Found;
        out.z = r.x_hat;
        return out;
    }
    if (r.sdp_value && *r.sdp_value + r.sdp_slack < 0.0) {
        out.verdict = Verdict::Certified;
        out.certificate_value = *r.sdp_value + r.sdp_slack;
        return out;
    }
    out.verdict = Verdict::Unknown;
    return out;
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) body(i);
        });
    for (auto& t : pool) t.join();
}

BatchSummary summarize(const std::vector<AttackOutcome>& outcomes) {
    BatchSummary s;
    s.total = outcomes.size();
    for (const auto& o : outcomes) {
        if (!o.error.empty()) ++s.errors;
        switch (o.verdict) {
            case Verdict::Found: ++s.found; break;
            case Verdict::Certified: ++s.certified; break;
            case Verdict::Unknown: ++s.unknown; break;
        }
        s.gamma = std::max(s.gamma, o.gamma_used);
    }
    if (s.total > 0) {
        const auto t = static_cast<double>(s.total);
        s.robust_accuracy_lower = static_cast<double>(s.certified) / t;
        s.robust_accuracy_upper = 1.0 - static_cast<double>(s.found) / t;
        s.robust_error_lower_at_gamma = static_cast<double>(s.found) / t;
    }
    return s;
}

BatchResult batch_attack(const PtfClassifier& f, const LabeledSet& S, double delta, double eta,
                         std::uint64_t seed, const AttackOptions& opts, int jobs) {
    if (S.dim() != f.n()) throw DimensionError("batch_attack: data and model dimensions differ");
    if (!(delta > 0.0)) throw PreconditionError("batch_attack: delta must be > 0");
    if (!(eta > 0.0 && eta < 1.0)) throw PreconditionError("batch_attack: eta must lie in (0,1)");
    BatchResult res;
    res.outcomes.resize(S.size());
    parallel_for(S.size(), jobs, [&](std::size_t i) {
        try {
            res.outcomes[i] = attack_ptf(f, S[i].x, delta, eta, S[i].y, example_seed(seed, i), opts);
        } catch (const std::exception& e) {
            AttackOutcome o;
            o.verdict = Verdict::Unknown;
            o.error = e.what();
            res.outcomes[i] = std::move(o);
        }
    });
    res.summary = summarize(res.outcomes);
    return res;
}

}  // namespace rptf
