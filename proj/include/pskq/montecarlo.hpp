#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

#include "pskq/channel.hpp"
#include "pskq/constellation.hpp"
#include "pskq/curve.hpp"
#include "pskq/detector.hpp"
#include "pskq/quantizer.hpp"
#include "pskq/rng.hpp"
#include "pskq/sep.hpp"

namespace pskq {

/// Plan for one Monte Carlo SEP estimate. Unlike the quadrature path, any
/// n >= 1 is accepted, including the error-floor regime n < log2 M.
struct SimPlan {
    SepQuery query;
    std::uint64_t max_trials = 100'000'000;
    double target_rel_ci = 0.02;
    std::uint64_t chunk_size = 65'536;
    std::uint64_t seed = 1;
    std::uint64_t ci_check_every = 65'536; // stopping-rule checkpoints, in trials
    unsigned workers = 0;                  // 0 = hardware concurrency

    void validate() const {
        query.validate();
        if (chunk_size < 1 || max_trials < chunk_size)
            throw ConfigError("SimPlan: need max_trials >= chunk_size >= 1");
        if (!(target_rel_ci > 0.0))
            throw ConfigError("SimPlan: target_rel_ci must be positive");
        if (ci_check_every < 1)
            throw ConfigError("SimPlan: ci_check_every must be >= 1");
    }
};

/// Estimate plus the metadata needed to reproduce it.
struct SepEstimate {
    double p_hat = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
    std::uint64_t seed = 0;
    std::uint64_t chunks = 0;

    bool operator==(const SepEstimate&) const = default;
};

/// Immutable per-configuration state shared by all trials of a plan.
struct TrialSetup {
    PskConstellation mod;
    PhaseQuantizer quant;
    FadingSpec fading;
    double snr;

    explicit TrialSetup(const SepQuery& q)
        : mod(q.M), quant(q.n), fading{q.m}, snr(q.snr) {
        q.validate();
    }
};

/// One transmit/detect round trip; true when the decision is wrong.
inline bool run_trial(const TrialSetup& setup, RngStream& rng) {
    const int sym = static_cast<int>(rng.next_below(setup.mod.order()));
    const cdouble h = sample_fading(setup.fading, rng);
    const cdouble w = sample_noise(rng);
    const cdouble y = std::sqrt(setup.snr) * h * setup.mod.point(sym) + w;
    const int k = quantize(y, setup.quant);
    return ml_detect_geometric(setup.mod, setup.quant, h, setup.snr, k) != sym;
}

inline bool run_trial(const SepQuery& query, RngStream& rng) {
    return run_trial(TrialSetup(query), rng);
}

namespace detail {

// Trial t always draws from substream t of the plan seed, so results depend
// only on which trial indices ran, never on how they were chunked or
// scheduled across workers.
inline std::uint64_t run_chunk(const TrialSetup& setup, std::uint64_t seed,
                               std::uint64_t first_trial, std::uint64_t count) {
    std::uint64_t errs = 0;
    for (std::uint64_t t = first_trial; t < first_trial + count; ++t) {
        RngStream rng(seed, t);
        errs += run_trial(setup, rng) ? 1 : 0;
    }
    return errs;
}

} // namespace detail

/// Run chunks on independent substreams until the relative CI target is met
/// (checked at fixed trial-count checkpoints) or max_trials is exhausted.
/// Aggregation is a pure sum of counts, so worker scheduling cannot change
/// the estimate.
inline SepEstimate simulate_sep(const SimPlan& plan) {
    plan.validate();
    const TrialSetup setup(plan.query);
    unsigned workers = plan.workers;
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());

    std::uint64_t done = 0, errors = 0, chunks = 0;
    while (done < plan.max_trials) {
        const std::uint64_t segment_end = std::min(plan.max_trials, done + plan.ci_check_every);
        std::atomic<std::uint64_t> cursor{done};
        std::atomic<std::uint64_t> seg_errors{0};
        std::atomic<std::uint64_t> seg_chunks{0};

        auto drain = [&] {
            for (;;) {
                const std::uint64_t start = cursor.fetch_add(plan.chunk_size);
                if (start >= segment_end) break;
                const std::uint64_t count = std::min(plan.chunk_size, segment_end - start);
                seg_errors += detail::run_chunk(setup, plan.seed, start, count);
                seg_chunks += 1;
            }
        };

        if (workers <= 1) {
            drain();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (unsigned i = 0; i < workers; ++i) pool.emplace_back(drain);
            for (auto& th : pool) th.join();
        }

        errors += seg_errors.load();
        chunks += seg_chunks.load();
        done = segment_end;

        if (errors > 0) {
            const double p = static_cast<double>(errors) / static_cast<double>(done);
            const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(done));
            if (se <= plan.target_rel_ci * p) break;
        }
    }

    SepEstimate est;
    est.trials = done;
    est.errors = errors;
    est.p_hat = static_cast<double>(errors) / static_cast<double>(done);
    est.std_error = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(done));
    est.seed = plan.seed;
    est.chunks = chunks;
    return est;
}

/// Simulate an ordered SNR grid sharing one (M, n, m) configuration.
inline SepCurve sweep_sep(const std::vector<SimPlan>& plans) {
    if (plans.empty()) throw ConfigError("sweep_sep: plan list is empty");
    for (const auto& plan : plans) {
        plan.validate();
        if (plan.query.M != plans.front().query.M || plan.query.n != plans.front().query.n ||
            plan.query.m != plans.front().query.m)
            throw ConfigError("sweep_sep: all plans must share (M, n, m)");
    }
    SepCurve curve;
    curve.reserve(plans.size());
    for (const auto& plan : plans) {
        const SepEstimate est = simulate_sep(plan);
        curve.push_back(SepPoint{10.0 * std::log10(plan.query.snr), est.p_hat,
                                 est.std_error, "mc", est.trials});
    }
    return curve;
}

} // namespace pskq
