#include "apmqec/hierarchical.h"

#include <fmt/format.h>
#include <stdexcept>

#include "apmqec/errors.h"
#include "apmqec/rng.h"

namespace apmqec {

void TierConfig::validate() const {
    if (relay.gamma_min > relay.gamma_max) {
        throw DomainError("TierConfig: relay gamma_min exceeds gamma_max");
    }
    if (enable_tier2 && relay.legs > 0 && relay.first_leg_iters == 0) {
        throw DomainError("TierConfig: relay first_leg_iters must be positive");
    }
    if (enable_tier3 && mle.node_budget == 0) {
        throw DomainError("TierConfig: mle node_budget must be positive");
    }
}

BitVec logical_failure(const BitVec &correction, const BitVec &true_observables, const MemoryExperiment &ex) {
    if (true_observables.size() != ex.num_observables()) {
        throw DomainError(fmt::format("observable length {} != {}", true_observables.size(), ex.num_observables()));
    }
    auto [syn, obs] = ex.apply(correction);
    obs ^= true_observables;
    return obs;
}

namespace {

void assert_satisfies(const DecodingGraph &g, const DecodeOutcome &o, const BitVec &syndrome) {
    if (g.syndrome_of(o.correction) != syndrome) {
        throw std::logic_error(fmt::format("tier {} reported convergence with a correction that misses the syndrome",
                                           o.tier_used));
    }
}

}  // namespace

ShotOutcome decode_shot(const DecodingGraph &g, const MemoryExperiment &ex, const BitVec &syndrome,
                        const BitVec &true_obs, const TierConfig &config, uint64_t shot_index) {
    ShotOutcome r;
    std::vector<double> posterior;
    auto wrong = [&](const DecodeOutcome &o) { return logical_failure(o.correction, true_obs, ex).any(); };

    r.outcome = bp_decode(g, syndrome, config.bp, posterior);
    r.tier_iterations[0] = r.outcome.iterations;
    if (r.outcome.converged) {
        assert_satisfies(g, r.outcome, syndrome);
        r.fail_t1 = r.fail_t12 = r.fail_t123 = wrong(r.outcome);
        return r;
    }
    r.fail_t1 = true;
    if (config.enable_tier2) {
        r.outcome = relay_bp_decode(g, syndrome, config.relay, derive_seed(config.seed, shot_index), posterior);
        r.tier_iterations[1] = r.outcome.iterations;
        if (r.outcome.converged) {
            assert_satisfies(g, r.outcome, syndrome);
            r.fail_t12 = r.fail_t123 = wrong(r.outcome);
            return r;
        }
    }
    r.fail_t12 = true;
    if (config.enable_tier3) {
        r.outcome = mle_decode(g, syndrome, config.mle, &posterior);
        r.tier_iterations[2] = r.outcome.iterations;
        // Tier 3 always returns a feasible correction; `converged` only marks proven optimality.
        assert_satisfies(g, r.outcome, syndrome);
        r.fail_t123 = wrong(r.outcome);
        return r;
    }
    r.fail_t123 = true;
    return r;
}

void TierStats::merge(const TierStats &o) {
    shots += o.shots;
    for (size_t i = 0; i < 3; i++) {
        reached[i] += o.reached[i];
        converged[i] += o.converged[i];
        iterations[i] += o.iterations[i];
    }
    failures_t1 += o.failures_t1;
    failures_t12 += o.failures_t12;
    failures_t123 += o.failures_t123;
}

void TierStats::add(const ShotOutcome &r) {
    shots++;
    // Tiers below the one used were reached and did not converge.
    for (int t = 1; t <= r.outcome.tier_used; t++) reached[size_t(t - 1)]++;
    converged[size_t(r.outcome.tier_used - 1)] += r.outcome.converged;
    failures_t1 += r.fail_t1;
    failures_t12 += r.fail_t12;
    failures_t123 += r.fail_t123;
    for (size_t t = 0; t < 3; t++) iterations[t] += r.tier_iterations[t];
}

TierStats hierarchical_decode(const MemoryExperiment &ex, const ShotBatch &batch, const TierConfig &config,
                              size_t begin, size_t end, const std::function<void(size_t, const ShotOutcome &)> &on_shot) {
    config.validate();
    if (batch.syndromes.cols() != ex.num_detectors() || batch.observables.cols() != ex.num_observables()) {
        throw DomainError("hierarchical_decode: shot batch does not match the experiment");
    }
    end = std::min(end, batch.shots());
    DecodingGraph g(ex.check, ex.priors);
    TierStats st;
    for (size_t s = begin; s < end; s++) {
        BitVec syn = batch.syndromes.row_vec(s);
        BitVec obs = batch.observables.row_vec(s);
        ShotOutcome r = decode_shot(g, ex, syn, obs, config, s);
        st.add(r);
        if (on_shot) on_shot(s, r);
    }
    return st;
}

}  // namespace apmqec
