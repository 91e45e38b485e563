#ifndef APMQEC_HIERARCHICAL_H
#define APMQEC_HIERARCHICAL_H

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "apmqec/bp.h"
#include "apmqec/memory.h"
#include "apmqec/mle.h"

namespace apmqec {

struct TierConfig {
    BpConfig bp;
    RelayConfig relay;
    MleConfig mle;
    bool enable_tier2 = true;
    bool enable_tier3 = true;
    /// Relay legs of shot s draw from derive_seed(seed, s).
    uint64_t seed = 0;

    /// Throws DomainError on zero iteration budgets or an empty memory-strength range.
    void validate() const;
};

/// Failure bit per logical: observable(correction) XOR observable(true error).
BitVec logical_failure(const BitVec &correction, const BitVec &true_observables, const MemoryExperiment &experiment);

struct ShotOutcome {
    DecodeOutcome outcome;
    /// Failure after tier 1 alone, after tiers 1-2, and after all enabled tiers. A shot
    /// whose decoder stops without reproducing the syndrome counts as failed.
    bool fail_t1 = false;
    bool fail_t12 = false;
    bool fail_t123 = false;
    /// Iterations spent in each tier (branch-and-bound nodes for tier 3).
    std::array<size_t, 3> tier_iterations{};
};

struct TierStats {
    size_t shots = 0;
    /// Shots that reached tier i + 1 and the iterations (nodes for tier 3) spent there.
    std::array<size_t, 3> reached{};
    std::array<size_t, 3> converged{};
    std::array<size_t, 3> iterations{};
    size_t failures_t1 = 0;
    size_t failures_t12 = 0;
    size_t failures_t123 = 0;

    double q(int tier) const { return shots ? double(reached.at(size_t(tier - 1))) / double(shots) : 0.0; }
    double mean_iterations(int tier) const {
        size_t r = reached.at(size_t(tier - 1));
        return r ? double(iterations.at(size_t(tier - 1))) / double(r) : 0.0;
    }
    void add(const ShotOutcome &shot);
    void merge(const TierStats &other);
};

/// Decodes one shot through the tiers, escalating on non-convergence.
ShotOutcome decode_shot(const DecodingGraph &graph, const MemoryExperiment &experiment, const BitVec &syndrome,
                        const BitVec &true_observables, const TierConfig &config, uint64_t shot_index);

/// Decodes shots [begin, end) of `batch`. `on_shot`, when set, sees each outcome in order.
TierStats hierarchical_decode(const MemoryExperiment &experiment, const ShotBatch &batch, const TierConfig &config,
                              size_t begin = 0, size_t end = SIZE_MAX,
                              const std::function<void(size_t, const ShotOutcome &)> &on_shot = {});

}  // namespace apmqec

#endif
