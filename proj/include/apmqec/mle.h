#ifndef APMQEC_MLE_H
#define APMQEC_MLE_H

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "apmqec/bp.h"

namespace apmqec {

struct MleConfig {
    /// Total branch-and-bound nodes across all caps.
    uint64_t node_budget = 200000;
    /// Caps on the number of flipped mechanisms, searched in order. Empty means doubling
    /// from the syndrome-implied minimum up to the mechanism count.
    std::vector<size_t> weight_caps;
};

/// Minimum-weight solution of check * e = syndrome with weights log((1 - p) / p).
///
/// An incumbent comes from ordered elimination over mechanisms sorted by `reliability`
/// (posterior LLRs, lowest first; priors when null). Branch and bound then branches on the
/// residual detector with the fewest undecided mechanisms, bounded by
/// ceil(residual / max degree) * min weight, under each weight cap in turn. After a complete
/// search at cap c the incumbent is optimal once it weighs at most (c + 1) * min weight.
/// `converged` reports that proof; `iterations` counts nodes.
///
/// Throws InfeasibleError when the syndrome is outside the column space and DomainError
/// for priors above 1/2. Mechanisms with prior 0 are never used.
DecodeOutcome mle_decode(const DecodingGraph &g, const BitVec &syndrome, const MleConfig &config,
                         const std::vector<double> *reliability = nullptr);

/// Ordered-elimination solution alone (no search); nullopt when infeasible.
std::optional<BitVec> ordered_elimination(const DecodingGraph &g, const BitVec &syndrome,
                                          std::span<const uint32_t> order);

}  // namespace apmqec

#endif
