#ifndef APMQEC_BP_H
#define APMQEC_BP_H

#include <cstdint>
#include <vector>

#include "apmqec/gf2.h"

namespace apmqec {

/// Mechanism / detector graph with per-mechanism priors, in CSR form on both sides.
struct DecodingGraph {
    size_t detectors = 0;
    size_t mechanisms = 0;
    /// Edges sorted by detector: edge e joins detector d (det_ptr[d] <= e < det_ptr[d+1])
    /// and mechanism edge_mech[e].
    std::vector<uint32_t> det_ptr;
    std::vector<uint32_t> edge_mech;
    /// Edges of mechanism j: mech_edges[mech_ptr[j] .. mech_ptr[j+1]).
    std::vector<uint32_t> mech_ptr;
    std::vector<uint32_t> mech_edges;
    std::vector<uint32_t> edge_det;
    std::vector<double> priors;
    /// log((1 - p) / p), clamped for p in {0, 1}.
    std::vector<double> prior_llr;

    /// Throws DomainError when priors and columns disagree or a prior leaves [0, 1].
    DecodingGraph(const SparseGf2Matrix &check, std::vector<double> priors);
    DecodingGraph() = default;

    size_t edges() const { return edge_mech.size(); }
    /// check * e over GF(2).
    BitVec syndrome_of(const BitVec &e) const;
};

struct DecodeOutcome {
    BitVec correction;
    /// BP tiers: hard decision reproduces the syndrome. Tier 3: the correction is a
    /// proven minimum-weight solution.
    bool converged = false;
    int tier_used = 1;
    size_t iterations = 0;
    /// Sum of log((1 - p) / p) over the correction.
    double weight = 0;
};

struct BpConfig {
    size_t max_iters = 200;
    bool min_sum = false;
    /// Normalization of min-sum check messages.
    double min_sum_scale = 0.8;
    /// Messages and posteriors are clamped to +-clamp.
    double clamp = 20.0;
};

struct RelayConfig {
    size_t legs = 30;
    size_t first_leg_iters = 80;
    size_t leg_iters = 60;
    /// Uniform memory strength of the first leg.
    double gamma0 = 0.125;
    /// Later legs draw a memory strength per mechanism uniformly from this range.
    double gamma_min = -0.25;
    double gamma_max = 0.85;
    bool min_sum = true;
    double min_sum_scale = 1.0;
    double clamp = 20.0;
};

double correction_weight(const DecodingGraph &g, const BitVec &e);

/// Flooding belief propagation. Converged iff the hard decision reproduces the syndrome;
/// a syndrome already matched by the all-zero decision returns after 0 iterations.
DecodeOutcome bp_decode(const DecodingGraph &g, const BitVec &syndrome, const BpConfig &config);
/// Same, also returning final posterior log-likelihood ratios (negative favors a flip).
DecodeOutcome bp_decode(const DecodingGraph &g, const BitVec &syndrome, const BpConfig &config,
                        std::vector<double> &posterior);

/// Relay ensemble of memory-BP legs. Each leg starts from the previous leg's messages and
/// uses the previous posteriors as memory; stops at the first leg that converges. The
/// returned iteration count sums all legs. Zero legs never converge.
DecodeOutcome relay_bp_decode(const DecodingGraph &g, const BitVec &syndrome, const RelayConfig &config,
                              uint64_t seed);
DecodeOutcome relay_bp_decode(const DecodingGraph &g, const BitVec &syndrome, const RelayConfig &config,
                              uint64_t seed, std::vector<double> &posterior);

}  // namespace apmqec

#endif
