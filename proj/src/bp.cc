#include "apmqec/bp.h"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <random>

#include "apmqec/errors.h"
#include "apmqec/rng.h"

namespace apmqec {

namespace {

constexpr double kMaxPriorLlr = 40.0;

double llr_of(double p) {
    if (p <= 0) return kMaxPriorLlr;
    if (p >= 1) return -kMaxPriorLlr;
    return std::clamp(std::log((1 - p) / p), -kMaxPriorLlr, kMaxPriorLlr);
}

void check_syndrome_length(const DecodingGraph &g, const BitVec &syndrome) {
    if (syndrome.size() != g.detectors) {
        throw DomainError(fmt::format("syndrome length {} != detector count {}", syndrome.size(), g.detectors));
    }
}

// Message state shared by plain and memory BP. Messages are floats; the graph is large and
// the passes are bandwidth bound. The marginal pass of one iteration also prepares the
// variable-to-check messages of the next, and the syndrome of the hard decision is kept
// up to date incrementally as marginal signs flip.
class BpEngine {
   public:
    BpEngine(const DecodingGraph &g, const BitVec &syndrome, bool min_sum, double scale, double clamp)
        : g_(g), min_sum_(min_sum), scale_(float(scale)), clamp_(float(clamp)), c2v_(g.edges(), 0.0f),
          v2c_(g.edges(), 0.0f), marginal_(g.mechanisms), eff_(g.mechanisms), flipped_(g.detectors, 0),
          mismatch_(g.detectors, 0) {
        for (size_t d = 0; d < g.detectors; d++) flipped_[d] = syndrome.get(d);
        for (size_t j = 0; j < g.mechanisms; j++) marginal_[j] = float(g.prior_llr[j]);
        size_t max_deg = 0;
        for (size_t j = 0; j < g.mechanisms; j++) max_deg = std::max<size_t>(max_deg, g.mech_ptr[j + 1] - g.mech_ptr[j]);
        gathered_.resize(max_deg);
        for (size_t d = 0; d < g.detectors; d++) {
            uint8_t parity = flipped_[d];
            for (uint32_t e = g.det_ptr[d]; e < g.det_ptr[d + 1]; e++) parity ^= uint8_t(marginal_[g.edge_mech[e]] < 0);
            mismatch_[d] = parity;
            unsatisfied_ += parity;
        }
    }

    /// Hard decision from the current marginals matches the syndrome.
    bool satisfied() const { return unsatisfied_ == 0; }

    /// Must be called when the memory strengths change between iterations.
    void invalidate() { prepared_ = false; }

    /// One flooding iteration. `gamma` is per mechanism (empty = no memory): the variable
    /// side sees priors (1 - gamma) * prior + gamma * previous marginal.
    void iterate(const std::vector<double> &gamma) {
        if (!prepared_) variable_pass(gamma);
        for (size_t d = 0; d < g_.detectors; d++) {
            uint32_t b = g_.det_ptr[d], end = g_.det_ptr[d + 1];
            if (b == end) continue;
            if (min_sum_) {
                check_min_sum(d, b, end);
            } else {
                check_sum_product(d, b, end);
            }
        }
        marginal_pass(gamma);
        prepared_ = true;
    }

    BitVec hard() const {
        BitVec h(g_.mechanisms);
        for (size_t j = 0; j < g_.mechanisms; j++) h.set(j, marginal_[j] < 0);
        return h;
    }
    std::vector<double> marginal() const { return {marginal_.begin(), marginal_.end()}; }

   private:
    float effective_prior(size_t j, const std::vector<double> &gamma) const {
        if (gamma.empty()) return float(g_.prior_llr[j]);
        return float((1 - gamma[j]) * g_.prior_llr[j] + gamma[j] * marginal_[j]);
    }

    void variable_pass(const std::vector<double> &gamma) {
        for (size_t j = 0; j < g_.mechanisms; j++) {
            float eff = effective_prior(j, gamma);
            float total = eff;
            const uint32_t b = g_.mech_ptr[j], end = g_.mech_ptr[j + 1];
            for (uint32_t k = b; k < end; k++) total += c2v_[g_.mech_edges[k]];
            for (uint32_t k = b; k < end; k++) {
                uint32_t e = g_.mech_edges[k];
                v2c_[e] = std::clamp(total - c2v_[e], -clamp_, clamp_);
            }
            eff_[j] = eff;
        }
    }

    // Marginals of this iteration, then the variable messages of the next one.
    void marginal_pass(const std::vector<double> &gamma) {
        for (size_t j = 0; j < g_.mechanisms; j++) {
            const uint32_t b = g_.mech_ptr[j], end = g_.mech_ptr[j + 1];
            const size_t deg = end - b;
            for (size_t i = 0; i < deg; i++) gathered_[i] = c2v_[g_.mech_edges[b + i]];
            float total = eff_[j];
            for (size_t i = 0; i < deg; i++) total += gathered_[i];
            float m = std::clamp(total, -clamp_, clamp_);
            if ((m < 0) != (marginal_[j] < 0)) {
                for (uint32_t k = b; k < end; k++) {
                    uint32_t d = g_.edge_det[g_.mech_edges[k]];
                    mismatch_[d] ^= 1;
                    unsatisfied_ += mismatch_[d] ? 1 : -1;
                }
            }
            marginal_[j] = m;
            float eff = effective_prior(j, gamma);
            float next = eff;
            for (size_t i = 0; i < deg; i++) next += gathered_[i];
            for (size_t i = 0; i < deg; i++) {
                v2c_[g_.mech_edges[b + i]] = std::clamp(next - gathered_[i], -clamp_, clamp_);
            }
            eff_[j] = eff;
        }
    }

    void check_min_sum(size_t d, uint32_t b, uint32_t end) {
        uint32_t neg = flipped_[d];
        float m1 = clamp_, m2 = clamp_;
        uint32_t arg = b;
        for (uint32_t e = b; e < end; e++) {
            float v = v2c_[e];
            neg ^= uint32_t(std::signbit(v));
            float a = std::fabs(v);
            if (a < m1) {
                m2 = m1;
                m1 = a;
                arg = e;
            } else if (a < m2) {
                m2 = a;
            }
        }
        m1 *= scale_;
        m2 *= scale_;
        for (uint32_t e = b; e < end; e++) {
            float mag = (e == arg ? m2 : m1);
            bool s = (neg ^ uint32_t(std::signbit(v2c_[e]))) & 1;
            c2v_[e] = s ? -mag : mag;
        }
    }

    void check_sum_product(size_t d, uint32_t b, uint32_t end) {
        const size_t deg = end - b;
        t_.resize(deg);
        prefix_.resize(deg + 1);
        for (size_t i = 0; i < deg; i++) t_[i] = std::tanh(0.5 * double(v2c_[b + i]));
        prefix_[0] = 1.0;
        for (size_t i = 0; i < deg; i++) prefix_[i + 1] = prefix_[i] * t_[i];
        double suffix = 1.0;
        const double sign = flipped_[d] ? -1.0 : 1.0;
        // atanh saturates at +-1; the clamp bounds the message.
        const double lim = std::tanh(0.5 * double(clamp_));
        for (size_t i = deg; i-- > 0;) {
            double prod = std::clamp(sign * prefix_[i] * suffix, -lim, lim);
            c2v_[b + i] = float(2.0 * std::atanh(prod));
            suffix *= t_[i];
        }
    }

    const DecodingGraph &g_;
    bool min_sum_;
    float scale_;
    float clamp_;
    std::vector<float> c2v_, v2c_, marginal_, eff_, gathered_;
    std::vector<uint8_t> flipped_, mismatch_;
    int64_t unsatisfied_ = 0;
    bool prepared_ = false;
    std::vector<double> t_, prefix_;
};

}  // namespace

DecodingGraph::DecodingGraph(const SparseGf2Matrix &check, std::vector<double> p)
    : detectors(check.rows), mechanisms(check.cols), priors(std::move(p)) {
    check.validate();
    if (priors.size() != mechanisms) {
        throw DomainError(fmt::format("DecodingGraph: {} priors for {} mechanisms", priors.size(), mechanisms));
    }
    for (double q : priors) {
        if (!(q >= 0 && q <= 1)) throw DomainError(fmt::format("DecodingGraph: prior {} outside [0, 1]", q));
    }
    det_ptr.assign(detectors + 1, 0);
    for (size_t d = 0; d < detectors; d++) {
        det_ptr[d + 1] = det_ptr[d] + uint32_t(check.entries[d].size());
        for (uint32_t j : check.entries[d]) {
            edge_mech.push_back(j);
            edge_det.push_back(uint32_t(d));
        }
    }
    mech_ptr.assign(mechanisms + 1, 0);
    for (uint32_t j : edge_mech) mech_ptr[j + 1]++;
    for (size_t j = 0; j < mechanisms; j++) mech_ptr[j + 1] += mech_ptr[j];
    mech_edges.resize(edge_mech.size());
    std::vector<uint32_t> fill(mech_ptr.begin(), mech_ptr.end() - 1);
    for (uint32_t e = 0; e < edge_mech.size(); e++) mech_edges[fill[edge_mech[e]]++] = e;
    prior_llr.resize(mechanisms);
    for (size_t j = 0; j < mechanisms; j++) prior_llr[j] = llr_of(priors[j]);
}

BitVec DecodingGraph::syndrome_of(const BitVec &e) const {
    if (e.size() != mechanisms) {
        throw DomainError(fmt::format("correction length {} != mechanism count {}", e.size(), mechanisms));
    }
    BitVec s(detectors);
    for (uint32_t j : e.support()) {
        for (uint32_t k = mech_ptr[j]; k < mech_ptr[j + 1]; k++) s.flip(edge_det[mech_edges[k]]);
    }
    return s;
}

double correction_weight(const DecodingGraph &g, const BitVec &e) {
    double w = 0;
    for (uint32_t j : e.support()) w += g.prior_llr[j];
    return w;
}

DecodeOutcome bp_decode(const DecodingGraph &g, const BitVec &syndrome, const BpConfig &config,
                        std::vector<double> &posterior) {
    check_syndrome_length(g, syndrome);
    BpEngine bp(g, syndrome, config.min_sum, config.min_sum_scale, config.clamp);
    DecodeOutcome out;
    out.tier_used = 1;
    out.converged = bp.satisfied();
    const std::vector<double> no_memory;
    while (!out.converged && out.iterations < config.max_iters) {
        bp.iterate(no_memory);
        out.iterations++;
        out.converged = bp.satisfied();
    }
    out.correction = bp.hard();
    out.weight = correction_weight(g, out.correction);
    posterior = bp.marginal();
    return out;
}

DecodeOutcome bp_decode(const DecodingGraph &g, const BitVec &syndrome, const BpConfig &config) {
    std::vector<double> posterior;
    return bp_decode(g, syndrome, config, posterior);
}

DecodeOutcome relay_bp_decode(const DecodingGraph &g, const BitVec &syndrome, const RelayConfig &config,
                              uint64_t seed, std::vector<double> &posterior) {
    check_syndrome_length(g, syndrome);
    DecodeOutcome out;
    out.tier_used = 2;
    out.correction = BitVec(g.mechanisms);
    posterior = g.prior_llr;
    if (config.legs == 0) {
        return out;
    }
    BpEngine bp(g, syndrome, config.min_sum, config.min_sum_scale, config.clamp);
    std::mt19937_64 rng = make_rng(seed, 0);
    std::uniform_real_distribution<double> draw(config.gamma_min, config.gamma_max);
    std::vector<double> gamma(g.mechanisms, config.gamma0);
    if (bp.satisfied()) {
        out.converged = true;
    }
    for (size_t leg = 0; leg < config.legs && !out.converged; leg++) {
        if (leg > 0) {
            for (auto &x : gamma) x = draw(rng);
            bp.invalidate();
        }
        size_t iters = leg == 0 ? config.first_leg_iters : config.leg_iters;
        for (size_t t = 0; t < iters; t++) {
            bp.iterate(gamma);
            out.iterations++;
            if (bp.satisfied()) {
                out.converged = true;
                break;
            }
        }
    }
    out.correction = bp.hard();
    out.weight = correction_weight(g, out.correction);
    posterior = bp.marginal();
    return out;
}

DecodeOutcome relay_bp_decode(const DecodingGraph &g, const BitVec &syndrome, const RelayConfig &config,
                              uint64_t seed) {
    std::vector<double> posterior;
    return relay_bp_decode(g, syndrome, config, seed, posterior);
}

}  // namespace apmqec
