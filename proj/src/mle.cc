#include "apmqec/mle.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fmt/format.h>
#include <numeric>
#include <optional>

#include "apmqec/errors.h"

namespace apmqec {

std::optional<BitVec> ordered_elimination(const DecodingGraph &g, const BitVec &syndrome,
                                          std::span<const uint32_t> order) {
    // Incremental echelon basis over detector space. Basis vector i has zeros at the pivots
    // of earlier vectors, so reducing in insertion order is exact. `combo` records which
    // processed columns (by position in `order`) each vector is made of.
    struct Vec {
        std::vector<uint64_t> bits;
        std::vector<uint64_t> combo;
        size_t pivot;
    };
    const size_t words = (g.detectors + 63) / 64;
    std::vector<Vec> basis;
    BitVec residual = syndrome;
    std::vector<uint64_t> res_combo;
    if (!residual.any()) return BitVec(g.mechanisms);
    auto first_bit = [&](const std::vector<uint64_t> &v) -> std::optional<size_t> {
        for (size_t w = 0; w < v.size(); w++) {
            if (v[w]) return w * 64 + size_t(std::countr_zero(v[w]));
        }
        return std::nullopt;
    };
    auto xor_into = [](std::vector<uint64_t> &dst, const std::vector<uint64_t> &src) {
        if (dst.size() < src.size()) dst.resize(src.size(), 0);
        for (size_t w = 0; w < src.size(); w++) dst[w] ^= src[w];
    };
    std::vector<uint64_t> res_bits(residual.words().begin(), residual.words().end());
    for (size_t pos = 0; pos < order.size(); pos++) {
        uint32_t j = order[pos];
        Vec v;
        v.bits.assign(words, 0);
        for (uint32_t k = g.mech_ptr[j]; k < g.mech_ptr[j + 1]; k++) {
            uint32_t d = g.edge_det[g.mech_edges[k]];
            v.bits[d >> 6] ^= uint64_t{1} << (d & 63);
        }
        v.combo.assign(pos / 64 + 1, 0);
        v.combo[pos / 64] |= uint64_t{1} << (pos % 64);
        for (const Vec &b : basis) {
            if (v.bits[b.pivot >> 6] >> (b.pivot & 63) & 1) {
                for (size_t w = 0; w < words; w++) v.bits[w] ^= b.bits[w];
                xor_into(v.combo, b.combo);
            }
        }
        auto piv = first_bit(v.bits);
        if (!piv) continue;
        v.pivot = *piv;
        // The residual is already reduced by earlier vectors; only the new pivot can remain.
        if (res_bits[v.pivot >> 6] >> (v.pivot & 63) & 1) {
            for (size_t w = 0; w < words; w++) res_bits[w] ^= v.bits[w];
            xor_into(res_combo, v.combo);
        }
        basis.push_back(std::move(v));
        if (!first_bit(res_bits)) {
            BitVec e(g.mechanisms);
            for (size_t w = 0; w < res_combo.size(); w++) {
                uint64_t x = res_combo[w];
                while (x) {
                    size_t p = w * 64 + size_t(std::countr_zero(x));
                    e.flip(order[p]);
                    x &= x - 1;
                }
            }
            return e;
        }
    }
    return std::nullopt;
}

namespace {

class BranchAndBound {
   public:
    BranchAndBound(const DecodingGraph &g, const BitVec &syndrome, std::vector<uint8_t> allowed, uint64_t budget)
        : g_(g), residual_(syndrome.size()), budget_(budget), status_(g.mechanisms, kOut),
          undecided_at_(g.detectors, 0) {
        for (uint32_t d : syndrome.support()) residual_.set(d);
        res_count_ = syndrome.popcount();
        w_min_ = INFINITY;
        max_deg_ = 1;
        for (size_t j = 0; j < g.mechanisms; j++) {
            if (!allowed[j]) continue;
            status_[j] = kUndecided;
            w_min_ = std::min(w_min_, g.prior_llr[j]);
            max_deg_ = std::max<size_t>(max_deg_, g.mech_ptr[j + 1] - g.mech_ptr[j]);
            for (uint32_t k = g.mech_ptr[j]; k < g.mech_ptr[j + 1]; k++) undecided_at_[g.edge_det[g.mech_edges[k]]]++;
        }
        if (!std::isfinite(w_min_)) w_min_ = 0;
    }

    /// Complete search under `cap`; false when the node budget ran out.
    bool run(size_t cap, double &best, BitVec &best_e) {
        cap_ = cap;
        best_ = &best;
        best_e_ = &best_e;
        aborted_ = false;
        dfs();
        return !aborted_;
    }

    uint64_t nodes() const { return nodes_; }
    double w_min() const { return w_min_; }
    size_t max_deg() const { return max_deg_; }

   private:
    static constexpr uint8_t kUndecided = 0, kIn = 1, kOut = 2;

    void decide(uint32_t j, uint8_t s) {
        status_[j] = s;
        for (uint32_t k = g_.mech_ptr[j]; k < g_.mech_ptr[j + 1]; k++) {
            uint32_t d = g_.edge_det[g_.mech_edges[k]];
            undecided_at_[d]--;
            if (s == kIn) {
                bool was = residual_.get(d);
                residual_.flip(d);
                res_count_ += was ? -1 : 1;
            }
        }
        if (s == kIn) {
            weight_ += g_.prior_llr[j];
            count_++;
        }
    }

    void undo(uint32_t j) {
        uint8_t s = status_[j];
        status_[j] = kUndecided;
        for (uint32_t k = g_.mech_ptr[j]; k < g_.mech_ptr[j + 1]; k++) {
            uint32_t d = g_.edge_det[g_.mech_edges[k]];
            undecided_at_[d]++;
            if (s == kIn) {
                bool was = residual_.get(d);
                residual_.flip(d);
                res_count_ += was ? -1 : 1;
            }
        }
        if (s == kIn) {
            weight_ -= g_.prior_llr[j];
            count_--;
        }
    }

    void dfs() {
        if (aborted_) return;
        if (++nodes_ > budget_) {
            aborted_ = true;
            return;
        }
        if (res_count_ == 0) {
            if (weight_ < *best_ - 1e-9) {
                *best_ = weight_;
                BitVec e(g_.mechanisms);
                for (size_t j = 0; j < g_.mechanisms; j++) {
                    if (status_[j] == kIn) e.set(j);
                }
                *best_e_ = std::move(e);
            }
            return;
        }
        size_t need = (size_t(res_count_) + max_deg_ - 1) / max_deg_;
        if (count_ + need > cap_) return;
        if (weight_ + double(need) * w_min_ >= *best_ - 1e-9) return;
        uint32_t pick = 0;
        uint32_t fewest = UINT32_MAX;
        for (uint32_t d : residual_.support()) {
            if (undecided_at_[d] < fewest) {
                fewest = undecided_at_[d];
                pick = d;
                if (fewest <= 1) break;
            }
        }
        if (fewest == 0) return;
        std::vector<uint32_t> cands;
        for (uint32_t e = g_.det_ptr[pick]; e < g_.det_ptr[pick + 1]; e++) {
            uint32_t j = g_.edge_mech[e];
            if (status_[j] == kUndecided) cands.push_back(j);
        }
        std::sort(cands.begin(), cands.end(), [&](uint32_t a, uint32_t b) {
            return g_.prior_llr[a] != g_.prior_llr[b] ? g_.prior_llr[a] < g_.prior_llr[b] : a < b;
        });
        // Every solution below this node flips an odd number of `cands`; branch on the first.
        size_t excluded = 0;
        for (uint32_t j : cands) {
            decide(j, kIn);
            dfs();
            undo(j);
            if (aborted_) break;
            decide(j, kOut);
            excluded++;
        }
        for (size_t i = excluded; i-- > 0;) undo(cands[i]);
    }

    const DecodingGraph &g_;
    BitVec residual_;
    int64_t res_count_ = 0;
    uint64_t budget_;
    uint64_t nodes_ = 0;
    std::vector<uint8_t> status_;
    std::vector<uint32_t> undecided_at_;
    double weight_ = 0;
    size_t count_ = 0;
    double w_min_ = 0;
    size_t max_deg_ = 1;
    size_t cap_ = 0;
    bool aborted_ = false;
    double *best_ = nullptr;
    BitVec *best_e_ = nullptr;
};

}  // namespace

DecodeOutcome mle_decode(const DecodingGraph &g, const BitVec &syndrome, const MleConfig &config,
                         const std::vector<double> *reliability) {
    if (syndrome.size() != g.detectors) {
        throw DomainError(fmt::format("syndrome length {} != detector count {}", syndrome.size(), g.detectors));
    }
    if (reliability && reliability->size() != g.mechanisms) {
        throw DomainError("mle_decode: reliability length differs from mechanism count");
    }
    std::vector<uint8_t> allowed(g.mechanisms, 0);
    std::vector<uint32_t> order;
    for (size_t j = 0; j < g.mechanisms; j++) {
        if (g.priors[j] > 0.5) {
            throw DomainError(fmt::format("mle_decode: prior {} above 1/2 gives a negative weight", g.priors[j]));
        }
        if (g.priors[j] > 0) {
            allowed[j] = 1;
            order.push_back(uint32_t(j));
        }
    }
    const std::vector<double> &score = reliability ? *reliability : g.prior_llr;
    std::stable_sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) { return score[a] < score[b]; });

    DecodeOutcome out;
    out.tier_used = 3;
    auto incumbent = ordered_elimination(g, syndrome, order);
    if (!incumbent) {
        throw InfeasibleError("mle_decode: syndrome is outside the column space of the check matrix");
    }
    out.correction = *incumbent;
    out.weight = correction_weight(g, out.correction);
    if (!syndrome.any()) {
        out.converged = true;
        return out;
    }

    BranchAndBound bb(g, syndrome, allowed, config.node_budget);
    std::vector<size_t> caps = config.weight_caps;
    if (caps.empty()) {
        size_t c = std::max<size_t>(1, (syndrome.popcount() + bb.max_deg() - 1) / bb.max_deg());
        while (c < order.size()) {
            caps.push_back(c);
            c *= 2;
        }
        caps.push_back(order.size());
    }
    for (size_t cap : caps) {
        if (!bb.run(cap, out.weight, out.correction)) break;
        if (cap >= order.size() || out.weight <= double(cap + 1) * bb.w_min() + 1e-9) {
            out.converged = true;
            break;
        }
    }
    out.iterations = bb.nodes();
    return out;
}

}  // namespace apmqec
