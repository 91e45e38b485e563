#include "apmqec/distance.h"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>

#include "apmqec/errors.h"
#include "apmqec/rng.h"

namespace apmqec {

namespace {

struct BasisResult {
    size_t weight = std::numeric_limits<size_t>::max();
    std::vector<uint32_t> witness;
};

/// Lightest element of ker(opposite) \ rowspace(same) found by `trials` random information sets.
BasisResult sample_basis(const SparseGf2Matrix &same, const SparseGf2Matrix &opposite, size_t n, uint64_t trials,
                         uint64_t seed, uint64_t stream) {
    BitMatrix generator = kernel(opposite.to_dense());
    RowSpace stabilizers(same.to_dense());
    BasisResult best;
    std::vector<size_t> order(n);
    for (uint64_t t = 0; t < trials; t++) {
        auto rng = make_rng(seed, 2 * t + stream);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        BitMatrix g = generator;
        size_t r = rref(g, order).size();
        for (size_t i = 0; i < r; i++) {
            size_t w = g.row_weight(i);
            if (w >= best.weight) {
                continue;
            }
            BitVec v = g.row_vec(i);
            if (!stabilizers.contains(v)) {
                best.weight = w;
                best.witness = v.support();
            }
        }
    }
    return best;
}

struct SmallSpace {
    std::vector<uint32_t> rows;
    std::vector<int> pivots;

    uint32_t reduce(uint32_t v) const {
        for (size_t i = 0; i < rows.size(); i++) {
            if ((v >> pivots[i]) & 1) {
                v ^= rows[i];
            }
        }
        return v;
    }
    bool add(uint32_t v) {
        v = reduce(v);
        if (!v) {
            return false;
        }
        rows.push_back(v);
        pivots.push_back(std::countr_zero(v));
        return true;
    }
};

std::vector<uint32_t> to_masks(const BitMatrix &m) {
    std::vector<uint32_t> out(m.rows());
    for (size_t r = 0; r < m.rows(); r++) {
        out[r] = m.stride() ? (uint32_t)m.row(r)[0] : 0;
    }
    return out;
}

BasisResult enumerate_basis(const SparseGf2Matrix &same, const SparseGf2Matrix &opposite, size_t n) {
    SmallSpace stab;
    for (uint32_t v : to_masks(same.to_dense())) {
        stab.add(v);
    }
    auto ker = to_masks(kernel(opposite.to_dense()));
    BasisResult best;
    uint32_t cur = 0;
    uint64_t total = uint64_t{1} << ker.size();
    // Gray code walk over all nonzero kernel elements.
    for (uint64_t i = 1; i < total; i++) {
        cur ^= ker[std::countr_zero(i)];
        size_t w = std::popcount(cur);
        if (w < best.weight && stab.reduce(cur) != 0) {
            best.weight = w;
            best.witness.clear();
            for (size_t b = 0; b < n; b++) {
                if ((cur >> b) & 1) {
                    best.witness.push_back((uint32_t)b);
                }
            }
        }
    }
    return best;
}

void require_logicals(const CssCode &code, const char *who) {
    if (code.k == 0) {
        throw DomainError(std::string(who) + ": code has k = 0, no logical operators to bound");
    }
}

}  // namespace

DistanceReport distance_upper_bound(const CssCode &code, uint64_t trials, uint64_t seed) {
    require_logicals(code, "distance_upper_bound");
    if (trials == 0) {
        throw DomainError("distance_upper_bound: trials must be >= 1");
    }
    auto x = sample_basis(code.h_x, code.h_z, code.n, trials, seed, 0);
    auto z = sample_basis(code.h_z, code.h_x, code.n, trials, seed, 1);
    DistanceReport rep;
    rep.d_x_upper = x.weight;
    rep.d_z_upper = z.weight;
    rep.witness_x = std::move(x.witness);
    rep.witness_z = std::move(z.witness);
    rep.trials = trials;
    rep.seed = seed;
    return rep;
}

DistanceReport exact_distance_bruteforce(const CssCode &code) {
    require_logicals(code, "exact_distance_bruteforce");
    if (code.n > 24) {
        throw CapacityError("exact_distance_bruteforce: n = " + std::to_string(code.n) + " exceeds 24");
    }
    auto x = enumerate_basis(code.h_x, code.h_z, code.n);
    auto z = enumerate_basis(code.h_z, code.h_x, code.n);
    DistanceReport rep;
    rep.d_x_upper = x.weight;
    rep.d_z_upper = z.weight;
    rep.witness_x = std::move(x.witness);
    rep.witness_z = std::move(z.witness);
    rep.exact = true;
    return rep;
}

bool verify_witnesses(const CssCode &code, const DistanceReport &report) {
    auto check = [&](const std::vector<uint32_t> &support, size_t weight, const SparseGf2Matrix &same,
                     const SparseGf2Matrix &opposite) {
        if (support.size() != weight) {
            return false;
        }
        BitVec v = BitVec::from_support(code.n, support);
        if (opposite.multiply(v).any()) {
            return false;
        }
        return !RowSpace(same.to_dense()).contains(v);
    };
    return check(report.witness_x, report.d_x_upper, code.h_x, code.h_z) &&
           check(report.witness_z, report.d_z_upper, code.h_z, code.h_x);
}

}  // namespace apmqec
