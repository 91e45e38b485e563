#include "apmqec/mle.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "apmqec/errors.h"
#include "test_util.h"

using namespace apmqec;
using apmqec::testing::matrix_from_rows;

namespace {

// Exhaustive minimum over all 2^M patterns; +inf when infeasible.
double brute_force_optimum(const DecodingGraph &g, const BitVec &syndrome) {
    double best = INFINITY;
    const size_t M = g.mechanisms;
    for (uint64_t mask = 0; mask < (uint64_t{1} << M); mask++) {
        BitVec e(M);
        double w = 0;
        bool ok = true;
        for (size_t j = 0; j < M; j++) {
            if (mask >> j & 1) {
                if (g.priors[j] == 0) {
                    ok = false;
                    break;
                }
                e.set(j);
                w += g.prior_llr[j];
            }
        }
        if (ok && w < best && g.syndrome_of(e) == syndrome) best = w;
    }
    return best;
}

DecodingGraph random_instance(std::mt19937_64 &rng) {
    size_t D = 1 + rng() % 10, M = 1 + rng() % 20;
    SparseGf2Matrix h(D, M);
    std::uniform_real_distribution<double> prior(0.001, 0.5);
    std::vector<double> p(M);
    for (size_t j = 0; j < M; j++) {
        size_t deg = 1 + rng() % 3;
        for (size_t t = 0; t < deg; t++) h.entries[rng() % D].push_back(uint32_t(j));
        p[j] = prior(rng);
    }
    for (auto &row : h.entries) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    return DecodingGraph(h, p);
}

}  // namespace

TEST(Mle, ZeroSyndrome) {
    DecodingGraph g(matrix_from_rows(3, {{0, 1}, {1, 2}}), {0.1, 0.1, 0.1});
    auto o = mle_decode(g, BitVec(2), MleConfig{});
    EXPECT_TRUE(o.converged);
    EXPECT_FALSE(o.correction.any());
    EXPECT_EQ(o.weight, 0.0);
    EXPECT_EQ(o.tier_used, 3);
}

TEST(Mle, SteaneSingleErrorsMatchBruteForce) {
    auto code = apmqec::testing::steane();
    DecodingGraph g(code.h_z, std::vector<double>(7, 0.01));
    for (uint32_t q = 0; q < 7; q++) {
        BitVec e(7);
        e.set(q);
        auto syn = g.syndrome_of(e);
        auto o = mle_decode(g, syn, MleConfig{});
        EXPECT_TRUE(o.converged);
        EXPECT_EQ(o.correction, e);
        EXPECT_NEAR(o.weight, brute_force_optimum(g, syn), 1e-9);
    }
}

TEST(Mle, RandomInstancesMatchExhaustiveSearch) {
    std::mt19937_64 rng(20250101);
    for (int trial = 0; trial < 300; trial++) {
        auto g = random_instance(rng);
        BitVec e(g.mechanisms);
        for (size_t j = 0; j < g.mechanisms; j++) e.set(j, rng() % 3 == 0);
        auto syn = g.syndrome_of(e);
        auto o = mle_decode(g, syn, MleConfig{});
        ASSERT_TRUE(o.converged) << trial;
        EXPECT_EQ(g.syndrome_of(o.correction), syn);
        EXPECT_NEAR(o.weight, brute_force_optimum(g, syn), 1e-9) << trial;
    }
}

TEST(Mle, WeightCapsStillExact) {
    std::mt19937_64 rng(99);
    MleConfig c;
    c.weight_caps = {1, 2, 3};
    for (int trial = 0; trial < 100; trial++) {
        auto g = random_instance(rng);
        BitVec e(g.mechanisms);
        for (size_t j = 0; j < g.mechanisms; j++) e.set(j, rng() % 2 == 0);
        auto syn = g.syndrome_of(e);
        auto o = mle_decode(g, syn, c);
        EXPECT_EQ(g.syndrome_of(o.correction), syn);
        if (o.converged) EXPECT_NEAR(o.weight, brute_force_optimum(g, syn), 1e-9) << trial;
    }
}

TEST(Mle, InfeasibleSyndromeThrows) {
    DecodingGraph g(matrix_from_rows(2, {{0, 1}, {0, 1}}), {0.1, 0.1});
    BitVec syn(2);
    syn.set(0);
    EXPECT_THROW(mle_decode(g, syn, MleConfig{}), InfeasibleError);
}

TEST(Mle, ZeroPriorMechanismUnused) {
    DecodingGraph g(matrix_from_rows(2, {{0, 1}}), {0.0, 0.2});
    BitVec syn(1);
    syn.set(0);
    auto o = mle_decode(g, syn, MleConfig{});
    EXPECT_TRUE(o.correction.get(1));
    EXPECT_FALSE(o.correction.get(0));
}

TEST(Mle, BudgetExhaustionReturnsFeasibleUnproven) {
    // One near-free mechanism makes the lower bound loose, so the search cannot prune at the root.
    const size_t M = 60;
    std::vector<std::vector<uint32_t>> rows;
    for (uint32_t i = 0; i + 1 < M; i++) rows.push_back({i, i + 1});
    std::vector<double> p(M, 0.05);
    p[M / 2] = 0.49;
    DecodingGraph g(matrix_from_rows(M, rows), p);
    BitVec e(M);
    for (size_t j = 0; j < M; j += 3) e.set(j);
    auto syn = g.syndrome_of(e);
    MleConfig c;
    c.node_budget = 5;
    auto o = mle_decode(g, syn, c);
    EXPECT_FALSE(o.converged);
    EXPECT_EQ(g.syndrome_of(o.correction), syn);
}

TEST(Mle, RejectsPriorsAboveHalf) {
    DecodingGraph g(matrix_from_rows(1, {{0}}), {0.7});
    BitVec syn(1);
    syn.set(0);
    EXPECT_THROW(mle_decode(g, syn, MleConfig{}), DomainError);
}
