#include "apmqec/bp.h"

#include <gtest/gtest.h>

#include "apmqec/errors.h"
#include "apmqec/fixtures.h"
#include "apmqec/memory.h"
#include "test_util.h"

using namespace apmqec;
using apmqec::testing::matrix_from_rows;

namespace {

DecodingGraph repetition3(double p) { return DecodingGraph(matrix_from_rows(3, {{0, 1}, {1, 2}}), {p, p, p}); }

BitVec bits(size_t n, std::initializer_list<uint32_t> on) {
    BitVec v(n);
    for (uint32_t i : on) v.set(i);
    return v;
}

}  // namespace

TEST(DecodingGraph, CsrBothWays) {
    auto g = repetition3(0.1);
    EXPECT_EQ(g.edges(), 4u);
    EXPECT_EQ(g.syndrome_of(bits(3, {1})), bits(2, {0, 1}));
    EXPECT_EQ(g.syndrome_of(bits(3, {0, 2})), bits(2, {0, 1}));
    EXPECT_THROW(DecodingGraph(matrix_from_rows(3, {{0, 1}}), {0.1, 0.1}), DomainError);
    EXPECT_THROW(DecodingGraph(matrix_from_rows(1, {{0}}), {1.5}), DomainError);
}

TEST(Bp, ZeroSyndrome) {
    auto g = repetition3(0.05);
    for (bool ms : {false, true}) {
        BpConfig c;
        c.min_sum = ms;
        auto o = bp_decode(g, BitVec(2), c);
        EXPECT_TRUE(o.converged);
        EXPECT_FALSE(o.correction.any());
        EXPECT_LE(o.iterations, 1u);
    }
}

TEST(Bp, RepetitionMatchesMajorityVote) {
    auto g = repetition3(0.1);
    for (bool ms : {false, true}) {
        BpConfig c;
        c.min_sum = ms;
        for (uint32_t mask = 0; mask < 8; mask++) {
            BitVec e(3);
            for (uint32_t i = 0; i < 3; i++) e.set(i, mask >> i & 1);
            auto o = bp_decode(g, g.syndrome_of(e), c);
            ASSERT_TRUE(o.converged) << mask;
            BitVec diff = o.correction;
            diff ^= e;
            // Majority vote leaves either nothing or the full logical 111.
            bool majority_wrong = std::popcount(mask) >= 2;
            EXPECT_EQ(diff.popcount(), majority_wrong ? 3u : 0u) << mask;
        }
    }
}

TEST(Bp, IsolatedMechanismRecovered) {
    // Two disconnected components; only mechanism 3 fires.
    auto h = matrix_from_rows(5, {{0, 1}, {1, 2}, {3, 4}});
    DecodingGraph g(h, {0.01, 0.01, 0.01, 0.01, 0.001});
    auto o = bp_decode(g, g.syndrome_of(bits(5, {3})), BpConfig{});
    EXPECT_TRUE(o.converged);
    EXPECT_EQ(o.correction, bits(5, {3}));
}

TEST(Bp, DimensionMismatchThrows) {
    auto g = repetition3(0.1);
    EXPECT_THROW(bp_decode(g, BitVec(3), BpConfig{}), DomainError);
    EXPECT_THROW(relay_bp_decode(g, BitVec(5), RelayConfig{}, 0), DomainError);
}

TEST(Bp, ConvergedOutcomesSatisfySyndrome) {
    auto ex = build_memory_experiment(apmqec::testing::steane(), 3, Basis::Z, NoiseModel::phenomenological(0.03));
    DecodingGraph g(ex.check, ex.priors);
    auto batch = sample(ex, 300, 4);
    for (bool ms : {false, true}) {
        BpConfig c;
        c.min_sum = ms;
        for (size_t s = 0; s < batch.shots(); s++) {
            auto syn = batch.syndromes.row_vec(s);
            auto o = bp_decode(g, syn, c);
            if (o.converged) EXPECT_EQ(g.syndrome_of(o.correction), syn);
            auto r = relay_bp_decode(g, syn, RelayConfig{}, s);
            if (r.converged) EXPECT_EQ(g.syndrome_of(r.correction), syn);
        }
    }
}

TEST(Relay, ZeroLegsNeverConverge) {
    auto g = repetition3(0.1);
    RelayConfig c;
    c.legs = 0;
    auto o = relay_bp_decode(g, BitVec(2), c, 1);
    EXPECT_FALSE(o.converged);
    EXPECT_EQ(o.iterations, 0u);
    EXPECT_EQ(o.tier_used, 2);
}

TEST(Relay, SolvesWhatBpSolves) {
    auto g = repetition3(0.1);
    for (uint32_t mask = 0; mask < 8; mask++) {
        BitVec e(3);
        for (uint32_t i = 0; i < 3; i++) e.set(i, mask >> i & 1);
        auto syn = g.syndrome_of(e);
        auto a = bp_decode(g, syn, BpConfig{});
        auto b = relay_bp_decode(g, syn, RelayConfig{}, mask);
        EXPECT_TRUE(b.converged);
        EXPECT_EQ(a.correction, b.correction);
    }
}

TEST(Relay, Deterministic) {
    auto ex = build_memory_experiment(apmqec::testing::steane(), 4, Basis::Z, NoiseModel::phenomenological(0.05));
    DecodingGraph g(ex.check, ex.priors);
    auto batch = sample(ex, 50, 8);
    for (size_t s = 0; s < batch.shots(); s++) {
        auto syn = batch.syndromes.row_vec(s);
        auto a = relay_bp_decode(g, syn, RelayConfig{}, 77 + s);
        auto b = relay_bp_decode(g, syn, RelayConfig{}, 77 + s);
        EXPECT_EQ(a.correction, b.correction);
        EXPECT_EQ(a.iterations, b.iterations);
    }
}

TEST(Relay, ConvergesMoreOftenThanBpOnP96) {
    auto code = build_check_matrices(load_fixture_spec(96));
    auto ex = build_memory_experiment(code, 32, Basis::Z, NoiseModel::phenomenological(0.01));
    DecodingGraph g(ex.check, ex.priors);
    auto batch = sample(ex, 120, 2026);
    BpConfig bp;
    bp.min_sum = true;
    bp.max_iters = 100;
    size_t bp_ok = 0, relay_ok = 0;
    for (size_t s = 0; s < batch.shots(); s++) {
        auto syn = batch.syndromes.row_vec(s);
        bp_ok += bp_decode(g, syn, bp).converged;
        relay_ok += relay_bp_decode(g, syn, RelayConfig{}, s).converged;
    }
    EXPECT_LT(bp_ok, batch.shots());
    EXPECT_GT(relay_ok, bp_ok);
}
