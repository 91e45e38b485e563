#include "apmqec/memory.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "apmqec/errors.h"
#include "apmqec/fixtures.h"
#include "test_util.h"

using namespace apmqec;
using apmqec::testing::four_two_two;
using apmqec::testing::matrix_from_rows;
using apmqec::testing::steane;

TEST(EdgeColoring, StarNeedsOneLayerPerEdge) {
    auto h = matrix_from_rows(3, {{0, 1, 2}});
    auto layers = edge_coloring_schedule(h);
    EXPECT_EQ(layers.size(), 3u);
    EXPECT_TRUE(is_proper_schedule(h, layers));
}

TEST(EdgeColoring, RandomBipartiteUsesMaxDegree) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; trial++) {
        size_t rows = 1 + rng() % 12, cols = 1 + rng() % 15;
        std::vector<std::vector<uint32_t>> e(rows);
        std::vector<size_t> coldeg(cols, 0);
        size_t maxdeg = 0;
        for (size_t r = 0; r < rows; r++) {
            for (uint32_t c = 0; c < cols; c++) {
                if (rng() % 3 == 0) {
                    e[r].push_back(c);
                    coldeg[c]++;
                }
            }
            maxdeg = std::max(maxdeg, e[r].size());
        }
        for (size_t d : coldeg) maxdeg = std::max(maxdeg, d);
        auto h = matrix_from_rows(cols, e);
        auto layers = edge_coloring_schedule(h);
        EXPECT_EQ(layers.size(), maxdeg);
        EXPECT_TRUE(is_proper_schedule(h, layers));
    }
}

TEST(EdgeColoring, ImproperScheduleRejected) {
    auto h = matrix_from_rows(3, {{0, 1}, {1, 2}});
    EXPECT_FALSE(is_proper_schedule(h, {{{0, 1}, {1, 1}}, {{0, 0}, {1, 2}}}));
    EXPECT_FALSE(is_proper_schedule(h, {{{0, 0}, {1, 1}}}));
}

TEST(EdgeColoring, P96DepthTwelve) {
    auto code = build_check_matrices(load_fixture_spec(96));
    for (const auto *h : {&code.h_x, &code.h_z}) {
        auto layers = edge_coloring_schedule(*h);
        EXPECT_EQ(layers.size(), 12u);
        EXPECT_TRUE(is_proper_schedule(*h, layers));
    }
}

TEST(Noise, DepolarizingFlipIsTwoThirds) {
    // Single-qubit Paulis X, Y, Z each with p/3; a Z readout flips on X and Y, an X readout on Z and Y.
    const char paulis[] = {'X', 'Y', 'Z'};
    for (double p : {0.0, 0.001, 0.3, 0.75}) {
        double z_flip = 0, x_flip = 0;
        for (char c : paulis) {
            if (c != 'Z') z_flip += p / 3;
            if (c != 'X') x_flip += p / 3;
        }
        auto noise = NoiseModel::phenomenological(p);
        EXPECT_NEAR(noise.data_flip_probability(), z_flip, 1e-15);
        EXPECT_NEAR(noise.data_flip_probability(), x_flip, 1e-15);
    }
}

TEST(Noise, Validation) {
    EXPECT_THROW((NoiseModel{NoiseKind::Phenomenological, 1.5, 0}).validate(), DomainError);
    EXPECT_THROW((NoiseModel{NoiseKind::Circuit, 0.001, 0.001}).validate(), DomainError);
    EXPECT_NO_THROW(NoiseModel::phenomenological(0.001).validate());
    EXPECT_EQ(noise_kind_from_name("code_capacity"), NoiseKind::CodeCapacity);
    EXPECT_THROW(noise_kind_from_name("bogus"), DomainError);
}

TEST(Memory, FourTwoTwoTwoRoundsByHand) {
    auto ex = build_memory_experiment(four_two_two(), 2, Basis::Z, NoiseModel::phenomenological(0.01));
    EXPECT_EQ(ex.num_detectors(), 3u);
    EXPECT_EQ(ex.num_mechanisms(), 10u);
    EXPECT_EQ(ex.num_observables(), 2u);
    for (uint32_t q = 0; q < 4; q++) {
        EXPECT_EQ(ex.mechanism_detectors[q], std::vector<uint32_t>{0});
        EXPECT_EQ(ex.mechanism_detectors[4 + q], std::vector<uint32_t>{1});
        EXPECT_EQ(ex.mechanism_observables[q], ex.mechanism_observables[4 + q]);
    }
    EXPECT_EQ(ex.mechanism_detectors[8], (std::vector<uint32_t>{0, 1}));
    EXPECT_EQ(ex.mechanism_detectors[9], (std::vector<uint32_t>{1, 2}));
    EXPECT_TRUE(ex.mechanism_observables[8].empty());
    EXPECT_NEAR(ex.priors[0], 2.0 / 3.0 * 0.01, 1e-15);
    EXPECT_NEAR(ex.priors[9], 4.0 / 3.0 * 0.01, 1e-15);
}

TEST(Memory, P96PriorsCoupled) {
    auto code = build_check_matrices(load_fixture_spec(96));
    const double p = 0.002;
    auto ex = build_memory_experiment(code, 32, Basis::Z, NoiseModel::phenomenological(p));
    EXPECT_EQ(ex.num_detectors(), code.h_z.rows * 33);
    EXPECT_EQ(ex.num_mechanisms(), code.n * 32 + code.h_z.rows * 32);
    EXPECT_EQ(ex.num_observables(), code.k);
    EXPECT_NEAR(ex.priors.back() / p, 4.0 / 3.0, 1e-12);
    EXPECT_NEAR(ex.priors.front() / p, 2.0 / 3.0, 1e-12);
}

TEST(Memory, SingleRoundWithoutMeasurementNoiseIsCodeCapacity) {
    auto code = steane();
    NoiseModel phen{NoiseKind::Phenomenological, 0.03, 0.0};
    auto a = build_memory_experiment(code, 1, Basis::Z, phen);
    auto b = build_memory_experiment(code, 1, Basis::Z, NoiseModel::code_capacity(0.03));
    ASSERT_EQ(a.num_mechanisms(), b.num_mechanisms());
    EXPECT_EQ(a.check.row_slice(0, b.num_detectors()), b.check);
    // The readout layer of a perfect round never fires.
    for (size_t d = b.num_detectors(); d < a.num_detectors(); d++) EXPECT_TRUE(a.check.entries[d].empty());
    EXPECT_EQ(a.observables, b.observables);
    EXPECT_EQ(a.priors, b.priors);
}

TEST(Memory, StabilizerErrorsAreSilent) {
    auto code = steane();
    attach_logicals(code);
    auto ex = build_memory_experiment(code, 3, Basis::Z, NoiseModel::phenomenological(0.01));
    for (size_t t = 0; t < 3; t++) {
        for (const auto &row : code.h_x.entries) {
            BitVec e(ex.num_mechanisms());
            for (uint32_t q : row) e.set(t * code.n + q);
            auto [syn, obs] = ex.apply(e);
            EXPECT_FALSE(syn.any());
            EXPECT_FALSE(obs.any());
        }
    }
}

TEST(Memory, SyndromeIsLinear) {
    auto ex = build_memory_experiment(steane(), 4, Basis::X, NoiseModel::phenomenological(0.01));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; i++) {
        BitVec a(ex.num_mechanisms()), b(ex.num_mechanisms());
        for (size_t e = 0; e < ex.num_mechanisms(); e++) {
            a.set(e, rng() & 1);
            b.set(e, rng() & 1);
        }
        auto [sa, oa] = ex.apply(a);
        auto [sb, ob] = ex.apply(b);
        BitVec ab = a;
        ab ^= b;
        auto [sab, oab] = ex.apply(ab);
        sa ^= sb;
        oa ^= ob;
        EXPECT_EQ(sab, sa);
        EXPECT_EQ(oab, oa);
    }
}

TEST(Sample, ZeroNoiseGivesZeroBatch) {
    auto ex = build_memory_experiment(steane(), 3, Basis::Z, NoiseModel::phenomenological(0.0));
    auto batch = sample(ex, 100, 1);
    EXPECT_TRUE(batch.syndromes.is_zero());
    EXPECT_TRUE(batch.observables.is_zero());
}

TEST(Sample, Deterministic) {
    auto ex = build_memory_experiment(steane(), 3, Basis::Z, NoiseModel::phenomenological(0.05));
    auto a = sample(ex, 3000, 42, true);
    auto b = sample(ex, 3000, 42, true);
    EXPECT_EQ(a.syndromes, b.syndromes);
    EXPECT_EQ(a.observables, b.observables);
    EXPECT_EQ(a.errors, b.errors);
    auto c = sample(ex, 3000, 43);
    EXPECT_NE(a.syndromes, c.syndromes);
}

TEST(Sample, SyndromesMatchErrors) {
    auto ex = build_memory_experiment(steane(), 3, Basis::Z, NoiseModel::phenomenological(0.05));
    auto batch = sample(ex, 500, 9, true);
    for (size_t s = 0; s < batch.shots(); s++) {
        auto [syn, obs] = ex.apply(batch.errors.row_vec(s));
        EXPECT_EQ(syn, batch.syndromes.row_vec(s));
        EXPECT_EQ(obs, batch.observables.row_vec(s));
    }
}

TEST(Sample, BernoulliFrequency) {
    auto h = matrix_from_rows(1, {{0}});
    // Flip probability 2p/3 = 0.5.
    auto ex = build_memory_experiment(h, BitMatrix(), 1, Basis::Z, NoiseModel::code_capacity(0.75));
    ASSERT_EQ(ex.num_mechanisms(), 1u);
    const size_t shots = 1000000;
    auto batch = sample(ex, shots, 2024);
    size_t ones = 0;
    for (size_t s = 0; s < shots; s++) ones += batch.syndromes.get(s, 0);
    double sigma = std::sqrt(shots * 0.25);
    EXPECT_LT(std::abs(double(ones) - shots * 0.5), 5 * sigma);
}

TEST(Sample, MeanFlipRateMatchesPriors) {
    auto ex = build_memory_experiment(steane(), 5, Basis::Z, NoiseModel::phenomenological(0.03));
    const size_t shots = 20000;
    auto batch = sample(ex, shots, 5, true);
    double expected = 0, seen = 0;
    for (double p : ex.priors) expected += p;
    for (size_t s = 0; s < shots; s++) seen += double(batch.errors.row_weight(s));
    expected *= shots;
    double var = 0;
    for (double p : ex.priors) var += p * (1 - p) * shots;
    EXPECT_LT(std::abs(seen - expected), 5 * std::sqrt(var));
}

TEST(Sample, RejectsZeroShots) {
    auto ex = build_memory_experiment(steane(), 1, Basis::Z, NoiseModel::phenomenological(0.01));
    EXPECT_THROW(sample(ex, 0, 1), DomainError);
}
