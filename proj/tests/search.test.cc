#include "apmqec/search.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "apmqec/bp.h"
#include "apmqec/errors.h"
#include "apmqec/fixtures.h"
#include "apmqec/memory.h"

using namespace apmqec;

namespace {

Apm random_apm(std::mt19937_64 &rng, int64_t P) {
    while (true) {
        int64_t a = rng() % P;
        if (std::gcd(a, P) == 1) return Apm(a, rng() % P, P);
    }
}

bool commute_pointwise(const Apm &f, const Apm &g) {
    for (int64_t x = 0; x < f.modulus(); x++) {
        if (f(g(x)) != g(f(x))) return false;
    }
    return true;
}

// Transition constraint evaluated on explicit point maps.
bool transitions_commute_pointwise(const CodeSpec &spec, const Apm &reference) {
    for (size_t k = 0; k + 1 < kDefaultOrdering.size(); k++) {
        auto prev = as_permutation(spec.map(kDefaultOrdering[k]));
        auto next = as_permutation(spec.map(kDefaultOrdering[k + 1]));
        std::vector<int64_t> prev_inv(prev.size());
        for (size_t x = 0; x < prev.size(); x++) prev_inv[prev[x]] = (int64_t)x;
        for (int64_t x = 0; x < spec.P; x++) {
            int64_t tx = next[prev_inv[reference(x)]];
            int64_t rt = reference(next[prev_inv[x]]);
            if (tx != rt) return false;
        }
    }
    return true;
}

SearchConfig fast_config(int64_t P) {
    SearchConfig c;
    c.P = P;
    c.reference = derived_reference(load_fixture_spec(P));
    c.distance_trials = 0;
    c.capacity_shots = 0;
    return c;
}

CssCode code_422() {
    SparseGf2Matrix h(1, 4);
    h.entries[0] = {0, 1, 2, 3};
    return make_css_code(h, h);
}

}  // namespace

TEST(search, derived_reference_orbits) {
    auto orbits = orbit_decompose(derived_reference(load_fixture_spec(96))).orbit_lengths();
    EXPECT_EQ(orbits, (std::vector<size_t>{32, 32, 32}));
    for (int64_t P : {192, 384}) {
        for (size_t len : orbit_decompose(derived_reference(load_fixture_spec(P))).orbit_lengths()) {
            EXPECT_EQ(len, 32u) << P;
        }
    }
}

TEST(search, fixture_transitions_commute_with_reference) {
    for (int64_t P : {96, 192, 384}) {
        auto spec = load_fixture_spec(P);
        Apm a = derived_reference(spec);
        EXPECT_TRUE(check_transition_constraints(spec, a)) << P;
        EXPECT_TRUE(transitions_commute_pointwise(spec, a)) << P;
    }
}

TEST(search, replaced_map_breaks_constraints) {
    auto spec = load_fixture_spec(96);
    Apm a = derived_reference(spec);
    std::mt19937_64 rng(11);
    int broken = 0;
    for (int t = 0; t < 60; t++) {
        auto s = spec;
        s.f[rng() % 6] = random_apm(rng, 96);
        bool fast = check_transition_constraints(s, a);
        EXPECT_EQ(fast, transitions_commute_pointwise(s, a));
        broken += !fast;
    }
    EXPECT_GE(broken, 50);
}

TEST(search, trivial_constraint_cases) {
    auto id = CodeSpec::all_identity(96);
    EXPECT_TRUE(check_transition_constraints(id, Apm::identity(96)));
    EXPECT_THROW(check_transition_constraints(id, Apm::identity(48)), DomainError);
    auto spec = load_fixture_spec(96);
    std::vector<std::pair<int, int>> pairs{{0, 3}, {1, 2}};
    EXPECT_TRUE(check_noncommute_pairs(spec, pairs));
    std::vector<std::pair<int, int>> commuting{{0, 1}};
    ASSERT_TRUE(commutes(spec.f[0], spec.g[1]));
    EXPECT_FALSE(check_noncommute_pairs(spec, commuting));
    EXPECT_TRUE(check_noncommute_pairs(spec, {}));
}

TEST(search, noncommute_pairs_match_pointwise_oracle) {
    for (int64_t P : {96, 192, 384}) {
        auto spec = load_fixture_spec(P);
        for (int i = 0; i < 6; i++) {
            for (int j = 0; j < 6; j++) {
                bool expect_nc = (i == 0 && j == 3) || (i == 1 && j == 2);
                EXPECT_EQ(!commute_pointwise(spec.f[i], spec.g[j]), expect_nc) << P << " " << i << " " << j;
            }
        }
    }
}

TEST(search, config_validation_and_json) {
    auto c = fast_config(96);
    c.validate();
    auto bad = c;
    bad.girth_min = 5;
    EXPECT_THROW(bad.validate(), DomainError);
    bad = c;
    bad.girth_min = 2;
    EXPECT_THROW(bad.validate(), DomainError);
    bad = c;
    bad.noncommute_pairs = {{3, 1}};
    EXPECT_THROW(bad.validate(), DomainError);
    bad = c;
    bad.reference = Apm::identity(48);
    EXPECT_THROW(bad.validate(), DomainError);
    auto back = search_config_from_json(search_config_to_json(c));
    EXPECT_EQ(search_config_to_json(back), search_config_to_json(c));
}

TEST(search, fixture_passes_all_filters) {
    auto c = fast_config(96);
    c.distance_trials = 40;
    c.capacity_shots = 20;
    Candidate cand;
    auto reason = evaluate_candidate(load_fixture_spec(96), c, 0, cand);
    ASSERT_FALSE(reason.has_value()) << *reason;
    EXPECT_EQ(cand.n, 1152u);
    EXPECT_EQ(cand.k, 580u);
    EXPECT_TRUE(cand.girth.at_least(6));
    ASSERT_TRUE(cand.distance.has_value());
    EXPECT_GE(cand.distance->d_upper(), 12u);
    ASSERT_TRUE(cand.capacity_logical_rate.has_value());
    auto code = build_check_matrices(load_fixture_spec(96));
    EXPECT_TRUE(verify_witnesses(code, *cand.distance));
}

TEST(search, zero_seeds_is_empty) {
    auto c = fast_config(96);
    c.seeds = 0;
    auto r = search(c);
    EXPECT_TRUE(r.candidates.empty());
    EXPECT_TRUE(r.rejections.empty());
}

TEST(search, survivors_satisfy_every_constraint) {
    auto c = fast_config(96);
    c.anchor_in_centralizer = true;
    c.seeds = 120;
    auto r = search(c);
    ASSERT_FALSE(r.candidates.empty());
    size_t total = r.candidates.size();
    for (auto &[reason, count] : r.rejections) total += count;
    EXPECT_EQ(total, c.seeds);
    for (const auto &cand : r.candidates) {
        EXPECT_TRUE(check_transition_constraints(cand.spec, c.reference));
        EXPECT_TRUE(check_noncommute_pairs(cand.spec, c.noncommute_pairs));
        EXPECT_NO_THROW(build_check_matrices(cand.spec));
        EXPECT_TRUE(cand.girth.at_least(6));
    }
}

TEST(search, girth_eight_leaves_far_fewer) {
    auto c = fast_config(96);
    c.anchor_in_centralizer = true;
    c.seeds = 300;
    size_t g6 = search(c).candidates.size();
    c.girth_min = 8;
    size_t g8 = search(c).candidates.size();
    EXPECT_GE(g6, 5u);
    EXPECT_LE(4 * g8, g6);
}

TEST(search, reproducible_and_sorted) {
    auto c = fast_config(96);
    c.anchor_in_centralizer = true;
    c.seeds = 60;
    c.distance_trials = 20;
    c.capacity_shots = 10;
    auto a = search(c), b = search(c);
    ASSERT_EQ(a.candidates.size(), b.candidates.size());
    for (size_t i = 0; i < a.candidates.size(); i++) {
        EXPECT_EQ(candidate_to_json(a.candidates[i]), candidate_to_json(b.candidates[i]));
    }
    for (size_t i = 1; i < a.candidates.size(); i++) {
        size_t d0 = a.candidates[i - 1].distance->d_upper(), d1 = a.candidates[i].distance->d_upper();
        EXPECT_GE(d0, d1);
        if (d0 == d1) {
            EXPECT_LE(*a.candidates[i - 1].capacity_logical_rate, *a.candidates[i].capacity_logical_rate);
        }
    }
}

TEST(capacity_filter, zero_noise) {
    EXPECT_EQ(capacity_filter(code_422(), 0.0, 100, 1), 0.0);
    EXPECT_THROW(capacity_filter(code_422(), 1.0, 10, 1), DomainError);
}

TEST(capacity_filter, toy_code_matches_exhaustive_enumeration) {
    const double p = 0.5;
    auto code = code_422();
    auto noise = NoiseModel::code_capacity(p);
    auto ex_z = build_memory_experiment(code, 1, Basis::Z, noise);
    auto ex_x = build_memory_experiment(code, 1, Basis::X, noise);
    DecodingGraph g_z(ex_z.check, ex_z.priors), g_x(ex_x.check, ex_x.priors);
    auto part_fails = [](const MemoryExperiment &ex, const DecodingGraph &g, const BitVec &e) {
        auto [syn, obs] = ex.apply(e);
        auto out = bp_decode(g, syn, BpConfig{});
        if (!out.converged) return true;
        auto [s2, o2] = ex.apply(out.correction);
        o2 ^= obs;
        return o2.any();
    };
    double exact = 0;
    for (int pattern = 0; pattern < 256; pattern++) {
        BitVec ex(4), ez(4);
        double prob = 1;
        for (int q = 0; q < 4; q++) {
            int pauli = (pattern >> (2 * q)) & 3;  // 0 I, 1 X, 2 Y, 3 Z
            prob *= pauli == 0 ? 1 - p : p / 3;
            if (pauli == 1 || pauli == 2) ex.set(q);
            if (pauli == 2 || pauli == 3) ez.set(q);
        }
        if (part_fails(ex_z, g_z, ex) || part_fails(ex_x, g_x, ez)) exact += prob;
    }
    const size_t shots = 20000;
    double est = capacity_filter(code, p, shots, 5);
    double sigma = std::sqrt(exact * (1 - exact) / shots);
    EXPECT_NEAR(est, exact, 3 * sigma) << "exact " << exact;
    EXPECT_GT(exact, 0.1);
    EXPECT_EQ(est, capacity_filter(code, p, shots, 5));
}

TEST(capacity_filter, p96_monotone_in_noise) {
    auto code = build_check_matrices(load_fixture_spec(96));
    double low = capacity_filter(code, 0.01, 40, 2);
    double high = capacity_filter(code, 0.05, 40, 2);
    EXPECT_LT(low, high);
}
