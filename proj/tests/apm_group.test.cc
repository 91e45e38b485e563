#include "apmqec/apm_group.h"

#include <gtest/gtest.h>

#include "apmqec/errors.h"
#include "apmqec/fixtures.h"

using namespace apmqec;

namespace {

std::vector<Apm> column_components(const CodeSpec &spec) {
    std::vector<Apm> out;
    for (int i = 0; i < 12; i++) {
        out.push_back(spec.map(i).reduce(spec.P / 3));
    }
    return out;
}

}  // namespace

TEST(apm_group, closure_examples) {
    auto g96 = group_closure(column_components(load_fixture_spec(96)), 32);
    EXPECT_EQ(g96.size(), 32u);
    EXPECT_TRUE(g96.is_abelian());

    auto g192 = group_closure(column_components(load_fixture_spec(192)), 64);
    EXPECT_EQ(g192.size(), 64u);

    Apm gamma2(13, 30, 64);
    EXPECT_EQ(group_closure(std::vector<Apm>{gamma2}, 64).size(), 32u);

    auto trivial = group_closure(std::vector<Apm>{}, 96);
    ASSERT_EQ(trivial.size(), 1u);
    EXPECT_TRUE(trivial.elements()[0].is_identity());

    auto g384 = group_closure(column_components(load_fixture_spec(384)), 128);
    EXPECT_EQ(g384.size(), 512u);
    EXPECT_FALSE(g384.is_abelian());
    // |G| divides |Aff(Z_128)| = 128 * 64.
    EXPECT_EQ((128 * 64) % g384.size(), 0u);
    EXPECT_THROW(group_closure(column_components(load_fixture_spec(384)), 128, 100), CapacityError);
}

TEST(apm_group, closure_is_closed) {
    auto g = group_closure(column_components(load_fixture_spec(384)), 128);
    for (const auto &x : g.elements()) {
        EXPECT_TRUE(g.contains(inverse(x)));
        for (size_t k = 0; k < g.size(); k += 37) {
            EXPECT_TRUE(g.contains(compose(x, g.elements()[k])));
        }
    }
}

TEST(apm_group, max_abelian_p96_cyclic) {
    auto comps = column_components(load_fixture_spec(96));
    auto s = max_abelian_subgroup(group_closure(comps, 32));
    EXPECT_EQ(s.subgroup.size(), 32u);
    EXPECT_EQ(s.invariant_factors, std::vector<int64_t>{32});
    EXPECT_EQ(s.cyclic_generators[0], Apm(5, 1, 32));
    for (const auto &c : comps) {
        EXPECT_TRUE(s.subgroup.contains(c));
    }
}

TEST(apm_group, max_abelian_p192) {
    auto comps = column_components(load_fixture_spec(192));
    auto s = max_abelian_subgroup(group_closure(comps, 64));
    EXPECT_EQ(s.subgroup.size(), 64u);
    EXPECT_EQ(s.invariant_factors, (std::vector<int64_t>{32, 2}));
    for (const auto &c : comps) {
        EXPECT_TRUE(s.subgroup.contains(c));
    }
}

TEST(apm_group, max_abelian_p384_outside_set) {
    auto spec = load_fixture_spec(384);
    auto comps = column_components(spec);
    auto s = max_abelian_subgroup(group_closure(comps, 128));
    EXPECT_EQ(s.subgroup.size(), 128u);
    std::vector<int> outside;
    for (int i = 0; i < 12; i++) {
        if (!s.subgroup.contains(comps[i])) {
            outside.push_back(i);
        }
    }
    // f1, g0, g1, g3, g4, g5
    EXPECT_EQ(outside, (std::vector<int>{1, 6, 7, 9, 10, 11}));
    EXPECT_THROW(exponent_relabeling(s), StructureError);
}

TEST(apm_group, abelian_input_returns_itself) {
    auto g = group_closure(std::vector<Apm>{Apm(13, 30, 64), Apm(63, 43, 64)}, 64);
    ASSERT_TRUE(g.is_abelian());
    auto s = max_abelian_subgroup(g);
    EXPECT_EQ(s.subgroup.elements(), g.elements());
}

TEST(apm_group, invariant_factor_product) {
    auto g = group_closure(std::vector<Apm>{Apm(13, 30, 64), Apm(63, 43, 64)}, 64);
    auto s = AbelianStructure::decompose(g);
    int64_t prod = 1;
    for (auto n : s.invariant_factors) prod *= n;
    EXPECT_EQ(prod, (int64_t)g.size());
    for (const auto &x : g.elements()) {
        auto e = s.exponents_of(x);
        ASSERT_TRUE(e.has_value());
        EXPECT_EQ(s.element_from(*e), x);
    }
}

TEST(apm_group, exponent_relabeling_examples) {
    Apm gamma(5, 1, 32);
    auto s = AbelianStructure::decompose(group_closure(std::vector<Apm>{gamma}, 32));
    auto rel = exponent_relabeling(s);
    for (int64_t k = 0; k < 32; k++) {
        std::vector<int64_t> e{k};
        EXPECT_EQ(rel.sigma(e), power(s.cyclic_generators[0], k)(0));
        EXPECT_EQ(rel.code_of_point[rel.sigma(e)], k);
    }

    auto triv = AbelianStructure::decompose(group_closure(std::vector<Apm>{}, 1));
    auto r1 = exponent_relabeling(triv);
    EXPECT_EQ(r1.sigma(std::vector<int64_t>{}), 0);

    Apm g1(63, 43, 64), g2(13, 30, 64);
    auto s2 = AbelianStructure::from_generators(group_closure(std::vector<Apm>{g1, g2}, 64), {g1, g2});
    EXPECT_EQ(s2.invariant_factors, (std::vector<int64_t>{2, 32}));
    auto r2 = exponent_relabeling(s2);
    std::vector<bool> hit(64, false);
    for (int64_t a = 0; a < 2; a++) {
        for (int64_t b = 0; b < 32; b++) {
            int64_t x = compose(power(g1, a), power(g2, b))(0);
            EXPECT_EQ(r2.sigma(std::vector<int64_t>{a, b}), x);
            EXPECT_FALSE(hit[x]);
            hit[x] = true;
        }
    }
}

TEST(apm_group, centralizer_matches_brute_force) {
    Apm A(5, 1, 32);
    auto c = centralizer(A);
    size_t count = 0;
    for (int64_t a = 1; a < 32; a += 2) {
        for (int64_t b = 0; b < 32; b++) {
            Apm f(a, b, 32);
            bool eq = true;
            for (int64_t x = 0; x < 32; x++) eq &= f(A(x)) == A(f(x));
            count += eq;
        }
    }
    EXPECT_EQ(c.size(), count);
}
