#include "apmqec/code.h"

#include <gtest/gtest.h>

#include <algorithm>

#include "apmqec/apm_group.h"
#include "apmqec/errors.h"
#include "apmqec/fixtures.h"
#include "test_util.h"

using namespace apmqec;
using apmqec::testing::matrix_from_rows;
using apmqec::testing::naive_rank;
using apmqec::testing::to_bool;

namespace {

bool css_orthogonal(const CssCode &c) {
    return (c.h_x.to_dense() * c.h_z.to_dense().transpose()).is_zero();
}

}  // namespace

TEST(code, table_instances) {
    for (auto [P, k] : std::vector<std::pair<int64_t, size_t>>{{96, 580}, {192, 1156}, {384, 2308}}) {
        auto code = build_check_matrices(load_fixture_spec(P));
        EXPECT_EQ(code.n, (size_t)(12 * P));
        EXPECT_EQ(code.k, k) << "P=" << P;
        EXPECT_TRUE(css_orthogonal(code));
        EXPECT_EQ(code.h_x.rows, (size_t)(3 * P));
    }
}

TEST(code, row_and_column_weights) {
    auto code = build_check_matrices(load_fixture_spec(96));
    for (const auto *h : {&code.h_x, &code.h_z}) {
        for (const auto &row : h->entries) EXPECT_EQ(row.size(), 12u);
        for (const auto &col : h->column_supports()) EXPECT_EQ(col.size(), 3u);
    }
}

TEST(code, rank_p96_matches_naive_oracle) {
    auto code = build_check_matrices(load_fixture_spec(96));
    size_t rx = gf2_rank(code.h_x), rz = gf2_rank(code.h_z);
    EXPECT_EQ(rx + rz, 1152u - 580u);
    EXPECT_EQ(rx, 286u);
    EXPECT_EQ(rx, naive_rank(to_bool(code.h_x)));
    EXPECT_EQ(rz, naive_rank(to_bool(code.h_z)));
}

TEST(code, parent_matrices) {
    auto spec = load_fixture_spec(96);
    auto code = build_check_matrices(spec);
    auto [px, pz] = build_parent_matrices(spec);
    EXPECT_EQ(px.rows, 6u * 96);
    EXPECT_EQ(pz.rows, 6u * 96);
    EXPECT_EQ(px.row_slice(0, 288), code.h_x);
    EXPECT_EQ(pz.row_slice(0, 288), code.h_z);
    // Deleted rows are not stabilizers of the truncated code.
    RowSpace hx(code.h_x.to_dense());
    BitMatrix dense = px.to_dense();
    size_t outside = 0;
    for (size_t r = 288; r < 576; r++) outside += !hx.contains(dense.row_vec(r));
    EXPECT_EQ(outside, 288u);
}

TEST(code, broken_spec_names_block_pair) {
    auto spec = load_fixture_spec(96);
    spec.f[1] = Apm(7, 3, 96);
    try {
        build_check_matrices(spec);
        FAIL() << "expected ConstructionError";
    } catch (const ConstructionError &e) {
        EXPECT_NE(std::string(e.what()).find("block row"), std::string::npos);
    }
}

TEST(code, girth) {
    EXPECT_EQ(tanner_girth(matrix_from_rows(2, {{0, 1}, {0, 1}})).length, 4u);
    EXPECT_TRUE(tanner_girth(matrix_from_rows(5, {{0, 1, 2, 3, 4}})).is_infinite());
    EXPECT_EQ(tanner_girth(matrix_from_rows(3, {{0, 1}, {1, 2}, {0, 2}})).length, 6u);
    auto code = build_check_matrices(load_fixture_spec(96));
    EXPECT_TRUE(tanner_girth(code.h_x).at_least(6));
    EXPECT_TRUE(tanner_girth(code.h_z).at_least(6));
}

TEST(code, logical_basis_small_codes) {
    auto rep = make_css_code(matrix_from_rows(2, {{0, 1}}), SparseGf2Matrix(0, 2));
    EXPECT_EQ(rep.k, 1u);
    attach_logicals(rep);
    EXPECT_TRUE(rep.has_logicals());

    auto steane = apmqec::testing::steane();
    EXPECT_EQ(steane.k, 1u);
    attach_logicals(steane);
    EXPECT_EQ((steane.logical_x * steane.logical_z.transpose()).get(0, 0), true);
}

TEST(code, logical_basis_p96_is_symplectic) {
    auto code = build_check_matrices(load_fixture_spec(96));
    attach_logicals(code);
    ASSERT_EQ(code.logical_x.rows(), 580u);
    BitMatrix pairing = code.logical_x * code.logical_z.transpose();
    for (size_t i = 0; i < 580; i++) {
        for (size_t j = 0; j < 580; j++) ASSERT_EQ(pairing.get(i, j), i == j);
    }
    EXPECT_TRUE((code.h_z.to_dense() * code.logical_x.transpose()).is_zero());
    EXPECT_TRUE((code.h_x.to_dense() * code.logical_z.transpose()).is_zero());
}

TEST(code, quasi_cyclic_automorphism_p96) {
    // Relabel each block column by the exponent coordinate of the cyclic column group,
    // then shift that coordinate by one; the row set of h_x must be preserved.
    auto spec = load_fixture_spec(96);
    auto code = build_check_matrices(spec);
    std::vector<Apm> comps;
    for (int i = 0; i < 12; i++) comps.push_back(spec.map(i).reduce(32));
    auto s = max_abelian_subgroup(group_closure(comps, 32));
    auto rel = exponent_relabeling(s);
    // x in Z_96 <-> (x mod 3, k) with x mod 32 = sigma(k); shift k -> k + 1.
    auto phi = [&](int64_t x) {
        int64_t k = rel.code_of_point[x % 32];
        int64_t y32 = rel.point_of_code[(k + 1) % 32];
        return crt_combine(Apm::shift(x % 3, 3), Apm::shift(y32, 32))(0);
    };
    auto rows_under = [&](const SparseGf2Matrix &h, bool shifted) {
        std::vector<std::vector<uint32_t>> out;
        for (const auto &row : h.entries) {
            std::vector<uint32_t> r;
            for (uint32_t c : row) {
                uint32_t blk = c / 96, x = c % 96;
                r.push_back(blk * 96 + (uint32_t)(shifted ? phi(x) : x));
            }
            std::sort(r.begin(), r.end());
            out.push_back(r);
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    EXPECT_EQ(rows_under(code.h_x, true), rows_under(code.h_x, false));
    EXPECT_EQ(rows_under(code.h_z, true), rows_under(code.h_z, false));
}
