#include "apmqec/distance.h"

#include <gtest/gtest.h>

#include <random>

#include "apmqec/errors.h"
#include "test_util.h"

using namespace apmqec;

TEST(distance, steane) {
    auto code = apmqec::testing::steane();
    auto exact = exact_distance_bruteforce(code);
    EXPECT_EQ(exact.d_x_upper, 3u);
    EXPECT_EQ(exact.d_z_upper, 3u);
    auto rnd = distance_upper_bound(code, 100, 1);
    EXPECT_EQ(rnd.d_upper(), 3u);
    EXPECT_TRUE(verify_witnesses(code, rnd));
    EXPECT_TRUE(verify_witnesses(code, exact));
}

TEST(distance, four_two_two) {
    auto code = apmqec::testing::four_two_two();
    EXPECT_EQ(code.k, 2u);
    EXPECT_EQ(exact_distance_bruteforce(code).d_upper(), 2u);
    EXPECT_EQ(distance_upper_bound(code, 20, 3).d_upper(), 2u);
}

TEST(distance, no_checks_single_qubit) {
    auto code = make_css_code(SparseGf2Matrix(0, 1), SparseGf2Matrix(0, 1));
    auto rep = exact_distance_bruteforce(code);
    EXPECT_EQ(rep.d_x_upper, 1u);
    EXPECT_EQ(rep.d_z_upper, 1u);
}

TEST(distance, errors) {
    auto h = apmqec::testing::matrix_from_rows(2, {{0}, {1}});
    auto trivial = make_css_code(h, SparseGf2Matrix(0, 2));
    EXPECT_EQ(trivial.k, 0u);
    EXPECT_THROW(distance_upper_bound(trivial, 10, 0), DomainError);
    auto big = make_css_code(SparseGf2Matrix(0, 25), SparseGf2Matrix(0, 25));
    EXPECT_THROW(exact_distance_bruteforce(big), CapacityError);
}

TEST(distance, random_codes_bound_exact_and_monotone) {
    // Hypergraph-product-free construction: h_z random, h_x drawn from ker(h_z)^T rows.
    std::mt19937_64 rng(9);
    int checked = 0;
    for (int trial = 0; trial < 40 && checked < 15; trial++) {
        size_t n = 8 + rng() % 13;
        SparseGf2Matrix hz(2 + rng() % 3, n);
        for (auto &row : hz.entries) {
            for (uint32_t c = 0; c < n; c++) if (rng() % 3 == 0) row.push_back(c);
        }
        BitMatrix ker = kernel(hz.to_dense());
        SparseGf2Matrix hx(std::min<size_t>(ker.rows() / 2, 3), n);
        for (size_t r = 0; r < hx.rows; r++) {
            BitVec v(n);
            for (size_t k = 0; k < ker.rows(); k++) if (rng() & 1) v ^= ker.row_vec(k);
            hx.entries[r] = v.support();
        }
        auto code = make_css_code(hx, hz);
        if (code.k == 0) continue;
        checked++;
        auto exact = exact_distance_bruteforce(code);
        size_t prev = SIZE_MAX;
        for (uint64_t t : {1, 5, 50, 400}) {
            auto rep = distance_upper_bound(code, t, 17);
            EXPECT_GE(rep.d_x_upper, exact.d_x_upper);
            EXPECT_GE(rep.d_z_upper, exact.d_z_upper);
            EXPECT_LE(rep.d_upper(), prev);
            prev = rep.d_upper();
            EXPECT_TRUE(verify_witnesses(code, rep));
        }
        EXPECT_EQ(prev, exact.d_upper());
    }
    EXPECT_GE(checked, 10);
}

TEST(distance, reproducible) {
    auto code = apmqec::testing::steane();
    auto a = distance_upper_bound(code, 30, 5), b = distance_upper_bound(code, 30, 5);
    EXPECT_EQ(a.witness_x, b.witness_x);
    EXPECT_EQ(a.witness_z, b.witness_z);
}
