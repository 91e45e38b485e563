#include "apmqec/alist.h"

#include <gtest/gtest.h>

#include "apmqec/errors.h"
#include "apmqec/fixtures.h"
#include "test_util.h"

using namespace apmqec;

TEST(alist, tiny_exact_text) {
    // [[1 0 1], [1 1 0]]
    auto m = apmqec::testing::matrix_from_rows(3, {{0, 2}, {0, 1}});
    const char *expected =
        "3 2\n"
        "2 2\n"
        "2 1 1\n"
        "2 2\n"
        "1 2\n"
        "2 0\n"
        "1 0\n"
        "1 3\n"
        "1 2\n";
    EXPECT_EQ(export_alist(m), expected);
    EXPECT_EQ(import_alist(expected), m);
}

TEST(alist, roundtrip_p96) {
    auto code = build_check_matrices(load_fixture_spec(96));
    EXPECT_EQ(import_alist(export_alist(code.h_x)), code.h_x);
}

TEST(alist, truncated_input_reports_line) {
    auto m = apmqec::testing::matrix_from_rows(3, {{0, 2}, {0, 1}});
    std::string text = export_alist(m);
    text = text.substr(0, text.rfind("1 3"));
    try {
        import_alist(text);
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line, 8u);
    }
}

TEST(alist, inconsistent_lists) {
    EXPECT_THROW(import_alist("3 2\n2 2\n2 1 1\n2 2\n1 2\n2 0\n1 0\n1 3\n1 3\n"), ParseError);
    EXPECT_THROW(import_alist("3 2\n2 2\n2 1 x\n"), ParseError);
}
