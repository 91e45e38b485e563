#include "apmqec/metrics.h"

#include <gtest/gtest.h>

#include <cmath>

#include "apmqec/errors.h"
#include "apmqec/fixtures.h"

using namespace apmqec;

TEST(Throughput, ScaleFactors) {
    auto m1 = throughput_model_from_json(read_json_file(fixture_path("t1152.json")));
    auto m2 = throughput_model_from_json(read_json_file(fixture_path("t2304.json")));
    EXPECT_DOUBLE_EQ(throughput(m1).scale_factor, 8.0);
    EXPECT_NEAR(throughput(m2).scale_factor, 18.67, 0.01);
}

TEST(Throughput, AverageWork) {
    auto r1 = throughput(throughput_model_from_json(read_json_file(fixture_path("t1152.json"))));
    auto r2 = throughput(throughput_model_from_json(read_json_file(fixture_path("t2304.json"))));
    // 100 + 0.008 * 1100 + 3e-5 * 320000 and 260 + 0.013 * 17000 + 7e-4 * 720000
    EXPECT_NEAR(r1.t_bar_ns, 118.4, 1e-9);
    EXPECT_NEAR(r2.t_bar_ns, 985.0, 1e-9);
    ASSERT_TRUE(r1.backlog_probability.has_value());
    EXPECT_NEAR(*r1.backlog_probability / (1 - std::pow(1 - 3e-5, 350)), 1.0, 1e-11);
    EXPECT_NEAR(*r1.backlog_probability, 0.0104, 1e-4);
    EXPECT_FALSE(r2.backlog_probability.has_value());
}

TEST(Throughput, Validation) {
    ThroughputModel m;
    m.n = 10;
    m.window = 2;
    m.tier_times_ns = {1, 2};
    m.escalation = {0.5, 0.1};
    EXPECT_THROW(m.validate(), DomainError);
    m.escalation = {1.0, 1.5};
    EXPECT_THROW(m.validate(), DomainError);
    m.escalation = {1.0};
    EXPECT_THROW(m.validate(), DomainError);
    m.escalation = {1.0, 0.2};
    EXPECT_NO_THROW(m.validate());
    EXPECT_THROW(throughput_model_from_json(Json{{"n", 5}}), ParseError);
}

TEST(Throughput, RatiosToFractions) {
    auto q = escalation_from_ratios({0.008, 0.00375, 0.0});
    ASSERT_EQ(q.size(), 3u);
    EXPECT_EQ(q[0], 1.0);
    EXPECT_DOUBLE_EQ(q[1], 0.008);
    EXPECT_DOUBLE_EQ(q[2], 0.00003);
}

TEST(Throughput, JsonRoundTrip) {
    auto m = throughput_model_from_json(read_json_file(fixture_path("t1152.json")));
    auto back = throughput_model_from_json(throughput_model_to_json(m));
    EXPECT_EQ(back.tier_times_ns, m.tier_times_ns);
    EXPECT_EQ(back.escalation, m.escalation);
    EXPECT_EQ(back.tier3_span_rounds, m.tier3_span_rounds);
}

TEST(ClopperPearson, MatchesReferenceQuantiles) {
    // Beta quantiles from an independent statistics library.
    auto a = clopper_pearson(7, 13500000);
    EXPECT_NEAR(a.lower / 2.0847136174643953e-07, 1.0, 1e-9);
    EXPECT_NEAR(a.upper / 1.0683460294421904e-06, 1.0, 1e-9);
    auto b = clopper_pearson(3, 10);
    EXPECT_NEAR(b.lower, 0.06673951117773447, 1e-12);
    EXPECT_NEAR(b.upper, 0.6524528500599973, 1e-12);
    auto c = clopper_pearson(0, 1000);
    EXPECT_EQ(c.lower, 0.0);
    EXPECT_NEAR(c.upper, 0.0029912495450952954, 1e-12);
    auto d = clopper_pearson(10, 10);
    EXPECT_NEAR(d.lower, 0.6915028921812392, 1e-12);
    EXPECT_EQ(d.upper, 1.0);
    EXPECT_THROW(clopper_pearson(1, 0), DomainError);
}

TEST(RateMetrics, ReportedExample) {
    auto m = rate_metrics(7, 13500000, 32, 580);
    EXPECT_GE(m.block_per_round.estimate, 1.5e-8);
    EXPECT_LE(m.block_per_round.estimate, 1.8e-8);
    EXPECT_GE(m.per_logical_per_round.estimate, 2.5e-11);
    EXPECT_LE(m.per_logical_per_round.estimate, 3.2e-11);
    EXPECT_LT(m.block_per_round.lower, m.block_per_round.estimate);
    EXPECT_GT(m.block_per_round.upper, m.block_per_round.estimate);
}

TEST(RateMetrics, ZeroFailures) {
    auto m = rate_metrics(0, 1000, 10, 4);
    EXPECT_EQ(m.block_per_shot.estimate, 0.0);
    EXPECT_EQ(m.block_per_round.estimate, 0.0);
    EXPECT_GT(m.block_per_round.upper, 0.0);
    EXPECT_THROW(rate_metrics(0, 0, 10, 4), DomainError);
}

TEST(RateMetrics, CompoundingInverts) {
    for (double p : {1e-12, 3e-9, 5.2e-7, 0.01, 0.4, 0.999}) {
        for (double r : {1.0, 32.0, 580.0}) {
            double back = compound_rate(per_round_rate(p, r), r);
            EXPECT_NEAR(back / p, 1.0, 1e-9);
        }
    }
    double prev = 0;
    for (double p = 1e-6; p < 1; p *= 3) {
        double q = per_round_rate(p, 32);
        EXPECT_GT(q, prev);
        prev = q;
    }
}
