#ifndef APMQEC_METRICS_H
#define APMQEC_METRICS_H

#include <optional>
#include <string>
#include <vector>

#include "apmqec/json_io.h"

namespace apmqec {

/// Per-round decoding work of a tier stack, scaled from a reference decoder.
struct ThroughputModel {
    std::string name;
    size_t n = 0;
    size_t window = 0;
    size_t check_degree = 6;
    /// Per-round time of each tier (ns) and the fraction q_i of rounds reaching it.
    std::vector<double> tier_times_ns;
    std::vector<double> escalation;
    /// Rounds spanned by one last-tier solve; enables the backlog estimate.
    std::optional<size_t> tier3_span_rounds;
    size_t reference_n = 144;
    size_t reference_window = 12;
    size_t reference_degree = 6;

    /// Throws DomainError unless q_1 = 1, q is nonincreasing in [0, 1], and sizes match.
    void validate() const;
};

ThroughputModel throughput_model_from_json(const Json &j);
Json throughput_model_to_json(const ThroughputModel &m);

/// q_1 = 1, q_i = r_1 ... r_{i-1} from per-tier escalation ratios r_i.
std::vector<double> escalation_from_ratios(const std::vector<double> &ratios);

struct ThroughputReport {
    double t_bar_ns = 0;
    double scale_factor = 0;
    /// 1 - (1 - q_last)^span when a span is given.
    std::optional<double> backlog_probability;
};

ThroughputReport throughput(const ThroughputModel &model);
Json throughput_report_to_json(const ThroughputReport &r);

struct Interval {
    double estimate = 0;
    double lower = 0;
    double upper = 0;
};

/// Clopper-Pearson interval at `confidence` (two-sided; one-sided upper when failures = 0).
Interval clopper_pearson(size_t failures, size_t shots, double confidence = 0.95);

struct RateMetrics {
    size_t failures = 0;
    size_t shots = 0;
    size_t rounds = 0;
    size_t k = 0;
    Interval block_per_shot;
    Interval block_per_round;
    Interval per_logical_per_round;
};

/// Per round 1 - (1 - p_block)^(1/r), per logical 1 - (1 - p_round)^(1/k); interval ends
/// are pushed through the same monotone maps.
RateMetrics rate_metrics(size_t failures, size_t shots, size_t rounds, size_t k, double confidence = 0.95);
Json rate_metrics_to_json(const RateMetrics &m);

/// 1 - (1 - p)^(1/r) and its inverse, accurate for tiny p.
double per_round_rate(double p_block, double rounds);
double compound_rate(double p_round, double rounds);

}  // namespace apmqec

#endif
