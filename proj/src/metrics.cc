#include "apmqec/metrics.h"

#include <boost/math/distributions/beta.hpp>
#include <cmath>
#include <fmt/format.h>

#include "apmqec/errors.h"

namespace apmqec {

void ThroughputModel::validate() const {
    if (tier_times_ns.empty() || tier_times_ns.size() != escalation.size()) {
        throw DomainError("ThroughputModel: tier_times_ns and escalation need equal, nonzero lengths");
    }
    if (escalation[0] != 1.0) {
        throw DomainError("ThroughputModel: escalation[0] (q_1) must be 1");
    }
    for (size_t i = 0; i < escalation.size(); i++) {
        if (!(escalation[i] >= 0 && escalation[i] <= 1)) {
            throw DomainError(fmt::format("ThroughputModel: escalation[{}] outside [0, 1]", i));
        }
        if (i > 0 && escalation[i] > escalation[i - 1]) {
            throw DomainError(fmt::format("ThroughputModel: escalation[{}] increases", i));
        }
        if (!(tier_times_ns[i] >= 0)) {
            throw DomainError(fmt::format("ThroughputModel: tier_times_ns[{}] negative", i));
        }
    }
    if (n == 0 || window == 0 || check_degree == 0 || reference_n == 0 || reference_window == 0 ||
        reference_degree == 0) {
        throw DomainError("ThroughputModel: sizes must be positive");
    }
}

ThroughputModel throughput_model_from_json(const Json &j) {
    const std::string path = "model";
    ThroughputModel m;
    if (j.contains("code")) m.name = j["code"].get<std::string>();
    m.n = size_t(require_int(j, "n", path));
    m.window = size_t(require_int(j, "window", path));
    if (j.contains("check_degree")) m.check_degree = size_t(require_int(j, "check_degree", path));
    auto numbers = [&](const std::string &key) {
        const Json &a = require_field(j, key, path);
        if (!a.is_array()) throw ParseError(fmt::format("{}.{} must be an array", path, key), 0);
        std::vector<double> v;
        for (size_t i = 0; i < a.size(); i++) {
            if (!a[i].is_number()) throw ParseError(fmt::format("{}.{}[{}] must be a number", path, key, i), 0);
            v.push_back(a[i].get<double>());
        }
        return v;
    };
    m.tier_times_ns = numbers("tier_times_ns");
    m.escalation = numbers("escalation");
    if (j.contains("tier3_span_rounds")) m.tier3_span_rounds = size_t(require_int(j, "tier3_span_rounds", path));
    if (j.contains("reference_n")) m.reference_n = size_t(require_int(j, "reference_n", path));
    if (j.contains("reference_window")) m.reference_window = size_t(require_int(j, "reference_window", path));
    if (j.contains("reference_degree")) m.reference_degree = size_t(require_int(j, "reference_degree", path));
    m.validate();
    return m;
}

Json throughput_model_to_json(const ThroughputModel &m) {
    Json j;
    if (!m.name.empty()) j["code"] = m.name;
    j["n"] = m.n;
    j["window"] = m.window;
    j["check_degree"] = m.check_degree;
    j["tier_times_ns"] = m.tier_times_ns;
    j["escalation"] = m.escalation;
    if (m.tier3_span_rounds) j["tier3_span_rounds"] = *m.tier3_span_rounds;
    j["reference_n"] = m.reference_n;
    j["reference_window"] = m.reference_window;
    j["reference_degree"] = m.reference_degree;
    return j;
}

std::vector<double> escalation_from_ratios(const std::vector<double> &ratios) {
    std::vector<double> q{1.0};
    for (size_t i = 0; i + 1 < ratios.size(); i++) q.push_back(q.back() * ratios[i]);
    return q;
}

ThroughputReport throughput(const ThroughputModel &m) {
    m.validate();
    ThroughputReport r;
    for (size_t i = 0; i < m.tier_times_ns.size(); i++) r.t_bar_ns += m.escalation[i] * m.tier_times_ns[i];
    r.scale_factor = double(m.n) * double(m.window) * double(m.check_degree) /
                     (double(m.reference_n) * double(m.reference_window) * double(m.reference_degree));
    if (m.tier3_span_rounds) {
        double q = m.escalation.back();
        r.backlog_probability = -std::expm1(double(*m.tier3_span_rounds) * std::log1p(-q));
    }
    return r;
}

Json throughput_report_to_json(const ThroughputReport &r) {
    Json j;
    j["t_bar_ns"] = r.t_bar_ns;
    j["scale_factor"] = r.scale_factor;
    if (r.backlog_probability) j["backlog_probability"] = *r.backlog_probability;
    return j;
}

Interval clopper_pearson(size_t x, size_t n, double confidence) {
    if (n == 0) throw DomainError("clopper_pearson: zero shots");
    if (x > n) throw DomainError("clopper_pearson: more failures than shots");
    if (!(confidence > 0 && confidence < 1)) throw DomainError("clopper_pearson: confidence outside (0, 1)");
    const double alpha = 1 - confidence;
    Interval iv;
    iv.estimate = double(x) / double(n);
    using boost::math::beta_distribution;
    using boost::math::quantile;
    if (x == 0) {
        iv.lower = 0;
        iv.upper = quantile(beta_distribution<double>(1.0, double(n)), confidence);
        return iv;
    }
    iv.lower = quantile(beta_distribution<double>(double(x), double(n - x + 1)), alpha / 2);
    iv.upper = x == n ? 1.0 : quantile(beta_distribution<double>(double(x + 1), double(n - x)), 1 - alpha / 2);
    return iv;
}

double per_round_rate(double p, double rounds) {
    if (p >= 1) return 1;
    return -std::expm1(std::log1p(-p) / rounds);
}

double compound_rate(double p, double rounds) {
    if (p >= 1) return 1;
    return -std::expm1(std::log1p(-p) * rounds);
}

RateMetrics rate_metrics(size_t failures, size_t shots, size_t rounds, size_t k, double confidence) {
    if (shots == 0) throw DomainError("rate_metrics: zero shots");
    if (rounds == 0 || k == 0) throw DomainError("rate_metrics: rounds and k must be positive");
    RateMetrics m{failures, shots, rounds, k, {}, {}, {}};
    m.block_per_shot = clopper_pearson(failures, shots, confidence);
    auto map = [](const Interval &iv, double r) {
        return Interval{per_round_rate(iv.estimate, r), per_round_rate(iv.lower, r), per_round_rate(iv.upper, r)};
    };
    m.block_per_round = map(m.block_per_shot, double(rounds));
    m.per_logical_per_round = map(m.block_per_round, double(k));
    return m;
}

Json rate_metrics_to_json(const RateMetrics &m) {
    auto iv = [](const Interval &i) { return Json{{"estimate", i.estimate}, {"lower", i.lower}, {"upper", i.upper}}; };
    Json j;
    j["failures"] = m.failures;
    j["shots"] = m.shots;
    j["rounds"] = m.rounds;
    j["k"] = m.k;
    j["block_per_shot"] = iv(m.block_per_shot);
    j["block_per_round"] = iv(m.block_per_round);
    j["per_logical_per_round"] = iv(m.per_logical_per_round);
    return j;
}

}  // namespace apmqec
