#include "apmqec/motion.h"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "apmqec/errors.h"

namespace apmqec {

void MotionConfig::validate() const {
    if (!(acceleration_m_per_s2 > 0) || !(data_pitch_um > 0) || !(ancilla_offset_um > 0) || !(cz_time_us > 0) ||
        !(measurement_time_us > 0)) {
        throw DomainError("MotionConfig: all physical parameters must be positive");
    }
    if (n_aod_pairs != 2 && n_aod_pairs != 4) {
        throw DomainError(fmt::format("MotionConfig: n_aod_pairs must be 2 or 4, got {}", n_aod_pairs));
    }
}

double move_time(double distance_um, const MotionConfig &config) {
    if (distance_um < 0 || std::isnan(distance_um)) {
        throw DomainError(fmt::format("move_time: negative distance {}", distance_um));
    }
    return 2.0 * std::sqrt(distance_um / config.acceleration_um_per_us2());
}

std::vector<double> step_distances(const GridLayout &layout, const MoveSchedule &schedule, double pitch_um) {
    if (layout.size() == 0 && !schedule.steps.empty()) {
        throw DomainError("step_distances: layout places no qubits");
    }
    auto trace = trace_schedule(layout, schedule);
    std::vector<double> out;
    for (size_t s = 1; s < trace.size(); s++) {
        double best = 0;
        for (size_t q = 0; q < trace[s].size(); q++) {
            double dr = double(trace[s][q].row - trace[s - 1][q].row);
            double dc = double(trace[s][q].col - trace[s - 1][q].col);
            best = std::max(best, std::hypot(dr, dc));
        }
        out.push_back(best * pitch_um);
    }
    return out;
}

namespace {

struct Op {
    std::string label;
    double distance_um;
    double duration_us;
};

// Places one frame's independent ops on the AOD slots starting at `t0`; returns the makespan.
// Two pairs: one op at a time. Four pairs: two slots, exact minimum makespan by subset search
// (frames hold a handful of ops).
double place_frame(const std::vector<Op> &ops, size_t frame, double t0, int n_aod_pairs,
                   std::vector<OpTiming> &out) {
    if (ops.empty()) {
        return 0.0;
    }
    std::vector<int> slot(ops.size(), 0);
    if (n_aod_pairs == 4 && ops.size() > 1) {
        if (ops.size() > 20) {
            throw DomainError("place_frame: too many concurrent ops in one frame");
        }
        double total = 0;
        for (auto &op : ops) total += op.duration_us;
        double best = total;
        uint32_t best_mask = 0;
        for (uint32_t mask = 0; mask < (1u << ops.size()); mask++) {
            double a = 0;
            for (size_t i = 0; i < ops.size(); i++) {
                if (mask >> i & 1) a += ops[i].duration_us;
            }
            double span = std::max(a, total - a);
            if (span < best - 1e-12) {
                best = span;
                best_mask = mask;
            }
        }
        for (size_t i = 0; i < ops.size(); i++) slot[i] = int(best_mask >> i & 1);
    }
    double clock[2] = {t0, t0};
    for (size_t i = 0; i < ops.size(); i++) {
        OpTiming t;
        t.label = ops[i].label;
        t.frame = frame;
        t.distance_um = ops[i].distance_um;
        t.duration_us = ops[i].duration_us;
        t.slot = slot[i];
        t.start_us = clock[slot[i]];
        clock[slot[i]] += ops[i].duration_us;
        out.push_back(std::move(t));
    }
    return std::max(clock[0], clock[1]) - t0;
}

bool is_row_step(StepKind k) {
    return k == StepKind::GlobalRowCyclicShift || k == StepKind::RowPermutation;
}

}  // namespace

TimingReport schedule_duration(std::span<const MoveSchedule> schedules, const GridLayout &layout,
                               const MotionConfig &config) {
    config.validate();
    TimingReport r;
    double t = 0;
    for (size_t f = 0; f < schedules.size(); f++) {
        const auto &sched = schedules[f];
        auto dist = step_distances(layout, sched, config.data_pitch_um);
        std::vector<Op> ops;
        for (size_t s = 0; s < sched.steps.size(); s++) {
            ops.push_back({step_kind_name(sched.steps[s].kind), dist[s], move_time(dist[s], config)});
        }
        double span = 0;
        if (sched.strategy == Strategy::Generic) {
            // Generic stages do not commute: one chain.
            span = place_frame(ops, f, t, 2, r.ops);
        } else {
            span = place_frame(ops, f, t, config.n_aod_pairs, r.ops);
        }
        r.frame_durations_us.push_back(span);
        r.movement_us += span;
        r.gate_us += config.cz_time_us;
        t += span + config.cz_time_us;
    }
    // Staggered model: the measurement runs while the next frames' fresh ancillas are moved in.
    r.measurement_exposed_us = 0;
    r.total_us = r.movement_us + r.gate_us;
    auto [w, h] = footprint_um(layout, config);
    r.width_um = w;
    r.height_um = h;
    return r;
}

std::pair<double, double> footprint_um(const GridLayout &block_layout, const MotionConfig &config) {
    if (block_layout.rows <= 0 || block_layout.cols <= 0) {
        return {0.0, 0.0};
    }
    double width = double(block_layout.cols - 1) * config.data_pitch_um + config.ancilla_offset_um;
    double height = double(CodeSpec::kBlockCols * block_layout.rows - 1) * config.data_pitch_um;
    return {width, height};
}

TimingReport se_round_time(const CodeSpec &spec, std::span<const int> ordering, const MotionConfig &config) {
    config.validate();
    validate_ordering(ordering);
    GridLayout layout = preferred_layout(spec);
    auto xs = transition_schedule(spec, ordering, layout, Basis::X);
    auto zs = transition_schedule(spec, ordering, layout, Basis::Z);
    const double pitch = config.data_pitch_um;
    const double block_um = double(layout.rows) * pitch;
    const int half = CodeSpec::kParentRows;

    TimingReport r;
    double t = 0;
    // Fresh X and Z ancillas approach their first data partners.
    {
        double d = config.ancilla_offset_um;
        std::vector<Op> ops{{"approach X", d, move_time(d, config)}, {"approach Z", d, move_time(d, config)}};
        double span = place_frame(ops, 0, t, config.n_aod_pairs, r.ops);
        r.frame_durations_us.push_back(span);
        r.movement_us += span;
        t += span;
    }
    r.gate_us += config.cz_time_us;
    t += config.cz_time_us;

    for (size_t k = 0; k + 1 < ordering.size(); k++) {
        std::vector<Op> ops;
        auto add_steps = [&](const MoveSchedule &s, const char *basis, std::vector<Op> &rows) {
            auto dist = step_distances(layout, s, pitch);
            for (size_t i = 0; i < s.steps.size(); i++) {
                Op op{fmt::format("{} {}", basis, step_kind_name(s.steps[i].kind)), dist[i], move_time(dist[i], config)};
                (is_row_step(s.steps[i].kind) ? rows : ops).push_back(op);
            }
        };
        std::vector<Op> xrows, zrows;
        add_steps(xs[k], "X", xrows);
        add_steps(zs[k], "Z", zrows);
        // A row step of each basis runs on disjoint rows, so one pair of AODs carries both.
        size_t merged = std::min(xrows.size(), zrows.size());
        for (size_t i = 0; i < merged; i++) {
            const Op &a = xrows[i].duration_us >= zrows[i].duration_us ? xrows[i] : zrows[i];
            ops.push_back({"X+Z row step", a.distance_um, a.duration_us});
        }
        for (size_t i = merged; i < xrows.size(); i++) ops.push_back(xrows[i]);
        for (size_t i = merged; i < zrows.size(); i++) ops.push_back(zrows[i]);

        int a = ordering[k], b = ordering[k + 1];
        bool a_f = a < half, b_f = b < half;
        if (a_f == b_f) {
            int delta = ((b - a) % half + half) % half;
            if (delta != 0) {
                double d = double(std::max(delta, half - delta)) * block_um;
                ops.push_back({"data rotation (X half)", d, move_time(d, config)});
                ops.push_back({"data rotation (Z half)", d, move_time(d, config)});
            }
        } else {
            if (a % half != b % half) {
                throw DomainError("se_round_time: the F -> G switch must keep the block index");
            }
            double d = double(half) * block_um;
            ops.push_back({"half swap", d, move_time(d, config)});
        }
        double span = place_frame(ops, k + 1, t, config.n_aod_pairs, r.ops);
        r.frame_durations_us.push_back(span);
        r.movement_us += span;
        t += span;
        r.gate_us += config.cz_time_us;
        t += config.cz_time_us;
    }
    // Measurement of this round's ancillas overlaps the next round's movement and only
    // shows when the movement is shorter than the readout.
    r.measurement_exposed_us = std::max(0.0, config.measurement_time_us - r.movement_us - r.gate_us);
    r.total_us = r.movement_us + r.gate_us + r.measurement_exposed_us;
    auto [w, h] = footprint_um(layout, config);
    r.width_um = w;
    r.height_um = h;
    return r;
}

std::string timing_csv(const TimingReport &report) {
    std::string out = "frame,label,distance_um,duration_us,start_us,slot\n";
    for (const auto &op : report.ops) {
        out += fmt::format("{},{},{:.6g},{:.6g},{:.6g},{}\n", op.frame, op.label, op.distance_um, op.duration_us,
                           op.start_us, op.slot);
    }
    return out;
}

}  // namespace apmqec
