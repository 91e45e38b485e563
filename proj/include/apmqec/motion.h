#ifndef APMQEC_MOTION_H
#define APMQEC_MOTION_H

#include <span>
#include <string>
#include <vector>

#include "apmqec/compiler.h"

namespace apmqec {

/// Times in microseconds, distances in micrometers.
struct MotionConfig {
    double acceleration_m_per_s2 = 5500.0;
    double data_pitch_um = 12.0;
    double ancilla_offset_um = 2.0;
    double cz_time_us = 1.0;
    double measurement_time_us = 500.0;
    int n_aod_pairs = 2;

    /// Throws DomainError on non-positive values or n_aod_pairs outside {2, 4}.
    void validate() const;
    /// Acceleration in um / us^2.
    double acceleration_um_per_us2() const { return acceleration_m_per_s2 * 1e-6; }
};

/// Accelerate over the first half of the path, decelerate over the second: t = 2 sqrt(d / a).
double move_time(double distance_um, const MotionConfig &config);

struct OpTiming {
    std::string label;
    size_t frame = 0;
    double distance_um = 0;
    double duration_us = 0;
    double start_us = 0;
    /// AOD slot the op ran on (always 0 with two AOD pairs).
    int slot = 0;
};

struct TimingReport {
    std::vector<OpTiming> ops;
    std::vector<double> frame_durations_us;
    double movement_us = 0;
    double gate_us = 0;
    /// Part of the measurement not hidden behind movement.
    double measurement_exposed_us = 0;
    double total_us = 0;
    double width_um = 0;
    double height_um = 0;
};

/// Farthest straight-line displacement of any atom in each step, in micrometers.
std::vector<double> step_distances(const GridLayout &layout, const MoveSchedule &schedule, double pitch_um);

/// Each schedule is one frame followed by a CZ layer. Steps of abelian or separable schedules
/// commute and may share a frame slot; generic schedules run as a serial chain.
TimingReport schedule_duration(std::span<const MoveSchedule> schedules, const GridLayout &layout,
                               const MotionConfig &config);

/// One syndrome-extraction round.
///
/// The twelve data blocks are stacked vertically (F half above G half), each on the block
/// layout; X ancillas sit beside the F half and Z ancillas beside the G half during F steps,
/// swapping halves once at the F -> G boundary. Per transition frame the operations are the
/// compiled X and Z ancilla steps, a cyclic rotation of each data half by the block offset
/// change, and the half swap where it applies. X and Z row steps merge into one operation.
/// With two AOD pairs operations run one at a time; with four, two run concurrently.
TimingReport se_round_time(const CodeSpec &spec, std::span<const int> ordering, const MotionConfig &config);

/// Width x height of the data array (ancillas sit ancilla_offset to the right of their data).
std::pair<double, double> footprint_um(const GridLayout &block_layout, const MotionConfig &config);

/// Per-step CSV: frame,label,distance_um,duration_us,start_us,slot
std::string timing_csv(const TimingReport &report);

}  // namespace apmqec

#endif
