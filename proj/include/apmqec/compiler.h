#ifndef APMQEC_COMPILER_H
#define APMQEC_COMPILER_H

#include <array>
#include <span>
#include <string>
#include <vector>

#include "apmqec/code.h"
#include "apmqec/grid.h"

namespace apmqec {

enum class StepKind {
    GlobalColumnCyclicShift,
    GlobalRowCyclicShift,
    RowPermutation,
    ColumnSubsetCyclicShift,
    RowSubsetCyclicShift,
    OneDPermutationLayer,
};
enum class Axis { Row, Column };

std::string step_kind_name(StepKind k);
StepKind step_kind_from_name(const std::string &name);

/// One AOD rearrangement. Every kind moves a product set of traps: whole rows, whole
/// columns, or a selected set of rows/columns, so targets never mix the two axes.
///
/// `indices` holds the selected columns/rows for subset shifts, the row images for
/// RowPermutation, and the index map (over a possibly padded extent) for layers.
struct MoveStep {
    StepKind kind = StepKind::GlobalColumnCyclicShift;
    int64_t amount = 0;
    Axis axis = Axis::Column;
    std::vector<int64_t> indices;

    static MoveStep column_shift(int64_t s) { return {StepKind::GlobalColumnCyclicShift, s, Axis::Column, {}}; }
    static MoveStep row_shift(int64_t s) { return {StepKind::GlobalRowCyclicShift, s, Axis::Row, {}}; }
    static MoveStep row_permutation(std::vector<int64_t> images) {
        return {StepKind::RowPermutation, 0, Axis::Row, std::move(images)};
    }
    static MoveStep column_subset_shift(std::vector<int64_t> cols, int64_t s) {
        return {StepKind::ColumnSubsetCyclicShift, s, Axis::Row, std::move(cols)};
    }
    static MoveStep row_subset_shift(std::vector<int64_t> rows, int64_t s) {
        return {StepKind::RowSubsetCyclicShift, s, Axis::Column, std::move(rows)};
    }
    static MoveStep layer(Axis axis, std::vector<int64_t> map) {
        return {StepKind::OneDPermutationLayer, 0, axis, std::move(map)};
    }

    /// True when the step moves nothing (zero shift, identity map).
    bool is_trivial() const;
    friend bool operator==(const MoveStep &, const MoveStep &) = default;
};

enum class Strategy { Abelian, Separable, Generic };
std::string strategy_name(Strategy s);

struct MoveSchedule {
    std::vector<MoveStep> steps;
    Strategy strategy = Strategy::Generic;
    LayoutKind layout = LayoutKind::Custom;

    MoveSchedule without_trivial_steps() const;
    size_t count(StepKind k) const;
};

/// Cell of every qubit after running the schedule from `layout`. Coordinates may leave
/// the grid while a padded permutation layer is in flight. Throws CollisionError when two
/// atoms land on one site and DomainError for malformed steps.
std::vector<Cell> apply_schedule(const GridLayout &layout, const MoveSchedule &schedule);
/// Positions after each step (index 0 is the layout itself).
std::vector<std::vector<Cell>> trace_schedule(const GridLayout &layout, const MoveSchedule &schedule);
/// The compile check: the atom starting at cell(x) ends at cell(f(x)) for every x.
bool schedule_realizes(const GridLayout &layout, const MoveSchedule &schedule, const Apm &f);

/// Benes routing of a permutation of [0, n): 2 ceil(log2 n) - 1 swap layers on the padded
/// extent 2^ceil(log2 n). Layer j swaps positions at distance 2^(k-1-j) on the way in and
/// back out. All-identity layers are dropped.
std::vector<std::vector<int64_t>> benes_layers(std::span<const int64_t> perm);

/// Row factor as global row moves, column factor as global column moves.
MoveSchedule compile_separable(const Apm &f, const GridLayout &crt);

/// Transition as shifts along the exponent coordinates of `structure`: always exactly one
/// column shift, plus one row step carrying the row factor and the remaining invariant
/// factors when there are any. Throws EscalationSignal if the column component is outside B.
MoveSchedule compile_abelian(const Apm &transition, const AbelianStructure &structure, const GridLayout &layout);

/// Three-stage fallback on the row-major l x m grid: column permutation, row permutation
/// y -> Ay, then the column-dependent carry shift as a base shift plus binary subset shifts.
MoveSchedule compile_generic(const Apm &f, int64_t m, int64_t l);

/// Per-column vertical shifts as batched power-of-two subset shifts after an optional global
/// base shift (chosen to minimize the step count; ties to the smallest base).
std::vector<MoveStep> binary_column_shifts(std::span<const int64_t> shifts, int64_t rows);

inline constexpr std::array<int, 12> kDefaultOrdering = {0, 5, 2, 4, 1, 3, 9, 7, 10, 8, 11, 6};

/// Throws DomainError unless `ordering` lists F indices 0..5 first, then G indices 6..11.
void validate_ordering(std::span<const int> ordering);

/// Maps applied between consecutive steps. For the X basis T = M_next * M_prev^{-1};
/// the Z ancillas see the transposed blocks, giving T = M_next^{-1} * M_prev.
std::vector<Apm> transition_maps(const CodeSpec &spec, std::span<const int> ordering, Basis basis);

/// One schedule per adjacent pair in `ordering`, compiled by the strategy the layout supports
/// (exponent -> abelian, CRT -> separable, row-major -> generic); zero-length moves dropped.
std::vector<MoveSchedule> transition_schedule(const CodeSpec &spec, std::span<const int> ordering,
                                              const GridLayout &layout, Basis basis = Basis::X);

/// Layout used for a shipped spec: the exponent layout when the maximal abelian subgroup of
/// the column group acts regularly, otherwise the 3 x P/3 CRT layout.
GridLayout preferred_layout(const CodeSpec &spec);

}  // namespace apmqec

#endif
