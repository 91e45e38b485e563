#include "apmqec/compiler.h"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>

#include "apmqec/errors.h"

namespace apmqec {

namespace {

const std::array<std::pair<StepKind, const char *>, 6> kKindNames = {{
    {StepKind::GlobalColumnCyclicShift, "GlobalColumnCyclicShift"},
    {StepKind::GlobalRowCyclicShift, "GlobalRowCyclicShift"},
    {StepKind::RowPermutation, "RowPermutation"},
    {StepKind::ColumnSubsetCyclicShift, "ColumnSubsetCyclicShift"},
    {StepKind::RowSubsetCyclicShift, "RowSubsetCyclicShift"},
    {StepKind::OneDPermutationLayer, "OneDPermutationLayer"},
}};

int64_t ceil_log2(int64_t n) {
    int64_t k = 0;
    while ((int64_t{1} << k) < n) {
        k++;
    }
    return k;
}

bool is_identity_map(std::span<const int64_t> map) {
    for (size_t i = 0; i < map.size(); i++) {
        if (map[i] != (int64_t)i) {
            return false;
        }
    }
    return true;
}

/// Row step realizing `images` (row r -> images[r]): nothing, a global cyclic shift, or a permutation.
std::optional<MoveStep> row_step(const std::vector<int64_t> &images) {
    int64_t rows = (int64_t)images.size();
    if (is_identity_map(images)) {
        return std::nullopt;
    }
    int64_t s = images[0];
    bool cyclic = true;
    for (int64_t r = 0; r < rows; r++) {
        cyclic &= images[r] == (r + s) % rows;
    }
    if (cyclic) {
        return MoveStep::row_shift(s);
    }
    return MoveStep::row_permutation(images);
}

/// Column moves realizing the permutation c -> images[c]: one shift when cyclic, else Benes layers.
std::vector<MoveStep> column_moves(const std::vector<int64_t> &images) {
    int64_t cols = (int64_t)images.size();
    if (is_identity_map(images)) {
        return {};
    }
    int64_t s = images[0];
    bool cyclic = true;
    for (int64_t c = 0; c < cols; c++) {
        cyclic &= images[c] == (c + s) % cols;
    }
    if (cyclic) {
        return {MoveStep::column_shift(s)};
    }
    std::vector<MoveStep> out;
    for (auto &layer : benes_layers(images)) {
        out.push_back(MoveStep::layer(Axis::Column, std::move(layer)));
    }
    return out;
}

void benes_route(std::vector<int64_t> perm, size_t offset, size_t depth, size_t total_layers,
                 std::vector<std::vector<int64_t>> &layers) {
    size_t n = perm.size();
    if (n <= 1) {
        return;
    }
    auto swap_at = [&](size_t layer, size_t a, size_t b) {
        layers[layer][offset + a] = (int64_t)(offset + b);
        layers[layer][offset + b] = (int64_t)(offset + a);
    };
    if (n == 2) {
        if (perm[0] == 1) {
            swap_at(depth, 0, 1);
        }
        return;
    }
    size_t half = n / 2;
    std::vector<int64_t> inv(n);
    for (size_t p = 0; p < n; p++) {
        inv[perm[p]] = (int64_t)p;
    }
    // Looping algorithm: partners at an input switch or an output switch go to opposite subnetworks.
    std::vector<int> side(n, -1);
    for (size_t start = 0; start < n; start++) {
        if (side[start] >= 0) {
            continue;
        }
        size_t cur = start;
        while (true) {
            side[cur] = 0;
            size_t other = cur ^ half;
            side[other] = 1;
            size_t next = inv[perm[other] ^ half];
            if (side[next] >= 0) {
                break;
            }
            cur = next;
        }
    }
    size_t first = depth, last = total_layers - 1 - depth;
    std::vector<int64_t> upper(half), lower(half);
    for (size_t i = 0; i < half; i++) {
        if (side[i] == 1) {
            swap_at(first, i, i + half);
        }
        if (side[inv[i]] == 1) {
            swap_at(last, i, i + half);
        }
    }
    for (size_t p = 0; p < n; p++) {
        (side[p] ? lower : upper)[p % half] = perm[p] % (int64_t)half;
    }
    benes_route(std::move(upper), offset, depth + 1, total_layers, layers);
    benes_route(std::move(lower), offset + half, depth + 1, total_layers, layers);
}

}  // namespace

std::string step_kind_name(StepKind k) {
    for (auto [kind, name] : kKindNames) {
        if (kind == k) {
            return name;
        }
    }
    return "?";
}

StepKind step_kind_from_name(const std::string &name) {
    for (auto [kind, n] : kKindNames) {
        if (name == n) {
            return kind;
        }
    }
    throw ParseError("unknown move step kind '" + name + "'", 0);
}

std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Abelian:
            return "abelian";
        case Strategy::Separable:
            return "separable";
        case Strategy::Generic:
            return "generic";
    }
    return "?";
}

bool MoveStep::is_trivial() const {
    switch (kind) {
        case StepKind::GlobalColumnCyclicShift:
        case StepKind::GlobalRowCyclicShift:
            return amount == 0;
        case StepKind::ColumnSubsetCyclicShift:
        case StepKind::RowSubsetCyclicShift:
            return amount == 0 || indices.empty();
        case StepKind::RowPermutation:
        case StepKind::OneDPermutationLayer:
            return is_identity_map(indices);
    }
    return false;
}

MoveSchedule MoveSchedule::without_trivial_steps() const {
    MoveSchedule out = *this;
    out.steps.clear();
    for (const auto &s : steps) {
        if (!s.is_trivial()) {
            out.steps.push_back(s);
        }
    }
    return out;
}

size_t MoveSchedule::count(StepKind k) const {
    return std::count_if(steps.begin(), steps.end(), [&](const MoveStep &s) { return s.kind == k; });
}

std::vector<std::vector<Cell>> trace_schedule(const GridLayout &layout, const MoveSchedule &schedule) {
    std::vector<std::vector<Cell>> frames{layout.cell_of};
    const int64_t R = layout.rows, C = layout.cols;
    auto in_grid = [&](const Cell &c) { return c.row >= 0 && c.row < R && c.col >= 0 && c.col < C; };
    for (size_t si = 0; si < schedule.steps.size(); si++) {
        const MoveStep &step = schedule.steps[si];
        std::vector<Cell> cur = frames.back();
        std::set<int64_t> subset(step.indices.begin(), step.indices.end());
        for (auto &c : cur) {
            switch (step.kind) {
                case StepKind::GlobalColumnCyclicShift:
                    if (!in_grid(c)) throw DomainError("apply_schedule: cyclic shift with an atom off the grid");
                    c.col = mod_floor(c.col + step.amount, C);
                    break;
                case StepKind::GlobalRowCyclicShift:
                    if (!in_grid(c)) throw DomainError("apply_schedule: cyclic shift with an atom off the grid");
                    c.row = mod_floor(c.row + step.amount, R);
                    break;
                case StepKind::ColumnSubsetCyclicShift:
                    if (!in_grid(c)) throw DomainError("apply_schedule: cyclic shift with an atom off the grid");
                    if (subset.count(c.col)) c.row = mod_floor(c.row + step.amount, R);
                    break;
                case StepKind::RowSubsetCyclicShift:
                    if (!in_grid(c)) throw DomainError("apply_schedule: cyclic shift with an atom off the grid");
                    if (subset.count(c.row)) c.col = mod_floor(c.col + step.amount, C);
                    break;
                case StepKind::RowPermutation:
                    if ((int64_t)step.indices.size() != R || c.row < 0 || c.row >= R) {
                        throw DomainError("apply_schedule: RowPermutation must list every row");
                    }
                    c.row = step.indices[c.row];
                    break;
                case StepKind::OneDPermutationLayer: {
                    int64_t &coord = step.axis == Axis::Column ? c.col : c.row;
                    if (coord < 0 || coord >= (int64_t)step.indices.size()) {
                        throw DomainError("apply_schedule: layer map does not cover coordinate " +
                                          std::to_string(coord));
                    }
                    coord = step.indices[coord];
                    break;
                }
            }
        }
        std::vector<Cell> sorted = cur;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw CollisionError("apply_schedule: step " + std::to_string(si) + " (" + step_kind_name(step.kind) +
                                 ") puts two atoms on one site");
        }
        frames.push_back(std::move(cur));
    }
    return frames;
}

std::vector<Cell> apply_schedule(const GridLayout &layout, const MoveSchedule &schedule) {
    return trace_schedule(layout, schedule).back();
}

bool schedule_realizes(const GridLayout &layout, const MoveSchedule &schedule, const Apm &f) {
    if (f.modulus() != layout.size()) {
        throw DomainError("schedule_realizes: APM modulus differs from layout size");
    }
    auto final_cells = apply_schedule(layout, schedule);
    for (int64_t x = 0; x < layout.size(); x++) {
        if (final_cells[x] != layout.cell(f(x))) {
            return false;
        }
    }
    return true;
}

std::vector<std::vector<int64_t>> benes_layers(std::span<const int64_t> perm) {
    int64_t n = (int64_t)perm.size();
    std::vector<char> seen(n, 0);
    for (int64_t v : perm) {
        if (v < 0 || v >= n || seen[v]++) {
            throw DomainError("benes_layers: input is not a permutation");
        }
    }
    int64_t k = ceil_log2(n);
    if (k == 0) {
        return {};
    }
    int64_t N = int64_t{1} << k;
    std::vector<int64_t> padded(N);
    std::iota(padded.begin(), padded.end(), 0);
    std::copy(perm.begin(), perm.end(), padded.begin());
    size_t total = 2 * k - 1;
    std::vector<std::vector<int64_t>> layers(total, std::vector<int64_t>(N));
    for (auto &l : layers) {
        std::iota(l.begin(), l.end(), 0);
    }
    benes_route(std::move(padded), 0, 0, total, layers);
    std::erase_if(layers, [](const std::vector<int64_t> &l) { return is_identity_map(l); });
    return layers;
}

MoveSchedule compile_separable(const Apm &f, const GridLayout &crt) {
    if (crt.kind != LayoutKind::Crt) {
        throw DomainError("compile_separable: layout is " + layout_kind_name(crt.kind) + ", not CRT");
    }
    auto [fm, fl] = crt_split(f, crt.rows, crt.cols);
    MoveSchedule out;
    out.strategy = Strategy::Separable;
    out.layout = LayoutKind::Crt;
    if (auto r = row_step(as_permutation(fm))) {
        out.steps.push_back(*r);
    }
    for (auto &s : column_moves(as_permutation(fl))) {
        out.steps.push_back(std::move(s));
    }
    return out;
}

MoveSchedule compile_abelian(const Apm &transition, const AbelianStructure &structure, const GridLayout &layout) {
    if (layout.kind != LayoutKind::Exponent || !layout.relabeling) {
        throw DomainError("compile_abelian: layout is not an exponent layout");
    }
    int64_t m = layout.row_modulus;
    int64_t M = structure.subgroup.modulus();
    if (transition.modulus() != m * M) {
        throw DomainError("compile_abelian: transition modulus does not match the layout");
    }
    Apm column = transition.reduce(M);
    auto exps = structure.exponents_of(column);
    if (!exps) {
        throw EscalationSignal("compile_abelian: column component " + column.str() +
                               " lies outside the abelian subgroup");
    }
    const auto &factors = layout.relabeling->factors;
    MoveSchedule out;
    out.strategy = Strategy::Abelian;
    out.layout = LayoutKind::Exponent;
    int64_t n1 = factors.empty() ? 1 : factors[0];
    out.steps.push_back(MoveStep::column_shift(factors.empty() ? 0 : (*exps)[0]));

    Apm row_factor = transition.reduce(m);
    int64_t rest_size = M / n1;
    std::vector<int64_t> images(layout.rows);
    for (int64_t r = 0; r < layout.rows; r++) {
        int64_t xm = r % m, rest = r / m;
        // Add the remaining exponents componentwise in mixed radix.
        int64_t moved = 0, mult = 1, c = rest;
        for (size_t i = 1; i < factors.size(); i++) {
            int64_t e = c % factors[i];
            c /= factors[i];
            moved += mult * ((e + (*exps)[i]) % factors[i]);
            mult *= factors[i];
        }
        images[r] = row_factor(xm) + m * moved;
    }
    if (auto step = row_step(images)) {
        out.steps.push_back(*step);
    } else if (rest_size > 1) {
        out.steps.push_back(MoveStep::row_shift(0));
    }
    return out;
}

std::vector<MoveStep> binary_column_shifts(std::span<const int64_t> shifts, int64_t rows) {
    int64_t bits = ceil_log2(rows);
    auto cost = [&](int64_t base) {
        int64_t mask = 0;
        for (int64_t s : shifts) {
            mask |= mod_floor(s - base, rows);
        }
        return (int64_t)std::popcount((uint64_t)mask) + (base != 0);
    };
    int64_t best_base = 0, best_cost = cost(0);
    for (int64_t base = 1; base < rows; base++) {
        int64_t c = cost(base);
        if (c < best_cost) {
            best_cost = c;
            best_base = base;
        }
    }
    std::vector<MoveStep> out;
    if (best_base != 0) {
        out.push_back(MoveStep::row_shift(best_base));
    }
    for (int64_t j = 0; j < bits; j++) {
        std::vector<int64_t> cols;
        for (size_t c = 0; c < shifts.size(); c++) {
            if ((mod_floor(shifts[c] - best_base, rows) >> j) & 1) {
                cols.push_back((int64_t)c);
            }
        }
        if (!cols.empty()) {
            out.push_back(MoveStep::column_subset_shift(std::move(cols), int64_t{1} << j));
        }
    }
    return out;
}

MoveSchedule compile_generic(const Apm &f, int64_t m, int64_t l) {
    if (m <= 0 || l <= 0 || f.modulus() != m * l) {
        throw DomainError("compile_generic: need P = m * l");
    }
    MoveSchedule out;
    out.strategy = Strategy::Generic;
    out.layout = LayoutKind::RowMajor;
    int64_t A = f.a(), B = f.b();

    std::vector<int64_t> col_images(m), col_source(m);
    for (int64_t x = 0; x < m; x++) {
        col_images[x] = (A * x + B) % m;
        col_source[col_images[x]] = x;
    }
    for (auto &s : column_moves(col_images)) {
        out.steps.push_back(std::move(s));
    }

    std::vector<int64_t> row_images(l);
    for (int64_t y = 0; y < l; y++) {
        row_images[y] = (A % l) * y % l;
    }
    if (!is_identity_map(row_images)) {
        for (auto &layer : benes_layers(row_images)) {
            out.steps.push_back(MoveStep::layer(Axis::Row, std::move(layer)));
        }
    }

    // Carry term: column x2 (holding former column x1) shifts down by (A x1 + B) / m.
    std::vector<int64_t> shifts(m);
    for (int64_t x2 = 0; x2 < m; x2++) {
        int64_t x1 = col_source[x2];
        shifts[x2] = ((A * x1 + B) / m) % l;
    }
    for (auto &s : binary_column_shifts(shifts, l)) {
        out.steps.push_back(std::move(s));
    }
    return out;
}

void validate_ordering(std::span<const int> ordering) {
    if (ordering.size() != 12) {
        throw DomainError("ordering must list 12 indices");
    }
    std::vector<char> seen(12, 0);
    for (size_t i = 0; i < 12; i++) {
        int v = ordering[i];
        if (v < 0 || v >= 12 || seen[v]++) {
            throw DomainError("ordering must be a permutation of 0..11");
        }
        if ((i < 6) != (v < 6)) {
            throw DomainError("ordering must place all F maps (0..5) before all G maps (6..11)");
        }
    }
}

std::vector<Apm> transition_maps(const CodeSpec &spec, std::span<const int> ordering, Basis basis) {
    validate_ordering(ordering);
    std::vector<Apm> out;
    for (size_t k = 0; k + 1 < ordering.size(); k++) {
        const Apm &prev = spec.map(ordering[k]);
        const Apm &next = spec.map(ordering[k + 1]);
        out.push_back(basis == Basis::X ? compose(next, inverse(prev)) : compose(inverse(next), prev));
    }
    return out;
}

std::vector<MoveSchedule> transition_schedule(const CodeSpec &spec, std::span<const int> ordering,
                                              const GridLayout &layout, Basis basis) {
    std::vector<MoveSchedule> out;
    for (const Apm &t : transition_maps(spec, ordering, basis)) {
        MoveSchedule s;
        switch (layout.kind) {
            case LayoutKind::Exponent:
                s = compile_abelian(t, *layout.structure, layout);
                break;
            case LayoutKind::Crt:
                s = compile_separable(t, layout);
                break;
            case LayoutKind::RowMajor:
                s = compile_generic(t, layout.cols, layout.rows);
                break;
            case LayoutKind::Custom:
                throw DomainError("transition_schedule: no compilation strategy for a custom layout");
        }
        out.push_back(s.without_trivial_steps());
    }
    return out;
}

GridLayout preferred_layout(const CodeSpec &spec) {
    spec.validate();
    int64_t m = 3;
    if (spec.P % m != 0 || gcd64(m, spec.P / m) != 1) {
        throw DomainError("preferred_layout: P must be 3 times a number coprime to 3");
    }
    int64_t M = spec.P / m;
    std::vector<Apm> comps;
    for (int i = 0; i < 12; i++) {
        comps.push_back(spec.map(i).reduce(M));
    }
    auto structure = max_abelian_subgroup(group_closure(comps, M));
    if ((int64_t)structure.subgroup.size() == M) {
        try {
            return exponent_layout(spec.P, m, structure);
        } catch (const StructureError &) {
        }
    }
    return crt_layout(spec.P, m, M);
}

}  // namespace apmqec
