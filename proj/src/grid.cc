#include "apmqec/grid.h"

#include "apmqec/errors.h"

namespace apmqec {

std::string layout_kind_name(LayoutKind k) {
    switch (k) {
        case LayoutKind::Crt:
            return "crt";
        case LayoutKind::Exponent:
            return "exponent";
        case LayoutKind::RowMajor:
            return "row_major";
        case LayoutKind::Custom:
            return "custom";
    }
    return "?";
}

std::vector<int64_t> GridLayout::occupancy() const {
    std::vector<int64_t> occ(rows * cols, -1);
    for (int64_t q = 0; q < size(); q++) {
        occ[cell_of[q].row * cols + cell_of[q].col] = q;
    }
    return occ;
}

void GridLayout::validate() const {
    if (rows * cols != size()) {
        throw DomainError("GridLayout: " + std::to_string(size()) + " qubits on a " + std::to_string(rows) + "x" +
                          std::to_string(cols) + " grid");
    }
    std::vector<char> hit(rows * cols, 0);
    for (const auto &c : cell_of) {
        if (c.row < 0 || c.row >= rows || c.col < 0 || c.col >= cols) {
            throw DomainError("GridLayout: cell outside the grid");
        }
        if (hit[c.row * cols + c.col]++) {
            throw DomainError("GridLayout: two qubits share a cell");
        }
    }
}

GridLayout crt_layout(int64_t P, int64_t m, int64_t l) {
    if (m <= 0 || l <= 0 || m * l != P) {
        throw DomainError("crt_layout: m*l must equal P");
    }
    if (gcd64(m, l) != 1) {
        throw DomainError("crt_layout: gcd(" + std::to_string(m) + ", " + std::to_string(l) + ") != 1");
    }
    GridLayout g;
    g.rows = m;
    g.cols = l;
    g.kind = LayoutKind::Crt;
    g.row_modulus = m;
    for (int64_t x = 0; x < P; x++) {
        g.cell_of.push_back({x % m, x % l});
    }
    return g;
}

GridLayout row_major_layout(int64_t m, int64_t l) {
    if (m <= 0 || l <= 0) {
        throw DomainError("row_major_layout: dimensions must be positive");
    }
    GridLayout g;
    g.rows = l;
    g.cols = m;
    g.kind = LayoutKind::RowMajor;
    for (int64_t i = 0; i < m * l; i++) {
        g.cell_of.push_back({i / m, i % m});
    }
    return g;
}

GridLayout exponent_layout(int64_t P, int64_t m, const AbelianStructure &structure) {
    int64_t M = structure.subgroup.modulus();
    if (m * M != P || gcd64(m, M) != 1) {
        throw DomainError("exponent_layout: need P = m * M with gcd(m, M) = 1");
    }
    ExponentRelabeling rel = exponent_relabeling(structure);
    int64_t n1 = rel.factors.empty() ? 1 : rel.factors[0];
    GridLayout g;
    g.cols = n1;
    g.rows = m * (M / n1);
    g.kind = LayoutKind::Exponent;
    g.row_modulus = m;
    for (int64_t x = 0; x < P; x++) {
        int64_t code = rel.code_of_point[x % M];
        g.cell_of.push_back({x % m + m * (code / n1), code % n1});
    }
    g.relabeling = std::move(rel);
    g.structure = std::make_shared<const AbelianStructure>(structure);
    return g;
}

}  // namespace apmqec
