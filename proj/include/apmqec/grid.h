#ifndef APMQEC_GRID_H
#define APMQEC_GRID_H

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "apmqec/apm_group.h"

namespace apmqec {

struct Cell {
    int64_t row = 0;
    int64_t col = 0;
    friend bool operator==(const Cell &, const Cell &) = default;
    friend auto operator<=>(const Cell &, const Cell &) = default;
};

enum class LayoutKind { Crt, Exponent, RowMajor, Custom };
std::string layout_kind_name(LayoutKind k);

/// Bijective placement of the qubits of one P-block on a rows x cols grid.
struct GridLayout {
    int64_t rows = 0;
    int64_t cols = 0;
    LayoutKind kind = LayoutKind::Custom;
    std::vector<Cell> cell_of;
    /// Row-factor modulus m for CRT and exponent layouts (qubit x contributes x mod m to its row).
    int64_t row_modulus = 1;
    /// Present for exponent layouts.
    std::optional<ExponentRelabeling> relabeling;
    /// The abelian group whose elements act as shifts; set for exponent layouts.
    std::shared_ptr<const AbelianStructure> structure;

    int64_t size() const { return (int64_t)cell_of.size(); }
    const Cell &cell(int64_t q) const { return cell_of.at(q); }
    /// Qubit at each cell (row-major), -1 for empty cells.
    std::vector<int64_t> occupancy() const;
    /// Throws DomainError unless the placement is a bijection onto the grid.
    void validate() const;
};

/// Qubit x at (x mod m, x mod l); requires gcd(m, l) = 1 and P = m l.
GridLayout crt_layout(int64_t P, int64_t m, int64_t l);

/// Qubit i at row i / m, column i mod m on an l x m grid (P = m l).
GridLayout row_major_layout(int64_t m, int64_t l);

/// Layout for P = m * |B| in which every element of the abelian group B acts by shifts.
///
/// With x_M = x mod |B| relabeled to exponents (e_1, ..., e_r), the column is e_1 and the
/// row is (x mod m) + m * code(e_2, ..., e_r). Needs gcd(m, |B|) = 1 and a regular action.
GridLayout exponent_layout(int64_t P, int64_t m, const AbelianStructure &structure);

}  // namespace apmqec

#endif
