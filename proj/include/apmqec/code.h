#ifndef APMQEC_CODE_H
#define APMQEC_CODE_H

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "apmqec/apm.h"
#include "apmqec/gf2.h"

namespace apmqec {

enum class Basis { X, Z };

/// Recipe for an APM CSS code: six F maps and six G maps on Z_P.
struct CodeSpec {
    static constexpr int kActiveRows = 3;
    static constexpr int kBlockCols = 12;
    static constexpr int kParentRows = 6;

    int64_t P = 1;
    std::array<Apm, 6> f;
    std::array<Apm, 6> g;

    /// Throws DomainError unless every map has modulus P.
    void validate() const;
    /// F_0..F_5 then G_0..G_5; index 6+j means G_j.
    const Apm &map(int index) const { return index < 6 ? f[index] : g[index - 6]; }
    friend bool operator==(const CodeSpec &, const CodeSpec &) = default;

    static CodeSpec all_identity(int64_t P);
};

struct CssCode {
    SparseGf2Matrix h_x;
    SparseGf2Matrix h_z;
    size_t n = 0;
    size_t k = 0;
    std::optional<size_t> d_upper;
    /// Empty until attach_logicals; k rows each, with logical_x * logical_z^T = I.
    BitMatrix logical_x;
    BitMatrix logical_z;

    bool has_logicals() const { return logical_x.rows() == k && logical_z.rows() == k && k > 0; }
};

/// Map placed at H_X block (row r, column c) and H_Z block (r, c); the H_Z block is the
/// transpose of the returned map's permutation matrix.
const Apm &hx_block(const CodeSpec &spec, int r, int c);
const Apm &hz_block_transposed(const CodeSpec &spec, int r, int c);

/// Builds the 3x12 block check matrices. Throws ConstructionError naming the first
/// non-orthogonal (H_X block row, H_Z block row) pair.
CssCode build_check_matrices(const CodeSpec &spec);
/// Full 6x12 block parents; the top three block rows equal the check matrices.
std::pair<SparseGf2Matrix, SparseGf2Matrix> build_parent_matrices(const CodeSpec &spec);

/// CSS code from explicit matrices. Throws ConstructionError unless h_x h_z^T = 0.
CssCode make_css_code(SparseGf2Matrix h_x, SparseGf2Matrix h_z);

/// X logicals (ker h_z mod rowspace h_x) and Z logicals (ker h_x mod rowspace h_z),
/// paired so that logical_x * logical_z^T is the identity.
std::pair<BitMatrix, BitMatrix> logical_basis(const CssCode &code);
void attach_logicals(CssCode &code);

struct Girth {
    enum class Kind { Finite, Infinite };
    Kind kind = Kind::Infinite;
    size_t length = 0;

    bool is_infinite() const { return kind == Kind::Infinite; }
    std::string str() const { return is_infinite() ? "inf" : std::to_string(length); }
    /// Infinite compares greater than every finite girth.
    bool at_least(size_t g) const { return is_infinite() || length >= g; }
};

/// Shortest cycle of the check/bit bipartite graph.
Girth tanner_girth(const SparseGf2Matrix &m);

/// Permutation matrix of f with entry (f(x), x) = 1, as P rows.
SparseGf2Matrix permutation_matrix(const Apm &f);

}  // namespace apmqec

#endif
