#include "apmqec/code.h"

#include <algorithm>
#include <deque>
#include <limits>

#include "apmqec/errors.h"

namespace apmqec {

namespace {

size_t wrap6(int x) {
    return (size_t)(((x % 6) + 6) % 6);
}

/// Block matrix whose block (r, c) is the permutation matrix of block(r, c), or its transpose.
SparseGf2Matrix assemble(int64_t P, int block_rows, bool transposed, const Apm &(*block)(const CodeSpec &, int, int),
                         const CodeSpec &spec) {
    SparseGf2Matrix m(block_rows * P, CodeSpec::kBlockCols * P);
    for (int r = 0; r < block_rows; r++) {
        for (int c = 0; c < CodeSpec::kBlockCols; c++) {
            const Apm &f = block(spec, r, c);
            // Row y of the block has its 1 in column f^{-1}(y), or f(y) when transposed.
            Apm col_of_row = transposed ? f : inverse(f);
            for (int64_t y = 0; y < P; y++) {
                m.entries[r * P + y].push_back((uint32_t)(c * P + col_of_row(y)));
            }
        }
    }
    return m;
}

void check_orthogonal(const CssCode &code, int64_t P) {
    auto zcols = code.h_z.column_supports();
    std::vector<uint8_t> parity(code.h_z.rows, 0);
    std::vector<uint8_t> marked(code.h_z.rows, 0);
    std::vector<uint32_t> touched;
    for (size_t xr = 0; xr < code.h_x.rows; xr++) {
        touched.clear();
        for (uint32_t c : code.h_x.entries[xr]) {
            for (uint32_t zr : zcols[c]) {
                if (!marked[zr]) {
                    marked[zr] = 1;
                    touched.push_back(zr);
                }
                parity[zr] ^= 1;
            }
        }
        for (uint32_t zr : touched) {
            bool odd = parity[zr];
            parity[zr] = 0;
            marked[zr] = 0;
            if (odd) {
                std::string where = P > 0 ? "H_X block row " + std::to_string(xr / P) + " vs H_Z block row " +
                                                std::to_string(zr / P)
                                          : "H_X row " + std::to_string(xr) + " vs H_Z row " + std::to_string(zr);
                throw ConstructionError("CSS orthogonality fails: " + where);
            }
        }
    }
}

}  // namespace

void CodeSpec::validate() const {
    for (int i = 0; i < 12; i++) {
        if (map(i).modulus() != P) {
            throw DomainError(std::string("CodeSpec: ") + (i < 6 ? "f[" : "g[") + std::to_string(i % 6) +
                              "] has modulus " + std::to_string(map(i).modulus()) + ", expected " +
                              std::to_string(P));
        }
    }
}

CodeSpec CodeSpec::all_identity(int64_t P) {
    CodeSpec s;
    s.P = P;
    s.f.fill(Apm::identity(P));
    s.g.fill(Apm::identity(P));
    return s;
}

const Apm &hx_block(const CodeSpec &spec, int r, int c) {
    return c < 6 ? spec.f[wrap6(c - r)] : spec.g[wrap6(c - 6 - r)];
}

const Apm &hz_block_transposed(const CodeSpec &spec, int r, int c) {
    return c < 6 ? spec.g[wrap6(r - c)] : spec.f[wrap6(r - (c - 6))];
}

SparseGf2Matrix permutation_matrix(const Apm &f) {
    SparseGf2Matrix m(f.modulus(), f.modulus());
    Apm inv = inverse(f);
    for (int64_t y = 0; y < f.modulus(); y++) {
        m.entries[y].push_back((uint32_t)inv(y));
    }
    return m;
}

static CssCode build_with_rows(const CodeSpec &spec, int block_rows) {
    spec.validate();
    CssCode code;
    code.h_x = assemble(spec.P, block_rows, false, hx_block, spec);
    code.h_z = assemble(spec.P, block_rows, true, hz_block_transposed, spec);
    for (auto *m : {&code.h_x, &code.h_z}) {
        for (auto &row : m->entries) {
            std::sort(row.begin(), row.end());
        }
    }
    code.n = CodeSpec::kBlockCols * spec.P;
    return code;
}

CssCode build_check_matrices(const CodeSpec &spec) {
    CssCode code = build_with_rows(spec, CodeSpec::kActiveRows);
    check_orthogonal(code, spec.P);
    code.k = code.n - gf2_rank(code.h_x) - gf2_rank(code.h_z);
    return code;
}

std::pair<SparseGf2Matrix, SparseGf2Matrix> build_parent_matrices(const CodeSpec &spec) {
    CssCode parent = build_with_rows(spec, CodeSpec::kParentRows);
    return {std::move(parent.h_x), std::move(parent.h_z)};
}

CssCode make_css_code(SparseGf2Matrix h_x, SparseGf2Matrix h_z) {
    h_x.validate();
    h_z.validate();
    if (h_x.cols != h_z.cols) {
        throw ConstructionError("make_css_code: h_x and h_z have different column counts");
    }
    CssCode code;
    code.n = h_x.cols;
    code.h_x = std::move(h_x);
    code.h_z = std::move(h_z);
    check_orthogonal(code, 0);
    code.k = code.n - gf2_rank(code.h_x) - gf2_rank(code.h_z);
    return code;
}

namespace {

/// Sequential elimination: rows are kept in insertion order, each reduced against all earlier ones.
class IncrementalSpan {
   public:
    explicit IncrementalSpan(size_t n) : basis_(0, n) {}

    /// Adds v if independent; returns whether it was added.
    bool add(BitVec v) {
        auto w = v.words();
        for (size_t i = 0; i < pivots_.size(); i++) {
            size_t c = pivots_[i];
            if ((w[c >> 6] >> (c & 63)) & 1) {
                const uint64_t *p = basis_.row(i);
                for (size_t k = 0; k < w.size(); k++) {
                    w[k] ^= p[k];
                }
            }
        }
        if (!v.any()) {
            return false;
        }
        pivots_.push_back(v.support().front());
        basis_.append_row(v);
        return true;
    }

   private:
    BitMatrix basis_;
    std::vector<size_t> pivots_;
};

BitMatrix quotient_basis(const SparseGf2Matrix &stabilizers, const SparseGf2Matrix &opposite, size_t n) {
    IncrementalSpan span(n);
    BitMatrix s = stabilizers.to_dense();
    for (size_t r = 0; r < s.rows(); r++) {
        span.add(s.row_vec(r));
    }
    BitMatrix ker = kernel(opposite.to_dense());
    BitMatrix out(0, n);
    for (size_t r = 0; r < ker.rows(); r++) {
        BitVec v = ker.row_vec(r);
        if (span.add(v)) {
            out.append_row(v);
        }
    }
    return out;
}

/// Inverse over GF(2) of a square matrix; throws on singular input.
BitMatrix invert(const BitMatrix &m) {
    size_t k = m.rows();
    BitMatrix aug(k, 2 * k);
    for (size_t r = 0; r < k; r++) {
        for (size_t c = 0; c < k; c++) {
            if (m.get(r, c)) {
                aug.set(r, c);
            }
        }
        aug.set(r, k + r);
    }
    std::vector<size_t> order(k);
    for (size_t i = 0; i < k; i++) {
        order[i] = i;
    }
    auto piv = rref(aug, order);
    if (piv.size() != k) {
        throw ConstructionError("logical_basis: pairing matrix is singular (rank inconsistency)");
    }
    BitMatrix inv(k, k);
    for (size_t r = 0; r < k; r++) {
        for (size_t c = 0; c < k; c++) {
            if (aug.get(r, k + c)) {
                inv.set(r, c);
            }
        }
    }
    return inv;
}

}  // namespace

std::pair<BitMatrix, BitMatrix> logical_basis(const CssCode &code) {
    BitMatrix lx = quotient_basis(code.h_x, code.h_z, code.n);
    BitMatrix lz = quotient_basis(code.h_z, code.h_x, code.n);
    if (lx.rows() != code.k || lz.rows() != code.k) {
        throw ConstructionError("logical_basis: found " + std::to_string(lx.rows()) + "/" + std::to_string(lz.rows()) +
                                " logicals, expected k = " + std::to_string(code.k));
    }
    if (code.k == 0) {
        return {lx, lz};
    }
    // Pair: with M = Lx Lz^T, replace Lz by (M^{-1})^T Lz so that Lx Lz'^T = I.
    BitMatrix pairing = lx * lz.transpose();
    BitMatrix b = invert(pairing).transpose();
    return {lx, b * lz};
}

void attach_logicals(CssCode &code) {
    auto [lx, lz] = logical_basis(code);
    code.logical_x = std::move(lx);
    code.logical_z = std::move(lz);
}

Girth tanner_girth(const SparseGf2Matrix &m) {
    // Vertices: checks [0, rows), bits [rows, rows + cols).
    size_t nv = m.rows + m.cols;
    std::vector<std::vector<uint32_t>> adj(nv);
    for (size_t r = 0; r < m.rows; r++) {
        for (uint32_t c : m.entries[r]) {
            adj[r].push_back((uint32_t)(m.rows + c));
            adj[m.rows + c].push_back((uint32_t)r);
        }
    }
    size_t best = std::numeric_limits<size_t>::max();
    std::vector<int64_t> dist(nv, -1);
    std::vector<int64_t> parent(nv, -1);
    std::vector<uint32_t> seen;
    std::deque<uint32_t> queue;
    for (size_t root = 0; root < nv; root++) {
        for (uint32_t v : seen) {
            dist[v] = -1;
            parent[v] = -1;
        }
        seen.clear();
        queue.clear();
        dist[root] = 0;
        seen.push_back((uint32_t)root);
        queue.push_back((uint32_t)root);
        while (!queue.empty()) {
            uint32_t u = queue.front();
            queue.pop_front();
            if ((size_t)(2 * dist[u] + 1) >= best) {
                break;
            }
            for (uint32_t w : adj[u]) {
                if (dist[w] < 0) {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    seen.push_back(w);
                    queue.push_back(w);
                } else if ((int64_t)w != parent[u]) {
                    best = std::min(best, (size_t)(dist[u] + dist[w] + 1));
                }
            }
        }
    }
    if (best == std::numeric_limits<size_t>::max()) {
        return Girth{Girth::Kind::Infinite, 0};
    }
    return Girth{Girth::Kind::Finite, best};
}

}  // namespace apmqec
