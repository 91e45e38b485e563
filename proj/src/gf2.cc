#include "apmqec/gf2.h"

#include <algorithm>
#include <bit>
#include <numeric>

#include "apmqec/errors.h"

namespace apmqec {

size_t BitVec::popcount() const {
    size_t n = 0;
    for (uint64_t w : words_) {
        n += std::popcount(w);
    }
    return n;
}

bool BitVec::any() const {
    for (uint64_t w : words_) {
        if (w) {
            return true;
        }
    }
    return false;
}

std::vector<uint32_t> BitVec::support() const {
    std::vector<uint32_t> out;
    for (size_t w = 0; w < words_.size(); w++) {
        uint64_t x = words_[w];
        while (x) {
            out.push_back((uint32_t)(w * 64 + std::countr_zero(x)));
            x &= x - 1;
        }
    }
    return out;
}

BitVec &BitVec::operator^=(const BitVec &other) {
    if (other.n_ != n_) {
        throw DomainError("BitVec: length mismatch");
    }
    for (size_t i = 0; i < words_.size(); i++) {
        words_[i] ^= other.words_[i];
    }
    return *this;
}

BitVec BitVec::from_support(size_t n, std::span<const uint32_t> support) {
    BitVec v(n);
    for (uint32_t i : support) {
        if (i >= n) {
            throw DomainError("BitVec::from_support: index out of range");
        }
        v.flip(i);
    }
    return v;
}

BitMatrix::BitMatrix(size_t rows, size_t cols)
    : rows_(rows), cols_(cols), stride_((cols + 63) / 64), data_(rows * ((cols + 63) / 64), 0) {
}

void BitMatrix::set(size_t r, size_t c, bool v) {
    uint64_t m = uint64_t{1} << (c & 63);
    if (v) {
        row(r)[c >> 6] |= m;
    } else {
        row(r)[c >> 6] &= ~m;
    }
}

void BitMatrix::xor_row(size_t dst, size_t src) {
    uint64_t *d = row(dst);
    const uint64_t *s = row(src);
    for (size_t w = 0; w < stride_; w++) {
        d[w] ^= s[w];
    }
}

void BitMatrix::swap_rows(size_t a, size_t b) {
    if (a != b) {
        std::swap_ranges(row(a), row(a) + stride_, row(b));
    }
}

size_t BitMatrix::row_weight(size_t r) const {
    size_t n = 0;
    const uint64_t *p = row(r);
    for (size_t w = 0; w < stride_; w++) {
        n += std::popcount(p[w]);
    }
    return n;
}

BitVec BitMatrix::row_vec(size_t r) const {
    BitVec v(cols_);
    std::copy(row(r), row(r) + stride_, v.words().begin());
    return v;
}

void BitMatrix::set_row(size_t r, const BitVec &v) {
    if (v.size() != cols_) {
        throw DomainError("BitMatrix::set_row: length mismatch");
    }
    std::copy(v.words().begin(), v.words().end(), row(r));
}

void BitMatrix::append_row(const BitVec &v) {
    if (v.size() != cols_) {
        throw DomainError("BitMatrix::append_row: length mismatch");
    }
    data_.insert(data_.end(), v.words().begin(), v.words().end());
    rows_++;
}

void BitMatrix::truncate_rows(size_t n) {
    if (n < rows_) {
        rows_ = n;
        data_.resize(n * stride_);
    }
}

BitMatrix BitMatrix::transpose() const {
    BitMatrix t(cols_, rows_);
    for (size_t r = 0; r < rows_; r++) {
        const uint64_t *p = row(r);
        for (size_t w = 0; w < stride_; w++) {
            uint64_t x = p[w];
            while (x) {
                t.set(w * 64 + std::countr_zero(x), r);
                x &= x - 1;
            }
        }
    }
    return t;
}

BitMatrix BitMatrix::operator*(const BitMatrix &other) const {
    if (cols_ != other.rows_) {
        throw DomainError("BitMatrix product: dimension mismatch");
    }
    BitMatrix out(rows_, other.cols_);
    for (size_t r = 0; r < rows_; r++) {
        const uint64_t *p = row(r);
        uint64_t *o = out.row(r);
        for (size_t w = 0; w < stride_; w++) {
            uint64_t x = p[w];
            while (x) {
                const uint64_t *q = other.row(w * 64 + std::countr_zero(x));
                for (size_t k = 0; k < out.stride_; k++) {
                    o[k] ^= q[k];
                }
                x &= x - 1;
            }
        }
    }
    return out;
}

bool BitMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](uint64_t w) { return w == 0; });
}

std::vector<size_t> rref(BitMatrix &m, std::span<const size_t> column_order) {
    std::vector<size_t> natural;
    if (column_order.empty()) {
        natural.resize(m.cols());
        std::iota(natural.begin(), natural.end(), 0);
        column_order = natural;
    }
    std::vector<size_t> pivots;
    size_t next = 0;
    for (size_t c : column_order) {
        if (next == m.rows()) {
            break;
        }
        size_t word = c >> 6;
        uint64_t mask = uint64_t{1} << (c & 63);
        size_t pr = next;
        while (pr < m.rows() && !(m.row(pr)[word] & mask)) {
            pr++;
        }
        if (pr == m.rows()) {
            continue;
        }
        m.swap_rows(pr, next);
        for (size_t r = 0; r < m.rows(); r++) {
            if (r != next && (m.row(r)[word] & mask)) {
                m.xor_row(r, next);
            }
        }
        pivots.push_back(c);
        next++;
    }
    return pivots;
}

size_t rank(BitMatrix m) {
    return rref(m).size();
}

BitMatrix row_basis(BitMatrix m) {
    size_t r = rref(m).size();
    m.truncate_rows(r);
    return m;
}

BitMatrix kernel(const BitMatrix &m) {
    BitMatrix e = m;
    auto pivots = rref(e);
    std::vector<char> is_pivot(m.cols(), 0);
    for (size_t c : pivots) {
        is_pivot[c] = 1;
    }
    BitMatrix out(m.cols() - pivots.size(), m.cols());
    size_t k = 0;
    for (size_t f = 0; f < m.cols(); f++) {
        if (is_pivot[f]) {
            continue;
        }
        out.set(k, f);
        // Row i of the echelon form reads x_{pivot_i} + sum_{free} e[i][free] x_free = 0.
        for (size_t i = 0; i < pivots.size(); i++) {
            if (e.get(i, f)) {
                out.set(k, pivots[i]);
            }
        }
        k++;
    }
    return out;
}

RowSpace::RowSpace(const BitMatrix &generators) : basis_(generators) {
    pivots_ = rref(basis_);
    basis_.truncate_rows(pivots_.size());
}

BitVec RowSpace::reduce(BitVec v) const {
    if (v.size() != basis_.cols()) {
        throw DomainError("RowSpace::reduce: length mismatch");
    }
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
    return v;
}

void SparseGf2Matrix::validate() const {
    if (entries.size() != rows) {
        throw DomainError("SparseGf2Matrix: entries has " + std::to_string(entries.size()) + " rows, expected " +
                          std::to_string(rows));
    }
    for (size_t r = 0; r < rows; r++) {
        const auto &e = entries[r];
        for (size_t i = 0; i < e.size(); i++) {
            if (e[i] >= cols) {
                throw DomainError("SparseGf2Matrix: row " + std::to_string(r) + " has column out of range");
            }
            if (i && e[i] <= e[i - 1]) {
                throw DomainError("SparseGf2Matrix: row " + std::to_string(r) + " is not strictly increasing");
            }
        }
    }
}

size_t SparseGf2Matrix::nnz() const {
    size_t n = 0;
    for (const auto &e : entries) {
        n += e.size();
    }
    return n;
}

std::vector<std::vector<uint32_t>> SparseGf2Matrix::column_supports() const {
    std::vector<std::vector<uint32_t>> out(cols);
    for (size_t r = 0; r < rows; r++) {
        for (uint32_t c : entries[r]) {
            out[c].push_back((uint32_t)r);
        }
    }
    return out;
}

SparseGf2Matrix SparseGf2Matrix::transpose() const {
    SparseGf2Matrix t(cols, rows);
    t.entries = column_supports();
    return t;
}

BitMatrix SparseGf2Matrix::to_dense() const {
    BitMatrix m(rows, cols);
    for (size_t r = 0; r < rows; r++) {
        for (uint32_t c : entries[r]) {
            m.set(r, c);
        }
    }
    return m;
}

SparseGf2Matrix SparseGf2Matrix::from_dense(const BitMatrix &m) {
    SparseGf2Matrix s(m.rows(), m.cols());
    for (size_t r = 0; r < m.rows(); r++) {
        s.entries[r] = m.row_vec(r).support();
    }
    return s;
}

BitVec SparseGf2Matrix::multiply(const BitVec &v) const {
    if (v.size() != cols) {
        throw DomainError("SparseGf2Matrix::multiply: vector length " + std::to_string(v.size()) + " != " +
                          std::to_string(cols));
    }
    BitVec out(rows);
    for (size_t r = 0; r < rows; r++) {
        bool bit = false;
        for (uint32_t c : entries[r]) {
            bit ^= v.get(c);
        }
        if (bit) {
            out.set(r);
        }
    }
    return out;
}

SparseGf2Matrix SparseGf2Matrix::row_slice(size_t begin, size_t end) const {
    if (begin > end || end > rows) {
        throw DomainError("SparseGf2Matrix::row_slice: bad range");
    }
    SparseGf2Matrix s(end - begin, cols);
    std::copy(entries.begin() + begin, entries.begin() + end, s.entries.begin());
    return s;
}

size_t gf2_rank(const SparseGf2Matrix &m) {
    return rank(m.to_dense());
}

}  // namespace apmqec
