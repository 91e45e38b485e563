#ifndef APMQEC_GF2_H
#define APMQEC_GF2_H

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace apmqec {

/// Packed bit vector over GF(2).
class BitVec {
   public:
    BitVec() = default;
    explicit BitVec(size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    size_t size() const { return n_; }
    bool get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(size_t i, bool v = true) {
        uint64_t m = uint64_t{1} << (i & 63);
        if (v) {
            words_[i >> 6] |= m;
        } else {
            words_[i >> 6] &= ~m;
        }
    }
    void flip(size_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }
    size_t popcount() const;
    bool any() const;
    std::vector<uint32_t> support() const;
    BitVec &operator^=(const BitVec &other);
    friend bool operator==(const BitVec &, const BitVec &) = default;

    std::span<uint64_t> words() { return words_; }
    std::span<const uint64_t> words() const { return words_; }

    static BitVec from_support(size_t n, std::span<const uint32_t> support);

   private:
    size_t n_ = 0;
    std::vector<uint64_t> words_;
};

/// Dense row-major bit matrix; every row is word-aligned.
class BitMatrix {
   public:
    BitMatrix() = default;
    BitMatrix(size_t rows, size_t cols);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    size_t stride() const { return stride_; }

    uint64_t *row(size_t r) { return data_.data() + r * stride_; }
    const uint64_t *row(size_t r) const { return data_.data() + r * stride_; }
    bool get(size_t r, size_t c) const { return (row(r)[c >> 6] >> (c & 63)) & 1; }
    void set(size_t r, size_t c, bool v = true);
    void flip(size_t r, size_t c) { row(r)[c >> 6] ^= uint64_t{1} << (c & 63); }
    /// row(dst) ^= row(src)
    void xor_row(size_t dst, size_t src);
    void swap_rows(size_t a, size_t b);
    size_t row_weight(size_t r) const;
    BitVec row_vec(size_t r) const;
    void set_row(size_t r, const BitVec &v);
    void append_row(const BitVec &v);
    /// Keeps only the first `n` rows.
    void truncate_rows(size_t n);

    BitMatrix transpose() const;
    /// Product over GF(2); throws DomainError on a dimension mismatch.
    BitMatrix operator*(const BitMatrix &other) const;
    bool is_zero() const;
    friend bool operator==(const BitMatrix &, const BitMatrix &) = default;

   private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    size_t stride_ = 0;
    std::vector<uint64_t> data_;
};

/// In-place reduced row echelon form. Pivot columns are searched in `column_order`
/// (natural order when empty). Zero rows are moved to the bottom; returns pivot columns
/// in the order the pivots were found, so row i has its pivot at the returned entry i.
std::vector<size_t> rref(BitMatrix &m, std::span<const size_t> column_order = {});
size_t rank(BitMatrix m);
/// Basis of {v : m v = 0}, one vector per row.
BitMatrix kernel(const BitMatrix &m);
/// Rows of `m` after elimination, zero rows dropped.
BitMatrix row_basis(BitMatrix m);

/// Incremental membership test for a fixed row space.
class RowSpace {
   public:
    explicit RowSpace(const BitMatrix &generators);
    size_t dimension() const { return basis_.rows(); }
    /// Reduces `v` against the basis; the result is zero iff v lies in the row space.
    BitVec reduce(BitVec v) const;
    bool contains(const BitVec &v) const { return !reduce(v).any(); }

   private:
    BitMatrix basis_;
    std::vector<size_t> pivots_;
};

/// Sparse binary matrix with strictly increasing column indices per row.
struct SparseGf2Matrix {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<std::vector<uint32_t>> entries;

    SparseGf2Matrix() = default;
    SparseGf2Matrix(size_t rows, size_t cols) : rows(rows), cols(cols), entries(rows) {}

    /// Throws DomainError if a row is unsorted, has duplicates, or leaves the column range.
    void validate() const;
    size_t nnz() const;
    std::vector<std::vector<uint32_t>> column_supports() const;
    SparseGf2Matrix transpose() const;
    BitMatrix to_dense() const;
    static SparseGf2Matrix from_dense(const BitMatrix &m);
    /// m * v over GF(2).
    BitVec multiply(const BitVec &v) const;
    /// Rows [begin, end).
    SparseGf2Matrix row_slice(size_t begin, size_t end) const;

    friend bool operator==(const SparseGf2Matrix &, const SparseGf2Matrix &) = default;
};

size_t gf2_rank(const SparseGf2Matrix &m);

}  // namespace apmqec

#endif
