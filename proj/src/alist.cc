#include "apmqec/alist.h"

#include <algorithm>
#include <sstream>

#include "apmqec/errors.h"

namespace apmqec {

namespace {

void write_list(std::ostringstream &out, const std::vector<uint32_t> &items, size_t width) {
    for (size_t i = 0; i < width; i++) {
        if (i) {
            out << ' ';
        }
        out << (i < items.size() ? items[i] + 1 : 0);
    }
    out << '\n';
}

class LineReader {
   public:
    explicit LineReader(const std::string &text) : in_(text) {}

    /// Next non-blank line as integers.
    std::vector<long long> next(const char *what) {
        std::string line;
        while (std::getline(in_, line)) {
            line_no_++;
            if (line.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            std::istringstream ls(line);
            std::vector<long long> vals;
            std::string tok;
            while (ls >> tok) {
                try {
                    size_t used = 0;
                    long long v = std::stoll(tok, &used);
                    if (used != tok.size()) {
                        throw std::invalid_argument(tok);
                    }
                    vals.push_back(v);
                } catch (const std::exception &) {
                    throw ParseError(std::string("non-integer token '") + tok + "' in " + what, line_no_);
                }
            }
            return vals;
        }
        throw ParseError(std::string("unexpected end of input while reading ") + what, line_no_ + 1);
    }

    size_t line() const { return line_no_; }

   private:
    std::istringstream in_;
    size_t line_no_ = 0;
};

}  // namespace

std::string export_alist(const SparseGf2Matrix &m) {
    auto cols = m.column_supports();
    size_t max_col = 0, max_row = 0;
    for (const auto &c : cols) {
        max_col = std::max(max_col, c.size());
    }
    for (const auto &r : m.entries) {
        max_row = std::max(max_row, r.size());
    }
    std::ostringstream out;
    out << m.cols << ' ' << m.rows << '\n' << max_col << ' ' << max_row << '\n';
    for (size_t c = 0; c < m.cols; c++) {
        out << (c ? " " : "") << cols[c].size();
    }
    out << '\n';
    for (size_t r = 0; r < m.rows; r++) {
        out << (r ? " " : "") << m.entries[r].size();
    }
    out << '\n';
    for (const auto &c : cols) {
        write_list(out, c, max_col);
    }
    for (const auto &r : m.entries) {
        write_list(out, r, max_row);
    }
    return out.str();
}

SparseGf2Matrix import_alist(const std::string &text) {
    LineReader in(text);
    auto dims = in.next("dimensions");
    if (dims.size() != 2 || dims[0] < 0 || dims[1] < 0) {
        throw ParseError("expected '<cols> <rows>'", in.line());
    }
    size_t ncols = dims[0], nrows = dims[1];
    auto maxw = in.next("max weights");
    if (maxw.size() != 2) {
        throw ParseError("expected '<max col weight> <max row weight>'", in.line());
    }
    auto col_w = ncols ? in.next("column weights") : std::vector<long long>{};
    if (col_w.size() != ncols) {
        throw ParseError("expected " + std::to_string(ncols) + " column weights", in.line());
    }
    auto row_w = nrows ? in.next("row weights") : std::vector<long long>{};
    if (row_w.size() != nrows) {
        throw ParseError("expected " + std::to_string(nrows) + " row weights", in.line());
    }

    auto read_list = [&](const char *what, long long weight, size_t bound) {
        auto vals = weight || maxw[0] || maxw[1] ? in.next(what) : std::vector<long long>{};
        std::vector<uint32_t> out;
        for (long long v : vals) {
            if (v == 0) {
                continue;
            }
            if (v < 0 || (size_t)v > bound) {
                throw ParseError(std::string("index out of range in ") + what, in.line());
            }
            out.push_back((uint32_t)(v - 1));
        }
        if ((long long)out.size() != weight) {
            throw ParseError(std::string("weight mismatch in ") + what, in.line());
        }
        std::sort(out.begin(), out.end());
        if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
            throw ParseError(std::string("duplicate index in ") + what, in.line());
        }
        return out;
    };

    std::vector<std::vector<uint32_t>> col_lists(ncols);
    for (size_t c = 0; c < ncols; c++) {
        col_lists[c] = read_list("column list", col_w[c], nrows);
    }
    SparseGf2Matrix m(nrows, ncols);
    for (size_t r = 0; r < nrows; r++) {
        m.entries[r] = read_list("row list", row_w[r], ncols);
    }
    if (m.column_supports() != col_lists) {
        throw ParseError("column lists disagree with row lists", in.line());
    }
    return m;
}

}  // namespace apmqec
