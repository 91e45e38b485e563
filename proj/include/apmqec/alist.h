#ifndef APMQEC_ALIST_H
#define APMQEC_ALIST_H

#include <string>

#include "apmqec/gf2.h"

namespace apmqec {

/// MacKay alist text: "cols rows", max weights, column weights, row weights, then
/// 1-based column lists and row lists, each zero-padded to the max weight.
std::string export_alist(const SparseGf2Matrix &m);
/// Throws ParseError carrying the 1-based line number of the first problem.
SparseGf2Matrix import_alist(const std::string &text);

}  // namespace apmqec

#endif
