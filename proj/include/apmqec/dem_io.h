#ifndef APMQEC_DEM_IO_H
#define APMQEC_DEM_IO_H

#include <iosfwd>
#include <string>

#include "apmqec/memory.h"

namespace apmqec {

/// Line-oriented detector error model:
///
///   # comment
///   experiment n=<qubits> checks=<m> rounds=<r> basis=<X|Z> noise=<kind> p_data=<p> p_meas=<p>
///   detectors <D>
///   observables <K>
///   error(<prior>) D<i> D<j> ... L<k> ...
///
/// One `error` line per mechanism, in mechanism order. Blank lines are ignored.
std::string export_dem(const MemoryExperiment &experiment);
/// Throws ParseError with the offending line number.
MemoryExperiment import_dem(const std::string &text);

/// Binary shot file: one JSON header line
///   {"format":"apmqec-shots","version":1,"shots":S,"detectors":D,"observables":K,"mechanisms":M}
/// followed by S syndrome rows, S observable rows and, when M > 0, S error rows. Each row is
/// packed little-endian into ceil(width / 8) bytes. A non-empty `manifest` is stored as an
/// extra header field.
void write_shots(std::ostream &out, const ShotBatch &batch, const std::string &manifest = "");
ShotBatch read_shots(std::istream &in);
void write_shots_file(const std::string &path, const ShotBatch &batch, const std::string &manifest = "");
ShotBatch read_shots_file(const std::string &path);

}  // namespace apmqec

#endif
