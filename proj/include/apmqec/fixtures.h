#ifndef APMQEC_FIXTURES_H
#define APMQEC_FIXTURES_H

#include <string>

#include "apmqec/code.h"

namespace apmqec {

/// Directory holding the shipped specs (p96.json, p192.json, p384.json) and throughput models.
std::string fixture_dir();
std::string fixture_path(const std::string &name);
/// Loads "p<P>.json" from the fixture directory.
CodeSpec load_fixture_spec(int64_t P);

}  // namespace apmqec

#endif
