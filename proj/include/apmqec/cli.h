#ifndef APMQEC_CLI_H
#define APMQEC_CLI_H

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "apmqec/json_io.h"

namespace apmqec {

inline constexpr const char *kToolVersion = "apmqec 0.1.0";

/// Provenance record written as manifest.json next to every command's outputs. The digest
/// covers the command, its resolved options and the contents of its input files, so equal
/// digests mean equal inputs; wall_clock_s is the only field that varies between reruns.
struct RunManifest {
    std::string command;
    Json config;
    std::string digest;
    uint64_t seed = 0;
    std::string tool_version = kToolVersion;
    std::vector<std::string> outputs;
    double wall_clock_s = 0;

    static std::string digest_of(const std::string &command, const Json &config);
    Json to_json() const;
};

/// Runs one subcommand. Returns the process exit status: 0 success, 1 a check failed,
/// 2 bad usage or input (with a diagnostic on `err`).
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace apmqec

#endif
