#include "apmqec/fixtures.h"

#include <cstdlib>

#include "apmqec/json_io.h"

namespace apmqec {

std::string fixture_dir() {
    if (const char *env = std::getenv("APMQEC_FIXTURES")) {
        return env;
    }
    return APMQEC_FIXTURE_DIR;
}

std::string fixture_path(const std::string &name) {
    return fixture_dir() + "/" + name;
}

CodeSpec load_fixture_spec(int64_t P) {
    return spec_from_json(read_json_file(fixture_path("p" + std::to_string(P) + ".json")));
}

}  // namespace apmqec
