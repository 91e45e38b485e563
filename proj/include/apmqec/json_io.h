#ifndef APMQEC_JSON_IO_H
#define APMQEC_JSON_IO_H

#include <string>

#include <json.hpp>

#include "apmqec/apm.h"
#include "apmqec/code.h"

namespace apmqec {

using Json = nlohmann::ordered_json;

/// {"a":..,"b":..,"modulus":..}; `modulus` may be omitted when the caller supplies it.
Json apm_to_json(const Apm &f);
Apm apm_from_json(const Json &j, int64_t default_modulus = 0, const std::string &path = "apm");

/// {"P":96,"f":[{"a":5,"b":41},...],"g":[...]}
Json spec_to_json(const CodeSpec &spec);
CodeSpec spec_from_json(const Json &j);

Json read_json_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &text);
std::string read_text_file(const std::string &path);

/// Field accessors that throw ParseError naming the offending field.
const Json &require_field(const Json &j, const std::string &key, const std::string &path);
int64_t require_int(const Json &j, const std::string &key, const std::string &path);
double require_number(const Json &j, const std::string &key, const std::string &path);

}  // namespace apmqec

#endif
