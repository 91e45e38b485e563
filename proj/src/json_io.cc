#include "apmqec/json_io.h"

#include <fstream>
#include <sstream>

#include "apmqec/errors.h"

namespace apmqec {

const Json &require_field(const Json &j, const std::string &key, const std::string &path) {
    if (!j.is_object()) {
        throw ParseError("'" + path + "' must be an object", 0);
    }
    auto it = j.find(key);
    if (it == j.end()) {
        throw ParseError("missing field '" + path + "." + key + "'", 0);
    }
    return *it;
}

int64_t require_int(const Json &j, const std::string &key, const std::string &path) {
    const Json &v = require_field(j, key, path);
    if (!v.is_number_integer()) {
        throw ParseError("field '" + path + "." + key + "' must be an integer", 0);
    }
    return v.get<int64_t>();
}

double require_number(const Json &j, const std::string &key, const std::string &path) {
    const Json &v = require_field(j, key, path);
    if (!v.is_number()) {
        throw ParseError("field '" + path + "." + key + "' must be a number", 0);
    }
    return v.get<double>();
}

Json apm_to_json(const Apm &f) {
    return Json{{"a", f.a()}, {"b", f.b()}, {"modulus", f.modulus()}};
}

Apm apm_from_json(const Json &j, int64_t default_modulus, const std::string &path) {
    int64_t a = require_int(j, "a", path);
    int64_t b = require_int(j, "b", path);
    int64_t m = j.contains("modulus") ? require_int(j, "modulus", path) : default_modulus;
    if (m <= 0) {
        throw ParseError("field '" + path + ".modulus' missing or not positive", 0);
    }
    try {
        return Apm(a, b, m);
    } catch (const DomainError &e) {
        throw ParseError("field '" + path + "': " + e.what(), 0);
    }
}

Json spec_to_json(const CodeSpec &spec) {
    Json f = Json::array(), g = Json::array();
    for (int i = 0; i < 6; i++) {
        f.push_back(Json{{"a", spec.f[i].a()}, {"b", spec.f[i].b()}});
        g.push_back(Json{{"a", spec.g[i].a()}, {"b", spec.g[i].b()}});
    }
    return Json{{"P", spec.P}, {"f", f}, {"g", g}};
}

CodeSpec spec_from_json(const Json &j) {
    CodeSpec spec;
    spec.P = require_int(j, "P", "spec");
    if (spec.P <= 0) {
        throw ParseError("field 'spec.P' must be positive", 0);
    }
    for (const char *key : {"f", "g"}) {
        const Json &arr = require_field(j, key, "spec");
        if (!arr.is_array() || arr.size() != 6) {
            throw ParseError(std::string("field 'spec.") + key + "' must be an array of 6 maps", 0);
        }
        for (int i = 0; i < 6; i++) {
            std::string path = std::string("spec.") + key + "[" + std::to_string(i) + "]";
            Apm m = apm_from_json(arr[i], spec.P, path);
            if (m.modulus() != spec.P) {
                throw ParseError("field '" + path + ".modulus' differs from spec.P", 0);
            }
            (key[0] == 'f' ? spec.f : spec.g)[i] = m;
        }
    }
    return spec;
}

std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path + "'", 0);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ParseError("cannot write '" + path + "'", 0);
    }
    out << text;
}

Json read_json_file(const std::string &path) {
    std::string text = read_text_file(path);
    try {
        return Json::parse(text);
    } catch (const Json::parse_error &e) {
        throw ParseError("'" + path + "': " + e.what(), 0);
    }
}

}  // namespace apmqec
