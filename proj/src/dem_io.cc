#include "apmqec/dem_io.h"

#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

#include "apmqec/errors.h"
#include "apmqec/json_io.h"

namespace apmqec {

std::string export_dem(const MemoryExperiment &ex) {
    std::string out = "# detector error model\n";
    out += fmt::format("experiment n={} checks={} rounds={} basis={} noise={} p_data={:.17g} p_meas={:.17g}\n", ex.n,
                       ex.checks, ex.rounds, ex.basis == Basis::X ? "X" : "Z", noise_kind_name(ex.noise.kind),
                       ex.noise.p_data, ex.noise.p_meas);
    out += fmt::format("detectors {}\nobservables {}\n", ex.num_detectors(), ex.num_observables());
    for (size_t e = 0; e < ex.num_mechanisms(); e++) {
        out += fmt::format("error({:.17g})", ex.priors[e]);
        for (uint32_t d : ex.mechanism_detectors[e]) out += fmt::format(" D{}", d);
        for (uint32_t o : ex.mechanism_observables[e]) out += fmt::format(" L{}", o);
        out += '\n';
    }
    return out;
}

namespace {

template <typename T>
T parse_number(std::string_view s, size_t line, std::string_view what) {
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError(fmt::format("bad {} '{}'", what, s), line);
    }
    return v;
}

double parse_double(const std::string &s, size_t line, std::string_view what) {
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception &) {
    }
    throw ParseError(fmt::format("bad {} '{}'", what, s), line);
}

}  // namespace

MemoryExperiment import_dem(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    MemoryExperiment ex;
    bool have_header = false;
    std::optional<size_t> detectors, observables;
    while (std::getline(in, line)) {
        lineno++;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head.empty()) continue;
        if (head == "experiment") {
            std::string kv;
            bool seen_n = false, seen_checks = false, seen_rounds = false;
            while (ls >> kv) {
                auto eq = kv.find('=');
                if (eq == std::string::npos) throw ParseError(fmt::format("expected key=value, got '{}'", kv), lineno);
                std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
                if (key == "n") {
                    ex.n = parse_number<size_t>(val, lineno, "n");
                    seen_n = true;
                } else if (key == "checks") {
                    ex.checks = parse_number<size_t>(val, lineno, "checks");
                    seen_checks = true;
                } else if (key == "rounds") {
                    ex.rounds = parse_number<size_t>(val, lineno, "rounds");
                    seen_rounds = true;
                } else if (key == "basis") {
                    if (val != "X" && val != "Z") throw ParseError(fmt::format("bad basis '{}'", val), lineno);
                    ex.basis = val == "X" ? Basis::X : Basis::Z;
                } else if (key == "noise") {
                    try {
                        ex.noise.kind = noise_kind_from_name(val);
                    } catch (const DomainError &e) {
                        throw ParseError(e.what(), lineno);
                    }
                } else if (key == "p_data") {
                    ex.noise.p_data = parse_double(val, lineno, "p_data");
                } else if (key == "p_meas") {
                    ex.noise.p_meas = parse_double(val, lineno, "p_meas");
                } else {
                    throw ParseError(fmt::format("unknown experiment key '{}'", key), lineno);
                }
            }
            if (!seen_n || !seen_checks || !seen_rounds) {
                throw ParseError("experiment line needs n, checks and rounds", lineno);
            }
            have_header = true;
        } else if (head == "detectors" || head == "observables") {
            std::string v, extra;
            if (!(ls >> v) || (ls >> extra)) throw ParseError(fmt::format("expected '{} <count>'", head), lineno);
            (head == "detectors" ? detectors : observables) = parse_number<size_t>(v, lineno, head);
        } else if (head.rfind("error(", 0) == 0 && head.back() == ')') {
            if (!have_header || !detectors || !observables) {
                throw ParseError("error line before experiment/detectors/observables header", lineno);
            }
            double p = parse_double(head.substr(6, head.size() - 7), lineno, "prior");
            if (!(p >= 0 && p <= 1)) throw ParseError(fmt::format("prior {} outside [0, 1]", p), lineno);
            std::vector<uint32_t> ds, ls_;
            std::string tok;
            while (ls >> tok) {
                if (tok.size() < 2 || (tok[0] != 'D' && tok[0] != 'L')) {
                    throw ParseError(fmt::format("bad target '{}'", tok), lineno);
                }
                auto idx = parse_number<uint32_t>(std::string_view(tok).substr(1), lineno, "target index");
                if (tok[0] == 'D') {
                    if (idx >= *detectors) throw ParseError(fmt::format("detector {} out of range", idx), lineno);
                    ds.push_back(idx);
                } else {
                    if (idx >= *observables) throw ParseError(fmt::format("observable {} out of range", idx), lineno);
                    ls_.push_back(idx);
                }
            }
            std::sort(ds.begin(), ds.end());
            std::sort(ls_.begin(), ls_.end());
            if (std::adjacent_find(ds.begin(), ds.end()) != ds.end() ||
                std::adjacent_find(ls_.begin(), ls_.end()) != ls_.end()) {
                throw ParseError("repeated target", lineno);
            }
            ex.priors.push_back(p);
            ex.mechanism_detectors.push_back(std::move(ds));
            ex.mechanism_observables.push_back(std::move(ls_));
        } else {
            throw ParseError(fmt::format("unknown directive '{}'", head), lineno);
        }
    }
    if (!have_header || !detectors || !observables) {
        throw ParseError("missing experiment/detectors/observables header", lineno);
    }
    const size_t mech = ex.priors.size();
    ex.check = SparseGf2Matrix(*detectors, mech);
    ex.observables = SparseGf2Matrix(*observables, mech);
    for (size_t e = 0; e < mech; e++) {
        for (uint32_t d : ex.mechanism_detectors[e]) ex.check.entries[d].push_back(uint32_t(e));
        for (uint32_t o : ex.mechanism_observables[e]) ex.observables.entries[o].push_back(uint32_t(e));
    }
    return ex;
}

namespace {

void write_rows(std::ostream &out, const BitMatrix &m) {
    const size_t bytes = (m.cols() + 7) / 8;
    std::vector<char> buf(bytes);
    for (size_t r = 0; r < m.rows(); r++) {
        const uint64_t *w = m.row(r);
        for (size_t b = 0; b < bytes; b++) buf[b] = char((w[b / 8] >> (8 * (b % 8))) & 0xff);
        out.write(buf.data(), std::streamsize(bytes));
    }
}

BitMatrix read_rows(std::istream &in, size_t rows, size_t cols) {
    BitMatrix m(rows, cols);
    const size_t bytes = (cols + 7) / 8;
    std::vector<char> buf(bytes);
    for (size_t r = 0; r < rows; r++) {
        if (!in.read(buf.data(), std::streamsize(bytes))) {
            throw ParseError(fmt::format("shot file truncated at row {}", r), 0);
        }
        uint64_t *w = m.row(r);
        for (size_t b = 0; b < bytes; b++) w[b / 8] |= uint64_t(uint8_t(buf[b])) << (8 * (b % 8));
        // Padding bits past `cols` must be clear.
        if (cols % 8 != 0 && (uint8_t(buf[bytes - 1]) >> (cols % 8)) != 0) {
            throw ParseError(fmt::format("nonzero padding bits in row {}", r), 0);
        }
    }
    return m;
}

}  // namespace

void write_shots(std::ostream &out, const ShotBatch &batch, const std::string &manifest) {
    Json header;
    header["format"] = "apmqec-shots";
    header["version"] = 1;
    header["shots"] = batch.shots();
    header["detectors"] = batch.syndromes.cols();
    header["observables"] = batch.observables.cols();
    header["mechanisms"] = batch.errors.rows() ? batch.errors.cols() : 0;
    if (!manifest.empty()) header["manifest"] = manifest;
    out << header.dump() << '\n';
    write_rows(out, batch.syndromes);
    write_rows(out, batch.observables);
    if (batch.errors.rows()) write_rows(out, batch.errors);
}

ShotBatch read_shots(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty shot file", 1);
    Json h;
    try {
        h = Json::parse(line);
    } catch (const std::exception &e) {
        throw ParseError(fmt::format("bad shot header: {}", e.what()), 1);
    }
    if (!h.is_object() || h.value("format", "") != "apmqec-shots" || h.value("version", 0) != 1) {
        throw ParseError("not an apmqec-shots v1 file", 1);
    }
    auto count = [&](const char *key) { return size_t(require_int(h, key, "shots header")); };
    size_t shots = count("shots"), det = count("detectors"), obs = count("observables"), mech = count("mechanisms");
    ShotBatch b;
    b.syndromes = read_rows(in, shots, det);
    b.observables = read_rows(in, shots, obs);
    if (mech) b.errors = read_rows(in, shots, mech);
    if (in.peek() != std::char_traits<char>::eof()) throw ParseError("trailing bytes after shot data", 0);
    return b;
}

void write_shots_file(const std::string &path, const ShotBatch &batch, const std::string &manifest) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError(fmt::format("cannot open '{}' for writing", path));
    write_shots(out, batch, manifest);
    if (!out) throw DomainError(fmt::format("write to '{}' failed", path));
}

ShotBatch read_shots_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError(fmt::format("cannot open '{}'", path));
    return read_shots(in);
}

}  // namespace apmqec
