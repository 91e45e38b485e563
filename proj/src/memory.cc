#include "apmqec/memory.h"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <random>

#include "apmqec/errors.h"
#include "apmqec/rng.h"

namespace apmqec {

std::string noise_kind_name(NoiseKind k) {
    switch (k) {
        case NoiseKind::Phenomenological:
            return "phenomenological";
        case NoiseKind::CodeCapacity:
            return "code_capacity";
        case NoiseKind::Circuit:
            return "circuit";
    }
    return "?";
}

NoiseKind noise_kind_from_name(const std::string &name) {
    for (auto k : {NoiseKind::Phenomenological, NoiseKind::CodeCapacity, NoiseKind::Circuit}) {
        if (noise_kind_name(k) == name) return k;
    }
    throw DomainError(fmt::format("unknown noise kind '{}'", name));
}

void NoiseModel::validate() const {
    for (double p : {p_data, p_meas}) {
        if (!(p >= 0 && p <= 1)) {
            throw DomainError(fmt::format("NoiseModel: probability {} outside [0, 1]", p));
        }
    }
    if (kind == NoiseKind::Circuit) {
        throw DomainError("NoiseModel: circuit-level noise is not simulated");
    }
}

std::pair<BitVec, BitVec> MemoryExperiment::apply(const BitVec &error) const {
    if (error.size() != num_mechanisms()) {
        throw DomainError(fmt::format("error length {} != mechanism count {}", error.size(), num_mechanisms()));
    }
    BitVec syn(num_detectors()), obs(num_observables());
    for (uint32_t e : error.support()) {
        for (uint32_t d : mechanism_detectors[e]) syn.flip(d);
        for (uint32_t o : mechanism_observables[e]) obs.flip(o);
    }
    return {syn, obs};
}

MemoryExperiment build_memory_experiment(const SparseGf2Matrix &h, const BitMatrix &logicals, size_t rounds,
                                         Basis basis, const NoiseModel &noise) {
    noise.validate();
    if (rounds == 0) {
        throw DomainError("build_memory_experiment: rounds must be at least 1");
    }
    if (logicals.rows() > 0 && logicals.cols() != h.cols) {
        throw DomainError("build_memory_experiment: logical length differs from qubit count");
    }
    const bool capacity = noise.kind == NoiseKind::CodeCapacity;
    if (capacity) rounds = 1;
    MemoryExperiment ex;
    ex.n = h.cols;
    ex.checks = h.rows;
    ex.rounds = rounds;
    ex.basis = basis;
    ex.noise = noise;
    const size_t n = h.cols, m = h.rows;
    const size_t layers = capacity ? 1 : rounds + 1;
    const bool meas = !capacity && noise.p_meas > 0;
    const size_t mech = n * rounds + (meas ? m * rounds : 0);

    auto qubit_checks = h.column_supports();
    std::vector<std::vector<uint32_t>> qubit_logicals(n);
    for (size_t j = 0; j < logicals.rows(); j++) {
        for (size_t q = 0; q < n; q++) {
            if (logicals.get(j, q)) qubit_logicals[q].push_back(uint32_t(j));
        }
    }
    ex.mechanism_detectors.resize(mech);
    ex.mechanism_observables.resize(mech);
    ex.priors.resize(mech);
    for (size_t t = 0; t < rounds; t++) {
        for (size_t q = 0; q < n; q++) {
            size_t e = t * n + q;
            for (uint32_t c : qubit_checks[q]) ex.mechanism_detectors[e].push_back(uint32_t(t * m + c));
            ex.mechanism_observables[e] = qubit_logicals[q];
            ex.priors[e] = noise.data_flip_probability();
        }
    }
    if (meas) {
        for (size_t t = 0; t < rounds; t++) {
            for (size_t c = 0; c < m; c++) {
                size_t e = n * rounds + t * m + c;
                ex.mechanism_detectors[e] = {uint32_t(t * m + c), uint32_t((t + 1) * m + c)};
                ex.priors[e] = noise.p_meas;
            }
        }
    }
    ex.check = SparseGf2Matrix(layers * m, mech);
    ex.observables = SparseGf2Matrix(logicals.rows(), mech);
    for (size_t e = 0; e < mech; e++) {
        for (uint32_t d : ex.mechanism_detectors[e]) ex.check.entries[d].push_back(uint32_t(e));
        for (uint32_t o : ex.mechanism_observables[e]) ex.observables.entries[o].push_back(uint32_t(e));
    }
    return ex;
}

MemoryExperiment build_memory_experiment(const CssCode &code, size_t rounds, Basis basis, const NoiseModel &noise) {
    CssCode c = code;
    if (!c.has_logicals()) attach_logicals(c);
    // Z memory measures H_Z and tracks X flips, which the Z logicals detect.
    if (basis == Basis::Z) {
        return build_memory_experiment(c.h_z, c.logical_z, rounds, basis, noise);
    }
    return build_memory_experiment(c.h_x, c.logical_x, rounds, basis, noise);
}

ShotBatch sample(const MemoryExperiment &ex, size_t shots, uint64_t seed, bool keep_errors) {
    if (shots == 0) {
        throw DomainError("sample: shots must be at least 1");
    }
    const size_t mech = ex.num_mechanisms();
    ShotBatch batch;
    batch.syndromes = BitMatrix(shots, ex.num_detectors());
    batch.observables = BitMatrix(shots, ex.num_observables());
    if (keep_errors) batch.errors = BitMatrix(shots, mech);

    // Runs of equal prior, sampled by geometric skipping.
    struct Run {
        size_t begin, end;
        double p;
    };
    std::vector<Run> runs;
    for (size_t e = 0; e < mech; e++) {
        if (!runs.empty() && runs.back().p == ex.priors[e] && runs.back().end == e) {
            runs.back().end = e + 1;
        } else {
            runs.push_back({e, e + 1, ex.priors[e]});
        }
    }
    const uint64_t stream_seed = derive_seed(seed, "sample");
    std::mt19937_64 rng;
    std::vector<uint32_t> flipped;
    for (size_t s = 0; s < shots; s++) {
        if (s % kShotsPerStream == 0) rng = make_rng(stream_seed, s / kShotsPerStream);
        flipped.clear();
        for (const Run &run : runs) {
            if (run.p <= 0) continue;
            if (run.p >= 1) {
                for (size_t e = run.begin; e < run.end; e++) flipped.push_back(uint32_t(e));
                continue;
            }
            std::geometric_distribution<int64_t> gap(run.p);
            size_t e = run.begin;
            while (true) {
                int64_t g = gap(rng);
                if (g >= int64_t(run.end - e)) break;
                e += size_t(g);
                flipped.push_back(uint32_t(e));
                e++;
            }
        }
        uint64_t *syn = batch.syndromes.row(s);
        uint64_t *obs = batch.observables.row(s);
        for (uint32_t e : flipped) {
            for (uint32_t d : ex.mechanism_detectors[e]) syn[d >> 6] ^= uint64_t{1} << (d & 63);
            for (uint32_t o : ex.mechanism_observables[e]) obs[o >> 6] ^= uint64_t{1} << (o & 63);
            if (keep_errors) batch.errors.set(s, e);
        }
    }
    return batch;
}

std::vector<std::vector<std::pair<uint32_t, uint32_t>>> edge_coloring_schedule(const SparseGf2Matrix &h) {
    // Nodes: checks [0, rows), qubits [rows, rows + cols). at[node][color] = other endpoint.
    const size_t nodes = h.rows + h.cols;
    std::vector<size_t> degree(nodes, 0);
    for (size_t r = 0; r < h.rows; r++) {
        degree[r] = h.entries[r].size();
        for (uint32_t c : h.entries[r]) degree[h.rows + c]++;
    }
    size_t colors = degree.empty() ? 0 : *std::max_element(degree.begin(), degree.end());
    std::vector<std::vector<int64_t>> at(nodes, std::vector<int64_t>(colors, -1));
    auto free_color = [&](size_t v) {
        for (size_t c = 0; c < colors; c++) {
            if (at[v][c] < 0) return c;
        }
        throw DomainError("edge_coloring_schedule: no free color");
    };
    for (size_t r = 0; r < h.rows; r++) {
        for (uint32_t q : h.entries[r]) {
            size_t u = r, v = h.rows + q;
            size_t a = free_color(u), b = free_color(v);
            if (at[v][a] >= 0) {
                // Swap a and b along the a/b path from v; in a bipartite graph it avoids u.
                std::vector<size_t> path{v};
                size_t cur = v, c = a;
                while (at[cur][c] >= 0) {
                    cur = size_t(at[cur][c]);
                    path.push_back(cur);
                    c = c == a ? b : a;
                }
                for (size_t i = 0; i + 1 < path.size(); i++) {
                    size_t x = path[i];
                    std::swap(at[x][a], at[x][b]);
                }
                std::swap(at[path.back()][a], at[path.back()][b]);
            }
            at[u][a] = int64_t(v);
            at[v][a] = int64_t(u);
        }
    }
    std::vector<std::vector<std::pair<uint32_t, uint32_t>>> layers(colors);
    for (size_t r = 0; r < h.rows; r++) {
        for (size_t c = 0; c < colors; c++) {
            if (at[r][c] >= 0) layers[c].push_back({uint32_t(r), uint32_t(size_t(at[r][c]) - h.rows)});
        }
    }
    return layers;
}

bool is_proper_schedule(const SparseGf2Matrix &h, const std::vector<std::vector<std::pair<uint32_t, uint32_t>>> &layers) {
    std::vector<std::pair<uint32_t, uint32_t>> all;
    for (const auto &layer : layers) {
        std::vector<uint32_t> checks, qubits;
        for (auto [c, q] : layer) {
            checks.push_back(c);
            qubits.push_back(q);
            all.push_back({c, q});
        }
        std::sort(checks.begin(), checks.end());
        std::sort(qubits.begin(), qubits.end());
        if (std::adjacent_find(checks.begin(), checks.end()) != checks.end()) return false;
        if (std::adjacent_find(qubits.begin(), qubits.end()) != qubits.end()) return false;
    }
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    for (size_t r = 0; r < h.rows; r++) {
        for (uint32_t q : h.entries[r]) edges.push_back({uint32_t(r), q});
    }
    std::sort(all.begin(), all.end());
    return all == edges;
}

}  // namespace apmqec
