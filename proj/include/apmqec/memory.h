#ifndef APMQEC_MEMORY_H
#define APMQEC_MEMORY_H

#include <cstdint>
#include <utility>
#include <vector>

#include "apmqec/code.h"
#include "apmqec/gf2.h"

namespace apmqec {

enum class NoiseKind { Phenomenological, CodeCapacity, Circuit };
std::string noise_kind_name(NoiseKind k);
NoiseKind noise_kind_from_name(const std::string &name);

/// p_data is the total depolarizing strength per qubit and round; a flip of the measured
/// basis happens with probability 2 p_data / 3.
struct NoiseModel {
    NoiseKind kind = NoiseKind::Phenomenological;
    double p_data = 0;
    double p_meas = 0;

    static NoiseModel phenomenological(double p) { return {NoiseKind::Phenomenological, p, 4.0 / 3.0 * p}; }
    static NoiseModel code_capacity(double p) { return {NoiseKind::CodeCapacity, p, 0.0}; }

    double data_flip_probability() const { return 2.0 * p_data / 3.0; }
    /// Throws DomainError for probabilities outside [0, 1] and for circuit-level noise,
    /// which is not simulated.
    void validate() const;
};

/// Space-time decoding problem of a memory experiment.
///
/// Basis Z prepares |0...0>, repeats the Z checks and reads out Z on every data qubit, so
/// X flips are tracked against the Z logicals; basis X is the mirror image.
///
/// Phenomenological layout with m checks, n qubits and r rounds:
///   detector t*m + c: round 0 absolute syndrome, then round t XOR round t-1, and layer r
///     compares the syndrome recomputed from the data readout with round r-1;
///   mechanism t*n + q: flip of qubit q before round t (touches layer t only);
///   mechanism r*n + t*m + c: wrong outcome of check c in round t (layers t and t+1).
/// Measurement mechanisms are omitted when p_meas = 0. Code-capacity experiments have a
/// single perfect round and no readout layer.
struct MemoryExperiment {
    size_t n = 0;
    size_t checks = 0;
    size_t rounds = 0;
    Basis basis = Basis::Z;
    NoiseModel noise;
    /// detectors x mechanisms
    SparseGf2Matrix check;
    /// k x mechanisms
    SparseGf2Matrix observables;
    std::vector<double> priors;
    /// Detectors and observables touched by each mechanism.
    std::vector<std::vector<uint32_t>> mechanism_detectors;
    std::vector<std::vector<uint32_t>> mechanism_observables;

    size_t num_detectors() const { return check.rows; }
    size_t num_mechanisms() const { return check.cols; }
    size_t num_observables() const { return observables.rows; }
    /// Syndrome and observable flips caused by an error pattern over mechanisms.
    std::pair<BitVec, BitVec> apply(const BitVec &error) const;
};

/// Builds from explicit matrices; `h` are the measured checks, `logicals` the observables
/// (rows over qubits) that the tracked flips can anticommute with.
MemoryExperiment build_memory_experiment(const SparseGf2Matrix &h, const BitMatrix &logicals, size_t rounds,
                                         Basis basis, const NoiseModel &noise);
/// Attaches a logical basis first when the code has none.
MemoryExperiment build_memory_experiment(const CssCode &code, size_t rounds, Basis basis, const NoiseModel &noise);

struct ShotBatch {
    BitMatrix syndromes;
    BitMatrix observables;
    /// Sampled mechanisms; empty unless requested.
    BitMatrix errors;

    size_t shots() const { return syndromes.rows(); }
};

/// Shots are drawn in blocks of kShotsPerStream, each block from its own derived stream,
/// so a batch is a pure function of (experiment, shots, seed).
inline constexpr size_t kShotsPerStream = 1024;
ShotBatch sample(const MemoryExperiment &experiment, size_t shots, uint64_t seed, bool keep_errors = false);

/// Proper edge coloring of the Tanner graph of `h` with max-degree colors; each layer
/// lists (check, qubit) pairs touching every node at most once.
std::vector<std::vector<std::pair<uint32_t, uint32_t>>> edge_coloring_schedule(const SparseGf2Matrix &h);
/// True when every edge of `h` appears exactly once and no layer reuses a node.
bool is_proper_schedule(const SparseGf2Matrix &h, const std::vector<std::vector<std::pair<uint32_t, uint32_t>>> &layers);

}  // namespace apmqec

#endif
