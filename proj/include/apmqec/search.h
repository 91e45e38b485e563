#ifndef APMQEC_SEARCH_H
#define APMQEC_SEARCH_H

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "apmqec/code.h"
#include "apmqec/compiler.h"
#include "apmqec/distance.h"
#include "apmqec/json_io.h"

namespace apmqec {

struct SearchConfig {
    int64_t P = 96;
    Apm reference = Apm::identity(96);
    size_t girth_min = 6;
    /// (i, j): F_i and G_j must not commute.
    std::vector<std::pair<int, int>> noncommute_pairs{{0, 3}, {1, 2}};
    size_t seeds = 100;
    uint64_t seed = 0;
    /// 0 skips the distance bound.
    uint64_t distance_trials = 200;
    double capacity_error_rate = 0.03;
    /// 0 skips the capacity simulation.
    size_t capacity_shots = 200;
    std::vector<int> ordering{kDefaultOrdering.begin(), kDefaultOrdering.end()};
    /// Draw the first placed map from the centralizer of the reference instead of all of Aff(Z_P).
    bool anchor_in_centralizer = false;
    /// Placements tried per seed before the seed is rejected.
    size_t placement_budget = 20000;

    /// Throws DomainError for odd or small girth_min, bad pairs, or a reference on another modulus.
    void validate() const;
};

SearchConfig search_config_from_json(const Json &j);
Json search_config_to_json(const SearchConfig &c);

struct Candidate {
    size_t seed_index = 0;
    CodeSpec spec;
    size_t n = 0;
    size_t k = 0;
    Girth girth;
    std::optional<DistanceReport> distance;
    std::optional<double> capacity_logical_rate;
};

Json candidate_to_json(const Candidate &c);

struct SearchResult {
    /// Sorted by (d_upper desc, capacity rate asc, seed index).
    std::vector<Candidate> candidates;
    /// Seeds rejected per reason.
    std::map<std::string, size_t> rejections;
};

/// Every transition between neighbors in `ordering` (X-basis form) commutes with `reference`.
bool check_transition_constraints(const CodeSpec &spec, const Apm &reference,
                                  std::span<const int> ordering = kDefaultOrdering);
/// True iff F_i and G_j fail to commute for every listed (i, j).
bool check_noncommute_pairs(const CodeSpec &spec, std::span<const std::pair<int, int>> pairs);

/// Reference with three orbits of length P/3: identity on Z_3 times the largest-order cyclic
/// generator of the maximal abelian subgroup of the column group of `spec`.
Apm derived_reference(const CodeSpec &spec);

/// Depolarizing noise of strength p on data qubits, one perfect round, BP on the X and Z
/// parts separately; a shot fails when either part does not converge or flips a logical.
double capacity_filter(const CssCode &code, double p, size_t shots, uint64_t seed);

/// Runs the filters on one spec. Returns the rejection reason, or nullopt with `out` filled.
std::optional<std::string> evaluate_candidate(const CodeSpec &spec, const SearchConfig &config, size_t seed_index,
                                              Candidate &out);

/// Per seed: F in ordering order, each later map drawn uniformly from c * previous with c in
/// the centralizer of the reference (so neighbor transitions commute with it); each G_j is
/// further restricted to commute with F_i for i + j != 3 (mod 6), which CSS orthogonality
/// needs. Then evaluate_candidate.
SearchResult search(const SearchConfig &config);

}  // namespace apmqec

#endif
