#include "apmqec/search.h"

#include <algorithm>
#include <numeric>
#include <random>

#include <boost/dynamic_bitset.hpp>

#include "apmqec/apm_group.h"
#include "apmqec/bp.h"
#include "apmqec/errors.h"
#include "apmqec/memory.h"
#include "apmqec/rng.h"

namespace apmqec {

void SearchConfig::validate() const {
    if (P < 1) throw DomainError("search: P must be positive");
    if (reference.modulus() != P) throw DomainError("search: reference modulus differs from P");
    if (girth_min < 4 || girth_min % 2 != 0) throw DomainError("search: girth_min must be even and at least 4");
    for (auto [i, j] : noncommute_pairs) {
        if (i < 0 || j > 5 || i >= j) throw DomainError("search: noncommute pair must satisfy 0 <= i < j <= 5");
    }
    if (!(capacity_error_rate >= 0 && capacity_error_rate < 1)) {
        throw DomainError("search: capacity_error_rate must lie in [0, 1)");
    }
    validate_ordering(ordering);
}

SearchConfig search_config_from_json(const Json &j) {
    SearchConfig c;
    c.P = require_int(j, "P", "search");
    c.reference = apm_from_json(require_field(j, "reference", "search"), c.P, "search.reference");
    c.girth_min = j.value("girth_min", c.girth_min);
    if (j.contains("noncommute_pairs")) {
        c.noncommute_pairs.clear();
        for (const auto &p : j.at("noncommute_pairs")) {
            if (!p.is_array() || p.size() != 2) throw ParseError("search.noncommute_pairs: expected [i, j]", 0);
            c.noncommute_pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
        }
    }
    c.seeds = j.value("seeds", c.seeds);
    c.seed = j.value("seed", c.seed);
    c.distance_trials = j.value("distance_trials", c.distance_trials);
    c.capacity_error_rate = j.value("capacity_error_rate", c.capacity_error_rate);
    c.capacity_shots = j.value("capacity_shots", c.capacity_shots);
    c.anchor_in_centralizer = j.value("anchor_in_centralizer", c.anchor_in_centralizer);
    c.placement_budget = j.value("placement_budget", c.placement_budget);
    if (j.contains("ordering")) c.ordering = j.at("ordering").get<std::vector<int>>();
    c.validate();
    return c;
}

Json search_config_to_json(const SearchConfig &c) {
    Json pairs = Json::array();
    for (auto [i, j] : c.noncommute_pairs) pairs.push_back({i, j});
    return {{"P", c.P},
            {"reference", apm_to_json(c.reference)},
            {"girth_min", c.girth_min},
            {"noncommute_pairs", pairs},
            {"seeds", c.seeds},
            {"seed", c.seed},
            {"distance_trials", c.distance_trials},
            {"capacity_error_rate", c.capacity_error_rate},
            {"capacity_shots", c.capacity_shots},
            {"ordering", c.ordering},
            {"anchor_in_centralizer", c.anchor_in_centralizer},
            {"placement_budget", c.placement_budget}};
}

Json candidate_to_json(const Candidate &c) {
    Json j{{"seed_index", c.seed_index}, {"spec", spec_to_json(c.spec)}, {"n", c.n}, {"k", c.k},
           {"girth", c.girth.str()}};
    if (c.distance) {
        j["d_x_upper"] = c.distance->d_x_upper;
        j["d_z_upper"] = c.distance->d_z_upper;
        j["d_upper"] = c.distance->d_upper();
        j["distance_trials"] = c.distance->trials;
    }
    if (c.capacity_logical_rate) j["capacity_logical_rate"] = *c.capacity_logical_rate;
    return j;
}

bool check_transition_constraints(const CodeSpec &spec, const Apm &reference, std::span<const int> ordering) {
    spec.validate();
    if (reference.modulus() != spec.P) throw DomainError("check_transition_constraints: modulus mismatch");
    for (const Apm &t : transition_maps(spec, ordering, Basis::X)) {
        if (!commutes(t, reference)) return false;
    }
    return true;
}

bool check_noncommute_pairs(const CodeSpec &spec, std::span<const std::pair<int, int>> pairs) {
    for (auto [i, j] : pairs) {
        if (commutes(spec.f.at(i), spec.g.at(j))) return false;
    }
    return true;
}

Apm derived_reference(const CodeSpec &spec) {
    spec.validate();
    const int64_t m = 3;
    if (spec.P % m != 0 || gcd64(m, spec.P / m) != 1) {
        throw DomainError("derived_reference: P must be 3 times a number coprime to 3");
    }
    int64_t M = spec.P / m;
    std::vector<Apm> comps;
    for (int i = 0; i < 12; i++) comps.push_back(spec.map(i).reduce(M));
    auto structure = max_abelian_subgroup(group_closure(comps, M));
    if (structure.cyclic_generators.empty()) return Apm::identity(spec.P);
    size_t best = 0;
    for (size_t i = 1; i < structure.invariant_factors.size(); i++) {
        if (structure.invariant_factors[i] > structure.invariant_factors[best]) best = i;
    }
    return crt_combine(Apm::identity(m), structure.cyclic_generators[best]);
}

namespace {

// Fraction of shots whose X part or Z part is decoded to a logical error or not at all.
double capacity_failures(const CssCode &code, double p, size_t shots, uint64_t seed) {
    auto noise = NoiseModel::code_capacity(p);
    auto ex_z = build_memory_experiment(code, 1, Basis::Z, noise);
    auto ex_x = build_memory_experiment(code, 1, Basis::X, noise);
    DecodingGraph g_z(ex_z.check, ex_z.priors);
    DecodingGraph g_x(ex_x.check, ex_x.priors);
    BpConfig bp;
    const size_t n = code.n;
    const double q = p / 3.0;
    size_t failures = 0;
    for (size_t s = 0; s < shots; s++) {
        auto rng = make_rng(seed, s);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        BitVec ex(n), ez(n);
        for (size_t i = 0; i < n; i++) {
            double r = u(rng);
            if (r < q) {
                ex.set(i);
            } else if (r < 2 * q) {
                ex.set(i);
                ez.set(i);
            } else if (r < 3 * q) {
                ez.set(i);
            }
        }
        bool fail = false;
        for (auto [ex_ptr, g_ptr, err] : {std::tuple{&ex_z, &g_z, &ex}, std::tuple{&ex_x, &g_x, &ez}}) {
            auto [syn, obs] = ex_ptr->apply(*err);
            auto out = bp_decode(*g_ptr, syn, bp);
            if (!out.converged) {
                fail = true;
                break;
            }
            auto [csyn, cobs] = ex_ptr->apply(out.correction);
            cobs ^= obs;
            if (cobs.any()) {
                fail = true;
                break;
            }
        }
        failures += fail;
    }
    return shots ? double(failures) / double(shots) : 0.0;
}

}  // namespace

double capacity_filter(const CssCode &code, double p, size_t shots, uint64_t seed) {
    if (!(p >= 0 && p < 1)) throw DomainError("capacity_filter: p must lie in [0, 1)");
    if (p == 0 || shots == 0) return 0.0;
    return capacity_failures(code, p, shots, seed);
}

std::optional<std::string> evaluate_candidate(const CodeSpec &spec, const SearchConfig &config, size_t seed_index,
                                              Candidate &out) {
    if (!check_transition_constraints(spec, config.reference, config.ordering)) return "transition";
    if (!check_noncommute_pairs(spec, config.noncommute_pairs)) return "noncommute";
    CssCode code;
    try {
        code = build_check_matrices(spec);
    } catch (const ConstructionError &) {
        return "css";
    }
    Girth girth = tanner_girth(code.h_x);
    Girth gz = tanner_girth(code.h_z);
    if (girth.is_infinite() || (!gz.is_infinite() && gz.length < girth.length)) girth = gz;
    if (!girth.at_least(config.girth_min)) return "girth";
    if (code.k == 0) return "no_logicals";

    out = Candidate{};
    out.seed_index = seed_index;
    out.spec = spec;
    out.n = code.n;
    out.k = code.k;
    out.girth = girth;
    uint64_t base = derive_seed(config.seed, seed_index);
    if (config.distance_trials > 0) {
        out.distance = distance_upper_bound(code, config.distance_trials, derive_seed(base, "distance"));
    }
    if (config.capacity_shots > 0) {
        out.capacity_logical_rate =
            capacity_filter(code, config.capacity_error_rate, config.capacity_shots, derive_seed(base, "capacity"));
    }
    return std::nullopt;
}

namespace {

Apm uniform_apm(std::mt19937_64 &rng, int64_t P) {
    std::uniform_int_distribution<int64_t> d(0, P - 1);
    while (true) {
        int64_t a = d(rng);
        if (gcd64(a, P) == 1) return Apm(a, d(rng), P);
    }
}

// Pair rule between F_i and G_j: commute when i + j != 3 (mod 6), which makes every term of
// H_X H_Z^T cancel; fail to commute for the requested pairs.
bool pair_ok(int i, int j, const Apm &f, const Apm &g, std::span<const std::pair<int, int>> noncommute) {
    if (std::find(noncommute.begin(), noncommute.end(), std::pair{i, j}) != noncommute.end()) {
        return !commutes(f, g);
    }
    return (i + j) % 6 == 3 || commutes(f, g);
}

// Every map is c * previous with c in the centralizer, so all twelve lie in the coset
// C * first. Positions after the first are filled in ordering order with uniformly shuffled
// coset elements, keeping the F/G domains arc consistent under the pair rule and
// backtracking on wipe-outs.
class SpecSampler {
    using Domain = boost::dynamic_bitset<>;

   public:
    SpecSampler(const SearchConfig &config, const std::vector<Apm> &cent, std::mt19937_64 &rng, size_t budget)
        : config_(config), cent_(cent), rng_(rng), budget_(budget) {}

    std::optional<CodeSpec> run() {
        Apm first;
        if (config_.anchor_in_centralizer) {
            std::uniform_int_distribution<size_t> pick(0, cent_.size() - 1);
            first = cent_[pick(rng_)];
        } else {
            first = uniform_apm(rng_, config_.P);
        }
        for (const Apm &c : cent_) coset_.push_back(compose(c, first));
        const size_t m = coset_.size();
        comm_.assign(m, Domain(m));
        for (size_t x = 0; x < m; x++) {
            for (size_t y = 0; y < m; y++) comm_[x][y] = commutes(coset_[x], coset_[y]);
        }
        for (int i = 0; i < 6; i++) {
            for (int j = 0; j < 6; j++) {
                bool nc = std::find(config_.noncommute_pairs.begin(), config_.noncommute_pairs.end(),
                                    std::pair{i, j}) != config_.noncommute_pairs.end();
                rule_[i][j] = nc ? Rule::NonCommute : (i + j) % 6 == 3 ? Rule::Free : Rule::Commute;
            }
        }
        domains_.assign(12, Domain(m));
        for (auto &d : domains_) d.set();
        auto it = std::find(coset_.begin(), coset_.end(), first);
        Domain single(m);
        single.set(it - coset_.begin());
        domains_[config_.ordering[0]] = single;
        if (!propagate() || !place(1)) return std::nullopt;
        CodeSpec spec;
        spec.P = config_.P;
        for (int i = 0; i < 6; i++) {
            spec.f[i] = coset_[domains_[i].find_first()];
            spec.g[i] = coset_[domains_[6 + i].find_first()];
        }
        return spec;
    }

   private:
    enum class Rule { Free, Commute, NonCommute };

    bool supported(Rule rule, size_t x, const Domain &other) const {
        return rule == Rule::Commute ? comm_[x].intersects(other) : (other - comm_[x]).any();
    }

    // Drops values of `a` without a partner in `b`; returns whether anything changed.
    bool revise(Domain &a, const Domain &b, Rule rule) {
        if (rule == Rule::Free) return false;
        bool changed = false;
        for (size_t x = a.find_first(); x != Domain::npos; x = a.find_next(x)) {
            if (!supported(rule, x, b)) {
                a.reset(x);
                changed = true;
            }
        }
        return changed;
    }

    bool propagate() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (int i = 0; i < 6; i++) {
                for (int j = 0; j < 6; j++) {
                    changed |= revise(domains_[i], domains_[6 + j], rule_[i][j]);
                    changed |= revise(domains_[6 + j], domains_[i], rule_[i][j]);
                    if (domains_[i].none() || domains_[6 + j].none()) return false;
                }
            }
        }
        return true;
    }

    bool place(size_t k) {
        if (k == config_.ordering.size()) return true;
        int idx = config_.ordering[k];
        std::vector<size_t> options;
        for (size_t e = domains_[idx].find_first(); e != Domain::npos; e = domains_[idx].find_next(e)) {
            options.push_back(e);
        }
        std::shuffle(options.begin(), options.end(), rng_);
        auto saved = domains_;
        for (size_t e : options) {
            if (budget_ == 0) return false;
            budget_--;
            domains_[idx].reset();
            domains_[idx].set(e);
            if (propagate() && place(k + 1)) return true;
            domains_ = saved;
        }
        return false;
    }

    const SearchConfig &config_;
    const std::vector<Apm> &cent_;
    std::mt19937_64 &rng_;
    size_t budget_;
    std::vector<Apm> coset_;
    std::vector<Domain> comm_;
    Rule rule_[6][6];
    std::vector<Domain> domains_;
};

}  // namespace

SearchResult search(const SearchConfig &config) {
    config.validate();
    SearchResult result;
    if (config.seeds == 0) return result;
    auto cent = centralizer(config.reference);
    for (size_t s = 0; s < config.seeds; s++) {
        auto rng = make_rng(derive_seed(config.seed, "search"), s);
        auto spec = SpecSampler(config, cent, rng, config.placement_budget).run();
        if (!spec) {
            result.rejections["no_compatible_map"]++;
            continue;
        }
        Candidate c;
        if (auto reason = evaluate_candidate(*spec, config, s, c)) {
            result.rejections[*reason]++;
            continue;
        }
        result.candidates.push_back(std::move(c));
    }
    std::stable_sort(result.candidates.begin(), result.candidates.end(), [](const Candidate &x, const Candidate &y) {
        size_t dx = x.distance ? x.distance->d_upper() : 0;
        size_t dy = y.distance ? y.distance->d_upper() : 0;
        if (dx != dy) return dx > dy;
        double rx = x.capacity_logical_rate.value_or(0), ry = y.capacity_logical_rate.value_or(0);
        return rx < ry;
    });
    return result;
}

}  // namespace apmqec
