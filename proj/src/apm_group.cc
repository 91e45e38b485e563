#include "apmqec/apm_group.h"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <unordered_set>

#include "apmqec/errors.h"

namespace apmqec {

namespace {

int64_t key_of(const Apm &f) {
    return f.a() * f.modulus() + f.b();
}

using Bits = std::vector<uint64_t>;

struct BitsHash {
    size_t operator()(const Bits &b) const {
        uint64_t h = 1469598103934665603ULL;
        for (uint64_t w : b) {
            h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

size_t popcount(const Bits &b) {
    size_t n = 0;
    for (uint64_t w : b) {
        n += std::popcount(w);
    }
    return n;
}

bool test(const Bits &b, size_t i) {
    return (b[i >> 6] >> (i & 63)) & 1;
}

void set(Bits &b, size_t i) {
    b[i >> 6] |= uint64_t{1} << (i & 63);
}

/// True when `x` precedes `y` as sorted index lists.
bool lex_less(const Bits &x, const Bits &y) {
    for (size_t w = 0; w < x.size(); w++) {
        uint64_t diff = x[w] ^ y[w];
        if (diff) {
            uint64_t low = diff & (~diff + 1);
            return (x[w] & low) != 0;
        }
    }
    return false;
}

}  // namespace

ApmGroup::ApmGroup(std::vector<Apm> elements, std::vector<Apm> generators, int64_t modulus)
    : elements_(std::move(elements)), generators_(std::move(generators)), modulus_(modulus) {
    std::sort(elements_.begin(), elements_.end());
    for (size_t i = 0; i < elements_.size(); i++) {
        if (elements_[i].modulus() != modulus_) {
            throw DomainError("ApmGroup: element modulus mismatch");
        }
        index_[key_of(elements_[i])] = i;
    }
}

std::optional<size_t> ApmGroup::index_of(const Apm &f) const {
    if (f.modulus() != modulus_) {
        return std::nullopt;
    }
    auto it = index_.find(key_of(f));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

bool ApmGroup::is_abelian() const {
    for (const auto &g : generators_) {
        for (const auto &h : generators_) {
            if (!commutes(g, h)) {
                return false;
            }
        }
    }
    if (!generators_.empty()) {
        return true;
    }
    for (size_t i = 0; i < elements_.size(); i++) {
        for (size_t j = i + 1; j < elements_.size(); j++) {
            if (!commutes(elements_[i], elements_[j])) {
                return false;
            }
        }
    }
    return true;
}

ApmGroup group_closure(std::span<const Apm> generators, int64_t modulus, size_t cap) {
    for (const auto &g : generators) {
        if (g.modulus() != modulus) {
            throw DomainError("group_closure: generator " + g.str() + " has the wrong modulus");
        }
    }
    Apm id = Apm::identity(modulus);
    std::vector<Apm> elements{id};
    std::unordered_set<int64_t> seen{key_of(id)};
    // Right-multiplying by generators reaches every product; finiteness supplies inverses.
    for (size_t head = 0; head < elements.size(); head++) {
        for (const auto &g : generators) {
            Apm next = compose(elements[head], g);
            if (seen.insert(key_of(next)).second) {
                elements.push_back(next);
                if (elements.size() > cap) {
                    throw CapacityError("group_closure: group exceeds cap of " + std::to_string(cap));
                }
            }
        }
    }
    return ApmGroup(std::move(elements), std::vector<Apm>(generators.begin(), generators.end()), modulus);
}

AbelianStructure::AbelianStructure(ApmGroup subgroup, std::vector<int64_t> invariant_factors,
                                   std::vector<Apm> cyclic_generators)
    : subgroup(std::move(subgroup)),
      invariant_factors(std::move(invariant_factors)),
      cyclic_generators(std::move(cyclic_generators)) {
    if (this->invariant_factors.size() != this->cyclic_generators.size()) {
        throw StructureError("AbelianStructure: factor and generator counts differ");
    }
    build_exponent_table();
}

void AbelianStructure::build_exponent_table() {
    exponent_table_.clear();
    size_t r = cyclic_generators.size();
    int64_t modulus = subgroup.modulus();
    std::vector<int64_t> e(r, 0);
    Apm cur = Apm::identity(modulus);
    int64_t total = 1;
    for (int64_t n : invariant_factors) {
        total *= n;
    }
    for (int64_t code = 0; code < total; code++) {
        // Mixed-radix decode, first factor fastest.
        int64_t c = code;
        for (size_t i = 0; i < r; i++) {
            e[i] = c % invariant_factors[i];
            c /= invariant_factors[i];
        }
        cur = element_from(e);
        if (!exponent_table_.emplace(key_of(cur), e).second) {
            throw StructureError("AbelianStructure: exponent vectors are not unique; generators are dependent");
        }
    }
    if ((int64_t)exponent_table_.size() != (int64_t)subgroup.size()) {
        throw StructureError("AbelianStructure: generators do not span the subgroup");
    }
    for (const auto &f : subgroup.elements()) {
        if (!exponent_table_.count(key_of(f))) {
            throw StructureError("AbelianStructure: generators leave the subgroup");
        }
    }
}

Apm AbelianStructure::element_from(std::span<const int64_t> exponents) const {
    Apm cur = Apm::identity(subgroup.modulus());
    for (size_t i = 0; i < cyclic_generators.size(); i++) {
        cur = compose(cur, power(cyclic_generators[i], mod_floor(exponents[i], invariant_factors[i])));
    }
    return cur;
}

std::optional<std::vector<int64_t>> AbelianStructure::exponents_of(const Apm &f) const {
    if (f.modulus() != subgroup.modulus()) {
        return std::nullopt;
    }
    auto it = exponent_table_.find(key_of(f));
    if (it == exponent_table_.end()) {
        return std::nullopt;
    }
    return it->second;
}

AbelianStructure AbelianStructure::from_generators(const ApmGroup &abelian_group, std::vector<Apm> generators) {
    std::vector<int64_t> factors;
    for (const auto &g : generators) {
        if (!abelian_group.contains(g)) {
            throw StructureError("AbelianStructure: generator " + g.str() + " outside the subgroup");
        }
        factors.push_back(order(g));
    }
    return AbelianStructure(abelian_group, std::move(factors), std::move(generators));
}

AbelianStructure AbelianStructure::decompose(const ApmGroup &group) {
    const auto &els = group.elements();
    int64_t modulus = group.modulus();
    for (size_t i = 0; i < els.size(); i++) {
        for (size_t j = i + 1; j < els.size(); j++) {
            if (!commutes(els[i], els[j])) {
                throw StructureError("AbelianStructure::decompose: group is not abelian");
            }
        }
    }
    std::vector<Apm> gens;
    std::vector<int64_t> factors;
    // span: element key -> exponent vector over the generators chosen so far.
    std::unordered_map<int64_t, std::vector<int64_t>> span{{key_of(Apm::identity(modulus)), {}}};
    while (span.size() < els.size()) {
        int64_t best_t = 0;
        const Apm *best = nullptr;
        for (const auto &x : els) {
            Apm cur = x;
            int64_t t = 1;
            while (!span.count(key_of(cur))) {
                cur = compose(cur, x);
                t++;
            }
            if (t > best_t) {
                best_t = t;
                best = &x;
            }
        }
        Apm y = power(*best, best_t);
        const auto &js = span.at(key_of(y));
        Apm g = *best;
        for (size_t k = 0; k < js.size(); k++) {
            if (js[k] % best_t != 0) {
                throw StructureError("AbelianStructure::decompose: lifting failed (internal)");
            }
            g = compose(g, power(inverse(gens[k]), js[k] / best_t));
        }
        gens.push_back(g);
        factors.push_back(best_t);
        std::unordered_map<int64_t, std::vector<int64_t>> next;
        for (const auto &[key, ev] : span) {
            int64_t a = key / modulus, b = key % modulus;
            Apm s(a, b, modulus);
            Apm cur = s;
            for (int64_t e = 0; e < best_t; e++) {
                auto v = ev;
                v.push_back(e);
                next.emplace(key_of(cur), std::move(v));
                cur = compose(cur, g);
            }
        }
        span = std::move(next);
    }
    return AbelianStructure(group, std::move(factors), std::move(gens));
}

AbelianStructure max_abelian_subgroup(const ApmGroup &group) {
    const auto &els = group.elements();
    size_t n = els.size();
    size_t words = (n + 63) / 64;
    std::vector<Bits> comm(n, Bits(words, 0));
    for (size_t i = 0; i < n; i++) {
        for (size_t j = 0; j < n; j++) {
            if (commutes(els[i], els[j])) {
                set(comm[i], j);
            }
        }
    }
    Bits everything(words, 0);
    for (size_t i = 0; i < n; i++) {
        set(everything, i);
    }
    auto idx = [&](const Apm &f) { return *group.index_of(f); };

    // <A, x> for abelian A and x commuting with A: union of x^k A.
    auto extend = [&](const Bits &a, size_t x) {
        std::vector<size_t> members;
        for (size_t i = 0; i < n; i++) {
            if (test(a, i)) {
                members.push_back(i);
            }
        }
        Bits out = a;
        Apm xk = els[x];
        while (!test(out, idx(xk))) {
            for (size_t m : members) {
                set(out, idx(compose(xk, els[m])));
            }
            xk = compose(xk, els[x]);
        }
        return out;
    };

    Bits best;
    size_t best_size = 0;
    std::unordered_set<Bits, BitsHash> visited;
    Bits start(words, 0);
    set(start, idx(Apm::identity(group.modulus())));
    Bits start_c = everything;

    // Explicit stack to keep recursion depth independent of group size.
    std::vector<std::pair<Bits, Bits>> stack{{start, start_c}};
    visited.insert(start);
    while (!stack.empty()) {
        auto [a, c] = std::move(stack.back());
        stack.pop_back();
        size_t csize = popcount(c);
        if (csize < best_size) {
            continue;
        }
        bool any = false;
        for (size_t x = 0; x < n; x++) {
            if (!test(c, x) || test(a, x)) {
                continue;
            }
            any = true;
            Bits a2 = extend(a, x);
            if (!visited.insert(a2).second) {
                continue;
            }
            Bits c2 = c;
            for (size_t w = 0; w < words; w++) {
                c2[w] &= comm[x][w];
            }
            stack.emplace_back(std::move(a2), std::move(c2));
        }
        if (!any) {
            size_t sz = popcount(a);
            if (sz > best_size || (sz == best_size && lex_less(a, best))) {
                best = a;
                best_size = sz;
            }
        }
    }

    std::vector<Apm> members;
    for (size_t i = 0; i < n; i++) {
        if (test(best, i)) {
            members.push_back(els[i]);
        }
    }
    ApmGroup sub(members, {}, group.modulus());
    return AbelianStructure::decompose(sub);
}

int64_t ExponentRelabeling::encode(std::span<const int64_t> exponents) const {
    if (exponents.size() != factors.size()) {
        throw DomainError("ExponentRelabeling::encode: wrong exponent vector length");
    }
    int64_t code = 0;
    for (size_t i = factors.size(); i-- > 0;) {
        code = code * factors[i] + mod_floor(exponents[i], factors[i]);
    }
    return code;
}

std::vector<int64_t> ExponentRelabeling::decode(int64_t code) const {
    std::vector<int64_t> out(factors.size());
    for (size_t i = 0; i < factors.size(); i++) {
        out[i] = code % factors[i];
        code /= factors[i];
    }
    return out;
}

ExponentRelabeling exponent_relabeling(const AbelianStructure &structure) {
    int64_t modulus = structure.subgroup.modulus();
    if ((int64_t)structure.subgroup.size() != modulus) {
        throw StructureError("exponent_relabeling: |B| = " + std::to_string(structure.subgroup.size()) +
                             " differs from M = " + std::to_string(modulus) + "; action cannot be regular");
    }
    ExponentRelabeling out;
    out.factors = structure.invariant_factors;
    out.point_of_code.assign(modulus, -1);
    out.code_of_point.assign(modulus, -1);
    for (int64_t code = 0; code < modulus; code++) {
        auto e = out.decode(code);
        int64_t point = structure.element_from(e)(0);
        if (out.code_of_point[point] != -1) {
            throw StructureError("exponent_relabeling: orbit of 0 is smaller than |B|; action is not regular");
        }
        out.point_of_code[code] = point;
        out.code_of_point[point] = code;
    }
    return out;
}

std::vector<Apm> centralizer(const Apm &reference) {
    int64_t p = reference.modulus();
    std::vector<Apm> out;
    for (int64_t a = 0; a < p; a++) {
        if (std::gcd(a, p) != 1) {
            continue;
        }
        for (int64_t b = 0; b < p; b++) {
            Apm f(a, b, p);
            if (commutes(f, reference)) {
                out.push_back(f);
            }
        }
    }
    return out;
}

}  // namespace apmqec
