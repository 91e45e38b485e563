#ifndef APMQEC_APM_GROUP_H
#define APMQEC_APM_GROUP_H

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "apmqec/apm.h"

namespace apmqec {

/// A finite subgroup of Aff(Z_M), stored as its lexicographically sorted element list.
class ApmGroup {
   public:
    ApmGroup(std::vector<Apm> elements, std::vector<Apm> generators, int64_t modulus);

    const std::vector<Apm> &elements() const { return elements_; }
    const std::vector<Apm> &generators() const { return generators_; }
    int64_t modulus() const { return modulus_; }
    size_t size() const { return elements_.size(); }

    bool contains(const Apm &f) const { return index_of(f).has_value(); }
    std::optional<size_t> index_of(const Apm &f) const;
    bool is_abelian() const;

   private:
    std::vector<Apm> elements_;
    std::vector<Apm> generators_;
    int64_t modulus_;
    std::unordered_map<int64_t, size_t> index_;
};

/// Smallest subgroup of Aff(Z_modulus) containing `generators`. Throws CapacityError past `cap` elements.
ApmGroup group_closure(std::span<const Apm> generators, int64_t modulus, size_t cap = 1 << 16);

/// Abelian subgroup B together with a cyclic decomposition B = <g_1> x ... x <g_r>.
struct AbelianStructure {
    /// Validates that the generators give unique exponent vectors for every element.
    AbelianStructure(ApmGroup subgroup, std::vector<int64_t> invariant_factors, std::vector<Apm> cyclic_generators);

    ApmGroup subgroup;
    /// Cycle orders n_1, ..., n_r; their product is |B|.
    std::vector<int64_t> invariant_factors;
    std::vector<Apm> cyclic_generators;

    /// Decomposes an abelian group by repeatedly extracting an element of maximal order in the
    /// quotient by the span so far (lexicographic tie-break) and lifting it to an exact complement.
    static AbelianStructure decompose(const ApmGroup &abelian_group);
    /// Uses caller-provided generators; throws StructureError unless every element factors uniquely.
    static AbelianStructure from_generators(const ApmGroup &abelian_group, std::vector<Apm> generators);

    /// Exponent vector (e_1, ..., e_r) with g_1^e_1 ... g_r^e_r = f, if f is in B.
    std::optional<std::vector<int64_t>> exponents_of(const Apm &f) const;
    Apm element_from(std::span<const int64_t> exponents) const;

   private:
    void build_exponent_table();
    std::unordered_map<int64_t, std::vector<int64_t>> exponent_table_;
};

/// Maximum-order abelian subgroup of `group` with its cyclic decomposition.
///
/// Exhaustive branch over abelian subgroups (grown one element at a time, pruned by
/// the centralizer size). Among maxima the subgroup whose sorted element list is
/// lexicographically smallest wins.
AbelianStructure max_abelian_subgroup(const ApmGroup &group);

/// Bijection sigma(e_1, ..., e_r) = g_1^e_1 ... g_r^e_r (0) between exponent vectors and Z_M.
///
/// Exponent vectors are packed in mixed radix with the first factor fastest:
/// code = e_1 + n_1 * (e_2 + n_2 * (...)).
struct ExponentRelabeling {
    std::vector<int64_t> factors;
    std::vector<int64_t> point_of_code;
    std::vector<int64_t> code_of_point;

    int64_t encode(std::span<const int64_t> exponents) const;
    std::vector<int64_t> decode(int64_t code) const;
    int64_t sigma(std::span<const int64_t> exponents) const { return point_of_code[encode(exponents)]; }
};

/// Throws StructureError when B does not act regularly on Z_M.
ExponentRelabeling exponent_relabeling(const AbelianStructure &structure);

/// All APMs on Z_P commuting with `reference`, in lexicographic order.
std::vector<Apm> centralizer(const Apm &reference);

}  // namespace apmqec

#endif
