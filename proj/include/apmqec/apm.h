#ifndef APMQEC_APM_H
#define APMQEC_APM_H

#include <cstdint>
#include <compare>
#include <string>
#include <utility>
#include <vector>

namespace apmqec {

int64_t mod_floor(int64_t x, int64_t m);
int64_t gcd64(int64_t a, int64_t b);
int64_t lcm64(int64_t a, int64_t b);
/// Inverse of `a` modulo `m`; throws DomainError when gcd(a, m) != 1.
int64_t mod_inverse(int64_t a, int64_t m);
/// Euler's totient.
int64_t totient(int64_t n);

/// Affine permutation x -> a*x + b (mod P) with gcd(a, P) = 1.
///
/// Coefficients are always stored in canonical form (reduced into [0, P)), so
/// equality and ordering are structural. Ordering is lexicographic on (a, b)
/// and is used as the deterministic tie-breaker throughout the group code.
class Apm {
   public:
    /// Identity on Z_1.
    Apm() = default;
    /// Reduces a and b modulo `modulus`; throws DomainError unless gcd(a, modulus) = 1.
    Apm(int64_t a, int64_t b, int64_t modulus);

    static Apm identity(int64_t modulus);
    static Apm shift(int64_t b, int64_t modulus);

    int64_t a() const { return a_; }
    int64_t b() const { return b_; }
    int64_t modulus() const { return modulus_; }
    bool is_identity() const { return a_ == 1 % modulus_ && b_ == 0; }

    /// (a*x + b) mod P. Throws DomainError for x outside [0, P).
    int64_t operator()(int64_t x) const;

    /// Reduction onto Z_m (m must divide the modulus).
    Apm reduce(int64_t m) const;

    std::string str() const;

    friend bool operator==(const Apm &, const Apm &) = default;
    friend auto operator<=>(const Apm &x, const Apm &y) {
        if (auto c = x.modulus_ <=> y.modulus_; c != 0) return c;
        if (auto c = x.a_ <=> y.a_; c != 0) return c;
        return x.b_ <=> y.b_;
    }

   private:
    int64_t a_ = 0;
    int64_t b_ = 0;
    int64_t modulus_ = 1;
};

/// Cycle decomposition of an APM acting on Z_P.
struct OrbitDecomposition {
    /// Each orbit lists x, f(x), f(f(x)), ... in order. Orbits appear in order of their smallest point.
    std::vector<std::vector<int64_t>> orbits;
    /// First entry of each orbit (its smallest point).
    std::vector<int64_t> representatives;

    std::vector<size_t> orbit_lengths() const;
};

int64_t evaluate(const Apm &f, int64_t x);
/// h(x) = f(g(x)).
Apm compose(const Apm &f, const Apm &g);
Apm inverse(const Apm &f);
/// f^e for e >= 0.
Apm power(const Apm &f, int64_t e);
/// Offset condition (a_f - 1) b_g == (a_g - 1) b_f (mod M).
bool commutes(const Apm &f, const Apm &g);
OrbitDecomposition orbit_decompose(const Apm &f);
/// Smallest t >= 1 with f^t = id.
int64_t order(const Apm &f);

/// CRT split of f on Z_{ml} into its actions on Z_m and Z_l.
std::pair<Apm, Apm> crt_split(const Apm &f, int64_t m, int64_t l);
/// Inverse of crt_split: the unique APM on Z_{ml} reducing to the two components.
Apm crt_combine(const Apm &on_m, const Apm &on_l);

/// Explicit point map of f on Z_P.
std::vector<int64_t> as_permutation(const Apm &f);

}  // namespace apmqec

#endif
