#include "apmqec/apm.h"

#include <numeric>
#include <tuple>
#include <sstream>

#include "apmqec/errors.h"

namespace apmqec {

int64_t mod_floor(int64_t x, int64_t m) {
    int64_t r = x % m;
    return r < 0 ? r + m : r;
}

int64_t gcd64(int64_t a, int64_t b) {
    return std::gcd(a, b);
}

int64_t lcm64(int64_t a, int64_t b) {
    return std::lcm(a, b);
}

int64_t mod_inverse(int64_t a, int64_t m) {
    if (m <= 0) {
        throw DomainError("mod_inverse: modulus must be positive");
    }
    if (m == 1) {
        return 0;
    }
    int64_t old_r = mod_floor(a, m), r = m;
    int64_t old_s = 1, s = 0;
    while (r != 0) {
        int64_t q = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    }
    if (old_r != 1) {
        throw DomainError("mod_inverse: " + std::to_string(a) + " is not a unit mod " + std::to_string(m));
    }
    return mod_floor(old_s, m);
}

int64_t totient(int64_t n) {
    int64_t result = n;
    for (int64_t p = 2; p * p <= n; p++) {
        if (n % p == 0) {
            while (n % p == 0) {
                n /= p;
            }
            result -= result / p;
        }
    }
    if (n > 1) {
        result -= result / n;
    }
    return result;
}

Apm::Apm(int64_t a, int64_t b, int64_t modulus) : modulus_(modulus) {
    if (modulus <= 0 || modulus > (int64_t{1} << 31)) {
        throw DomainError("Apm: modulus must be in [1, 2^31], got " + std::to_string(modulus));
    }
    a_ = mod_floor(a, modulus);
    b_ = mod_floor(b, modulus);
    if (std::gcd(a_, modulus) != 1) {
        throw DomainError(
            "Apm: gcd(" + std::to_string(a) + ", " + std::to_string(modulus) + ") != 1, map is not a permutation");
    }
}

Apm Apm::identity(int64_t modulus) {
    return Apm(1, 0, modulus);
}

Apm Apm::shift(int64_t b, int64_t modulus) {
    return Apm(1, b, modulus);
}

int64_t Apm::operator()(int64_t x) const {
    if (x < 0 || x >= modulus_) {
        throw DomainError("Apm: point " + std::to_string(x) + " outside Z_" + std::to_string(modulus_));
    }
    return (a_ * x + b_) % modulus_;
}

Apm Apm::reduce(int64_t m) const {
    if (m <= 0 || modulus_ % m != 0) {
        throw DomainError("Apm::reduce: " + std::to_string(m) + " does not divide " + std::to_string(modulus_));
    }
    return Apm(a_, b_, m);
}

std::string Apm::str() const {
    std::ostringstream out;
    out << a_ << "x+" << b_ << " mod " << modulus_;
    return out.str();
}

std::vector<size_t> OrbitDecomposition::orbit_lengths() const {
    std::vector<size_t> out;
    out.reserve(orbits.size());
    for (const auto &o : orbits) {
        out.push_back(o.size());
    }
    return out;
}

int64_t evaluate(const Apm &f, int64_t x) {
    return f(x);
}

static void require_same_modulus(const Apm &f, const Apm &g, const char *op) {
    if (f.modulus() != g.modulus()) {
        throw DomainError(std::string(op) + ": modulus mismatch (" + std::to_string(f.modulus()) + " vs " +
                          std::to_string(g.modulus()) + ")");
    }
}

Apm compose(const Apm &f, const Apm &g) {
    require_same_modulus(f, g, "compose");
    int64_t p = f.modulus();
    return Apm((f.a() * g.a()) % p, (f.a() * g.b() + f.b()) % p, p);
}

Apm inverse(const Apm &f) {
    int64_t p = f.modulus();
    int64_t ai = mod_inverse(f.a(), p);
    return Apm(ai, mod_floor(-ai * f.b(), p), p);
}

Apm power(const Apm &f, int64_t e) {
    if (e < 0) {
        return power(inverse(f), -e);
    }
    Apm result = Apm::identity(f.modulus());
    Apm base = f;
    while (e) {
        if (e & 1) {
            result = compose(base, result);
        }
        base = compose(base, base);
        e >>= 1;
    }
    return result;
}

bool commutes(const Apm &f, const Apm &g) {
    require_same_modulus(f, g, "commutes");
    int64_t m = f.modulus();
    int64_t lhs = mod_floor((f.a() - 1) * g.b(), m);
    int64_t rhs = mod_floor((g.a() - 1) * f.b(), m);
    return lhs == rhs;
}

OrbitDecomposition orbit_decompose(const Apm &f) {
    OrbitDecomposition out;
    int64_t p = f.modulus();
    std::vector<bool> seen(p, false);
    for (int64_t start = 0; start < p; start++) {
        if (seen[start]) {
            continue;
        }
        std::vector<int64_t> cycle;
        int64_t x = start;
        do {
            seen[x] = true;
            cycle.push_back(x);
            x = f(x);
        } while (x != start);
        out.representatives.push_back(start);
        out.orbits.push_back(std::move(cycle));
    }
    return out;
}

int64_t order(const Apm &f) {
    // Iterated composition, capped at |Aff(Z_P)| = P * phi(P).
    int64_t cap = f.modulus() * totient(f.modulus());
    Apm cur = f;
    for (int64_t t = 1; t <= cap; t++) {
        if (cur.is_identity()) {
            return t;
        }
        cur = compose(f, cur);
    }
    throw CapacityError("order: exceeded group-order cap");
}

std::pair<Apm, Apm> crt_split(const Apm &f, int64_t m, int64_t l) {
    if (m <= 0 || l <= 0 || m * l != f.modulus()) {
        throw DomainError("crt_split: " + std::to_string(m) + "*" + std::to_string(l) +
                          " != modulus " + std::to_string(f.modulus()));
    }
    if (std::gcd(m, l) != 1) {
        throw DomainError("crt_split: factors " + std::to_string(m) + " and " + std::to_string(l) +
                          " are not coprime");
    }
    return {Apm(f.a(), f.b(), m), Apm(f.a(), f.b(), l)};
}

static int64_t crt_value(int64_t rm, int64_t m, int64_t rl, int64_t l) {
    // x = rm (mod m), x = rl (mod l).
    int64_t inv = mod_inverse(m % l, l);
    int64_t t = mod_floor((rl - rm) % l * inv, l);
    return rm + m * t;
}

Apm crt_combine(const Apm &on_m, const Apm &on_l) {
    int64_t m = on_m.modulus(), l = on_l.modulus();
    if (std::gcd(m, l) != 1) {
        throw DomainError("crt_combine: moduli are not coprime");
    }
    return Apm(crt_value(on_m.a(), m, on_l.a(), l), crt_value(on_m.b(), m, on_l.b(), l), m * l);
}

std::vector<int64_t> as_permutation(const Apm &f) {
    std::vector<int64_t> out(f.modulus());
    for (int64_t x = 0; x < f.modulus(); x++) {
        out[x] = f(x);
    }
    return out;
}

}  // namespace apmqec
