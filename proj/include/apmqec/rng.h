#ifndef APMQEC_RNG_H
#define APMQEC_RNG_H

#include <cstdint>
#include <random>
#include <string_view>

namespace apmqec {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for work item `index` of a stream; independent of evaluation order.
inline uint64_t derive_seed(uint64_t seed, uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

inline uint64_t fnv1a(std::string_view s, uint64_t h = 1469598103934665603ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// Named sub-stream of a master seed, e.g. derive_seed(seed, "sample").
inline uint64_t derive_seed(uint64_t seed, std::string_view stream) {
    return derive_seed(seed, fnv1a(stream));
}

inline std::mt19937_64 make_rng(uint64_t seed, uint64_t index) {
    return std::mt19937_64(derive_seed(seed, index));
}

}  // namespace apmqec

#endif
