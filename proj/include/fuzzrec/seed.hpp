#ifndef FUZZREC_SEED_HPP
#define FUZZREC_SEED_HPP

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace fuzzrec {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// 64-bit FNV-1a.
inline std::uint64_t hash_string(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/**
 * Counter-based seed derivation. The master seed is folded with each component
 * in order through splitmix64, so changing any single component (dataset id,
 * cluster count, m index, fold, repeat, stream tag) yields an unrelated seed.
 */
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                 std::initializer_list<std::uint64_t> counters) {
    std::uint64_t h = splitmix64(master ^ hash_string(tag));
    for (std::uint64_t c : counters) {
        h = splitmix64(h ^ splitmix64(c + 0x632be59bd9b4e019ULL));
    }
    return h;
}

} // namespace fuzzrec

#endif
