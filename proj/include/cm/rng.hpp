#ifndef CM_RNG_HPP
#define CM_RNG_HPP

#include <cstdint>

namespace cm {

// splitmix64 (Vigna). All randomized operations in the library take an
// explicit seed and derive sub-streams deterministically, so results are
// reproducible across runs, platforms, and thread counts.
struct Rng {
    uint64_t state;

    explicit Rng(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound), bound > 0
    uint64_t below(uint64_t bound) {
        uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold)
                return r % bound;
        }
    }

    // derive an independent stream; tag distinguishes call sites
    static uint64_t derive(uint64_t seed, uint64_t tag) {
        Rng r(seed ^ (tag * 0xd1342543de82ef95ULL));
        return r.next();
    }
};

} // namespace cm

#endif
