#pragma once

#include <cstdint>

namespace acnn {

// splitmix64 generator. The output sequence is pinned by the algorithm
// itself, so seeded results are identical across platforms and standard
// library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // uniform integer in [0, n), n > 0
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
};

// Derives an independent stream seed from (seed, tag). Used so that e.g.
// parameter initialisation and batch shuffling cannot interfere, and so
// per-token embedding init does not depend on vocabulary iteration order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    Rng mix(seed ^ (0xd1342543de82ef95ull * (tag + 1)));
    mix.next_u64();
    return mix.next_u64();
}

}  // namespace acnn
