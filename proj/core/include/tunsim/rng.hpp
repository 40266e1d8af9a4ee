#pragma once

#include <cstdint>
#include <random>

namespace tunsim {

// Deterministic RNG. std::mt19937_64 output is pinned by the standard, but
// the library distributions are not, so bounded draws are done by hand.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next() { return eng_(); }

    // Uniform in [lo, hi]. Modulo bias is irrelevant for the tiny ranges
    // used here.
    int uniform_int(int lo, int hi) {
        return lo + int(eng_() % uint64_t(hi - lo + 1));
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace tunsim
