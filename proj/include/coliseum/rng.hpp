#pragma once

#include <cstdint>
#include <vector>

namespace coliseum {

// Streams are bit-reproducible across platforms and thread counts: every
// consumer derives its own generator from (seed, stream index) and never
// shares state.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t s = seed;
        for (auto& w : state_) w = splitmix64(s);
    }

    // Derived generator for an independent chain.
    static Rng chain(uint64_t seed, uint64_t index) {
        uint64_t s = seed ^ (0xa0761d6478bd642fULL * (index + 1));
        return Rng(splitmix64(s));
    }

    uint64_t next_u64() {
        // xoshiro256**
        auto rotl = [](uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
        uint64_t result = rotl(state_[1] * 5, 7) * 9;
        uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0,1), 53-bit resolution.
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform index in [0, n).
    size_t next_index(size_t n) {
        size_t i = size_t(next_double() * double(n));
        return i < n ? i : n - 1;
    }

    // Index sampled from a probability vector (cumulative scan).
    size_t next_weighted(const std::vector<double>& probs) {
        double u = next_double();
        double acc = 0.0;
        for (size_t j = 0; j + 1 < probs.size(); ++j) {
            acc += probs[j];
            if (u < acc) return j;
        }
        return probs.size() - 1;
    }

private:
    uint64_t state_[4];
};

} // namespace coliseum
