#pragma once

// Seeded random source with self-contained distributions.
//
// std::uniform_int_distribution is implementation-defined, so runs seeded the
// same way would diverge across standard libraries. Benchmarks are expected
// to replay bit-identically from (seed, params), hence the hand-rolled draws.

#include <cstdint>
#include <random>
#include <vector>

namespace lws {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform integer in [lo, hi], inclusive. Rejection sampling, unbiased.
    int uniform_int(int lo, int hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return lo + static_cast<int>(r % span);
    }

    bool coin_flip() { return (engine_() & 1) != 0; }

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
            std::swap(v[static_cast<std::size_t>(i)],
                      v[static_cast<std::size_t>(uniform_int(0, i))]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace lws
