#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace codedet {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic random stream. All randomness flows through this wrapper so
// outputs never depend on the standard library's distribution implementations,
// only on the mt19937_64 engine, which is specified bit-exactly.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1) with 53 bits of precision.
    double next_double() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // Uniform in [0, bound); bound must be > 0. Rejection sampling, unbiased.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[next_below(i)]);
        }
    }

    // Independent substream seed from (seed, tag), e.g. per sample id.
    static std::uint64_t derive(std::uint64_t seed, std::string_view tag) {
        std::uint64_t h = 1469598103934665603ULL;
        for (unsigned char c : tag) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        std::uint64_t state = seed ^ h;
        const std::uint64_t a = splitmix64(state);
        const std::uint64_t b = splitmix64(state);
        return a ^ (b + 0x9e3779b97f4a7c15ULL);
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace codedet
