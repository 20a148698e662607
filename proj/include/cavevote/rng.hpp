#pragma once

#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <limits>
#include <utility>

namespace cavevote {

/// 64-bit master seed. Identical seeds give identical results.
using Seed = std::uint64_t;

/// SplitMix64 finaliser; also used as a keyed hash for stream derivation.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derive a child seed from a parent seed and a list of stream coordinates
/// (cell index, repetition, purpose tag, ...). Each coordinate is folded in
/// through the mixer, so child seeds for distinct coordinate tuples are
/// independent and adding new coordinates never perturbs existing streams.
constexpr Seed derive_seed(Seed parent, std::initializer_list<std::uint64_t> keys) noexcept {
    std::uint64_t h = mix64(parent + 0x9e3779b97f4a7c15ULL);
    for (std::uint64_t k : keys) {
        h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
    }
    return h;
}

/// Purpose tags for derive_seed, so that independent random decisions made
/// from the same election seed never share a stream.
enum class Stream : std::uint64_t {
    Counts = 1,
    Assignment = 2,
    Graph = 3,
    Strategies = 4,
    Election = 5,
    Voter = 6,
    Split = 7,
};

constexpr Seed derive_seed(Seed parent, Stream tag, std::uint64_t index = 0) noexcept {
    return derive_seed(parent, {static_cast<std::uint64_t>(tag), index});
}

/// Counter-based SplitMix64 engine. Satisfies UniformRandomBitGenerator so it
/// can drive <random> distributions, but the helpers below are preferred
/// because their output does not depend on the standard library vendor.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit constexpr Rng(Seed seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Bernoulli trial with success probability p.
    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t index(std::uint64_t n) noexcept {
        // Lemire's nearly-divisionless bounded draw.
        unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<unsigned __int128>((*this)()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Fisher-Yates shuffle over any random-access range.
    template <class Range>
    void shuffle(Range& r) noexcept {
        const auto n = static_cast<std::uint64_t>(std::size(r));
        for (std::uint64_t i = n; i > 1; --i) {
            const auto j = index(i);
            using std::swap;
            swap(r[i - 1], r[j]);
        }
    }

private:
    std::uint64_t state_;
};

}  // namespace cavevote
