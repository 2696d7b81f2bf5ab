// SignPath: seeded, deterministically re-generatable +-1 sign streams.
//
// Signs come from a counter-based construction: a 64-bit mix of
// (seed, generator tag, block counter) yields one word of 64 packed
// signs, so sign(n) is a pure function of (seed, generator_id, n).
// The same path can be queried at different sigma, different
// truncations, forwards or backwards, and from any number of worker
// threads, always with the same answer.  One mix call feeds 64
// consecutive indices, which is what makes the streaming evaluation
// kernels cheap.
#pragma once

#include <cstdint>

namespace dirichlet {

enum class SignGenerator : std::uint32_t {
    all_plus_v1 = 0, // every sign +1; debug/oracle fixture
    splitmix_v1 = 1, // packed signs, 64 per mix call
};

namespace detail {

// SplitMix64 finalizer: full-avalanche 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

// One counter word for (seed, tag, counter).  Weyl increments keep
// distinct counters and tags on distinct mixer inputs.
inline std::uint64_t counter_word(std::uint64_t seed, std::uint32_t tag,
                                  std::uint64_t counter) {
    std::uint64_t z = seed;
    z += 0x9e3779b97f4a7c15ULL * (counter + 1);
    z += 0x632be59bd9b4e019ULL * (std::uint64_t(tag) + 1);
    return mix64(z);
}

} // namespace detail

struct SignPath {
    std::uint64_t seed = 0;
    SignGenerator generator_id = SignGenerator::splitmix_v1;

    // 64 packed signs for indices n in [64*block+1, 64*block+64];
    // bit j (LSB first) set means sign(64*block + j + 1) = -1.
    std::uint64_t sign_word(std::uint64_t block) const {
        const std::uint64_t mask =
            generator_id == SignGenerator::all_plus_v1 ? 0u : ~std::uint64_t(0);
        return detail::counter_word(seed, static_cast<std::uint32_t>(generator_id),
                                    block) &
               mask;
    }

    // sign(n) in {-1,+1} for n >= 1.
    int sign(std::uint64_t n) const {
        std::uint64_t i = n - 1;
        std::uint64_t bit = (sign_word(i >> 6) >> (i & 63)) & 1u;
        return bit ? -1 : 1;
    }
};

// Per-path seed derivation for parallel experiments: worker layout must
// never change the stream a path sees.
inline std::uint64_t path_seed(std::uint64_t experiment_seed, std::uint64_t path_index) {
    return experiment_seed ^ path_index;
}

// Uniform(0,1) draw tied to (seed, n), used by the tilted sampler.  A
// distinct tag keeps these draws independent of the sign words at the
// same indices.
inline double counter_uniform(std::uint64_t seed, std::uint64_t n) {
    constexpr std::uint32_t kUniformTag = 0x7104u;
    std::uint64_t w = detail::counter_word(seed, kUniformTag, n);
    return double(w >> 11) * 0x1.0p-53;
}

} // namespace dirichlet
