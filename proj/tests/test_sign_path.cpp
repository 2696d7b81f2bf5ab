#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <set>

#include "dirichlet/sign_path.hpp"

using namespace dirichlet;

TEST(SignPath, SignsAreDeterministicAndBinary) {
    const SignPath p{12345, SignGenerator::splitmix_v1};
    for (std::uint64_t n = 1; n <= 300; ++n) {
        const int s = p.sign(n);
        EXPECT_TRUE(s == 1 || s == -1);
        EXPECT_EQ(s, p.sign(n)); // pure function of (seed, n)
    }
    const SignPath q{12345, SignGenerator::splitmix_v1};
    for (std::uint64_t n = 1; n <= 300; ++n) EXPECT_EQ(p.sign(n), q.sign(n));
}

TEST(SignPath, WordAndSignAgree) {
    const SignPath p{99, SignGenerator::splitmix_v1};
    for (std::uint64_t block = 0; block < 8; ++block) {
        const std::uint64_t w = p.sign_word(block);
        for (int j = 0; j < 64; ++j) {
            const std::uint64_t n = 64 * block + std::uint64_t(j) + 1;
            EXPECT_EQ(p.sign(n), ((w >> j) & 1u) ? -1 : 1);
        }
    }
}

TEST(SignPath, AllPlusGenerator) {
    const SignPath p{777, SignGenerator::all_plus_v1};
    EXPECT_EQ(p.sign_word(0), 0u);
    EXPECT_EQ(p.sign_word(123456), 0u);
    for (std::uint64_t n : {1ull, 64ull, 65ull, 1000000ull}) EXPECT_EQ(p.sign(n), 1);
}

TEST(SignPath, SeedsDecorrelate) {
    const SignPath a{1, SignGenerator::splitmix_v1};
    const SignPath b{2, SignGenerator::splitmix_v1};
    int agree = 0;
    const int N = 6400;
    for (std::uint64_t n = 1; n <= N; ++n) agree += a.sign(n) == b.sign(n);
    // Binomial(N, 1/2): 5 sigma is 0.5*N +- 200.
    EXPECT_NEAR(agree, N / 2, 200);
}

TEST(SignPath, SignsAreBalanced) {
    const SignPath p{2024, SignGenerator::splitmix_v1};
    const int N = 100000;
    int sum = 0;
    for (std::uint64_t n = 1; n <= N; ++n) sum += p.sign(n);
    EXPECT_LT(std::abs(sum), 5.0 * std::sqrt(double(N)));
}

TEST(SignPath, WordsLookMixed) {
    // Across many blocks every word should be distinct and the bit count
    // near 32; a counter construction failing either would be broken.
    const SignPath p{5150, SignGenerator::splitmix_v1};
    std::set<std::uint64_t> seen;
    long bits = 0;
    const int blocks = 4096;
    for (int b = 0; b < blocks; ++b) {
        const std::uint64_t w = p.sign_word(b);
        seen.insert(w);
        bits += __builtin_popcountll(w);
    }
    EXPECT_EQ(seen.size(), std::size_t(blocks));
    EXPECT_NEAR(double(bits) / blocks, 32.0, 0.5);
}

TEST(SignPath, PathSeedDerivation) {
    EXPECT_EQ(path_seed(42, 0), 42u);
    EXPECT_NE(path_seed(42, 1), path_seed(42, 2));
    EXPECT_EQ(path_seed(42, 7), 42u ^ 7u);
}

TEST(SignPath, CounterUniformRangeAndDeterminism) {
    double mn = 1.0, mx = 0.0, sum = 0.0;
    const int N = 100000;
    for (std::uint64_t n = 1; n <= N; ++n) {
        const double u = counter_uniform(31337, n);
        EXPECT_EQ(u, counter_uniform(31337, n));
        mn = std::min(mn, u);
        mx = std::max(mx, u);
        sum += u;
    }
    EXPECT_GE(mn, 0.0);
    EXPECT_LT(mx, 1.0);
    EXPECT_NEAR(sum / N, 0.5, 5.0 / std::sqrt(12.0 * N));
}

TEST(SignPath, UniformStreamIndependentOfSignStream) {
    // Same (seed, n) but different tags: the uniform draws must not be a
    // function of the sign bits.
    const SignPath p{8080, SignGenerator::splitmix_v1};
    int agree = 0;
    const int N = 20000;
    for (std::uint64_t n = 1; n <= N; ++n) {
        const bool sign_neg = p.sign(n) < 0;
        const bool coin = counter_uniform(8080, n) < 0.5;
        agree += sign_neg == coin;
    }
    EXPECT_NEAR(agree, N / 2, 5.0 * std::sqrt(N / 4.0));
}

TEST(SignPath, Mix64Avalanche) {
    // Flipping one input bit flips about half the output bits.
    const std::uint64_t x = 0x0123456789abcdefULL;
    int total = 0;
    for (int b = 0; b < 64; ++b)
        total += __builtin_popcountll(detail::mix64(x) ^
                                      detail::mix64(x ^ (1ULL << b)));
    EXPECT_NEAR(double(total) / 64.0, 32.0, 4.0);
}
