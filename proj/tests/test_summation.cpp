#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <vector>

#include "dirichlet/summation.hpp"

using namespace dirichlet;
using big_float = boost::multiprecision::cpp_bin_float_oct;

TEST(Summation, ChunkIsWordAligned) {
    static_assert(kChunkTerms % 64 == 0);
    EXPECT_EQ(kChunkTerms, 65536u);
}

TEST(Summation, KahanBeatsNaiveOnAdversarialSeries) {
    // 1 followed by many tiny terms that a naive double sum drops.
    const int N = 10000000;
    const double tiny = 1e-16;
    KahanAccumulator acc;
    acc.add(1.0);
    double naive = 1.0;
    for (int i = 0; i < N; ++i) {
        acc.add(tiny);
        naive += tiny;
    }
    const double exact = 1.0 + N * tiny;
    EXPECT_EQ(naive, 1.0); // demonstrates the failure Kahan repairs
    EXPECT_NEAR(acc.value(), exact, 1e-15 * exact);
}

TEST(Summation, KahanMatchesOctupleReference) {
    // Alternating harmonic-like terms at mixed magnitudes.
    KahanAccumulator acc;
    big_float ref = 0;
    for (int i = 1; i <= 200000; ++i) {
        const double x = ((i & 1) ? 1.0 : -1.0) / std::pow(double(i), 0.6);
        acc.add(x);
        ref += big_float(x);
    }
    const double exact = ref.convert_to<double>();
    EXPECT_NEAR(acc.value(), exact, 1e-14 * std::abs(exact) + 1e-18);
}

TEST(Summation, ReduceLanesFixedTree) {
    // The lane reduction is the fixed tree ((0+1)+(2+3))+((4+5)+(6+7));
    // with values chosen so other association orders differ in the last
    // bit, the tree result must match exactly.
    const double lanes[8] = {1.0,      1e-16, -1.0,     1e-16,
                             3.0e-16,  0.125, -0.125,   7e-17};
    const double expect = ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3])) +
                          ((lanes[4] + lanes[5]) + (lanes[6] + lanes[7]));
    EXPECT_EQ(reduce_lanes8(lanes), expect);
    double linear = 0.0;
    for (double v : lanes) linear += v;
    // Sanity: the orders genuinely differ on this input, so the equality
    // above is not vacuous.
    EXPECT_NE(linear, expect);
}

TEST(Summation, RoundRobinLaneSchemeMatchesReference) {
    // Emulate the contract: round-robin into 8 lanes, fixed-tree reduce,
    // Kahan across chunks; compare against an octuple-precision sum.
    const std::uint64_t total = 3 * kChunkTerms + 12345;
    KahanAccumulator acc;
    big_float ref = 0;
    std::uint64_t done = 0;
    while (done < total) {
        const std::uint64_t count = std::min(kChunkTerms, total - done);
        double lanes[8] = {0, 0, 0, 0, 0, 0, 0, 0};
        for (std::uint64_t j = 0; j < count; ++j) {
            const double x =
                std::cos(double(done + j)) / std::sqrt(double(done + j + 1));
            lanes[j & 7] += x;
            ref += big_float(x);
        }
        acc.add(reduce_lanes8(lanes));
        done += count;
    }
    const double exact = ref.convert_to<double>();
    EXPECT_NEAR(acc.value(), exact, 4e-15 * (std::abs(exact) + 1.0));
}
