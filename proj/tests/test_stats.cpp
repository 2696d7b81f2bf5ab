#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dirichlet/stats.hpp"

using namespace dirichlet;

TEST(Stats, NormalCdfAnchors) {
    EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
    EXPECT_NEAR(normal_cdf(1.0), 0.8413447460685429, 1e-15);
    EXPECT_NEAR(normal_cdf(-1.0), 1.0 - 0.8413447460685429, 1e-15);
    EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-12);
    EXPECT_LT(normal_cdf(-10.0), 1e-20);
    EXPECT_GT(normal_cdf(10.0), 1.0 - 1e-15);
    EXPECT_LT(normal_cdf(1.0), normal_cdf(1.5));
}

TEST(Stats, MomentsOnExactSample) {
    // {1,2,3,4,5}: mean 3, unbiased variance 2.5, central m4 (biased) = 6.8.
    const std::vector<double> xs{1, 2, 3, 4, 5};
    const Moments m = sample_moments(xs);
    EXPECT_EQ(m.n, 5u);
    EXPECT_DOUBLE_EQ(m.mean, 3.0);
    EXPECT_DOUBLE_EQ(m.variance, 2.5);
    EXPECT_DOUBLE_EQ(m.m4, 6.8);
}

TEST(Stats, MomentsPlusMinusOne) {
    const std::vector<double> xs{1, -1, 1, -1, 1, -1, 1, -1};
    const Moments m = sample_moments(xs);
    EXPECT_DOUBLE_EQ(m.mean, 0.0);
    EXPECT_DOUBLE_EQ(m.variance, 8.0 / 7.0);
    EXPECT_DOUBLE_EQ(m.m4, 1.0);
}

TEST(Stats, KsDistanceTwoPointSample) {
    // Sample {-1, 1}: F_n jumps 0 -> 1/2 at -1 and 1/2 -> 1 at 1.
    // sup gap = Phi(1) - 1/2 on either side.
    std::vector<double> xs{-1.0, 1.0};
    const double d = ks_normal_distance(xs);
    EXPECT_NEAR(d, normal_cdf(1.0) - 0.5, 1e-15);
}

TEST(Stats, KsDistanceOnNormalScores) {
    // Deterministic near-perfect normal sample via inverse-CDF grid
    // probing: KS distance of {Phi^-1((i-1/2)/n)} is 1/(2n).
    const int n = 1000;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) {
        // crude inverse via bisection on normal_cdf
        double lo = -10, hi = 10, p = (i + 0.5) / n;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            (normal_cdf(mid) < p ? lo : hi) = mid;
        }
        xs[i] = 0.5 * (lo + hi);
    }
    EXPECT_NEAR(ks_normal_distance(xs), 0.5 / n, 1e-6);
}

TEST(Stats, KsDetectsWrongScale) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(0.0, 2.0);
    std::vector<double> xs(4000);
    for (auto& x : xs) x = gauss(rng);
    EXPECT_GT(ks_normal_distance(xs), 0.1);
}

TEST(Stats, Correlation) {
    const std::vector<double> x{1, 2, 3, 4};
    const std::vector<double> y{2, 4, 6, 8};
    EXPECT_NEAR(sample_correlation(x, y), 1.0, 1e-12);
    const std::vector<double> yn{-2, -4, -6, -8};
    EXPECT_NEAR(sample_correlation(x, yn), -1.0, 1e-12);
    const std::vector<double> c{5, 5, 5, 5};
    EXPECT_DOUBLE_EQ(sample_correlation(x, c), 0.0); // degenerate
    // Orthogonal pattern.
    const std::vector<double> a{1, 1, -1, -1};
    const std::vector<double> b{1, -1, 1, -1};
    EXPECT_NEAR(sample_correlation(a, b), 0.0, 1e-15);
}

TEST(Stats, Quantiles) {
    std::vector<double> xs{4.0, 1.0, 3.0, 2.0};
    EXPECT_DOUBLE_EQ(sample_quantile(xs, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(sample_quantile(xs, 1.0), 4.0);
    EXPECT_DOUBLE_EQ(sample_quantile(xs, 0.5), 2.5);
    EXPECT_DOUBLE_EQ(sample_quantile(xs, 1.0 / 3.0), 2.0);
}
