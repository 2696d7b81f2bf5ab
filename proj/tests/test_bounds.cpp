#include <gtest/gtest.h>

#include <cmath>

#include "dirichlet/bounds.hpp"

using namespace dirichlet;

TEST(Hoeffding, ClosedForm) {
    EXPECT_DOUBLE_EQ(hoeffding_bound(1.0, 1.0), std::exp(-0.5));
    EXPECT_DOUBLE_EQ(hoeffding_bound(1.0, 3.0), std::exp(-4.5));
    EXPECT_DOUBLE_EQ(hoeffding_bound(2.0, 2.0), std::exp(-1.0));
    // two-sided doubles, capped at 1
    EXPECT_DOUBLE_EQ(hoeffding_bound(1.0, 3.0, true), 2.0 * std::exp(-4.5));
    EXPECT_DOUBLE_EQ(hoeffding_bound(1.0, 0.1, true), 1.0);
    EXPECT_THROW(hoeffding_bound(0.0, 1.0), Error);
    EXPECT_THROW(hoeffding_bound(1.0, 0.0), Error);
    EXPECT_THROW(hoeffding_bound(1.0, -1.0), Error);
}

TEST(Hoeffding, DominatesEmpiricalRademacherTail) {
    // Weighted sign sum with small weights; exact tail by enumeration
    // over all 2^16 sign vectors must sit below the bound.
    const int N = 16;
    double w[N], sum_sq = 0.0;
    for (int i = 0; i < N; ++i) {
        w[i] = 1.0 / std::sqrt(double(i + 1));
        sum_sq += w[i] * w[i];
    }
    for (double lam : {2.0, 4.0, 6.0}) {
        long hits = 0;
        for (int mask = 0; mask < (1 << N); ++mask) {
            double s = 0.0;
            for (int i = 0; i < N; ++i) s += (mask >> i & 1) ? -w[i] : w[i];
            hits += s >= lam;
        }
        const double p = double(hits) / double(1 << N);
        EXPECT_LE(p, hoeffding_bound(sum_sq, lam)) << "lambda=" << lam;
    }
}

TEST(MgfSandwich, FormulaEndpoints) {
    const SigmaPoint sp = SigmaPoint::from_sigma(0.7);
    const VarianceBracket v = variance(sp);
    const double t = 1.0;
    const Bracket s = mgf_sandwich(sp, t);
    EXPECT_NEAR(s.hi, std::exp(0.5 * t * t), 1e-12);
    const double pi = 3.14159265358979323846;
    const double lower = std::exp(0.5 * t * t -
                                  std::pow(t, 4) * pi * pi /
                                      (48.0 * v.value.lo * v.value.lo));
    EXPECT_NEAR(s.lo, lower, 1e-9);
    EXPECT_LT(s.lo, s.hi);
    // t = 0: both ends collapse to 1.
    const Bracket z = mgf_sandwich(sp, 0.0);
    EXPECT_NEAR(z.lo, 1.0, 1e-14);
    EXPECT_NEAR(z.hi, 1.0, 1e-14);
    // the correction term shrinks with the variance, so the sandwich is
    // tighter closer to the critical line where the variance blows up
    const Bracket t06 = mgf_sandwich(SigmaPoint::from_sigma(0.6), 1.0);
    EXPECT_GT(t06.width(), mgf_sandwich(SigmaPoint::from_sigma(0.55), 1.0).width());
    EXPECT_GT(t06.lo, 0.0);
}

namespace {

// Independent h(t) enclosure: direct tanh sum over a long head plus the
// first-order envelope tail tanh(x) in [x - x^3/3, x], with integral
// sandwiches for the tail power sums computed from scratch.
Bracket h_oracle(const SigmaPoint& sp, double t) {
    const VarianceBracket v = variance(sp);
    const double norm = std::sqrt(v.value.mid());
    const double sig = sp.sigma();
    const std::uint64_t M = 2000000;
    long double head = 0.0L;
    for (std::uint64_t n = 1; n <= M; ++n) {
        const long double vn = powl((long double)n, -(long double)sig) / norm;
        head += tanhl((long double)t * vn) * vn;
    }
    auto tail_pow = [&](double p) { // sum_{n>M} n^-p in [lo,hi]
        const double lo = std::pow(double(M + 1), 1.0 - p) / (p - 1.0);
        const double hi = std::pow(double(M), 1.0 - p) / (p - 1.0);
        return Bracket(lo, hi);
    };
    const Bracket S2 = tail_pow(2.0 * sig);
    const Bracket S4 = tail_pow(4.0 * sig);
    const double n2 = norm * norm, n4 = n2 * n2;
    const double tail_hi = t * S2.hi / n2;
    const double tail_lo = t * S2.lo / n2 - t * t * t / 3.0 * S4.hi / n4;
    return Bracket(double(head) + tail_lo - 1e-13, double(head) + tail_hi + 1e-13);
}

} // namespace

TEST(HOfT, AgreesWithDirectOracle) {
    for (double sigma : {0.6, 0.75}) {
        const SigmaPoint sp = SigmaPoint::from_sigma(sigma);
        for (double t : {0.25, 1.0, 2.5}) {
            const Bracket got = h_of_t(sp, t, 1e-9);
            const Bracket ref = h_oracle(sp, t);
            // enclosures of the same number must overlap
            EXPECT_LE(got.lo, ref.hi) << "sigma=" << sigma << " t=" << t;
            EXPECT_GE(got.hi, ref.lo) << "sigma=" << sigma << " t=" << t;
            EXPECT_LE(got.width(), 2e-9);
        }
    }
}

TEST(HOfT, BasicShape) {
    const SigmaPoint sp = SigmaPoint::from_sigma(0.6);
    const Bracket z = h_of_t(sp, 0.0, 1e-12);
    EXPECT_LE(std::abs(z.mid()), 1e-12);
    // strictly increasing in t, sublinear: h(t) < t * h'(0) = t
    const Bracket a = h_of_t(sp, 0.5, 1e-10);
    const Bracket b = h_of_t(sp, 1.0, 1e-10);
    const Bracket c = h_of_t(sp, 2.0, 1e-10);
    EXPECT_LT(a.hi, b.lo);
    EXPECT_LT(b.hi, c.lo);
    EXPECT_LT(b.hi, 1.0);
    EXPECT_GT(b.lo, 0.5); // not too concave yet at t=1
    EXPECT_THROW(h_of_t(sp, -1.0, 1e-10), Error);
    EXPECT_THROW(h_of_t(sp, 1.0, 0.0), Error);
}

TEST(SolveT0, ResidualAndLocation) {
    for (double sigma : {0.6, 0.7, 1.0}) {
        const SigmaPoint sp = SigmaPoint::from_sigma(sigma);
        const VarianceBracket v = variance(sp);
        const double cap = 4.0 / (3.0 * 3.14159265358979323846) * v.value.lo;
        for (double frac : {0.2, 0.6, 0.95}) {
            const double target = frac * cap;
            const TiltedModel m = solve_t0(sp, target);
            EXPECT_GE(m.t0, target);
            EXPECT_LE(m.t0, 1.5 * target);
            EXPECT_LE(m.residual, 1e-10 * std::max(1.0, target));
            // cross-check: certified h at t0 brackets the target within
            // the reported residual
            const Bracket h = h_of_t(sp, m.t0, 1e-12);
            EXPECT_LE(std::abs(h.mid() - target), m.residual + 1e-11);
            EXPECT_DOUBLE_EQ(m.target, target);
            EXPECT_NEAR(m.norm, std::sqrt(v.value.mid()), 1e-12);
        }
    }
}

TEST(SolveT0, IndependentBisectionAgrees) {
    const SigmaPoint sp = SigmaPoint::from_sigma(0.7);
    const double target = 1.2;
    const TiltedModel m = solve_t0(sp, target);
    // naive bisection on the certified h midpoint
    double lo = target, hi = 1.5 * target;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (h_of_t(sp, mid, 1e-12).mid() < target ? lo : hi) = mid;
    }
    EXPECT_NEAR(m.t0, 0.5 * (lo + hi), 1e-6);
}

TEST(SolveT0, EdgeCases) {
    const SigmaPoint sp = SigmaPoint::from_sigma(0.6);
    const TiltedModel z = solve_t0(sp, 0.0);
    EXPECT_DOUBLE_EQ(z.t0, 0.0);
    EXPECT_DOUBLE_EQ(z.residual, 0.0);
    // beyond the solvability cap (4/(3 pi)) E F^2 the solve must refuse
    const VarianceBracket v = variance(sp);
    const double cap = 4.0 / (3.0 * 3.14159265358979323846) * v.value.lo;
    try {
        solve_t0(sp, cap * 1.0000001);
        FAIL() << "expected domain error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::domain);
    }
    EXPECT_THROW(solve_t0(sp, -1.0), Error);
}

TEST(TiltedModelTheta, MatchesDefinition) {
    const SigmaPoint sp = SigmaPoint::from_sigma(0.7);
    const TiltedModel m = solve_t0(sp, 1.0);
    for (std::uint64_t n : {1ull, 2ull, 10ull, 1000ull})
        EXPECT_DOUBLE_EQ(m.theta(n), m.t0 * std::pow(double(n), -0.7) / m.norm);
}

TEST(LdLowerBound, ClosedForm) {
    // (1/2 - eps) exp(-delta^2 (1+lambda)^2 f^2 / 2); with delta = a/f the
    // f dependence cancels into 0.4 exp(-0.605 a^2) at lambda = eps = 0.1.
    for (double a : {1.0, 2.0, 3.0}) {
        const double f = 1.7;
        const double got = ld_lower_bound(a / f, f, 0.1, 0.1);
        EXPECT_NEAR(got, 0.4 * std::exp(-0.605 * a * a), 1e-15);
    }
    EXPECT_THROW(ld_lower_bound(0.5, 1.0, 0.1, 0.5), Error);
    EXPECT_THROW(ld_lower_bound(0.5, 1.0, 0.1, -0.1), Error);
}

TEST(LdExponent, DivergenceBoundary) {
    // (1-gamma)^2 (1+lambda)^2 (1+delta), divergence iff <= 1.
    const ExponentReport a = ld_exponent(0.2, 0.05, 0.05);
    EXPECT_NEAR(a.value, 0.64 * 1.1025 * 1.05, 1e-15);
    EXPECT_TRUE(a.diverges);
    const ExponentReport b = ld_exponent(0.0, 0.05, 0.05);
    EXPECT_NEAR(b.value, 1.1025 * 1.05, 1e-15);
    EXPECT_FALSE(b.diverges);
    // exact boundary counts as divergent
    const ExponentReport c = ld_exponent(0.0, 0.0, 0.0);
    EXPECT_DOUBLE_EQ(c.value, 1.0);
    EXPECT_TRUE(c.diverges);
    EXPECT_THROW(ld_exponent(1.0, 0.0, 0.0), Error);
    EXPECT_THROW(ld_exponent(-0.1, 0.0, 0.0), Error);
}
