#include <gtest/gtest.h>

#include <cmath>

#include "dirichlet/bracket.hpp"
#include "dirichlet/errors.hpp"

using namespace dirichlet;

TEST(Bracket, NudgeDirections) {
    EXPECT_GT(next_up(1.0), 1.0);
    EXPECT_LT(next_down(1.0), 1.0);
    EXPECT_GT(next_up(0.0), 0.0);
    EXPECT_LT(next_down(0.0), 0.0);
    EXPECT_EQ(next_up(next_down(2.5)), 2.5);
}

TEST(Bracket, ConstructionAndQueries) {
    const Bracket b(1.0, 2.0);
    EXPECT_DOUBLE_EQ(b.mid(), 1.5);
    EXPECT_DOUBLE_EQ(b.width(), 1.0);
    EXPECT_TRUE(b.contains(1.0));
    EXPECT_TRUE(b.contains(2.0));
    EXPECT_FALSE(b.contains(next_up(2.0)));
    EXPECT_TRUE(b.contains(Bracket(1.25, 1.75)));
    EXPECT_FALSE(b.contains(Bracket(0.5, 1.5)));

    const Bracket p(3.0);
    EXPECT_EQ(p.lo, p.hi);
    EXPECT_DOUBLE_EQ(p.width(), 0.0);

    EXPECT_THROW(Bracket(2.0, 1.0), Error);
    EXPECT_THROW(Bracket(0.0, std::numeric_limits<double>::infinity()), Error);
}

TEST(Bracket, ArithmeticEnclosesExactValues) {
    // 0.1 and 0.2 are not representable; degenerate brackets around their
    // doubles combined outward must still contain the double results and
    // strictly widen.
    const Bracket a(0.1), b(0.2);
    const Bracket s = a + b;
    EXPECT_TRUE(s.contains(0.1 + 0.2));
    EXPECT_GT(s.width(), 0.0);

    const Bracket d = b - a;
    EXPECT_TRUE(d.contains(0.2 - 0.1));

    const Bracket m = a * b;
    EXPECT_TRUE(m.contains(0.1 * 0.2));

    // Mixed-sign products pick the right corners.
    const Bracket n(-3.0, 2.0), q(-1.0, 5.0);
    const Bracket prod = n * q;
    EXPECT_LE(prod.lo, -15.0);
    EXPECT_GE(prod.hi, 10.0);
    for (double x : {-3.0, -1.0, 0.0, 2.0})
        for (double y : {-1.0, 0.0, 2.5, 5.0}) EXPECT_TRUE(prod.contains(x * y));
}

TEST(Bracket, ScalarProduct) {
    const Bracket b(1.0, 2.0);
    const Bracket m = -2.0 * b;
    EXPECT_TRUE(m.contains(-4.0));
    EXPECT_TRUE(m.contains(-2.0));
    EXPECT_LE(m.lo, -4.0);
    EXPECT_GE(m.hi, -2.0);
}

TEST(Bracket, MonotoneFunctions) {
    const Bracket b(1.0, 4.0);
    const Bracket r = sqrt(b);
    EXPECT_TRUE(r.contains(1.0));
    EXPECT_TRUE(r.contains(2.0));
    EXPECT_TRUE(r.contains(std::sqrt(2.0)));

    const Bracket l = log(b);
    EXPECT_TRUE(l.contains(0.0));
    EXPECT_TRUE(l.contains(std::log(4.0)));

    const Bracket e = exp(Bracket(0.0, 1.0));
    EXPECT_TRUE(e.contains(1.0));
    EXPECT_TRUE(e.contains(std::exp(1.0)));

    const Bracket rec = reciprocal(Bracket(2.0, 4.0));
    EXPECT_TRUE(rec.contains(0.25));
    EXPECT_TRUE(rec.contains(0.5));

    EXPECT_THROW(sqrt(Bracket(-1.0, 1.0)), Error);
    EXPECT_THROW(log(Bracket(0.0, 1.0)), Error);
    EXPECT_THROW(reciprocal(Bracket(-1.0, 1.0)), Error);
}

TEST(Bracket, WithSlack) {
    const Bracket b = Bracket::with_slack(10.0, 0.5);
    EXPECT_TRUE(b.contains(9.5));
    EXPECT_TRUE(b.contains(10.5));
    EXPECT_LT(b.lo, 9.5 + 1e-12);
    EXPECT_GT(b.hi, 10.5 - 1e-12);
}

TEST(Bracket, RelWidth) {
    EXPECT_DOUBLE_EQ(Bracket(0.0, 0.0).rel_width(), 0.0);
    const Bracket b(1.0, 1.0 + 1e-8);
    EXPECT_NEAR(b.rel_width(), 1e-8, 1e-12);
}

TEST(Bracket, ChainedOperationsStayEnclosures) {
    // (sqrt(2) + 1/3)^2 * log(7), assembled entirely from brackets, must
    // contain the value computed in long double.
    Bracket x = sqrt(Bracket(2.0)) + reciprocal(Bracket(3.0));
    x = x * x * log(Bracket(7.0));
    const long double exact =
        (sqrtl(2.0L) + 1.0L / 3.0L) * (sqrtl(2.0L) + 1.0L / 3.0L) * logl(7.0L);
    EXPECT_TRUE(x.contains(static_cast<double>(exact)));
    EXPECT_LT(x.rel_width(), 1e-14);
}
