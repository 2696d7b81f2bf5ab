// Bracket: a closed interval [lo,hi] certifying a real quantity.
//
// Arithmetic nudges endpoints outward by one ulp per operation, so a
// chain of bracket operations stays a genuine enclosure of the exact
// result as long as the inputs were enclosures.  This is deliberately
// cruder than directed-rounding interval arithmetic; every quantity we
// enclose is O(1)-conditioned and the extra slack (a few ulps) is far
// below the tolerances used anywhere in the project.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "dirichlet/errors.hpp"

namespace dirichlet {

inline double next_up(double x) {
    return std::nextafter(x, std::numeric_limits<double>::infinity());
}
inline double next_down(double x) {
    return std::nextafter(x, -std::numeric_limits<double>::infinity());
}

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;

    Bracket() = default;
    explicit Bracket(double point) : lo(point), hi(point) {}
    Bracket(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
            throw Error(ErrorKind::argument, "bracket endpoints invalid");
    }

    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
    double rel_width() const {
        double scale = std::max(std::abs(lo), std::abs(hi));
        return scale > 0 ? width() / scale : 0.0;
    }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const Bracket& b) const { return lo <= b.lo && b.hi <= hi; }

    // Enclosure of a point value known only up to |err| <= slack.
    static Bracket with_slack(double value, double slack) {
        return Bracket(next_down(value - slack), next_up(value + slack));
    }
};

inline Bracket operator+(const Bracket& a, const Bracket& b) {
    return Bracket(next_down(a.lo + b.lo), next_up(a.hi + b.hi));
}
inline Bracket operator-(const Bracket& a, const Bracket& b) {
    return Bracket(next_down(a.lo - b.hi), next_up(a.hi - b.lo));
}
inline Bracket operator*(const Bracket& a, const Bracket& b) {
    double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return Bracket(next_down(std::min(std::min(p1, p2), std::min(p3, p4))),
                   next_up(std::max(std::max(p1, p2), std::max(p3, p4))));
}
inline Bracket operator*(double c, const Bracket& b) { return Bracket(c) * b; }

// Monotone elementary functions, endpoints nudged outward.
inline Bracket sqrt(const Bracket& a) {
    if (a.lo < 0) throw Error(ErrorKind::domain, "sqrt of negative bracket");
    return Bracket(next_down(std::sqrt(a.lo)), next_up(std::sqrt(a.hi)));
}
inline Bracket log(const Bracket& a) {
    if (a.lo <= 0) throw Error(ErrorKind::domain, "log of nonpositive bracket");
    return Bracket(next_down(std::log(a.lo)), next_up(std::log(a.hi)));
}
inline Bracket exp(const Bracket& a) {
    return Bracket(next_down(std::exp(a.lo)), next_up(std::exp(a.hi)));
}
inline Bracket reciprocal(const Bracket& a) {
    if (a.lo <= 0 && a.hi >= 0)
        throw Error(ErrorKind::domain, "reciprocal of bracket containing zero");
    return Bracket(next_down(1.0 / a.hi), next_up(1.0 / a.lo));
}

} // namespace dirichlet
