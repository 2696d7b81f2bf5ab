// Concentration bounds and the exponential tilt solver.
//
// h(t) = sum tanh(t*v_n)*v_n is evaluated as a certified bracket: a direct
// head sum up to a cutoff M plus an enclosure of the tail built from the
// odd-series envelope of tanh,
//     x - x^3/3 <= tanh(x) <= x - x^3/3 + (2/15) x^5   (x >= 0),
// so the tail reduces to the power sums T_j = sum_{n>M} n^(-j*sigma),
// j = 2,4,6, each sandwiched by integrals sharpened with the midpoint /
// trapezoid rule for positive decreasing convex integrands:
//     int_{M+1}^inf f + f(M+1)/2  <=  T  <=  int_{M+1/2}^inf f.
// A naive "sum tanh terms until they are small" cutoff would need M beyond
// any budget near the critical line; the envelope keeps M around 1e5.

#include "dirichlet/bounds.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "dirichlet/errors.hpp"
#include "dirichlet/summation.hpp"

namespace dirichlet {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Relative rounding slack for long compensated sums (same budget as the
// series kernels use: generous vs. the ~1e-16 Kahan error).
constexpr double kSumSlackRel = 4e-15;

// Integral sandwich for T_j = sum_{n>M} n^(-p), p = j*sigma > 1:
//   lo = (M+1)^(1-p)/(p-1) + (M+1)^(-p)/2,   hi = (M+1/2)^(1-p)/(p-1).
Bracket tail_power_sum(double M, double p) {
    const double lo = std::pow(M + 1.0, 1.0 - p) / (p - 1.0) +
                      0.5 * std::pow(M + 1.0, -p);
    const double hi = std::pow(M + 0.5, 1.0 - p) / (p - 1.0);
    return Bracket(next_down(lo), next_up(hi));
}

struct HTailContext {
    std::uint64_t M = 0;
    double norm = 1.0;
    Bracket S2{0.0, 0.0}; // sum_{n>M} v_n^2
    Bracket S4{0.0, 0.0};
    Bracket S6{0.0, 0.0};
};

HTailContext make_h_tail(std::uint64_t M, double sigma_val, double norm) {
    HTailContext ctx;
    ctx.M = M;
    ctx.norm = norm;
    const double Md = static_cast<double>(M);
    const Bracket n2 = Bracket(norm, norm) * Bracket(norm, norm);
    const Bracket n4 = n2 * n2;
    const Bracket n6 = n4 * n2;
    ctx.S2 = tail_power_sum(Md, 2.0 * sigma_val) * reciprocal(n2);
    ctx.S4 = tail_power_sum(Md, 4.0 * sigma_val) * reciprocal(n4);
    ctx.S6 = tail_power_sum(Md, 6.0 * sigma_val) * reciprocal(n6);
    return ctx;
}

// Tail of h at tilt t >= 0 from the envelope; exact enclosure.
Bracket h_tail_bracket(const HTailContext& ctx, double t) {
    const Bracket tb(t, t);
    const Bracket t3 = tb * tb * tb;
    const Bracket t5 = t3 * tb * tb;
    const Bracket low = tb * ctx.S2 - Bracket(1.0 / 3.0, next_up(1.0 / 3.0)) * (t3 * ctx.S4);
    const Bracket extra = Bracket(0.0, next_up(2.0 / 15.0)) * (t5 * ctx.S6);
    const Bracket high = tb * ctx.S2 - Bracket(next_down(1.0 / 3.0), 1.0 / 3.0) * (t3 * ctx.S4) + extra;
    double lo = low.lo;
    double hi = high.hi;
    if (lo > hi) lo = hi; // interval ops keep this from happening; belt and braces
    return Bracket(lo, hi);
}

struct HEvalContext {
    double sigma_val = 0.0;
    double norm = 1.0;
    std::vector<double> v; // v[n-1] = n^-sigma / norm, n <= M
    HTailContext tail;
};

HEvalContext make_h_context(const SigmaPoint& sigma, double norm,
                            std::uint64_t M) {
    HEvalContext ctx;
    ctx.sigma_val = sigma.sigma();
    ctx.norm = norm;
    ctx.v.resize(M);
    for (std::uint64_t n = 1; n <= M; ++n) {
        ctx.v[n - 1] = std::pow(static_cast<double>(n), -ctx.sigma_val) / norm;
    }
    ctx.tail = make_h_tail(M, ctx.sigma_val, norm);
    return ctx;
}

Bracket h_eval(const HEvalContext& ctx, double t) {
    if (t == 0.0) return Bracket(0.0, 0.0);
    if (!(t > 0.0)) {
        throw Error(ErrorKind::argument, "tilt evaluation requires t >= 0");
    }
    KahanAccumulator acc;
    for (const double vn : ctx.v) {
        acc.add(std::tanh(t * vn) * vn);
    }
    const double head = acc.value();
    const double slack = kSumSlackRel * head + 4.0 * std::numeric_limits<double>::min();
    const Bracket head_b(head - slack, head + slack);
    return head_b + h_tail_bracket(ctx.tail, t);
}

// Pick the head cutoff so the tail enclosure is comfortably inside tol:
// width ~ t * width(S2), width(T2) ~ p*M^(-p-1)/4 with p = 2*sigma.
std::uint64_t h_cutoff(double sigma_val, double norm, double tmax, double tol,
                       std::uint64_t budget) {
    const double p = 2.0 * sigma_val;
    const double target = 0.25 * tol * norm * norm / std::max(tmax, 1e-3);
    double M = std::pow(0.25 * p / target, 1.0 / (p + 1.0));
    if (!(M > 4096.0)) M = 4096.0;
    if (M > 2.0e8) M = 2.0e8; // head stays cheap; loop below re-checks width
    std::uint64_t Mi = static_cast<std::uint64_t>(M);
    if (Mi > budget) Mi = budget;
    return Mi;
}

} // namespace

double hoeffding_bound(double sum_sq, double lambda, bool two_sided) {
    if (!(sum_sq > 0.0) || !std::isfinite(sum_sq)) {
        throw Error(ErrorKind::argument, "sum of squared weights must be positive");
    }
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw Error(ErrorKind::argument, "deviation lambda must be positive");
    }
    const double b = std::exp(-lambda * lambda / (2.0 * sum_sq));
    if (!two_sided) return b;
    return std::min(1.0, 2.0 * b);
}

Bracket mgf_sandwich(const SigmaPoint& sigma, double t, const SeriesLimits& limits) {
    if (!std::isfinite(t)) {
        throw Error(ErrorKind::argument, "tilt t must be finite");
    }
    const Bracket ef2 = variance(sigma, limits.rel_width_tol, limits).value;
    const double t2 = t * t;
    const double hi = std::exp(0.5 * t2);
    const double corr = t2 * t2 * kPi * kPi / (48.0 * ef2.lo * ef2.lo);
    const double lo = std::exp(0.5 * t2 - corr);
    return Bracket(next_down(lo), next_up(hi));
}

Bracket h_of_t(const SigmaPoint& sigma, double t, double tol,
               const SeriesLimits& limits) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw Error(ErrorKind::argument, "h(t) is evaluated for t >= 0");
    }
    if (!(tol > 0.0)) {
        throw Error(ErrorKind::argument, "tolerance must be positive");
    }
    if (t == 0.0) return Bracket(0.0, 0.0);
    const Bracket ef2 = variance(sigma, limits.rel_width_tol, limits).value;
    const double norm = std::sqrt(ef2.mid());
    std::uint64_t M = h_cutoff(sigma.sigma(), norm, t, tol, limits.term_budget);
    for (int round = 0; round < 8; ++round) {
        const HEvalContext ctx = make_h_context(sigma, norm, M);
        const Bracket h = h_eval(ctx, t);
        if (h.width() <= 2.0 * tol) return h;
        if (M >= limits.term_budget) {
            throw Error(ErrorKind::budget,
                        "h(t) bracket cannot reach the requested tolerance "
                        "within the term budget");
        }
        M = std::min<std::uint64_t>(M * 4, limits.term_budget);
    }
    throw Error(ErrorKind::budget, "h(t) bracket failed to converge");
}

double TiltedModel::theta(std::uint64_t n) const {
    return t0 * std::pow(static_cast<double>(n), -sigma.sigma()) / norm;
}

TiltedModel solve_t0(const SigmaPoint& sigma, double target, double tol,
                     const SeriesLimits& limits) {
    if (!(target >= 0.0) || !std::isfinite(target)) {
        throw Error(ErrorKind::argument, "tilt target must be finite and >= 0");
    }
    const Bracket ef2 = variance(sigma, limits.rel_width_tol, limits).value;
    const double norm = std::sqrt(ef2.mid());
    TiltedModel model;
    model.sigma = sigma;
    model.norm = norm;
    model.target = target;
    if (target == 0.0) {
        model.t0 = 0.0;
        model.residual = 0.0;
        return model;
    }
    // Solvable region: target < (2/3) * (2/pi) * ef2.lo ensures h reaches the
    // target before t = 1.5*target (and the tilt stays in the contractive
    // regime).
    const double cap = (4.0 / (3.0 * kPi)) * ef2.lo;
    if (!(target < cap)) {
        throw Error(ErrorKind::domain,
                    "tilt target too large: " + std::to_string(target) +
                        " >= " + std::to_string(cap) +
                        " = (4/(3*pi)) * E F^2 lower bound");
    }
    const double tol_eff = tol > 0.0 ? tol : 1e-10 * std::max(1.0, target);

    const std::uint64_t M =
        h_cutoff(sigma.sigma(), norm, 1.5 * target, 0.25 * tol_eff, limits.term_budget);
    const HEvalContext ctx = make_h_context(sigma, norm, M);

    double lo = target;       // h(lo) <= lo = target since h(t) <= t
    double hi = 1.5 * target; // h(hi) >= target inside the solvable region
    const Bracket h_hi = h_eval(ctx, hi);
    if (h_hi.hi < target) {
        throw Error(ErrorKind::domain,
                    "tilt bracket failed: h(1.5*target) certified below target");
    }
    double mid = lo;
    Bracket h_mid(0.0, 0.0);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        h_mid = h_eval(ctx, mid);
        if (h_mid.hi < target) {
            lo = mid;
        } else if (h_mid.lo > target) {
            hi = mid;
        } else {
            break; // target inside the bracket: cannot resolve further
        }
        if (hi - lo <= tol_eff) {
            mid = 0.5 * (lo + hi);
            h_mid = h_eval(ctx, mid);
            break;
        }
    }
    model.t0 = mid;
    // |h(t0) - target| <= max over the final bracket, plus the interval width
    // |t - t*| <= hi - lo carried through |h'| <= 1.
    const double res_br =
        std::max(std::abs(h_mid.hi - target), std::abs(target - h_mid.lo));
    model.residual = std::min(res_br, (hi - lo) + h_mid.width());
    return model;
}

double ld_lower_bound(double delta, double f, double lambda, double eps) {
    if (!(delta > 0.0) || !(f > 0.0) || !(lambda >= 0.0)) {
        throw Error(ErrorKind::argument,
                    "lower-deviation bound needs delta > 0, f > 0, lambda >= 0");
    }
    if (!(eps > 0.0) || !(eps < 0.5)) {
        throw Error(ErrorKind::argument, "eps must lie in (0, 1/2)");
    }
    const double df = delta * (1.0 + lambda) * f;
    return (0.5 - eps) * std::exp(-0.5 * df * df);
}

ExponentReport ld_exponent(double gamma, double lambda, double delta) {
    if (!(gamma >= 0.0) || !(gamma < 1.0) || !(lambda >= 0.0) || !(lambda < 1.0) ||
        !(delta >= 0.0) || !(delta < 1.0)) {
        throw Error(ErrorKind::argument,
                    "exponent parameters must satisfy gamma,lambda,delta in [0,1)");
    }
    ExponentReport rep;
    const double a = (1.0 - gamma) * (1.0 + lambda);
    rep.value = a * a * (1.0 + delta);
    rep.diverges = rep.value <= 1.0;
    return rep;
}

} // namespace dirichlet
