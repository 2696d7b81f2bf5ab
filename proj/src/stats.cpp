#include "dirichlet/stats.hpp"

#include <algorithm>
#include <cmath>

#include "dirichlet/errors.hpp"
#include "dirichlet/summation.hpp"

namespace dirichlet {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

Moments sample_moments(const std::vector<double>& xs) {
    Moments m;
    m.n = xs.size();
    if (m.n == 0) return m;
    KahanAccumulator s;
    for (double x : xs) s.add(x);
    m.mean = s.value() / double(m.n);
    if (m.n < 2) return m;
    KahanAccumulator s2, s4;
    for (double x : xs) {
        const double d = x - m.mean;
        s2.add(d * d);
        s4.add(d * d * d * d);
    }
    m.variance = s2.value() / double(m.n - 1);
    m.m4 = s4.value() / double(m.n);
    return m;
}

double ks_normal_distance(std::vector<double> xs) {
    if (xs.empty()) throw Error(ErrorKind::argument, "KS distance of empty sample");
    std::sort(xs.begin(), xs.end());
    const double n = double(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double phi = normal_cdf(xs[i]);
        d = std::max(d, std::abs(double(i + 1) / n - phi));
        d = std::max(d, std::abs(phi - double(i) / n));
    }
    return d;
}

double sample_correlation(const std::vector<double>& xs,
                          const std::vector<double>& ys) {
    if (xs.size() != ys.size())
        throw Error(ErrorKind::argument, "correlation needs equal-length samples");
    if (xs.size() < 2) return 0.0;
    const Moments mx = sample_moments(xs);
    const Moments my = sample_moments(ys);
    if (!(mx.variance > 0.0) || !(my.variance > 0.0)) return 0.0;
    KahanAccumulator cov;
    for (std::size_t i = 0; i < xs.size(); ++i)
        cov.add((xs[i] - mx.mean) * (ys[i] - my.mean));
    const double c = cov.value() / double(xs.size() - 1);
    return c / std::sqrt(mx.variance * my.variance);
}

double sample_quantile(std::vector<double> xs, double q) {
    if (xs.empty()) throw Error(ErrorKind::argument, "quantile of empty sample");
    if (!(q >= 0.0 && q <= 1.0))
        throw Error(ErrorKind::argument, "quantile level must lie in [0,1]");
    std::sort(xs.begin(), xs.end());
    const double pos = q * double(xs.size() - 1);
    const std::size_t lo = std::size_t(pos);
    if (lo + 1 >= xs.size()) return xs.back();
    const double frac = pos - double(lo);
    return xs[lo] + frac * (xs[lo + 1] - xs[lo]);
}

} // namespace dirichlet
