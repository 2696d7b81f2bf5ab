// Tilted sampling and the importance-sampled tail estimator.
//
// The estimator streams terms in the same fixed chunk/lane structure as
// the plain evaluation kernel; the only difference is where signs come
// from: per (path, n) a counter-based uniform is compared against the
// tilted head probability p_n = P(X_n = +1), shared across paths via a
// per-chunk threshold table.  The likelihood ratio needs no per-term
// pass: since theta_n = (t0/norm) * n^-sigma,
//     log dP/dQ = sum_n log cosh theta_n  -  t0 * value,
// with value the normalized series sum — an affine function of the
// statistic itself.  The constant is accumulated once per model.

#include "dirichlet/tilted.hpp"

#include <algorithm>
#include <barrier>
#include <bit>
#include <cmath>
#include <thread>

#include "dirichlet/errors.hpp"
#include "dirichlet/series.hpp"
#include "dirichlet/sign_path.hpp"
#include "dirichlet/summation.hpp"

namespace dirichlet {

namespace {

// log cosh x, stable for large |x|.
double log_cosh(double x) {
    const double ax = std::abs(x);
    return ax + std::log1p(std::exp(-2.0 * ax)) - 0.6931471805599453094;
}

// sum_{n<=M} log cosh theta_n (deterministic serial pass).
double log_cosh_sum(const TiltedModel& model, std::uint64_t M) {
    KahanAccumulator acc;
    const double s = model.sigma.sigma();
    const double c = model.t0 / model.norm;
    for (std::uint64_t n = 1; n <= M; ++n) {
        acc.add(log_cosh(c * std::pow(double(n), -s)));
    }
    return acc.value();
}

// One path's signed chunk sum with signs drawn from uniforms vs the
// threshold table; identical lane structure to the plain kernel.
double tilted_chunk_sum(std::uint64_t seed, std::uint64_t first_n,
                        const double* terms, const double* thresh,
                        std::uint64_t padded) {
    double lanes[8] = {};
    const std::uint64_t nwords = padded >> 6;
    for (std::uint64_t w = 0; w < nwords; ++w) {
        const std::uint64_t base = w << 6;
        for (int g = 0; g < 8; ++g) {
            for (int j = 0; j < 8; ++j) {
                const std::uint64_t k = base + 8 * g + j;
                const double u = counter_uniform(seed, first_n + k);
                // u < p_plus  => sign +1; padded terms are zero either way.
                const std::uint64_t flip = std::uint64_t(u >= thresh[k]) << 63;
                lanes[j] +=
                    std::bit_cast<double>(std::bit_cast<std::uint64_t>(terms[k]) ^ flip);
            }
        }
    }
    return reduce_lanes8(lanes);
}

} // namespace

double tilt_prob(const TiltedModel& model, std::uint64_t n) {
    if (n < 1) throw Error(ErrorKind::argument, "index n must be >= 1");
    // exp(theta) / (2 cosh theta) in the overflow-free form.
    return 1.0 / (1.0 + std::exp(-2.0 * model.theta(n)));
}

TiltedPath sample_tilted(const TiltedModel& model, std::uint64_t M,
                         std::uint64_t seed) {
    if (M < 1) throw Error(ErrorKind::argument, "sample_tilted needs M >= 1");
    TiltedPath path;
    path.sign_words.assign((M + 63) / 64, 0);
    KahanAccumulator raw, lr;
    const double s = model.sigma.sigma();
    for (std::uint64_t n = 1; n <= M; ++n) {
        const double term = std::pow(double(n), -s);
        const double theta = (model.t0 / model.norm) * term;
        const double p_plus = 1.0 / (1.0 + std::exp(-2.0 * theta));
        const bool plus = counter_uniform(seed, n) < p_plus;
        if (!plus) path.sign_words[(n - 1) >> 6] |= std::uint64_t(1) << ((n - 1) & 63);
        raw.add(plus ? term : -term);
        lr.add(log_cosh(theta) - (plus ? theta : -theta));
    }
    path.value = raw.value() / model.norm;
    path.log_lr = lr.value();
    return path;
}

TailEstimate estimate_tail(const TiltedModel& model, double a,
                           std::uint64_t n_paths, std::uint64_t M,
                           std::uint64_t seed, int workers, bool keep_paths) {
    if (n_paths < 2) throw Error(ErrorKind::argument, "need at least 2 paths");
    if (M < 1) throw Error(ErrorKind::argument, "estimate_tail needs M >= 1");
    if (workers < 1) throw Error(ErrorKind::argument, "workers must be >= 1");
    if (!std::isfinite(a)) throw Error(ErrorKind::argument, "threshold must be finite");

    const double logC = log_cosh_sum(model, M);
    const double s = model.sigma.sigma();
    const double cth = model.t0 / model.norm;

    std::vector<KahanAccumulator> acc(n_paths);
    std::vector<double> terms(kChunkTerms), thresh(kChunkTerms);
    const std::uint64_t nchunks = (M + kChunkTerms - 1) / kChunkTerms;

    auto fill_tables = [&](std::uint64_t c, std::uint64_t t_lo, std::uint64_t t_hi) {
        const std::uint64_t first_n = c * kChunkTerms + 1;
        const std::uint64_t count =
            std::min<std::uint64_t>(kChunkTerms, M - c * kChunkTerms);
        const std::uint64_t fill_hi = std::min(t_hi, count);
        if (t_lo < fill_hi)
            fill_power_terms(terms.data() + t_lo, first_n + t_lo, fill_hi - t_lo, s);
        for (std::uint64_t j = t_lo; j < fill_hi; ++j)
            thresh[j] = 1.0 / (1.0 + std::exp(-2.0 * cth * terms[j]));
        for (std::uint64_t j = std::max(t_lo, count); j < t_hi; ++j) {
            terms[j] = 0.0;
            thresh[j] = 0.5;
        }
    };

    auto run_range = [&](std::uint64_t c, std::size_t p_lo, std::size_t p_hi) {
        const std::uint64_t first_n = c * kChunkTerms + 1;
        const std::uint64_t count =
            std::min<std::uint64_t>(kChunkTerms, M - c * kChunkTerms);
        const std::uint64_t padded = (count + 63) & ~std::uint64_t(63);
        for (std::size_t p = p_lo; p < p_hi; ++p) {
            acc[p].add(tilted_chunk_sum(path_seed(seed, p), first_n, terms.data(),
                                        thresh.data(), padded));
        }
    };

    if (workers == 1 || n_paths == 1) {
        for (std::uint64_t c = 0; c < nchunks; ++c) {
            const std::uint64_t count =
                std::min<std::uint64_t>(kChunkTerms, M - c * kChunkTerms);
            const std::uint64_t padded = (count + 63) & ~std::uint64_t(63);
            fill_tables(c, 0, padded);
            run_range(c, 0, n_paths);
        }
    } else {
        const int W = std::min<int>(workers, 64);
        std::barrier sync(W);
        auto worker = [&](int w) {
            for (std::uint64_t c = 0; c < nchunks; ++c) {
                const std::uint64_t count =
                    std::min<std::uint64_t>(kChunkTerms, M - c * kChunkTerms);
                const std::uint64_t padded = (count + 63) & ~std::uint64_t(63);
                fill_tables(c, padded * w / W, padded * (w + 1) / W);
                sync.arrive_and_wait();
                run_range(c, n_paths * std::uint64_t(w) / W,
                          n_paths * std::uint64_t(w + 1) / W);
                sync.arrive_and_wait();
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(W - 1);
        for (int w = 1; w < W; ++w) pool.emplace_back(worker, w);
        worker(0);
        for (auto& th : pool) th.join();
    }

    TailEstimate est;
    est.threshold = a;
    est.n_paths = n_paths;
    est.M = M;
    est.warn_target_mismatch =
        std::abs(a - model.target) > 0.3 * std::max({1.0, std::abs(a), model.target});

    // Statistics in a fixed serial pass (worker-count independent).
    KahanAccumulator sum_x, sum_w, sum_w2, sum_v;
    std::uint64_t hits = 0;
    std::vector<double> xs(n_paths);
    if (keep_paths) {
        est.values.resize(n_paths);
        est.log_lr.resize(n_paths);
    }
    for (std::size_t p = 0; p < n_paths; ++p) {
        const double value = acc[p].value() / model.norm;
        const double llr = logC - model.t0 * value;
        const double w = std::exp(llr);
        const bool hit = value >= a;
        const double x = hit ? w : 0.0;
        xs[p] = x;
        hits += hit;
        sum_x.add(x);
        sum_w.add(w);
        sum_w2.add(w * w);
        sum_v.add(value);
        if (keep_paths) {
            est.values[p] = value;
            est.log_lr[p] = llr;
        }
    }
    est.hits = hits;
    est.p_hat = sum_x.value() / double(n_paths);
    est.mean_value = sum_v.value() / double(n_paths);
    KahanAccumulator ss;
    for (std::size_t p = 0; p < n_paths; ++p) {
        const double d = xs[p] - est.p_hat;
        ss.add(d * d);
    }
    est.std_err = std::sqrt(ss.value() / (double(n_paths) * double(n_paths - 1)));
    const double w2 = sum_w2.value();
    est.ess = w2 > 0.0 ? sum_w.value() * sum_w.value() / w2 : 0.0;
    est.warn_low_ess = est.ess < 50.0;
    est.warn_degenerate = hits == 0;
    return est;
}

} // namespace dirichlet
