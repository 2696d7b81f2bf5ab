// series-core implementation: bracketed zeta sums, truncation planning,
// and the deterministic streaming evaluation kernels.
#include "dirichlet/series.hpp"

#include <algorithm>
#include <barrier>
#include <bit>
#include <cmath>
#include <cstring>
#include <thread>

#include "dirichlet/errors.hpp"
#include "dirichlet/summation.hpp"

#if defined(__AVX512F__) && defined(__AVX512DQ__)
#define DIRICHLET_KERNEL_AVX512 1
#include <immintrin.h>
#endif

namespace dirichlet {

namespace {

// Relative slack covering compensated-summation error (<= 2 eps per the
// Kahan bound for same-sign terms) plus per-term pow rounding (~0.5 ulp
// each); 4e-15 is a 5-7x margin over both combined.
constexpr double kSumSlackRel = 4e-15;

// ------------------------------------------------------------------ kernels

// Signed chunk accumulation for a compile-time block of B paths sharing
// one term table.  `count` must be a multiple of 64 and `first_n`
// 64-aligned plus one; the caller zero-pads the final chunk (adding a
// signed zero is exact, so padding never changes a lane).
//
// Per path the operation order is fixed — word-ascending, 8 round-robin
// lanes — and independent of B, so blocked and unblocked evaluation of
// the same path are bit-identical.
template <int B>
void signed_chunk_sums(const SignPath* paths, std::uint64_t first_n,
                       const double* terms, std::uint64_t count, double* out) {
    const std::uint64_t block0 = (first_n - 1) >> 6;
    const std::uint64_t nwords = count >> 6;
    double lanes[B][8] = {};
    for (std::uint64_t w = 0; w < nwords; ++w) {
        std::uint64_t words[B];
        for (int b = 0; b < B; ++b) words[b] = paths[b].sign_word(block0 + w);
        const double* t = terms + (w << 6);
        for (int g = 0; g < 8; ++g) {
            for (int j = 0; j < 8; ++j) {
                const int k = 8 * g + j;
                const std::uint64_t bits = std::bit_cast<std::uint64_t>(t[k]);
                for (int b = 0; b < B; ++b) {
                    const std::uint64_t flip = ((words[b] >> k) & 1u) << 63;
                    lanes[b][j] += std::bit_cast<double>(bits ^ flip);
                }
            }
        }
    }
    for (int b = 0; b < B; ++b) out[b] = reduce_lanes8(lanes[b]);
}

#ifdef DIRICHLET_KERNEL_AVX512

// Elementwise SplitMix64 finalizer on eight lanes; same arithmetic as
// detail::mix64, so the generated words match the scalar path bit for bit.
inline __m512i mix64x8(__m512i x) {
    x = _mm512_xor_si512(x, _mm512_srli_epi64(x, 30));
    x = _mm512_mullo_epi64(
        x, _mm512_set1_epi64(std::int64_t(0xbf58476d1ce4e5b9ULL)));
    x = _mm512_xor_si512(x, _mm512_srli_epi64(x, 27));
    x = _mm512_mullo_epi64(
        x, _mm512_set1_epi64(std::int64_t(0x94d049bb133111ebULL)));
    x = _mm512_xor_si512(x, _mm512_srli_epi64(x, 31));
    return x;
}

// Sign words for blocks [block0, block0 + nwords), eight counters per
// mixer call; non-default generators take the scalar path.
void fill_sign_words(const SignPath& path, std::uint64_t block0,
                     std::uint64_t nwords, std::uint64_t* words) {
    if (path.generator_id != SignGenerator::splitmix_v1) {
        for (std::uint64_t w = 0; w < nwords; ++w)
            words[w] = path.sign_word(block0 + w);
        return;
    }
    const std::uint64_t tag1 =
        std::uint64_t(static_cast<std::uint32_t>(path.generator_id)) + 1;
    const std::uint64_t base = path.seed + 0x632be59bd9b4e019ULL * tag1;
    const __m512i weyl = _mm512_set1_epi64(std::int64_t(0x9e3779b97f4a7c15ULL));
    const __m512i idx = _mm512_setr_epi64(1, 2, 3, 4, 5, 6, 7, 8);
    std::uint64_t w = 0;
    for (; w + 8 <= nwords; w += 8) {
        const __m512i c1 =
            _mm512_add_epi64(_mm512_set1_epi64(std::int64_t(block0 + w)), idx);
        const __m512i z = _mm512_add_epi64(_mm512_set1_epi64(std::int64_t(base)),
                                           _mm512_mullo_epi64(c1, weyl));
        _mm512_storeu_si512(words + w, mix64x8(z));
    }
    for (; w < nwords; ++w) words[w] = path.sign_word(block0 + w);
}

// Vector form of signed_chunk_sums: one 512-bit register carries the 8
// lanes of one path, a mask-xor applies the 8 sign bits of a group, and
// one vector add advances every lane.  Adds hit each lane in the same
// order as the scalar kernel, so results are bit-identical.
template <int B>
void signed_chunk_sums_avx512(const SignPath* paths, std::uint64_t first_n,
                              const double* terms, std::uint64_t count,
                              double* out) {
    const std::uint64_t block0 = (first_n - 1) >> 6;
    const std::uint64_t nwords = count >> 6;
    std::uint64_t words[B][kChunkTerms / 64];
    for (int b = 0; b < B; ++b)
        fill_sign_words(paths[b], block0, nwords, words[b]);
    const __m512i sign_bit =
        _mm512_set1_epi64(std::int64_t(0x8000000000000000ULL));
    __m512d lanes[B];
    for (int b = 0; b < B; ++b) lanes[b] = _mm512_setzero_pd();
    for (std::uint64_t w = 0; w < nwords; ++w) {
        const double* t = terms + (w << 6);
        for (int g = 0; g < 8; ++g) {
            const __m512i tv = _mm512_loadu_si512(t + 8 * g);
            for (int b = 0; b < B; ++b) {
                const __mmask8 m = __mmask8(words[b][w] >> (8 * g));
                const __m512i sv = _mm512_mask_xor_epi64(tv, m, tv, sign_bit);
                lanes[b] = _mm512_add_pd(lanes[b], _mm512_castsi512_pd(sv));
            }
        }
    }
    for (int b = 0; b < B; ++b) {
        alignas(64) double l[8];
        _mm512_store_pd(l, lanes[b]);
        out[b] = reduce_lanes8(l);
    }
}

#endif // DIRICHLET_KERNEL_AVX512

// One worker's share of paths for one chunk, blocked 4/2/1.
void accumulate_paths(const SignPath* paths, KahanAccumulator* acc,
                      std::size_t p_begin, std::size_t p_end,
                      std::uint64_t first_n, const double* terms,
                      std::uint64_t padded_count) {
#ifdef DIRICHLET_KERNEL_AVX512
    constexpr auto sums4 = signed_chunk_sums_avx512<4>;
    constexpr auto sums2 = signed_chunk_sums_avx512<2>;
    constexpr auto sums1 = signed_chunk_sums_avx512<1>;
#else
    constexpr auto sums4 = signed_chunk_sums<4>;
    constexpr auto sums2 = signed_chunk_sums<2>;
    constexpr auto sums1 = signed_chunk_sums<1>;
#endif
    std::size_t p = p_begin;
    double sums[4];
    for (; p + 4 <= p_end; p += 4) {
        sums4(paths + p, first_n, terms, padded_count, sums);
        for (int b = 0; b < 4; ++b) acc[p + b].add(sums[b]);
    }
    for (; p + 2 <= p_end; p += 2) {
        sums2(paths + p, first_n, terms, padded_count, sums);
        for (int b = 0; b < 2; ++b) acc[p + b].add(sums[b]);
    }
    for (; p < p_end; ++p) {
        sums1(paths + p, first_n, terms, padded_count, sums);
        acc[p].add(sums[0]);
    }
}

std::uint64_t round_up64(std::uint64_t x) { return (x + 63) & ~std::uint64_t(63); }

// Positive-term compensated sum of n^(-s) [optionally * log^2 n] over
// n in [1, M], returned as an enclosure with the rounding slack above.
Bracket positive_sum_bracket(double s, std::uint64_t M, bool log_sq_weight) {
    KahanAccumulator acc;
    for (std::uint64_t n = 1; n <= M; ++n) {
        double term = std::pow(double(n), -s);
        if (log_sq_weight) {
            double ln = std::log(double(n));
            term *= ln * ln;
        }
        acc.add(term);
    }
    double v = acc.value();
    return Bracket::with_slack(v, kSumSlackRel * v);
}

} // namespace

void fill_power_terms(double* terms, std::uint64_t first_n, std::uint64_t count,
                      double sigma_value) {
    for (std::uint64_t j = 0; j < count; ++j)
        terms[j] = std::pow(double(first_n + j), -sigma_value);
}

// ---------------------------------------------------------------- eval_many

namespace {

// Signed sweep over n in [first, last], chunk grid anchored at `first`
// (which must be 64-aligned plus one so sign words line up with the
// term tables).  Per-path arithmetic is identical for every worker count.
void sweep_signed(const std::vector<SignPath>& paths,
                  std::vector<KahanAccumulator>& acc, double s,
                  std::uint64_t first, std::uint64_t last, int workers) {
    const std::size_t P = paths.size();
    if (P == 0 || last < first) return;
    const std::uint64_t total = last - first + 1;
    const std::uint64_t nchunks = (total + kChunkTerms - 1) / kChunkTerms;
    std::vector<double> terms(kChunkTerms);

    auto chunk_extent = [&](std::uint64_t c, std::uint64_t& first_n,
                            std::uint64_t& count, std::uint64_t& padded) {
        first_n = first + c * kChunkTerms;
        count = std::min<std::uint64_t>(kChunkTerms, total - c * kChunkTerms);
        padded = round_up64(count);
    };

    if (workers == 1 || P == 1) {
        for (std::uint64_t c = 0; c < nchunks; ++c) {
            std::uint64_t first_n, count, padded;
            chunk_extent(c, first_n, count, padded);
            fill_power_terms(terms.data(), first_n, count, s);
            std::fill(terms.begin() + count, terms.begin() + padded, 0.0);
            accumulate_paths(paths.data(), acc.data(), 0, P, first_n,
                             terms.data(), padded);
        }
        return;
    }
    const int W = std::min<int>(workers, 64);
    std::barrier sync(W);
    auto worker = [&](int w) {
        for (std::uint64_t c = 0; c < nchunks; ++c) {
            std::uint64_t first_n, count, padded;
            chunk_extent(c, first_n, count, padded);
            // Cooperative term fill (values independent of the split).
            std::uint64_t t_lo = padded * w / W, t_hi = padded * (w + 1) / W;
            std::uint64_t fill_hi = std::min(t_hi, count);
            if (t_lo < fill_hi)
                fill_power_terms(terms.data() + t_lo, first_n + t_lo,
                                 fill_hi - t_lo, s);
            for (std::uint64_t j = std::max(t_lo, count); j < t_hi; ++j)
                terms[j] = 0.0;
            sync.arrive_and_wait();
            // Fixed path stripes; per-path math identical for any W.
            std::size_t p_lo = P * std::size_t(w) / W;
            std::size_t p_hi = P * std::size_t(w + 1) / W;
            accumulate_paths(paths.data(), acc.data(), p_lo, p_hi, first_n,
                             terms.data(), padded);
            sync.arrive_and_wait();
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(W - 1);
    for (int w = 1; w < W; ++w) pool.emplace_back(worker, w);
    worker(0);
    for (auto& th : pool) th.join();
}

} // namespace

std::vector<double> eval_many(const std::vector<SignPath>& paths,
                              const SigmaPoint& sigma, std::uint64_t M,
                              int workers) {
    if (M < 1) throw Error(ErrorKind::argument, "eval_many needs M >= 1");
    if (workers < 1) throw Error(ErrorKind::argument, "workers must be >= 1");
    const std::size_t P = paths.size();
    std::vector<KahanAccumulator> acc(P);
    if (P == 0) return {};
    sweep_signed(paths, acc, sigma.sigma(), 1, M, workers);
    std::vector<double> out(P);
    for (std::size_t p = 0; p < P; ++p) out[p] = acc[p].value();
    return out;
}

std::vector<double> eval_range_many(const std::vector<SignPath>& paths,
                                    const SigmaPoint& sigma,
                                    std::uint64_t n_first, std::uint64_t n_last,
                                    int workers) {
    if (n_first < 1 || n_last < n_first)
        throw Error(ErrorKind::argument, "eval_range_many needs 1 <= n_first <= n_last");
    if (workers < 1) throw Error(ErrorKind::argument, "workers must be >= 1");
    const std::size_t P = paths.size();
    std::vector<KahanAccumulator> acc(P);
    if (P == 0) return {};
    const double s = sigma.sigma();

    // Scalar head up to the next 64-aligned index, so the word-parallel
    // sweep below can reuse whole sign words; done identically for every
    // worker count (it is at most 63 terms).
    std::uint64_t aligned = n_first;
    while (aligned <= n_last && ((aligned - 1) & 63) != 0) ++aligned;
    if (n_first < aligned) {
        std::vector<double> head_terms;
        for (std::uint64_t n = n_first; n < aligned && n <= n_last; ++n)
            head_terms.push_back(std::pow(double(n), -s));
        for (std::size_t p = 0; p < P; ++p) {
            double h = 0.0;
            std::uint64_t n = n_first;
            for (double t : head_terms) {
                h += paths[p].sign(n) > 0 ? t : -t;
                ++n;
            }
            acc[p].add(h);
        }
    }
    if (aligned <= n_last) sweep_signed(paths, acc, s, aligned, n_last, workers);
    std::vector<double> out(P);
    for (std::size_t p = 0; p < P; ++p) out[p] = acc[p].value();
    return out;
}

EvalResult eval_truncated(const SignPath& path, const SigmaPoint& sigma,
                          const TruncationPlan& plan) {
    if (plan.sigma_u != sigma.u())
        throw Error(ErrorKind::argument, "truncation plan built for a different sigma");
    std::vector<SignPath> one{path};
    EvalResult r;
    r.value = eval_many(one, sigma, plan.M, 1)[0];
    r.plan = plan;
    r.sigma_u = sigma.u();
    return r;
}

// ------------------------------------------------------------- zeta bracket

ZetaBrackets zeta_bracket(double s, std::uint64_t M, const SeriesLimits& limits) {
    if (!(s > 1.0)) throw Error(ErrorKind::domain, "divergent zeta: need s > 1");
    if (M < 1) throw Error(ErrorKind::argument, "zeta_bracket needs M >= 1");
    if (M > limits.term_budget)
        throw Error(ErrorKind::budget, "zeta_bracket partial sum exceeds term budget");

    ZetaBrackets zb;
    zb.M = M;
    zb.partial = positive_sum_bracket(s, M, false);
    // Integral comparison: (M+1)^(1-s)/(s-1) <= tail <= M^(1-s)/(s-1).
    double um = s - 1.0;
    double t_lo = std::pow(double(M) + 1.0, -um) / um;
    double t_hi = std::pow(double(M), -um) / um;
    zb.tail = Bracket(next_down(t_lo * (1.0 - 4e-16)), next_up(t_hi * (1.0 + 4e-16)));
    zb.total = zb.partial + zb.tail;
    return zb;
}

VarianceBracket variance(const SigmaPoint& sigma, double rel_tol,
                         const SeriesLimits& limits) {
    const double s = sigma.two_sigma();
    // Bracket width is dominated by the tail sandwich, whose width is
    // about one term M^(-s); start from the log-space solve and grow.
    double est_total = 1.0 / sigma.u() + 0.6;
    double log_m0 = -std::log(rel_tol * est_total) / s;
    std::uint64_t M = 64;
    if (log_m0 > std::log(double(limits.term_budget)))
        M = limits.term_budget;
    else if (log_m0 > std::log(64.0))
        M = std::uint64_t(std::exp(log_m0)) + 1;

    VarianceBracket vb;
    for (int iter = 0; iter < 12; ++iter) {
        ZetaBrackets zb = zeta_bracket(s, M, limits);
        vb.value = zb.total;
        vb.M = M;
        if (vb.value.rel_width() <= rel_tol) {
            vb.loose = false;
            return vb;
        }
        if (M >= limits.term_budget) break;
        M = std::min<std::uint64_t>(limits.term_budget, M * 4);
    }
    vb.loose = true;
    return vb;
}

VarianceBracket variance(const SigmaPoint& sigma, const SeriesLimits& limits) {
    return variance(sigma, limits.rel_width_tol, limits);
}

DerivVarianceBracket deriv_variance_bracket(const SigmaPoint& sigma,
                                            const SeriesLimits& limits) {
    const double s = sigma.two_sigma();
    const double u = sigma.u();

    // Tail integral: int_M^inf x^(-s) log^2 x dx, closed form.
    auto tail_integral = [&](double m) {
        double lm = std::log(m);
        double um = s - 1.0;
        return std::pow(m, -um) / um * (lm * lm + 2.0 * lm / um + 2.0 / (um * um));
    };

    // x^(-s) log^2 x decreases once log x > 2/s; M >= 16 > e^2 covers all
    // s > 1, making the integral sandwich valid.
    const double est = 2.0 / (u * u * u);
    double log_m0 = 0.0;
    {
        // width ~ f(M) = M^(-s) log^2 M; solve crudely then grow.
        double target = limits.rel_width_tol * est;
        double lm = 2.0;
        for (int i = 0; i < 40; ++i)
            lm = (-std::log(target) + 2.0 * std::log(std::max(lm, 1.0))) / s;
        log_m0 = lm;
    }
    std::uint64_t M = 16;
    if (log_m0 > std::log(double(limits.term_budget)))
        M = limits.term_budget;
    else if (log_m0 > std::log(16.0))
        M = std::uint64_t(std::exp(log_m0)) + 1;

    DerivVarianceBracket out;
    for (int iter = 0; iter < 12; ++iter) {
        Bracket partial = positive_sum_bracket(s, M, true);
        double t_lo = tail_integral(double(M) + 1.0);
        double t_hi = tail_integral(double(M));
        Bracket tail(next_down(t_lo * (1.0 - 4e-15)), next_up(t_hi * (1.0 + 4e-15)));
        out.value = partial + tail;
        out.M = M;
        if (out.value.rel_width() <= limits.rel_width_tol || M >= limits.term_budget)
            break;
        M = std::min<std::uint64_t>(limits.term_budget, M * 4);
    }
    out.closed_form_2_over_u3 = est;
    out.certified_ratio_hi = out.value.hi / est;
    return out;
}

// -------------------------------------------------------------- truncation

TruncationPlan plan_truncation(const SigmaPoint& sigma, double target_fraction,
                               std::uint64_t term_budget,
                               const SeriesLimits& limits) {
    if (!(target_fraction > 0.0 && target_fraction < 1.0))
        throw Error(ErrorKind::argument, "target_fraction must lie in (0,1)");
    if (term_budget < 1)
        throw Error(ErrorKind::argument, "term budget must be >= 1");

    const double u = sigma.u();
    VarianceBracket var = variance(sigma, limits);
    const double target = target_fraction * var.value.lo;

    // Certified tail variance bound after M terms, by integral
    // comparison: sum_{n>M} n^(-2 sigma) <= M^(-u)/u.
    auto tail_bound = [&](double m) { return next_up(std::pow(m, -u) / u); };

    TruncationPlan plan;
    plan.target_fraction = target_fraction;
    plan.sigma_u = u;
    // Log-space solve: log M >= log(1/(u * fraction * var.lo)) / u.
    const double x = u * target;
    plan.required_log_M = x >= 1.0 ? 0.0 : -std::log(x) / u;

    std::uint64_t M;
    if (plan.required_log_M > std::log(double(term_budget)) + 1e-12) {
        plan.M = term_budget;
        plan.feasible = false;
        double tb = tail_bound(double(plan.M));
        plan.tail_std_bound = std::sqrt(tb);
        plan.achieved_fraction = tb / var.value.lo;
        return plan;
    }
    M = std::max<std::uint64_t>(1, std::uint64_t(std::exp(plan.required_log_M)));
    // The exp/ceil above can be off by one either way; settle it exactly.
    while (M > 1 && tail_bound(double(M - 1)) <= target) --M;
    while (tail_bound(double(M)) > target) ++M;

    if (M > term_budget) {
        plan.M = term_budget;
        plan.feasible = false;
    } else {
        plan.M = M;
        plan.feasible = true;
    }
    double tb = tail_bound(double(plan.M));
    plan.tail_std_bound = std::sqrt(tb);
    plan.achieved_fraction = tb / var.value.lo;
    return plan;
}

// ------------------------------------------------------------- normalizers

LilScale lil_scale(const SigmaPoint& sigma, const SeriesLimits& limits) {
    VarianceBracket var = variance(sigma, limits);
    constexpr double kE = 2.718281828459045235;
    if (!(var.value.lo > kE))
        throw Error(ErrorKind::domain,
                    "loglog undefined: variance bracket must exceed e (use smaller u)");
    LilScale ls;
    ls.ef2 = var.value;
    Bracket loglog = log(log(var.value));
    ls.f = sqrt(2.0 * loglog);
    ls.denom = sqrt(2.0 * (var.value * loglog));
    return ls;
}

double normalize(const EvalResult& r, const Bracket& variance_bracket) {
    return r.value / std::sqrt(variance_bracket.mid());
}

double normalize(const EvalResult& r, const SeriesLimits& limits) {
    VarianceBracket var = variance(SigmaPoint::from_u(r.sigma_u), limits);
    return normalize(r, var.value);
}

} // namespace dirichlet
