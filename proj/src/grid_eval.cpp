// Grid evaluation kernel: 65-ish sigma points per pass over the shared
// sign stream.  Points are processed in groups of 8; each group keeps an
// exact power table at its head exponent and reaches the other seven
// points by per-term ratio multiplications, so the whole grid costs about
// two flops per (path, term, point) instead of a pow call each.

#include "dirichlet/grid_eval.hpp"

#include <algorithm>
#include <barrier>
#include <bit>
#include <cmath>
#include <thread>

#include "dirichlet/errors.hpp"
#include "dirichlet/series.hpp"
#include "dirichlet/summation.hpp"

namespace dirichlet {

namespace {

// One path, one chunk: accumulate all grid columns into lanes[q][8].
// Lane structure (8 round-robin lanes per column, words ascending) matches
// the single-sigma kernel, so group-head columns are bit-identical to it.
void grid_chunk_sums(const SignPath& path, std::uint64_t first_n,
                     const std::vector<std::vector<double>>& bases,
                     const std::vector<double>& ratio, std::uint64_t padded,
                     int npts, double* lanes /* npts*8, zeroed */) {
    const std::uint64_t block0 = (first_n - 1) >> 6;
    const std::uint64_t nwords = padded >> 6;
    const int ngroups = static_cast<int>(bases.size());
    for (std::uint64_t w = 0; w < nwords; ++w) {
        const std::uint64_t word = path.sign_word(block0 + w);
        const std::uint64_t base_idx = w << 6;
        for (int g8 = 0; g8 < 8; ++g8) {
            const std::uint64_t k0 = base_idx + 8 * g8;
            std::uint64_t flips[8];
            for (int j = 0; j < 8; ++j)
                flips[j] = ((word >> (8 * g8 + j)) & 1u) << 63;
            for (int g = 0; g < ngroups; ++g) {
                const int q0 = 8 * g;
                const int gsz = std::min(8, npts - q0);
                const double* base = bases[g].data() + k0;
                const double* rat = ratio.data() + k0;
                double cur[8];
                for (int j = 0; j < 8; ++j)
                    cur[j] = std::bit_cast<double>(
                        std::bit_cast<std::uint64_t>(base[j]) ^ flips[j]);
                for (int q = 0; q < gsz; ++q) {
                    double* lane = lanes + 8 * (q0 + q);
                    for (int j = 0; j < 8; ++j) lane[j] += cur[j];
                    if (q + 1 < gsz)
                        for (int j = 0; j < 8; ++j) cur[j] *= rat[j];
                }
            }
        }
    }
}

} // namespace

std::vector<double> eval_dyadic_grid(const std::vector<SignPath>& paths,
                                     const DyadicGrid& grid, std::uint64_t M,
                                     int workers) {
    if (M < 1) throw Error(ErrorKind::argument, "grid eval needs M >= 1");
    if (workers < 1) throw Error(ErrorKind::argument, "workers must be >= 1");
    const int L = grid.level_cap;
    const int npts = (1 << L) + 1;
    const int ngroups = (npts + 7) / 8;
    const std::size_t P = paths.size();
    if (P == 0) return {};

    // Uniform sigma step of the finest level (u is affine in the grid
    // index, sigma = 1/2 + u/2).
    const double h = 0.5 * (grid.u_right - grid.u_left) * std::ldexp(1.0, -L);
    std::vector<double> head_sigma(ngroups);
    for (int g = 0; g < ngroups; ++g)
        head_sigma[g] = dyadic_points(grid, L, std::uint64_t(8) * g).sigma();

    std::vector<KahanAccumulator> acc(P * std::size_t(npts));
    std::vector<std::vector<double>> bases(ngroups,
                                           std::vector<double>(kChunkTerms));
    std::vector<double> ratio(kChunkTerms);
    const std::uint64_t nchunks = (M + kChunkTerms - 1) / kChunkTerms;

    auto fill_stripe = [&](std::uint64_t c, std::uint64_t t_lo, std::uint64_t t_hi) {
        const std::uint64_t first_n = c * kChunkTerms + 1;
        const std::uint64_t count =
            std::min<std::uint64_t>(kChunkTerms, M - c * kChunkTerms);
        const std::uint64_t fill_hi = std::min(t_hi, count);
        for (int g = 0; g < ngroups; ++g) {
            if (t_lo < fill_hi)
                fill_power_terms(bases[g].data() + t_lo, first_n + t_lo,
                                 fill_hi - t_lo, head_sigma[g]);
            for (std::uint64_t j = std::max(t_lo, count); j < t_hi; ++j)
                bases[g][j] = 0.0;
        }
        if (t_lo < fill_hi)
            fill_power_terms(ratio.data() + t_lo, first_n + t_lo,
                             fill_hi - t_lo, h);
        for (std::uint64_t j = std::max(t_lo, count); j < t_hi; ++j)
            ratio[j] = 0.0;
    };

    auto run_paths = [&](std::uint64_t c, std::size_t p_lo, std::size_t p_hi) {
        const std::uint64_t first_n = c * kChunkTerms + 1;
        const std::uint64_t count =
            std::min<std::uint64_t>(kChunkTerms, M - c * kChunkTerms);
        const std::uint64_t padded = (count + 63) & ~std::uint64_t(63);
        std::vector<double> lanes(std::size_t(npts) * 8);
        for (std::size_t p = p_lo; p < p_hi; ++p) {
            std::fill(lanes.begin(), lanes.end(), 0.0);
            grid_chunk_sums(paths[p], first_n, bases, ratio, padded, npts,
                            lanes.data());
            for (int q = 0; q < npts; ++q)
                acc[p * std::size_t(npts) + q].add(reduce_lanes8(lanes.data() + 8 * q));
        }
    };

    if (workers == 1 || P == 1) {
        for (std::uint64_t c = 0; c < nchunks; ++c) {
            const std::uint64_t count =
                std::min<std::uint64_t>(kChunkTerms, M - c * kChunkTerms);
            const std::uint64_t padded = (count + 63) & ~std::uint64_t(63);
            fill_stripe(c, 0, padded);
            run_paths(c, 0, P);
        }
    } else {
        const int W = std::min<int>(workers, 64);
        std::barrier sync(W);
        auto worker = [&](int w) {
            for (std::uint64_t c = 0; c < nchunks; ++c) {
                const std::uint64_t count =
                    std::min<std::uint64_t>(kChunkTerms, M - c * kChunkTerms);
                const std::uint64_t padded = (count + 63) & ~std::uint64_t(63);
                fill_stripe(c, padded * w / W, padded * (w + 1) / W);
                sync.arrive_and_wait();
                run_paths(c, P * std::size_t(w) / W, P * std::size_t(w + 1) / W);
                sync.arrive_and_wait();
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(W - 1);
        for (int w = 1; w < W; ++w) pool.emplace_back(worker, w);
        worker(0);
        for (auto& th : pool) th.join();
    }

    std::vector<double> out(P * std::size_t(npts));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = acc[i].value();
    return out;
}

} // namespace dirichlet
