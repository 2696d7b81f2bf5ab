// Compensated summation building blocks and the fixed chunking scheme.
//
// Every long series in the project is accumulated the same way:
//   - terms are processed in ascending n, in fixed chunks of kChunkTerms;
//   - inside a chunk, terms go round-robin into 8 plain lanes (this is
//     what the vectorized kernels do), reduced in a fixed tree order;
//   - chunk sums feed a Kahan accumulator in ascending chunk order.
// The scheme is deterministic by construction: results are bit-identical
// across runs and across worker counts, because workers only ever split
// whole paths or whole term-fill ranges, never the reduction order.
#pragma once

#include <cstdint>

namespace dirichlet {

// Terms per chunk.  64-divisible (sign words cover 64 indices) and small
// enough that a chunk's term table stays cache-resident.
inline constexpr std::uint64_t kChunkTerms = std::uint64_t(1) << 16;

struct KahanAccumulator {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        double y = x - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }

    double value() const { return sum; }
};

// Fixed lane-reduction order shared by all chunk kernels.
inline double reduce_lanes8(const double* lane) {
    return ((lane[0] + lane[1]) + (lane[2] + lane[3])) +
           ((lane[4] + lane[5]) + (lane[6] + lane[7]));
}

} // namespace dirichlet
