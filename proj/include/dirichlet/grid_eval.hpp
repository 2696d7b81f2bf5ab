// One-pass evaluation of a whole dyadic sigma grid per sign path: every
// grid point shares the same sign stream and term index range, so chained
// increments F(tau') - F(tau) are formed from a single consistent array.
#pragma once

#include <cstdint>
#include <vector>

#include "dirichlet/schedules.hpp"
#include "dirichlet/sign_path.hpp"

namespace dirichlet {

// Values for all 2^L + 1 finest-level grid points, row-major:
// out[p * npts + q] = truncated series for paths[p] at grid point q.
//
// Every eighth column (the group heads, which include all points of
// levels 0..3) is produced by the exact power table at its dyadic grid
// point and is bit-identical to eval_many at that sigma.  Columns inside
// a group advance by a per-term geometric ratio n^(-h) with h the uniform
// sigma step; the effective exponent differs from the ideal dyadic point
// by a few ulps, which is orders of magnitude below the statistical
// resolution of any increment study.
std::vector<double> eval_dyadic_grid(const std::vector<SignPath>& paths,
                                     const DyadicGrid& grid, std::uint64_t M,
                                     int workers = 1);

} // namespace dirichlet
