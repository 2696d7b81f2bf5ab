// Regenerates the golden regression values for the summation kernels.
//
// The goldens pin exact bit patterns of representative evaluations; any
// change to chunking, lane order, or the sign stream shows up as a bit
// difference.  Run from the repository root:
//
//   ./build/make_golden [tests/golden]

#include <cstdio>
#include <string>
#include <vector>

#include "dirichlet/bounds.hpp"
#include "dirichlet/grid_eval.hpp"
#include "dirichlet/record_io.hpp"
#include "dirichlet/schedules.hpp"
#include "dirichlet/series.hpp"
#include "dirichlet/sign_path.hpp"
#include "dirichlet/tilted.hpp"

using namespace dirichlet;

static std::vector<SignPath> paths_for(std::uint64_t seed, int n) {
    std::vector<SignPath> p(n);
    for (int i = 0; i < n; ++i)
        p[i] = SignPath{path_seed(seed, std::uint64_t(i)), SignGenerator::splitmix_v1};
    return p;
}

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "tests/golden";
    std::vector<std::pair<std::string, double>> kv;

    {
        const auto paths = paths_for(42, 4);
        const auto sp = SigmaPoint::from_sigma(0.75);
        const auto vals = eval_many(paths, sp, 100000, 1);
        for (int i = 0; i < 4; ++i)
            kv.emplace_back("eval_s075_M1e5_p" + std::to_string(i), vals[i]);
    }
    {
        const auto paths = paths_for(42, 2);
        const auto sp = SigmaPoint::from_sigma(0.6);
        const auto vals = eval_many(paths, sp, 250000, 1);
        for (int i = 0; i < 2; ++i)
            kv.emplace_back("eval_s060_M25e4_p" + std::to_string(i), vals[i]);
    }
    {
        const auto paths = paths_for(42, 2);
        const auto sp = SigmaPoint::from_sigma(0.75);
        const auto vals = eval_range_many(paths, sp, 1001, 250000, 1);
        for (int i = 0; i < 2; ++i)
            kv.emplace_back("range_s075_p" + std::to_string(i), vals[i]);
    }
    {
        const auto paths = paths_for(42, 1);
        const auto sched = make_schedule(ScheduleKind::upper_bound_seq, 0.1);
        const auto grid = make_dyadic_grid(sched, 2, 3, 1.0);
        const auto vals = eval_dyadic_grid(paths, grid, 100000, 1);
        for (int q : {0, 3, 8})
            kv.emplace_back("grid_k2_L3_q" + std::to_string(q), vals[q]);
    }
    {
        const auto sp = SigmaPoint::from_sigma(0.6);
        const auto model = solve_t0(sp, 1.0);
        const auto est = estimate_tail(model, 1.0, 64, 100000, 7, 1, false);
        kv.emplace_back("tilt_s060_a1_phat", est.p_hat);
        kv.emplace_back("tilt_s060_a1_se", est.std_err);
    }

    const std::string path = dir + "/eval_kernels.txt";
    save_golden(path, kv);
    std::printf("wrote %zu keys to %s\n", kv.size(), path.c_str());
    return 0;
}
