// Experiment drivers.  Each run_* samples seeded sign paths, computes the
// statistics its study needs, evaluates every configured check with an
// explicit slack formula, and returns a RunRecord whose JSON summary is a
// pure function of (config, seed) — identical bytes for any worker count.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace dirichlet {

struct RunContext {
    std::string out_dir;     // empty: resolve via DIRICHLET_LAB_OUT, else "."
    int workers = 1;
    bool write_files = true; // summary/paths/timing files
    bool write_paths = true; // the per-path CSV can be large; optional
};

struct CheckResult {
    std::string name;
    bool passed = false;
    double observed = 0.0;
    double limit = 0.0;
    std::string slack; // human-readable slack formula
};

struct RunRecord {
    std::string name;
    std::uint64_t seed = 0;
    nlohmann::json summary;
    std::vector<CheckResult> checks;
    bool all_passed = true;
    std::string summary_path; // empty when files were not written
    std::string paths_path;
    std::string timing_path;
};

// --- CLT / sampling study: F-bar over many paths at one sigma ----------
struct CltConfig {
    double sigma = 0.6;
    std::uint64_t paths = 10000;
    double fraction = 0.01; // tail-variance fraction target
    std::uint64_t term_budget = 10000000000ULL;
    std::uint64_t seed = 42;
    double ks_threshold = 0.02;
    std::vector<double> hoeffding_lambdas; // exceedance checks, may be empty
    std::vector<double> mgf_ts;            // MGF sandwich checks, may be empty
};
RunRecord run_clt(const CltConfig& cfg, const RunContext& ctx);

// --- LIL subsequence: R_k = F(sigma_k)/denom over the upper schedule ---
struct LilSubConfig {
    double delta = 0.1;
    double eps = 0.2; // threshold sqrt(1+eps)
    double fraction = 0.1;
    std::uint64_t term_budget = 10000000000ULL;
    std::uint64_t paths = 2000;
    std::uint64_t seed = 42;
    int k_cap = 32; // hard stop for the feasibility scan
};
RunRecord run_lil_subsequence(const LilSubConfig& cfg, const RunContext& ctx);

// --- Chained increments over the dyadic grid ---------------------------
struct ChainConfig {
    double delta = 0.1;
    int k = 2;
    int levels = 6;  // L
    double c0 = 1.0;
    std::uint64_t paths = 1000;
    double fraction = 0.1;
    std::uint64_t term_budget = 10000000000ULL;
    std::uint64_t seed = 42;
};
RunRecord run_chain_increments(const ChainConfig& cfg, const RunContext& ctx);

// --- Tail sandwich: lower-deviation floor vs Hoeffding ceiling ---------
struct TailSandwichConfig {
    double sigma = 0.6;
    std::vector<double> thresholds{1.0, 2.0};
    std::uint64_t is_paths = 10000;
    std::uint64_t mc_paths = 1000000; // 0 disables the plain-MC contrast
    double fraction = 0.05;
    std::uint64_t term_budget = 10000000000ULL;
    double lambda = 0.1;
    double eps = 0.1;
    double margin = 0.0; // tilt target a*(1+margin)
    std::uint64_t seed = 42;
};
RunRecord run_tail_sandwich(const TailSandwichConfig& cfg, const RunContext& ctx);

// --- Split independence: F1+F2+F3 blocks at consecutive sigma_k --------
struct SplitConfig {
    double delta = 0.1;
    int k = 1;
    double eps1 = 0.4;
    double eps2 = 0.3;
    double fraction = 0.15;
    std::uint64_t term_budget = 100000000ULL;
    std::uint64_t paths = 10000;
    std::uint64_t seed = 42;
};
RunRecord run_split_independence(const SplitConfig& cfg, const RunContext& ctx);

} // namespace dirichlet
