// Command-line front end for the experiment drivers and the certified
// bound calculators.
//
// Exit codes: 0 all checks passed, 1 at least one check failed,
// 2 configuration/usage errors (bad flags, unknown config keys,
// infeasible plans, solver domain errors).

#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dirichlet/bounds.hpp"
#include "dirichlet/errors.hpp"
#include "dirichlet/experiments.hpp"
#include "dirichlet/record_io.hpp"
#include "dirichlet/schedules.hpp"
#include "dirichlet/series.hpp"

namespace {

int report(const dirichlet::RunRecord& rec) {
    for (const auto& c : rec.checks)
        std::printf("%-28s %s  observed=%s limit=%s\n", c.name.c_str(),
                    c.passed ? "PASS" : "FAIL",
                    dirichlet::format_double(c.observed).c_str(),
                    dirichlet::format_double(c.limit).c_str());
    if (!rec.summary_path.empty())
        std::printf("summary: %s\n", rec.summary_path.c_str());
    if (!rec.paths_path.empty())
        std::printf("paths:   %s\n", rec.paths_path.c_str());
    std::printf("%s\n", rec.all_passed ? "ALL CHECKS PASSED" : "CHECK FAILURES");
    return rec.all_passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dirichlet-lab: sampling studies of random Dirichlet series "
                 "near the critical line"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand
    app.set_config("--config", "", "INI config file (flags override it)");
    app.allow_config_extras(false);

    dirichlet::RunContext ctx;
    bool no_paths = false;
    app.add_option("--out", ctx.out_dir,
                   "output directory (default: DIRICHLET_LAB_OUT or .)");
    app.add_option("--workers", ctx.workers, "worker threads (default 1)")
        ->check(CLI::Range(1, 256));
    app.add_flag("--no-paths", no_paths, "skip the per-path CSV");

    dirichlet::CltConfig clt;
    auto* c_clt = app.add_subcommand("clt", "normalized-sum distribution study");
    c_clt->add_option("--sigma", clt.sigma, "evaluation point (must be > 1/2)");
    c_clt->add_option("--paths", clt.paths, "number of sign paths");
    c_clt->add_option("--fraction", clt.fraction, "tail-variance fraction target");
    c_clt->add_option("--term-budget", clt.term_budget, "max series terms");
    c_clt->add_option("--seed", clt.seed, "base RNG seed");
    c_clt->add_option("--ks-threshold", clt.ks_threshold, "KS distance limit");
    c_clt->add_option("--lambdas", clt.hoeffding_lambdas, "tail thresholds");
    c_clt->add_option("--ts", clt.mgf_ts, "exponential-moment arguments");

    dirichlet::LilSubConfig lil;
    auto* c_lil = app.add_subcommand("lil-sub", "subsequence exceedance study");
    c_lil->add_option("--delta", lil.delta, "schedule exponent offset in (0,1)");
    c_lil->add_option("--eps", lil.eps, "exceedance slack (threshold sqrt(1+eps))");
    c_lil->add_option("--fraction", lil.fraction, "tail-variance fraction target");
    c_lil->add_option("--term-budget", lil.term_budget, "max series terms");
    c_lil->add_option("--paths", lil.paths, "number of sign paths");
    c_lil->add_option("--seed", lil.seed, "base RNG seed");
    c_lil->add_option("--k-cap", lil.k_cap, "largest schedule index to try");

    dirichlet::ChainConfig chain;
    auto* c_chain = app.add_subcommand("chain", "dyadic increment study");
    c_chain->add_option("--delta", chain.delta, "schedule exponent offset");
    c_chain->add_option("--k", chain.k, "schedule index (>= 2)");
    c_chain->add_option("--levels", chain.levels, "dyadic depth");
    c_chain->add_option("--c0", chain.c0, "threshold constant");
    c_chain->add_option("--paths", chain.paths, "number of sign paths");
    c_chain->add_option("--fraction", chain.fraction, "tail-variance fraction target");
    c_chain->add_option("--term-budget", chain.term_budget, "max series terms");
    c_chain->add_option("--seed", chain.seed, "base RNG seed");

    dirichlet::TailSandwichConfig tail;
    auto* c_tail = app.add_subcommand("tail-sandwich",
                                      "tail probability sandwich via tilting");
    c_tail->add_option("--sigma", tail.sigma, "evaluation point");
    c_tail->add_option("--thresholds", tail.thresholds, "tail levels a");
    c_tail->add_option("--is-paths", tail.is_paths, "tilted sample size");
    c_tail->add_option("--mc-paths", tail.mc_paths, "plain-MC contrast size (0 off)");
    c_tail->add_option("--fraction", tail.fraction, "tail-variance fraction target");
    c_tail->add_option("--term-budget", tail.term_budget, "max series terms");
    c_tail->add_option("--lambda", tail.lambda, "floor parameter lambda");
    c_tail->add_option("--eps", tail.eps, "floor parameter eps");
    c_tail->add_option("--margin", tail.margin, "tilt target margin over a");
    c_tail->add_option("--seed", tail.seed, "base RNG seed");

    dirichlet::SplitConfig split;
    auto* c_split = app.add_subcommand("split", "variance-split block study");
    c_split->add_option("--delta", split.delta, "schedule exponent offset");
    c_split->add_option("--k", split.k, "schedule index");
    c_split->add_option("--eps1", split.eps1, "head variance fraction");
    c_split->add_option("--eps2", split.eps2, "tail variance fraction");
    c_split->add_option("--fraction", split.fraction, "truncation fraction");
    c_split->add_option("--term-budget", split.term_budget, "max series terms");
    c_split->add_option("--paths", split.paths, "number of sign paths");
    c_split->add_option("--seed", split.seed, "base RNG seed");

    double b_sigma = 0.75, b_t = -1.0, b_target = -1.0, b_s = -1.0;
    std::uint64_t b_M = 4096;
    auto* c_bounds = app.add_subcommand("bounds", "print certified brackets as JSON");
    c_bounds->add_option("--sigma", b_sigma, "evaluation point");
    c_bounds->add_option("--zeta-s", b_s, "also bracket the zeta value at s");
    c_bounds->add_option("--M", b_M, "partial-sum cutoff for the zeta bracket");
    c_bounds->add_option("--t", b_t, "exponential-moment argument (optional)");
    c_bounds->add_option("--target", b_target, "tilt equation target (optional)");

    dirichlet::ScheduleKind s_kind = dirichlet::ScheduleKind::lower_bound_seq;
    double s_delta = 0.1;
    int s_count = 12;
    bool s_split = false;
    auto* c_sched = app.add_subcommand("schedule", "print a sigma schedule as JSON");
    c_sched->add_option("--kind", s_kind, "lower|upper")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, dirichlet::ScheduleKind>{
                {"lower", dirichlet::ScheduleKind::lower_bound_seq},
                {"upper", dirichlet::ScheduleKind::upper_bound_seq}}));
    c_sched->add_option("--delta", s_delta, "exponent offset in (0,1)");
    c_sched->add_option("--count", s_count, "indices to print")->check(CLI::Range(1, 1000));
    c_sched->add_flag("--split", s_split, "include surrogate split points (lower kind)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and --version exit 0; genuine parse problems are config
        // errors and exit 2 regardless of CLI11's internal code.
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    ctx.write_paths = !no_paths;
    try {
        if (*c_clt) {
            auto rec = dirichlet::run_clt(clt, ctx);
            return report(rec);
        }
        if (*c_lil) {
            auto rec = dirichlet::run_lil_subsequence(lil, ctx);
            return report(rec);
        }
        if (*c_chain) {
            auto rec = dirichlet::run_chain_increments(chain, ctx);
            return report(rec);
        }
        if (*c_tail) {
            auto rec = dirichlet::run_tail_sandwich(tail, ctx);
            return report(rec);
        }
        if (*c_split) {
            auto rec = dirichlet::run_split_independence(split, ctx);
            return report(rec);
        }
        if (*c_bounds) {
            const auto sp = dirichlet::SigmaPoint::from_sigma(b_sigma);
            const auto var = dirichlet::variance(sp);
            const auto dv = dirichlet::deriv_variance_bracket(sp);
            nlohmann::json out{
                {"sigma", b_sigma},
                {"variance", {{"lo", var.value.lo}, {"hi", var.value.hi}, {"M", var.M}}},
                {"deriv_variance",
                 {{"lo", dv.value.lo}, {"hi", dv.value.hi}, {"M", dv.M}}}};
            if (b_s > 0.0) {
                const auto zb = dirichlet::zeta_bracket(b_s, b_M);
                out["zeta"] = nlohmann::json{{"s", b_s},
                                             {"lo", zb.total.lo},
                                             {"hi", zb.total.hi},
                                             {"partial_lo", zb.partial.lo},
                                             {"partial_hi", zb.partial.hi},
                                             {"M", b_M}};
            }
            if (b_t >= 0.0) {
                const auto mg = dirichlet::mgf_sandwich(sp, b_t);
                out["mgf"] = {{"t", b_t}, {"lo", mg.lo}, {"hi", mg.hi}};
            }
            if (b_target >= 0.0) {
                const auto model = dirichlet::solve_t0(sp, b_target);
                out["tilt"] = {{"target", b_target},
                               {"t0", model.t0},
                               {"residual", model.residual}};
            }
            std::cout << out.dump(2) << "\n";
            return 0;
        }
        if (*c_sched) {
            const auto sched = dirichlet::make_schedule(s_kind, s_delta);
            nlohmann::json out{
                {"kind", s_kind == dirichlet::ScheduleKind::lower_bound_seq
                             ? "lower"
                             : "upper"},
                {"delta", s_delta},
                {"k_max", sched.k_max}};
            nlohmann::json pts = nlohmann::json::array();
            const int top = std::min(s_count, sched.k_max);
            for (int k = 1; k <= top; ++k) {
                const auto sp = dirichlet::sigma_seq(sched, k);
                nlohmann::json row{{"k", k}, {"u", sp.u()}, {"sigma", sp.sigma()}};
                if (s_split && s_kind == dirichlet::ScheduleKind::lower_bound_seq &&
                    k >= dirichlet::split_k_min(s_delta)) {
                    const auto plan = dirichlet::split_points(sched, k);
                    row["log_N1"] = plan.log_N1;
                    row["log_N2"] = plan.log_N2;
                    row["alpha"] = plan.alpha_k;
                    row["beta"] = plan.beta_k;
                    row["gap_margin"] = plan.gap_margin;
                }
                pts.push_back(std::move(row));
            }
            out["points"] = pts;
            std::cout << out.dump(2) << "\n";
            return 0;
        }
    } catch (const dirichlet::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
