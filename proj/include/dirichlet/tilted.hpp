// Importance sampling under the exponentially tilted product measure:
// P(X_n = +1) = exp(theta_n) / (2 cosh theta_n) with theta_n from a
// TiltedModel, likelihood-ratio bookkeeping, and the tail estimator.
#pragma once

#include <cstdint>
#include <vector>

#include "dirichlet/bounds.hpp"

namespace dirichlet {

// P(X_n = +1) under the tilt; 1/2 exactly when t0 == 0.
double tilt_prob(const TiltedModel& model, std::uint64_t n);

// One tilted path with materialized signs (reference sampler; the bulk
// estimator below reproduces the same signs from the same seed).
struct TiltedPath {
    double value = 0.0;  // normalized series value, sum s_n n^-sigma / norm
    double log_lr = 0.0; // log dP/dQ = sum (log cosh theta_n - theta_n s_n)
    std::vector<std::uint64_t> sign_words; // bit set => sign -1
    int sign(std::uint64_t n) const {
        return (sign_words[(n - 1) >> 6] >> ((n - 1) & 63)) & 1u ? -1 : 1;
    }
};

TiltedPath sample_tilted(const TiltedModel& model, std::uint64_t M,
                         std::uint64_t seed);

// Importance-sampling estimate of P(Fbar >= a) from n_paths tilted paths.
struct TailEstimate {
    double threshold = 0.0;
    double p_hat = 0.0;
    double std_err = 0.0;
    double ess = 0.0; // Kish effective sample size (sum w)^2 / sum w^2
    std::uint64_t n_paths = 0;
    std::uint64_t M = 0;
    std::uint64_t hits = 0;
    double mean_value = 0.0; // sample mean of Fbar under the tilt
    bool warn_low_ess = false;      // ess below 50
    bool warn_degenerate = false;   // no path crossed the threshold
    bool warn_target_mismatch = false; // threshold far from the tilt target
    std::vector<double> values; // per path, when kept
    std::vector<double> log_lr; // per path, when kept
};

TailEstimate estimate_tail(const TiltedModel& model, double a,
                           std::uint64_t n_paths, std::uint64_t M,
                           std::uint64_t seed, int workers = 1,
                           bool keep_paths = true);

} // namespace dirichlet
