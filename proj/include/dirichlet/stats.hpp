// Plain sample statistics shared by the experiment drivers: moments,
// Kolmogorov-Smirnov distance against the standard normal, correlation,
// quantiles.
#pragma once

#include <cstdint>
#include <vector>

namespace dirichlet {

double normal_cdf(double x);

struct Moments {
    std::uint64_t n = 0;
    double mean = 0.0;
    double variance = 0.0; // unbiased (n-1)
    double m4 = 0.0;       // central fourth moment (biased, /n)
};

Moments sample_moments(const std::vector<double>& xs);

// sup_x |F_n(x) - Phi(x)| over the sample.
double ks_normal_distance(std::vector<double> xs);

// Pearson correlation; 0 for degenerate inputs.
double sample_correlation(const std::vector<double>& xs,
                          const std::vector<double>& ys);

// Quantile of an unsorted sample by linear interpolation, q in [0,1].
double sample_quantile(std::vector<double> xs, double q);

} // namespace dirichlet
