#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace fpp {

struct Moments {
    long n = 0;
    double mean = 0.0;
    double var = 0.0;  // unbiased
    double se_mean = 0.0;
};
Moments moments(const std::vector<double>& xs);

struct WilsonCI {
    double p_hat = 0.0;
    double lo = 0.0;
    double hi = 1.0;
};
// Wilson score interval at z = 1.96.
WilsonCI wilson_ci(long successes, long trials);

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double r2 = 1.0;
    int n = 0;
};
LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys);

// Standard error of the unbiased sample variance by delete-1 jackknife.
double jackknife_se_of_variance(const std::vector<double>& xs);

// Percentile bootstrap interval for a statistic of a sample.
struct BootstrapCI {
    double lo = 0.0;
    double hi = 0.0;
};
BootstrapCI bootstrap_ci(const std::vector<double>& xs,
                         const std::function<double(const std::vector<double>&)>& stat,
                         int rounds, std::uint64_t seed);

}  // namespace fpp
