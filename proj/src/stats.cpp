#include "stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rng.hpp"

namespace fpp {

Moments moments(const std::vector<double>& xs) {
    Moments m;
    m.n = long(xs.size());
    if (m.n == 0) return m;
    for (double x : xs) m.mean += x;
    m.mean /= double(m.n);
    if (m.n > 1) {
        double acc = 0;
        for (double x : xs) acc += (x - m.mean) * (x - m.mean);
        m.var = acc / double(m.n - 1);
        m.se_mean = std::sqrt(m.var / double(m.n));
    }
    return m;
}

WilsonCI wilson_ci(long successes, long trials) {
    if (trials <= 0) throw std::invalid_argument("wilson_ci: no trials");
    const double z = 1.96, z2 = z * z;
    const double n = double(trials);
    WilsonCI ci;
    ci.p_hat = double(successes) / n;
    double denom = 1 + z2 / n;
    double center = (ci.p_hat + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(ci.p_hat * (1 - ci.p_hat) / n + z2 / (4 * n * n)) / denom;
    ci.lo = std::max(0.0, center - half);
    ci.hi = std::min(1.0, center + half);
    return ci;
}

LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("least_squares: need at least two points");
    LineFit fit;
    fit.n = int(xs.size());
    double mx = 0, my = 0;
    for (int i = 0; i < fit.n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= fit.n;
    my /= fit.n;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < fit.n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0) throw std::invalid_argument("least_squares: degenerate x values");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

double jackknife_se_of_variance(const std::vector<double>& xs) {
    const long n = long(xs.size());
    if (n < 3) return std::numeric_limits<double>::infinity();
    double sum = 0, sumsq = 0;
    for (double x : xs) {
        sum += x;
        sumsq += x * x;
    }
    // delete-1 variance from sufficient statistics
    std::vector<double> loo(n);
    for (long i = 0; i < n; ++i) {
        double s = sum - xs[i], s2 = sumsq - xs[i] * xs[i];
        double mean = s / double(n - 1);
        loo[i] = (s2 - double(n - 1) * mean * mean) / double(n - 2);
    }
    double mean_loo = 0;
    for (double v : loo) mean_loo += v;
    mean_loo /= double(n);
    double acc = 0;
    for (double v : loo) acc += (v - mean_loo) * (v - mean_loo);
    return std::sqrt(acc * double(n - 1) / double(n));
}

BootstrapCI bootstrap_ci(const std::vector<double>& xs,
                         const std::function<double(const std::vector<double>&)>& stat,
                         int rounds, std::uint64_t seed) {
    if (xs.empty()) throw std::invalid_argument("bootstrap_ci: empty sample");
    std::vector<double> stats(rounds);
    std::vector<double> resample(xs.size());
    RngStream rng(seed);
    for (int b = 0; b < rounds; ++b) {
        for (size_t i = 0; i < xs.size(); ++i) resample[i] = xs[rng.next_below(xs.size())];
        stats[b] = stat(resample);
    }
    std::sort(stats.begin(), stats.end());
    BootstrapCI ci;
    ci.lo = stats[size_t(0.025 * (rounds - 1))];
    ci.hi = stats[size_t(0.975 * (rounds - 1))];
    return ci;
}

}  // namespace fpp
