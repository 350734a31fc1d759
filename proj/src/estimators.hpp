#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geodesics.hpp"
#include "stats.hpp"

namespace fpp {

// Core campaign parameters (the CLI layers file parsing on top of this).
struct RunConfig {
    DistPtr dist;
    int d = 2;
    Coord x;
    double zeta = 0.0;  // 0 -> default (4d)^{-1}
    int replicas = 1;
    std::uint64_t master_seed = 1;
    unsigned bit_depth = 32;
    int margin = 0;  // 0 -> auto max(8, ceil(|x|_1 / 2))
    int max_doublings = 3;
    std::vector<double> lambda_grid;
    double kesten_a = 0.1;
    double d12 = 2.0;  // threshold for Z = Ylog 1{Ylog > d12 T}
    bool allow_supercritical = false;
    bool subadditivity_stats = false;
    int workers = 1;
};

double resolved_zeta(const RunConfig& rc);
int resolved_margin(const RunConfig& rc);
// m = floor(|x|_1 ^ zeta).
int smoothing_radius(const Coord& x, double zeta);

// F_m on a fixed configuration: exact average of T(z, z+x) over z in B_m.
// Throws when the window does not contain B_m and x + B_m.
double averaged_passage_time(const EdgeConfig& cfg, const Coord& x, int m);

struct ReplicaStats {
    double T = 0.0;
    double F_m = 0.0;
    long G = 0;
    long Y = 0;          // Kesten indicator at rate kesten_a
    double Ylog = 0.0;   // sum of animal weights over Geo(0,x)
    double Z = 0.0;      // Ylog 1{Ylog > d12 T}
    bool censored = false;
    bool g_exact = true;
    int doublings = 0;
    // Filled when subadditivity_stats is on.
    double subadd_bound = 0.0;
    double t_minus_fm = 0.0;
};

struct RunRecord {
    RunConfig config;
    int m = 0;
    std::vector<ReplicaStats> replicas;  // one row per requested replica
    long censored = 0;
};

// Samples `replicas` independent configurations and computes per-replica
// statistics. Deterministic given (config, master_seed); the worker count
// only changes scheduling, never results. Throws when the distribution
// fails the subcriticality test (unless allow_supercritical), when every
// replica is censored, or when censoring exceeds 1%.
RunRecord run_campaign(const RunConfig& rc);

// Accepted (non-censored) values of one per-replica statistic.
std::vector<double> accepted_values(const RunRecord& rec, double ReplicaStats::*field);
std::vector<double> accepted_T(const RunRecord& rec);
std::vector<double> accepted_Fm(const RunRecord& rec);

struct TailPoint {
    double lambda = 0.0;
    long n = 0;
    WilsonCI abs, upper, lower;  // P(|T-Tbar| >= l c_x), upper/lower tails
};

// c_x = sqrt(|x|_1 / log |x|_1).
double tail_scale(const Coord& x);

// Empirical exceedance profile centered at the sample mean. Requires
// >= 100 accepted samples, |x|_1 > 1 and a non-negative grid.
std::vector<TailPoint> tail_profile(const RunRecord& rec, const std::vector<double>& grid);

struct RateFit {
    double c1 = 0.0;
    double c2 = 0.0;
    double r2 = 0.0;
    int points_used = 0;
};

// Least squares on (lambda, ln p) over grid points with p_hat in
// (10/n, 1). Throws std::runtime_error with fewer than 4 usable points.
RateFit fit_exponential_rate(const std::vector<std::pair<double, double>>& profile,
                             long n_samples);

struct VarianceScalePoint {
    long n = 0;
    double var_T = 0.0;
    double ratio = 0.0;     // var_T log n / n
    double se_ratio = 0.0;  // jackknife
    bool se_reliable = true;
    long censored = 0;
};

// One campaign per size along e1.
std::vector<VarianceScalePoint> variance_scaling(const RunConfig& base,
                                                 const std::vector<long>& sizes);

struct MgfEntropyEstimate {
    double ent_hat = 0.0;    // plug-in Ent e^{lambda F_m}
    double ent_lo = 0.0, ent_hi = 0.0;  // bootstrap CI
    double rhs = 0.0;        // lambda^2 |x|_1 E-hat e^{lambda F_m}
};

// Guard: lambda * max F_m < 50, otherwise std::range_error.
MgfEntropyEstimate mgf_entropy_estimate(const RunRecord& rec, double lambda,
                                        int bootstrap_rounds = 200);

}  // namespace fpp
