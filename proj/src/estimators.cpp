#include "estimators.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace fpp {

double resolved_zeta(const RunConfig& rc) {
    return rc.zeta > 0 ? rc.zeta : 1.0 / (4.0 * rc.d);
}

int resolved_margin(const RunConfig& rc) {
    if (rc.margin > 0) return rc.margin;
    return std::max<long>(8, (rc.x.l1() + 1) / 2);
}

int smoothing_radius(const Coord& x, double zeta) {
    return int(std::floor(std::pow(double(x.l1()), zeta)));
}

double averaged_passage_time(const EdgeConfig& cfg, const Coord& x, int m) {
    Ball bm = ball(cfg.window.dim(), m);
    double acc = 0.0;
    for (const auto& z : bm.vertices) {
        Coord zx = z + x;
        if (!cfg.window.contains(z) || !cfg.window.contains(zx))
            throw std::invalid_argument("averaged_passage_time: window too small for B_m");
        acc += passage_time(cfg, z, zx).T;
    }
    return acc / double(bm.vertices.size());
}

namespace {

double safe_animal_weight(const WeightDistribution& dist, double t) {
    double f = dist.cdf(t);
    return f > 0 ? 1.0 - std::log(f) : std::numeric_limits<double>::infinity();
}

ReplicaStats run_replica(const RunConfig& rc, int m, std::uint64_t replica) {
    const Ball bm = ball(rc.d, m);
    const int margin0 = resolved_margin(rc);
    ReplicaStats out;
    std::vector<double> prev_t;

    for (int attempt = 0; attempt <= rc.max_doublings; ++attempt) {
        LatticeWindow win = window_for(rc.x, m, margin0 << attempt);
        EdgeConfig cfg = sample_config(rc.dist, win, rc.master_seed, replica, rc.bit_depth,
                                       /*keep_encodings=*/false);
        GeodesicReport rep0 = geodesic_report(cfg, Coord::zero(rc.d), rc.x);
        bool touched = rep0.boundary_touched;
        std::vector<double> ts;
        ts.reserve(bm.vertices.size());
        double sum_t = 0.0;
        for (const auto& z : bm.vertices) {
            double t;
            if (z == Coord::zero(rc.d)) {
                t = rep0.T;
            } else {
                auto pr = passage_time(cfg, z, z + rc.x);
                touched |= pr.boundary_touched;
                t = pr.T;
            }
            ts.push_back(t);
            sum_t += t;
        }

        out.T = rep0.T;
        out.F_m = sum_t / double(bm.vertices.size());
        out.G = rep0.max_length;
        out.g_exact = rep0.max_length_exact;
        out.Y = kesten_indicator(rep0, rc.kesten_a);
        out.Ylog = 0.0;
        for (auto e : rep0.geo_set) out.Ylog += safe_animal_weight(*rc.dist, cfg.weights[e]);
        out.Z = out.Ylog > rc.d12 * out.T ? out.Ylog : 0.0;
        out.doublings = attempt;

        if (rc.subadditivity_stats) {
            auto pr = passage_time(cfg, Coord::zero(rc.d), rc.x);
            double acc = 0.0;
            for (const auto& z : bm.vertices) {
                Coord xz = rc.x + z;
                acc += pr.from_u.dist[win.vertex_index(z)] +
                       pr.from_v.dist[win.vertex_index(xz)];
            }
            out.subadd_bound = acc / double(bm.vertices.size());
            out.t_minus_fm = out.T - out.F_m;
        }

        if (!touched || (attempt > 0 && ts == prev_t)) {
            out.censored = false;
            return out;
        }
        prev_t = std::move(ts);
    }
    out.censored = true;
    return out;
}

}  // namespace

RunRecord run_campaign(const RunConfig& rc) {
    if (rc.replicas < 1) throw std::invalid_argument("run_campaign: replicas must be >= 1");
    if (!rc.dist) throw std::invalid_argument("run_campaign: no distribution");
    if (rc.x.l1() < 1) throw std::invalid_argument("run_campaign: need |x|_1 >= 1");
    if (!rc.dist->validate_subcritical(rc.d) && !rc.allow_supercritical)
        throw std::domain_error("run_campaign: marginal fails the subcriticality test "
                                "(set allow_supercritical to override)");

    RunRecord rec;
    rec.config = rc;
    rec.m = smoothing_radius(rc.x, resolved_zeta(rc));
    rec.replicas.resize(rc.replicas);

    const int workers = std::max(1, rc.workers);
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= rc.replicas) return;
            rec.replicas[i] = run_replica(rc, rec.m, std::uint64_t(i));
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (const auto& r : rec.replicas) rec.censored += r.censored;
    if (rec.censored == rc.replicas)
        throw std::runtime_error("run_campaign: every replica was censored");
    if (double(rec.censored) > 0.01 * double(rc.replicas))
        throw std::runtime_error("run_campaign: censoring above 1%, results would be biased");
    return rec;
}

std::vector<double> accepted_values(const RunRecord& rec, double ReplicaStats::*field) {
    std::vector<double> out;
    out.reserve(rec.replicas.size());
    for (const auto& r : rec.replicas)
        if (!r.censored) out.push_back(r.*field);
    return out;
}

std::vector<double> accepted_T(const RunRecord& rec) {
    return accepted_values(rec, &ReplicaStats::T);
}

std::vector<double> accepted_Fm(const RunRecord& rec) {
    return accepted_values(rec, &ReplicaStats::F_m);
}

double tail_scale(const Coord& x) {
    double n = double(x.l1());
    if (n <= 1) throw std::invalid_argument("tail_scale: need |x|_1 > 1");
    return std::sqrt(n / std::log(n));
}

std::vector<TailPoint> tail_profile(const RunRecord& rec, const std::vector<double>& grid) {
    auto ts = accepted_T(rec);
    if (long(ts.size()) < 100)
        throw std::invalid_argument("tail_profile: need at least 100 accepted samples");
    const double cx = tail_scale(rec.config.x);
    const double mean = moments(ts).mean;

    std::vector<TailPoint> out;
    for (double lambda : grid) {
        if (lambda < 0) throw std::domain_error("tail_profile: negative lambda");
        long n_abs = 0, n_up = 0, n_lo = 0;
        double thr = lambda * cx;
        for (double t : ts) {
            n_abs += std::abs(t - mean) >= thr;
            n_up += (t - mean) >= thr;
            n_lo += (mean - t) >= thr;
        }
        TailPoint pt;
        pt.lambda = lambda;
        pt.n = long(ts.size());
        pt.abs = wilson_ci(n_abs, pt.n);
        pt.upper = wilson_ci(n_up, pt.n);
        pt.lower = wilson_ci(n_lo, pt.n);
        out.push_back(pt);
    }
    return out;
}

RateFit fit_exponential_rate(const std::vector<std::pair<double, double>>& profile,
                             long n_samples) {
    std::vector<double> xs, ys;
    const double floor_p = 10.0 / double(n_samples);
    for (const auto& [lambda, p] : profile) {
        if (p > floor_p && p < 1.0) {
            xs.push_back(lambda);
            ys.push_back(std::log(p));
        }
    }
    if (xs.size() < 4)
        throw std::runtime_error("fit_exponential_rate: fewer than 4 usable profile points");
    auto fit = least_squares(xs, ys);
    RateFit out;
    out.c1 = std::exp(fit.intercept);
    out.c2 = -fit.slope;
    out.r2 = fit.r2;
    out.points_used = fit.n;
    return out;
}

std::vector<VarianceScalePoint> variance_scaling(const RunConfig& base,
                                                 const std::vector<long>& sizes) {
    if (sizes.size() < 2) throw std::invalid_argument("variance_scaling: need >= 2 sizes");
    std::vector<VarianceScalePoint> out;
    for (long n : sizes) {
        if (n <= 1) throw std::invalid_argument("variance_scaling: sizes must exceed 1");
        RunConfig rc = base;
        rc.x = Coord::zero(base.d);
        rc.x[0] = int(n);
        auto rec = run_campaign(rc);
        auto ts = accepted_T(rec);
        VarianceScalePoint pt;
        pt.n = n;
        pt.censored = rec.censored;
        pt.var_T = moments(ts).var;
        double factor = std::log(double(n)) / double(n);
        pt.ratio = pt.var_T * factor;
        double se_var = jackknife_se_of_variance(ts);
        pt.se_ratio = se_var * factor;
        pt.se_reliable = ts.size() >= 3 && std::isfinite(se_var);
        out.push_back(pt);
    }
    return out;
}

MgfEntropyEstimate mgf_entropy_estimate(const RunRecord& rec, double lambda,
                                        int bootstrap_rounds) {
    auto fm = accepted_Fm(rec);
    if (fm.empty()) throw std::invalid_argument("mgf_entropy_estimate: empty record");
    double max_abs = 0;
    for (double v : fm) max_abs = std::max(max_abs, std::abs(v));
    if (std::abs(lambda) * max_abs >= 50.0)
        throw std::range_error("mgf_entropy_estimate: lambda too large for stable exponentials");

    auto plug_in = [lambda](const std::vector<double>& xs) {
        double ex = 0, exlogx = 0;
        for (double v : xs) {
            double g = std::exp(lambda * v);
            ex += g;
            exlogx += g * (lambda * v);
        }
        ex /= double(xs.size());
        exlogx /= double(xs.size());
        return exlogx - ex * std::log(ex);
    };

    MgfEntropyEstimate est;
    est.ent_hat = plug_in(fm);
    double eg = 0;
    for (double v : fm) eg += std::exp(lambda * v);
    eg /= double(fm.size());
    est.rhs = lambda * lambda * double(rec.config.x.l1()) * eg;
    if (bootstrap_rounds > 0) {
        auto ci = bootstrap_ci(fm, plug_in, bootstrap_rounds,
                               substream_seed(rec.config.master_seed, 0xb007, 0));
        est.ent_lo = ci.lo;
        est.ent_hi = ci.hi;
    }
    return est;
}

}  // namespace fpp
