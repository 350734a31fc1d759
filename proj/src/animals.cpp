#include "animals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "geodesics.hpp"

namespace fpp {

AnimalInstance sample_animal_instance(const WeightDistribution& dist, int d, int span,
                                      std::uint64_t master_seed, std::uint64_t replica,
                                      unsigned bit_depth) {
    Coord lo = Coord::zero(d), hi = Coord::zero(d);
    for (int i = 0; i < d; ++i) {
        lo[i] = -span;
        hi[i] = span;
    }
    LatticeWindow window(lo, hi);
    AnimalInstance inst{window, std::vector<double>(window.edge_count())};
    for (std::int64_t e = 0; e < window.edge_count(); ++e) {
        Edge ed = window.edge(e);
        RngStream stream(edge_stream_seed(master_seed, replica, ed.min_endpoint.v.data(), d,
                                          ed.axis));
        double t = dist.sample_weight(stream, bit_depth).first;
        double f = dist.cdf(t);
        inst.weights[e] = f > 0 ? 1.0 - std::log(f) : std::numeric_limits<double>::infinity();
    }
    return inst;
}

int animal_exact_cap(int d) {
    if (d == 2) return 10;
    if (d == 3) return 7;
    return 5;
}

namespace {

std::vector<std::int64_t> origin_edges(const LatticeWindow& win) {
    std::vector<std::int64_t> out;
    std::int64_t oi = win.vertex_index(Coord::zero(win.dim()));
    for (int axis = 0; axis < win.dim(); ++axis)
        for (bool pos : {true, false}) {
            std::int64_t e = win.incident_edge(oi, axis, pos);
            if (e >= 0) out.push_back(e);
        }
    return out;
}

std::vector<std::int64_t> edge_neighbors(const LatticeWindow& win, std::int64_t e) {
    std::vector<std::int64_t> out;
    Edge ed = win.edge(e);
    std::int64_t a = win.vertex_index(ed.min_endpoint);
    std::int64_t b = win.neighbor(a, ed.axis, true);
    for (std::int64_t vtx : {a, b})
        for (int axis = 0; axis < win.dim(); ++axis)
            for (bool pos : {true, false}) {
                std::int64_t f = win.incident_edge(vtx, axis, pos);
                if (f >= 0 && f != e) out.push_back(f);
            }
    return out;
}

// In/out branching over extension candidates: each connected edge set with
// an endpoint at the origin is generated exactly once. Bound: every further
// pick adds at most w_max.
class AnimalEnumerator {
  public:
    AnimalEnumerator(const AnimalInstance& inst, int n)
        : inst_(inst), n_(n), in_set_(inst.window.edge_count(), false),
          banned_(inst.window.edge_count(), false) {
        w_max_ = *std::max_element(inst.weights.begin(), inst.weights.end());
    }

    double run() {
        best_ = -std::numeric_limits<double>::infinity();
        recurse(origin_edges(inst_.window), 0.0, 0);
        return best_;
    }

  private:
    void recurse(std::vector<std::int64_t> ext, double current, int size) {
        if (size == n_) {
            best_ = std::max(best_, current);
            return;
        }
        std::vector<std::int64_t> local_bans;
        while (!ext.empty()) {
            std::int64_t e = ext.back();
            ext.pop_back();
            double optimistic = current + inst_.weights[e] + double(n_ - size - 1) * w_max_;
            if (optimistic > best_) {
                in_set_[e] = true;
                auto child = ext;
                for (std::int64_t f : edge_neighbors(inst_.window, e)) {
                    if (in_set_[f] || banned_[f]) continue;
                    if (std::find(child.begin(), child.end(), f) != child.end()) continue;
                    child.push_back(f);
                }
                recurse(std::move(child), current + inst_.weights[e], size + 1);
                in_set_[e] = false;
            }
            banned_[e] = true;
            local_bans.push_back(e);
        }
        for (std::int64_t e : local_bans) banned_[e] = false;
    }

    const AnimalInstance& inst_;
    int n_;
    std::vector<bool> in_set_, banned_;
    double w_max_ = 0.0;
    double best_ = 0.0;
};

}  // namespace

double exact_Nn(const AnimalInstance& instance, int n, int cap) {
    if (n < 1) throw std::invalid_argument("exact_Nn: n must be positive");
    if (n > cap)
        throw std::domain_error("exact_Nn: n exceeds the exact enumeration cap; use greedy_Nn");
    double best = AnimalEnumerator(instance, n).run();
    if (!std::isfinite(best) && best < 0)
        throw std::runtime_error("exact_Nn: window has no animal of this size");
    return best;
}

GreedyResult greedy_Nn(const AnimalInstance& instance, int n) {
    if (n < 1) throw std::invalid_argument("greedy_Nn: n must be positive");
    const auto& win = instance.window;
    std::vector<bool> in_set(win.edge_count(), false), in_frontier(win.edge_count(), false);
    std::vector<std::int64_t> frontier = origin_edges(win);
    for (auto e : frontier) in_frontier[e] = true;

    GreedyResult res;
    for (int step = 0; step < n; ++step) {
        std::int64_t pick = -1;
        for (auto e : frontier)
            if (!in_set[e] && (pick < 0 || instance.weights[e] > instance.weights[pick] ||
                               (instance.weights[e] == instance.weights[pick] && e < pick)))
                pick = e;
        if (pick < 0) return res;  // window exhausted: partial result
        in_set[pick] = true;
        res.value += instance.weights[pick];
        res.size += 1;
        frontier.erase(std::remove(frontier.begin(), frontier.end(), pick), frontier.end());
        for (std::int64_t f : edge_neighbors(win, pick)) {
            if (in_set[f] || in_frontier[f]) continue;
            in_frontier[f] = true;
            frontier.push_back(f);
        }
    }
    res.complete = true;
    return res;
}

GrowthStats animal_growth_stats(const WeightDistribution& dist, int d, int n_lo, int n_hi,
                                int replicas, const std::vector<double>& beta_grid,
                                std::uint64_t master_seed, unsigned bit_depth, int exact_cap,
                                bool allow_greedy) {
    if (n_lo < 1 || n_hi < n_lo) throw std::invalid_argument("animal_growth_stats: bad n range");
    if (!allow_greedy && n_hi > exact_cap)
        throw std::domain_error("animal_growth_stats: n range exceeds the exact cap");

    GrowthStats stats;
    const int n_count = n_hi - n_lo + 1;
    std::vector<std::vector<double>> samples(n_count);  // N_n per replica
    for (int r = 0; r < replicas; ++r) {
        auto inst = sample_animal_instance(dist, d, n_hi, master_seed, std::uint64_t(r),
                                           bit_depth);
        bool finite = true;
        for (double w : inst.weights) finite &= std::isfinite(w);
        if (!finite) {
            ++stats.replicas_discarded;
            continue;
        }
        ++stats.replicas_used;
        for (int n = n_lo; n <= n_hi; ++n) {
            double v = n <= exact_cap ? exact_Nn(inst, n, exact_cap) : greedy_Nn(inst, n).value;
            samples[n - n_lo].push_back(v);
        }
    }
    if (stats.replicas_used == 0)
        throw std::runtime_error("animal_growth_stats: every replica was discarded");

    for (int n = n_lo; n <= n_hi; ++n) {
        const auto& xs = samples[n - n_lo];
        const double R = double(xs.size());
        double mean = 0;
        for (double v : xs) mean += v;
        mean /= R;
        for (double beta : beta_grid) {
            // log-sum-exp for log E-hat e^{beta N_n}
            double m = -std::numeric_limits<double>::infinity();
            for (double v : xs) m = std::max(m, beta * v);
            double acc = 0, acc2 = 0;
            for (double v : xs) {
                double t = std::exp(beta * v - m);
                acc += t;
                acc2 += t * t;
            }
            double log_mgf = m + std::log(acc / R);
            // delta method on the shifted scale
            double mhat = acc / R;
            double var = std::max(acc2 / R - mhat * mhat, 0.0);
            double se_log = std::sqrt(var / R) / mhat;

            GrowthRow row;
            row.n = n;
            row.beta = beta;
            row.mean_ratio = mean / n;
            row.log_mgf_over_n = log_mgf / n;
            row.stderr_log_mgf = se_log / n;
            row.exact = n <= exact_cap;
            stats.rows.push_back(row);
        }
    }
    return stats;
}

}  // namespace fpp
