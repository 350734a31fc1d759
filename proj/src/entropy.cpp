#include "entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "geodesics.hpp"

namespace fpp {

namespace {

double to_double(double x) { return x; }
double to_double(const Rational& x) { return x.get_d(); }

double abs_val(double x) { return std::abs(x); }
Rational abs_val(const Rational& x) { return abs(x); }

// Entropy with the degenerate convention Ent(0) = 0, used inside sums
// over martingale increments where some V_k may vanish identically.
double ent_or_zero(const std::vector<double>& x, const std::vector<double>& p) {
    double ex = 0.0, exlogx = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        ex += p[i] * x[i];
        if (x[i] > 0) exlogx += p[i] * x[i] * std::log(x[i]);
    }
    if (ex <= 0.0) return 0.0;
    return exlogx - ex * std::log(ex);
}

}  // namespace

DiscreteSystem::DiscreteSystem(std::vector<FiniteSupport> coords, std::string descriptor)
    : coords_(std::move(coords)), descriptor_(std::move(descriptor)) {
    if (coords_.empty() || coords_.size() > 12)
        throw std::invalid_argument("discrete system: 1..12 coordinates");
    for (const auto& c : coords_) {
        if (c.values.empty() || c.values.size() != c.probs.size())
            throw std::invalid_argument("discrete system: malformed support");
        Rational total(0);
        for (const auto& p : c.probs) {
            if (p <= 0) throw std::invalid_argument("discrete system: probabilities must be positive");
            total += p;
        }
        if (total != 1) throw std::invalid_argument("discrete system: probabilities must sum to 1");
        n_states_ *= std::int64_t(c.values.size());
        if (n_states_ > (std::int64_t(1) << 24))
            throw std::invalid_argument("discrete system: state space above 2^24");
    }
    suffix_.assign(coords_.size(), 1);
    for (int k = int(coords_.size()) - 2; k >= 0; --k)
        suffix_[k] = suffix_[k + 1] * std::int64_t(coords_[k + 1].values.size());
}

DiscreteSystem DiscreteSystem::from_bits(const WeightDistribution& dist, int n_coords,
                                         unsigned depth, std::string descriptor) {
    if (depth == 0 || depth > 4) throw std::invalid_argument("from_bits: depth must be 1..4");
    FiniteSupport sup;
    const int atoms = 1 << depth;
    Rational p(1, atoms);
    for (int i = 0; i < atoms; ++i) {
        sup.values.push_back(dist.inverse_cdf(std::ldexp(double(i), -int(depth))));
        sup.probs.push_back(p);
    }
    std::vector<FiniteSupport> coords(n_coords, sup);
    if (descriptor.empty())
        descriptor = "bits(" + dist.name() + ",E=" + std::to_string(n_coords) +
                     ",J=" + std::to_string(depth) + ")";
    DiscreteSystem sys(std::move(coords), std::move(descriptor));
    sys.bit_depth_ = depth;
    return sys;
}

Rational DiscreteSystem::state_prob(std::int64_t state) const {
    Rational p(1);
    for (int k = 0; k < n_coords(); ++k) p *= coords_[k].probs[coord_index(state, k)];
    return p;
}

void DiscreteSystem::state_weights(std::int64_t state, std::vector<double>& w) const {
    w.resize(coords_.size());
    for (int k = 0; k < n_coords(); ++k) w[k] = coords_[k].values[coord_index(state, k)];
}

namespace {

std::vector<double> state_probs_double(const DiscreteSystem& sys) {
    std::vector<double> p(sys.n_states());
    for (std::int64_t s = 0; s < sys.n_states(); ++s) p[s] = sys.state_prob(s).get_d();
    return p;
}

}  // namespace

std::vector<double> tabulate(const DiscreteSystem& sys, const Objective& g) {
    std::vector<double> table(sys.n_states());
    std::vector<double> w;
    for (std::int64_t s = 0; s < sys.n_states(); ++s) {
        sys.state_weights(s, w);
        table[s] = g(w);
    }
    return table;
}

std::vector<Rational> tabulate_exact(const DiscreteSystem& sys,
                                     const std::function<Rational(const std::vector<double>&)>& g) {
    std::vector<Rational> table(sys.n_states());
    std::vector<double> w;
    for (std::int64_t s = 0; s < sys.n_states(); ++s) {
        sys.state_weights(s, w);
        table[s] = g(w);
    }
    return table;
}

double expectation(const DiscreteSystem& sys, const std::vector<double>& table) {
    double e = 0.0;
    for (std::int64_t s = 0; s < sys.n_states(); ++s) e += sys.state_prob(s).get_d() * table[s];
    return e;
}

Rational expectation(const DiscreteSystem& sys, const std::vector<Rational>& table) {
    Rational e(0);
    for (std::int64_t s = 0; s < sys.n_states(); ++s) e += sys.state_prob(s) * table[s];
    return e;
}

double entropy(const std::vector<double>& values, const std::vector<Rational>& probs) {
    if (values.size() != probs.size() || values.empty())
        throw std::invalid_argument("entropy: malformed distribution");
    double ex = 0.0, exlogx = 0.0;
    for (size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0) throw std::domain_error("entropy: negative value");
        double p = probs[i].get_d();
        ex += p * values[i];
        if (values[i] > 0) exlogx += p * values[i] * std::log(values[i]);
    }
    if (!(ex > 0)) throw std::domain_error("entropy: variable has zero mean");
    return exlogx - ex * std::log(ex);
}

double entropy(const DiscreteSystem& sys, const std::vector<double>& table) {
    auto p = state_probs_double(sys);
    for (double v : table)
        if (v < 0) throw std::domain_error("entropy: negative value");
    double ex = 0.0;
    for (std::int64_t s = 0; s < sys.n_states(); ++s) ex += p[s] * table[s];
    if (!(ex > 0)) throw std::domain_error("entropy: variable has zero mean");
    return ent_or_zero(table, p);
}

VariationalResult variational_entropy(const DiscreteSystem& sys,
                                      const std::vector<double>& table) {
    auto p = state_probs_double(sys);
    double ex = 0.0;
    for (std::int64_t s = 0; s < sys.n_states(); ++s) ex += p[s] * table[s];
    if (!(ex > 0)) throw std::domain_error("variational_entropy: zero mean");
    VariationalResult res;
    res.entropy = entropy(sys, table);
    double log_ex = std::log(ex);
    for (std::int64_t s = 0; s < sys.n_states(); ++s) {
        if (table[s] > 0) {
            double y = std::log(table[s]) - log_ex;
            res.exy += p[s] * table[s] * y;
            res.ee_y += p[s] * std::exp(y);
        }
        // states with X = 0 contribute 0 to both terms (Y* = -inf there)
    }
    return res;
}

TensorizationResult tensorization_check(const DiscreteSystem& sys,
                                        const std::vector<double>& table) {
    TensorizationResult res;
    res.lhs = entropy(sys, table);
    for (int c = 0; c < sys.n_coords(); ++c) {
        const auto& sup = sys.coords()[c];
        const int sz = int(sup.values.size());
        const std::int64_t inner = sys.suffix_size(c);
        const std::int64_t outer = sys.n_states() / (inner * sz);
        std::vector<double> pc(sz);
        for (int i = 0; i < sz; ++i) pc[i] = sup.probs[i].get_d();
        std::vector<double> x(sz);
        for (std::int64_t hi = 0; hi < outer; ++hi) {
            for (std::int64_t lo = 0; lo < inner; ++lo) {
                std::int64_t base = hi * sz * inner + lo;
                double rest_p = sys.state_prob(base).get_d() / pc[0];
                for (int i = 0; i < sz; ++i) x[i] = table[base + i * inner];
                res.rhs += rest_p * ent_or_zero(x, pc);
            }
        }
    }
    return res;
}

template <class T>
std::vector<std::vector<T>> martingale_decomposition(const DiscreteSystem& sys,
                                                     const std::vector<T>& table) {
    const int E = sys.n_coords();
    // cond[k] = E[G | first k coordinates], indexed by the prefix state.
    std::vector<std::vector<T>> cond(E + 1);
    cond[E] = table;
    for (int k = E; k >= 1; --k) {
        const auto& sup = sys.coords()[k - 1];
        const int sz = int(sup.values.size());
        std::vector<T> prev(cond[k].size() / sz, T(0));
        for (std::int64_t p = 0; p < std::int64_t(prev.size()); ++p) {
            T acc(0);
            for (int i = 0; i < sz; ++i) {
                if constexpr (std::is_same_v<T, Rational>)
                    acc += sup.probs[i] * cond[k][p * sz + i];
                else
                    acc += sup.probs[i].get_d() * cond[k][p * sz + i];
            }
            prev[p] = acc;
        }
        cond[k - 1] = std::move(prev);
    }
    std::vector<std::vector<T>> vk(E);
    for (int c = 0; c < E; ++c) {
        vk[c].resize(sys.n_states());
        const std::int64_t div_next = sys.suffix_size(c);
        const std::int64_t div_cur = div_next * std::int64_t(sys.coords()[c].values.size());
        for (std::int64_t s = 0; s < sys.n_states(); ++s)
            vk[c][s] = cond[c + 1][s / div_next] - cond[c][s / div_cur];
    }
    return vk;
}

template <class T>
T variance(const DiscreteSystem& sys, const std::vector<T>& table) {
    T ex(0), ex2(0);
    for (std::int64_t s = 0; s < sys.n_states(); ++s) {
        T p(0);
        if constexpr (std::is_same_v<T, Rational>)
            p = sys.state_prob(s);
        else
            p = sys.state_prob(s).get_d();
        ex += p * table[s];
        ex2 += p * table[s] * table[s];
    }
    return ex2 - ex * ex;
}

template <class T>
T influence_sum(const DiscreteSystem& sys, const std::vector<T>& table) {
    auto vk = martingale_decomposition(sys, table);
    T total(0);
    for (const auto& v : vk) {
        T e_abs(0);
        for (std::int64_t s = 0; s < sys.n_states(); ++s) {
            T p(0);
            if constexpr (std::is_same_v<T, Rational>)
                p = sys.state_prob(s);
            else
                p = sys.state_prob(s).get_d();
            e_abs += p * abs_val(v[s]);
        }
        total += e_abs * e_abs;
    }
    return total;
}

template <class T>
std::vector<T> resampling_bounds(const DiscreteSystem& sys, const std::vector<T>& table) {
    const int E = sys.n_coords();
    std::vector<T> out(E, T(0));
    for (int c = 0; c < E; ++c) {
        const auto& sup = sys.coords()[c];
        const int sz = int(sup.values.size());
        const std::int64_t inner = sys.suffix_size(c);
        for (std::int64_t s = 0; s < sys.n_states(); ++s) {
            T ps(0);
            if constexpr (std::is_same_v<T, Rational>)
                ps = sys.state_prob(s);
            else
                ps = sys.state_prob(s).get_d();
            int idx = sys.coord_index(s, c);
            T acc(0);
            for (int i = 0; i < sz; ++i) {
                std::int64_t s2 = s + std::int64_t(i - idx) * inner;
                T pi(0);
                if constexpr (std::is_same_v<T, Rational>)
                    pi = sup.probs[i];
                else
                    pi = sup.probs[i].get_d();
                acc += pi * abs_val(table[s] - table[s2]);
            }
            out[c] += ps * acc;
        }
    }
    return out;
}

FalikSamorodnitskyResult falik_samorodnitsky_check(const DiscreteSystem& sys,
                                                   const std::vector<double>& table) {
    FalikSamorodnitskyResult res;
    res.var_g = variance(sys, table);
    if (res.var_g <= 0.0) return res;  // constant G: (0,0) by convention
    auto vk = martingale_decomposition(sys, table);
    auto p = state_probs_double(sys);
    std::vector<double> sq(sys.n_states());
    for (const auto& v : vk) {
        for (std::int64_t s = 0; s < sys.n_states(); ++s) sq[s] = v[s] * v[s];
        res.lhs += ent_or_zero(sq, p);
    }
    res.influence = influence_sum(sys, table);
    if (res.influence > 0.0) res.rhs = res.var_g * std::log(res.var_g / res.influence);
    return res;
}

double discrete_derivative_sum(const DiscreteSystem& sys, const std::vector<double>& table) {
    if (!sys.bit_driven())
        throw std::invalid_argument("discrete_derivative_sum: system is not bit-driven");
    const unsigned J = sys.bit_depth();
    auto p = state_probs_double(sys);
    double total = 0.0;
    for (int c = 0; c < sys.n_coords(); ++c) {
        const std::int64_t inner = sys.suffix_size(c);
        for (unsigned j = 1; j <= J; ++j) {
            const int mask = 1 << (J - j);
            double acc = 0.0;
            for (std::int64_t s = 0; s < sys.n_states(); ++s) {
                int idx = sys.coord_index(s, c);
                std::int64_t plus = s + std::int64_t((idx | mask) - idx) * inner;
                std::int64_t minus = s + std::int64_t((idx & ~mask) - idx) * inner;
                double d = table[plus] - table[minus];
                acc += p[s] * d * d;
            }
            total += acc;
        }
    }
    return total;
}

LsiResult symmetrized_lsi_check(const DiscreteSystem& sys, const std::vector<double>& x_table,
                                double lambda) {
    LsiResult res;
    auto p = state_probs_double(sys);
    std::vector<double> g(sys.n_states());
    for (std::int64_t s = 0; s < sys.n_states(); ++s) g[s] = std::exp(lambda * x_table[s]);
    res.lhs = ent_or_zero(g, p);
    auto q = [](double x) { return x * (std::exp(x) - 1.0); };
    for (std::int64_t s = 0; s < sys.n_states(); ++s) {
        for (std::int64_t s2 = 0; s2 < sys.n_states(); ++s2) {
            double gap = lambda * (x_table[s2] - x_table[s]);
            if (gap > 0) res.rhs += p[s] * p[s2] * g[s] * q(gap);
        }
    }
    return res;
}

Theorem4Result theorem4_bound_check(const DiscreteSystem& sys, const LatticeWindow& window,
                                    const WeightDistribution& dist, const Coord& x, int m,
                                    double lambda) {
    if (std::int64_t(sys.n_coords()) != window.edge_count())
        throw std::invalid_argument("theorem4_bound_check: system/window size mismatch");
    Ball bm = ball(window.dim(), m);
    auto dist_ptr = std::make_shared<WeightDistribution>(dist);

    std::vector<double> fm(sys.n_states());
    std::vector<double> geo_weight_avg(sys.n_states(), 0.0);
    std::vector<double> w;
    for (std::int64_t s = 0; s < sys.n_states(); ++s) {
        sys.state_weights(s, w);
        auto cfg = manual_config(dist_ptr, window, w);
        double acc_t = 0.0, acc_geo = 0.0;
        for (const auto& z : bm.vertices) {
            auto rep = geodesic_report(cfg, z, z + x);
            acc_t += rep.T;
            for (auto e : rep.geo_set) acc_geo += dist.animal_weight(cfg.weights[e]);
        }
        fm[s] = acc_t / double(bm.vertices.size());
        geo_weight_avg[s] = acc_geo / double(bm.vertices.size());
    }

    Theorem4Result res;
    auto p = state_probs_double(sys);
    std::vector<double> g(sys.n_states());
    for (std::int64_t s = 0; s < sys.n_states(); ++s) g[s] = std::exp(lambda * fm[s]);
    auto vk = martingale_decomposition(sys, g);
    std::vector<double> sq(sys.n_states());
    for (const auto& v : vk) {
        for (std::int64_t s = 0; s < sys.n_states(); ++s) sq[s] = v[s] * v[s];
        res.lhs += ent_or_zero(sq, p);
    }
    for (std::int64_t s = 0; s < sys.n_states(); ++s)
        res.rhs += p[s] * std::exp(2.0 * lambda * fm[s]) * geo_weight_avg[s];
    res.rhs *= lambda * lambda;
    res.ratio = res.rhs > 0 ? res.lhs / res.rhs : 0.0;
    return res;
}

DiscreteSystem random_discrete_system(RngStream& rng, int min_coords, int max_coords,
                                      int max_atoms) {
    int n = min_coords + int(rng.next_below(std::uint64_t(max_coords - min_coords + 1)));
    std::vector<FiniteSupport> coords;
    for (int c = 0; c < n; ++c) {
        FiniteSupport sup;
        int atoms = 2 + int(rng.next_below(std::uint64_t(max_atoms - 1)));
        // distinct dyadic values, increasing
        std::vector<int> quarters;
        while (int(quarters.size()) < atoms) {
            int q = int(rng.next_below(13));  // 0 .. 12 quarters = [0, 3]
            if (std::find(quarters.begin(), quarters.end(), q) == quarters.end())
                quarters.push_back(q);
        }
        std::sort(quarters.begin(), quarters.end());
        std::vector<int> mass(atoms, 1);
        int spare = 8 - atoms;
        while (spare > 0) {
            mass[rng.next_below(std::uint64_t(atoms))] += 1;
            --spare;
        }
        for (int i = 0; i < atoms; ++i) {
            sup.values.push_back(quarters[i] / 4.0);
            Rational p(mass[i], 8);
            p.canonicalize();
            sup.probs.push_back(p);
        }
        coords.push_back(std::move(sup));
    }
    return DiscreteSystem(std::move(coords), "random(E=" + std::to_string(n) + ")");
}

template std::vector<std::vector<double>> martingale_decomposition(const DiscreteSystem&,
                                                                   const std::vector<double>&);
template std::vector<std::vector<Rational>> martingale_decomposition(
    const DiscreteSystem&, const std::vector<Rational>&);
template double variance(const DiscreteSystem&, const std::vector<double>&);
template Rational variance(const DiscreteSystem&, const std::vector<Rational>&);
template double influence_sum(const DiscreteSystem&, const std::vector<double>&);
template Rational influence_sum(const DiscreteSystem&, const std::vector<Rational>&);
template std::vector<double> resampling_bounds(const DiscreteSystem&, const std::vector<double>&);
template std::vector<Rational> resampling_bounds(const DiscreteSystem&,
                                                 const std::vector<Rational>&);

}  // namespace fpp
