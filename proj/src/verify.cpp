#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "animals.hpp"
#include "entropy.hpp"
#include "estimators.hpp"
#include "geodesics.hpp"

namespace fpp {

namespace {

constexpr double kRelTol = 1e-9;

double rel_gap(double lhs, double rhs) {
    return (rhs - lhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

class Collector {
  public:
    explicit Collector(const VerifyOptions& opts) : opts_(opts) {}

    bool wants(const std::string& name) const {
        return opts_.only.empty() || name.find(opts_.only) != std::string::npos;
    }

    // inequality-style check: pass when lhs <= rhs + tol (or exactly).
    void le(const std::string& name, const std::string& system, double lhs, double rhs,
            bool exact) {
        auto& c = slot(name);
        ++c.instances;
        double margin = exact ? rhs - lhs : rel_gap(lhs, rhs);
        bool ok = exact ? lhs <= rhs : margin >= -kRelTol;
        record(c, system, lhs, rhs, margin, exact, ok);
    }

    // identity-style check: pass when |lhs - rhs| small (or exactly 0).
    void eq(const std::string& name, const std::string& system, double lhs, double rhs,
            bool exact, double tol) {
        auto& c = slot(name);
        ++c.instances;
        double gap = std::abs(lhs - rhs);
        double margin = -gap;
        bool ok = exact ? gap == 0.0
                        : gap <= tol * std::max({1.0, std::abs(lhs), std::abs(rhs)});
        record(c, system, lhs, rhs, margin, exact, ok);
    }

    // plain predicate with a reported value.
    void holds(const std::string& name, const std::string& system, bool ok, double value,
               const std::string& note = "", bool exact = false) {
        auto& c = slot(name);
        ++c.instances;
        if (!note.empty()) c.note = note;
        record(c, system, value, 0.0, ok ? 0.0 : -1.0, exact, ok);
    }

    VerifyReport finish() {
        VerifyReport rep;
        for (auto& c : checks_) {
            if (c.name == opts_.inject_failure) {
                c.pass = false;
                c.note = "injected failure (test hook)";
                ++c.violations;
            }
            rep.failed += !c.pass;
            rep.checks.push_back(c);
        }
        rep.empty_selection = checks_.empty();
        return rep;
    }

  private:
    CheckResult& slot(const std::string& name) {
        for (auto& c : checks_)
            if (c.name == name) return c;
        CheckResult c;
        c.name = name;
        c.margin = std::numeric_limits<double>::infinity();
        c.exact = true;
        checks_.push_back(c);
        return checks_.back();
    }

    void record(CheckResult& c, const std::string& system, double lhs, double rhs, double margin,
                bool exact, bool ok) {
        c.exact = c.exact && exact;
        if (!ok) {
            ++c.violations;
            c.pass = false;
            c.system = system;
            c.lhs = lhs;
            c.rhs = rhs;
            c.margin = std::min(c.margin, margin);
            return;
        }
        if (c.pass && margin < c.margin) {
            c.margin = margin;
            c.system = system;
            c.lhs = lhs;
            c.rhs = rhs;
        }
    }

    const VerifyOptions& opts_;
    std::vector<CheckResult> checks_;
};

std::vector<DistPtr> lemma_dists() {
    return {std::make_shared<WeightDistribution>(WeightDistribution::uniform()),
            std::make_shared<WeightDistribution>(WeightDistribution::exponential(1.0)),
            std::make_shared<WeightDistribution>(WeightDistribution::two_point(1, 2, 0.5)),
            std::make_shared<WeightDistribution>(WeightDistribution::bernoulli(0.2))};
}

std::string tuple_descriptor(const std::string& dist, std::uint64_t seed, std::int64_t e,
                             const Coord& z, double s, double t) {
    std::ostringstream ss;
    ss << dist << " seed=" << seed << " e=" << e << " z=" << z.str() << " s=" << s << " t=" << t;
    return ss.str();
}

void lemma31_sweep(Collector& col, const VerifyOptions& opts) {
    const bool want_identity = col.wants("lemma31_increment_identity");
    const bool want_geo = col.wants("lemma31_geo_membership");
    const bool want_indep = col.wants("lemma31_edge_independence");
    if (!want_identity && !want_geo && !want_indep) return;

    auto dists = lemma_dists();
    RngStream rng(mix64(opts.seed, 0x31));
    for (long i = 0; i < opts.tuples; ++i) {
        const auto& dist = dists[i % dists.size()];
        Coord x{2 + int(rng.next_below(5)), int(rng.next_below(3))};
        std::uint64_t seed = rng.next_u64();
        auto cfg = sample_config(dist, window_for(x, 1, 4), seed, 0, 32, false);
        Coord z{int(rng.next_below(2)), int(rng.next_below(2))};
        // half the tuples probe edges on a current geodesic, where D > 0
        std::int64_t e;
        if (rng.next_below(2) == 0) {
            auto path = geodesic_report(cfg, z, z + x).path;
            e = path[rng.next_below(path.size())];
        } else {
            e = std::int64_t(rng.next_below(cfg.window.edge_count()));
        }
        double s = 0.25 * double(rng.next_below(13));
        double t = s + 0.25 * double(rng.next_below(13));
        auto desc = tuple_descriptor(dist->name(), seed, e, z, s, t);

        auto cv = critical_value(cfg, e, z, x);
        if (want_identity) {
            double Ts = passage_time(cfg, z, z + x, Overlay{e, s}).T;
            double Tt = passage_time(cfg, z, z + x, Overlay{e, t}).T;
            double want = std::min(t - s, std::max(cv.D - s, 0.0));
            col.eq("lemma31_increment_identity", desc, Tt - Ts, want, false, kRelTol);
        }
        if (want_geo && cv.D > 1e-6 && std::isfinite(cv.D)) {
            // membership is claimed for every s < D; sample one such s
            double s_in = cv.D * (0.1 + 0.8 * rng.next_unit());
            auto geo = geodesic_intersection(cfg, z, z + x, Overlay{e, s_in});
            bool member = std::find(geo.begin(), geo.end(), e) != geo.end();
            col.holds("lemma31_geo_membership", desc, member, cv.D - s_in);
        }
        if (want_indep && (i % 16) == 0) {
            auto moved = cfg;
            moved.weights[e] = 0.125 + double(rng.next_below(64));
            if (moved.int_scale)
                moved.int_weights[e] =
                    std::llround(moved.weights[e] * double(*moved.int_scale));
            auto cv2 = critical_value(moved, e, z, x);
            col.eq("lemma31_edge_independence", desc, cv.D, cv2.D, true, 0.0);
        }
    }
}

void geodesic_basic_checks(Collector& col, const VerifyOptions& opts) {
    auto dists = lemma_dists();
    RngStream rng(mix64(opts.seed, 0x99));
    const long reps = std::min<long>(opts.tuples, 400);

    if (col.wants("passage_monotone_coupling")) {
        for (long i = 0; i < reps; ++i) {
            const auto& dist = dists[i % dists.size()];
            Coord x{3, 1};
            auto cfg = sample_config(dist, window_for(x, 0, 4), rng.next_u64(), 0, 32, false);
            std::int64_t e = std::int64_t(rng.next_below(cfg.window.edge_count()));
            double w = cfg.weights[e];
            double base = passage_time(cfg, {0, 0}, x).T;
            double up = passage_time(cfg, {0, 0}, x, Overlay{e, w + 1.0}).T;
            double down = passage_time(cfg, {0, 0}, x, Overlay{e, w * 0.5}).T;
            std::string desc = dist->name() + " i=" + std::to_string(i);
            col.le("passage_monotone_coupling", desc, base, up, false);
            col.le("passage_monotone_coupling", desc, down, base, false);
        }
    }
    if (col.wants("passage_pseudo_metric")) {
        for (long i = 0; i < reps; ++i) {
            const auto& dist = dists[i % dists.size()];
            auto cfg =
                sample_config(dist, LatticeWindow({-3, -3}, {3, 3}), rng.next_u64(), 0, 32, false);
            auto rnd = [&]() {
                return Coord{int(rng.next_below(7)) - 3, int(rng.next_below(7)) - 3};
            };
            Coord a = rnd(), b = rnd(), c = rnd();
            std::string desc = dist->name() + " i=" + std::to_string(i);
            col.eq("passage_pseudo_metric", desc, passage_time(cfg, a, a).T, 0.0, false, 1e-12);
            double ab = passage_time(cfg, a, b).T;
            double ba = passage_time(cfg, b, a).T;
            col.eq("passage_pseudo_metric", desc, ab, ba, false, 1e-12);
            col.le("passage_pseudo_metric", desc, ab,
                   passage_time(cfg, a, c).T + passage_time(cfg, c, b).T, false);
        }
    }
    if (col.wants("kesten_rate_estimate")) {
        // Desk-scale analogue of the linear lower bound on T along
        // geodesics: min over samples of T / G stays away from zero.
        auto expo = std::make_shared<WeightDistribution>(WeightDistribution::exponential(1.0));
        Coord x{20, 0};
        double min_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 200; ++i) {
            auto cfg = sample_config(expo, window_for(x, 0, 10), mix64(opts.seed, 7000 + i), 0,
                                     32, false);
            auto rep = geodesic_report(cfg, {0, 0}, x);
            min_ratio = std::min(min_ratio, rep.T / double(rep.max_length));
        }
        col.holds("kesten_rate_estimate", "exponential(1) x=(20,0) n=200", min_ratio > 0.0,
                  min_ratio, "estimated lower rate a-hat, persisted");
    }
}

// Random non-negative objective mixing the coordinates in a non-product way.
Objective random_objective(RngStream& rng, int n_coords, double lambda) {
    int kind = int(rng.next_below(3));
    std::vector<double> coef(n_coords);
    for (auto& c : coef) c = 0.5 + rng.next_unit();
    if (kind == 0) {
        return [coef, lambda](const std::vector<double>& w) {
            double s = 0;
            for (size_t i = 0; i < w.size(); ++i) s += coef[i] * w[i];
            return std::exp(lambda * s);
        };
    }
    if (kind == 1 && n_coords >= 2) {
        return [coef, lambda](const std::vector<double>& w) {
            double r1 = 0, r2 = 0;
            for (size_t i = 0; i < w.size(); ++i)
                (i % 2 ? r1 : r2) += coef[i] * w[i];
            return std::exp(lambda * std::min(r1 + w[0], r2 + 0.5));
        };
    }
    return [coef](const std::vector<double>& w) {
        double s = 0.1;
        for (size_t i = 0; i < w.size(); ++i) s += coef[i] * w[i] * w[i];
        return s;
    };
}

void entropy_inequality_checks(Collector& col, const VerifyOptions& opts) {
    RngStream rng(mix64(opts.seed, 0xe27));
    const bool want_tensor = col.wants("entropy_tensorization");
    const bool want_vari = col.wants("entropy_variational");
    const bool want_fs = col.wants("entropy_falik_samorodnitsky");
    if (want_tensor || want_vari || want_fs) {
        for (long i = 0; i < opts.systems; ++i) {
            auto sys = random_discrete_system(rng, 2, 4, 3);
            double lambda = (rng.next_unit() - 0.5) * 1.5;
            auto g = tabulate(sys, random_objective(rng, sys.n_coords(), lambda));
            std::string desc = sys.descriptor() + " i=" + std::to_string(i);
            if (want_tensor) {
                auto res = tensorization_check(sys, g);
                col.le("entropy_tensorization", desc, res.lhs, res.rhs, false);
            }
            if (want_vari) {
                auto res = variational_entropy(sys, g);
                col.eq("entropy_variational", desc, res.exy, res.entropy, false, 1e-12);
                col.le("entropy_variational_feasible", desc, res.ee_y, 1.0, false);
            }
            if (want_fs) {
                auto res = falik_samorodnitsky_check(sys, g);
                col.le("entropy_falik_samorodnitsky", desc, res.rhs, res.lhs, false);
            }
        }
    }

    if (col.wants("entropy_martingale_identities")) {
        for (long i = 0; i < std::min<long>(opts.systems, 50); ++i) {
            auto sys = random_discrete_system(rng, 2, 3, 3);
            auto table = tabulate_exact(sys, [](const std::vector<double>& w) {
                Rational acc(1);
                for (double x : w) acc += Rational(x) + Rational(x) * Rational(x);
                return acc;
            });
            auto vk = martingale_decomposition(sys, table);
            Rational eg = expectation(sys, table);
            std::string desc = sys.descriptor() + " i=" + std::to_string(i);

            bool telescopes = true;
            for (std::int64_t s = 0; s < sys.n_states() && telescopes; ++s) {
                Rational sum(0);
                for (const auto& v : vk) sum += v[s];
                telescopes = sum == table[s] - eg;
            }
            col.holds("entropy_martingale_identities", desc + " telescoping", telescopes, 0.0,
                       "", true);

            Rational var = variance(sys, table);
            Rational sum_sq(0);
            bool orthogonal = true;
            for (size_t j = 0; j < vk.size(); ++j) {
                Rational ev2(0);
                for (std::int64_t s = 0; s < sys.n_states(); ++s)
                    ev2 += sys.state_prob(s) * vk[j][s] * vk[j][s];
                sum_sq += ev2;
                for (size_t k = j + 1; k < vk.size() && orthogonal; ++k) {
                    Rational cross(0);
                    for (std::int64_t s = 0; s < sys.n_states(); ++s)
                        cross += sys.state_prob(s) * vk[j][s] * vk[k][s];
                    orthogonal = cross == 0;
                }
            }
            col.holds("entropy_martingale_identities", desc + " orthogonality", orthogonal, 0.0,
                       "", true);
            col.eq("entropy_variance_identity", desc, sum_sq.get_d(), var.get_d(), true,
                   0.0);

            auto bounds = resampling_bounds(sys, table);
            bool dominated = true;
            for (size_t k = 0; k < vk.size() && dominated; ++k) {
                Rational e_abs(0);
                for (std::int64_t s = 0; s < sys.n_states(); ++s)
                    e_abs += sys.state_prob(s) * abs(vk[k][s]);
                dominated = e_abs <= bounds[k];
            }
            col.holds("entropy_influence_resampling_bound", desc, dominated, 0.0, "", true);
        }
    }

    if (col.wants("entropy_lemma42_chain")) {
        std::vector<WeightDistribution> dists = {WeightDistribution::uniform(),
                                                 WeightDistribution::exponential(1.0),
                                                 WeightDistribution::two_point(1, 2, 0.5)};
        for (long i = 0; i < opts.systems; ++i) {
            const auto& dist = dists[i % dists.size()];
            int n_coords = 2 + int(i % 2);
            auto sys = DiscreteSystem::from_bits(dist, n_coords, 2);
            double lambda = ((i % 2) ? 0.5 : -0.5) * (0.5 + rng.next_unit());
            auto g = tabulate(sys, [lambda](const std::vector<double>& w) {
                double s = 0;
                for (double x : w) s += x;
                return std::exp(lambda * s);
            });
            auto fs = falik_samorodnitsky_check(sys, g);
            double dsum = discrete_derivative_sum(sys, g);
            col.le("entropy_lemma42_chain",
                   sys.descriptor() + " lambda=" + std::to_string(lambda), fs.lhs, dsum, false);
        }
    }

    if (col.wants("entropy_symmetrized_lsi")) {
        for (long i = 0; i < opts.systems; ++i) {
            auto sys = random_discrete_system(rng, 1, 3, 3);
            double lambda = (rng.next_unit() * 4 - 2);
            auto x = tabulate(sys, [](const std::vector<double>& w) {
                double s = 0;
                for (double v : w) s += v;
                return s;
            });
            auto res = symmetrized_lsi_check(sys, x, lambda);
            col.le("entropy_symmetrized_lsi",
                   sys.descriptor() + " lambda=" + std::to_string(lambda), res.lhs, res.rhs,
                   false);
        }
    }
}

StepFn random_stepfn(RngStream& rng, const Rational& hi_break, int max_pieces) {
    StepFn f;
    std::vector<Rational> breaks{Rational(0)};
    int pieces = 1 + int(rng.next_below(std::uint64_t(max_pieces)));
    for (int i = 0; i < pieces - 1; ++i) {
        Rational b(1 + long(rng.next_below(31)), 32);
        b.canonicalize();
        if (b < hi_break && std::find(breaks.begin(), breaks.end(), b) == breaks.end())
            breaks.push_back(b);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.push_back(Rational(1));
    Rational level(long(rng.next_below(4)), 16);
    level.canonicalize();
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        f.breaks.push_back(breaks[i]);
        f.values.push_back(level);
        Rational bump(long(rng.next_below(8)), 16);
        bump.canonicalize();
        level += bump;
    }
    f.breaks.push_back(Rational(1));
    return f;
}

void quadrature_checks(Collector& col, const VerifyOptions& opts) {
    struct CaseSpec {
        const char* name;
        QuadratureCase which;
    };
    const CaseSpec cases[] = {{"entropy_quadrature_tail_window", QuadratureCase::TailWindow},
                              {"entropy_quadrature_small_a", QuadratureCase::SmallA},
                              {"entropy_quadrature_small_tau", QuadratureCase::SmallTau}};
    RngStream rng(mix64(opts.seed, 0x44));
    auto r32 = [](long numerator) {
        Rational q(numerator, 32);
        q.canonicalize();
        return q;
    };
    for (const auto& cs : cases) {
        if (!col.wants(cs.name)) continue;
        for (long i = 0; i < opts.quadrature; ++i) {
            Rational a, tau;
            if (cs.which == QuadratureCase::TailWindow) {
                a = r32(17 + long(rng.next_below(15)));
                tau = r32(1 + long(rng.next_below(16)));
            } else if (cs.which == QuadratureCase::SmallA) {
                long tau32 = 2 + long(rng.next_below(15));
                tau = r32(tau32);
                a = r32(long(rng.next_below(std::uint64_t(tau32))));
            } else {
                long a32 = 1 + long(rng.next_below(16));
                a = r32(a32);
                tau = r32(1 + long(rng.next_below(std::uint64_t(a32))));
            }
            StepFunctionPair pair{random_stepfn(rng, Rational(1), 5),
                                  random_stepfn(rng, a == 0 ? Rational(1, 32) : a, 4), a, tau};
            auto res = uniformvar_quadrature(pair);
            std::ostringstream desc;
            desc << "a=" << rational_str(a) << " tau=" << rational_str(tau)
                 << " case=" << quadrature_case_name(res.which);
            col.holds(cs.name, desc.str(), res.lhs <= res.bound,
                      Rational(res.bound - res.lhs).get_d(), "", true);
        }
    }
    if (col.wants("entropy_quadrature_equality_case")) {
        StepFunctionPair pair{StepFn::constant(1), StepFn::indicator_at_least(Rational(1, 2)),
                              Rational(1, 2), Rational(1, 4)};
        auto res = uniformvar_quadrature(pair);
        bool ok = res.lhs == Rational(1, 4) && res.bound == Rational(1, 4) &&
                  res.which == QuadratureCase::SmallTau;
        col.holds("entropy_quadrature_equality_case", "h=1 f=1{x>=1/2} a=1/2 tau=1/4", ok,
                  res.lhs.get_d(), "documented equality case", true);
    }
}

void theorem4_checks(Collector& col, const VerifyOptions& opts) {
    if (!col.wants("theorem4_ratio")) return;
    RngStream rng(mix64(opts.seed, 0x74));
    double max_ratio = 0.0;
    long n_fail = 0;
    std::string worst = "none";
    for (int i = 0; i < 20; ++i) {
        LatticeWindow win({0, 0}, {2, 1});
        double a = 0.5 + 0.25 * double(rng.next_below(4));
        double b = a + 0.25 + 0.25 * double(rng.next_below(4));
        double p = 0.25 + 0.25 * double(rng.next_below(2));
        auto dist = WeightDistribution::two_point(a, b, p);
        Rational pq(long(std::llround(p * 4)), 4);
        pq.canonicalize();
        Rational qq = 1 - pq;
        FiniteSupport sup{{a, b}, {pq, qq}};
        DiscreteSystem sys(std::vector<FiniteSupport>(win.edge_count(), sup),
                           "mini_window " + dist.name());
        double lambda = (i % 2) ? 0.25 : -0.25;
        auto res = theorem4_bound_check(sys, win, dist, {2, 0}, 0, lambda);
        if (!std::isfinite(res.ratio)) {
            ++n_fail;
            worst = sys.descriptor();
        } else if (res.ratio > max_ratio) {
            max_ratio = res.ratio;
            worst = sys.descriptor() + " lambda=" + std::to_string(lambda);
        }
    }
    col.holds("theorem4_ratio", worst, n_fail == 0, max_ratio,
              "max empirical lhs/rhs ratio over 20 mini systems");
}

}  // namespace

VerifyReport run_verify(const std::string& suite, const VerifyOptions& opts) {
    Collector col(opts);
    if (suite != "lemmas" && suite != "entropy")
        throw std::invalid_argument("run_verify: unknown suite '" + suite + "'");
    if (suite == "lemmas") {
        lemma31_sweep(col, opts);
        geodesic_basic_checks(col, opts);
    }
    entropy_inequality_checks(col, opts);
    quadrature_checks(col, opts);
    if (suite == "entropy") theorem4_checks(col, opts);
    return col.finish();
}

}  // namespace fpp
