#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "entropy.hpp"
#include "geodesics.hpp"

using namespace fpp;

namespace {

Rational half() { return Rational(1, 2); }

DiscreteSystem two_point_system(int n_edges, double a = 1.0, double b = 2.0) {
    FiniteSupport sup{{a, b}, {half(), half()}};
    return DiscreteSystem(std::vector<FiniteSupport>(n_edges, sup), "two_point_path");
}

double path_sum(const std::vector<double>& w) {
    return std::accumulate(w.begin(), w.end(), 0.0);
}

}  // namespace

TEST_CASE("entropy definition") {
    // constant variable
    CHECK(entropy({3.0}, {Rational(1)}) == 0.0);
    // X in {1, e} with probability 1/2 each
    double e = std::exp(1.0);
    double want = e / 2 - (1 + e) / 2 * std::log((1 + e) / 2);
    CHECK(entropy({1.0, e}, {half(), half()}) == doctest::Approx(want).epsilon(1e-14));
    // homogeneity Ent(cX) = c Ent(X)
    RngStream rng(1);
    for (int i = 0; i < 50; ++i) {
        double c = 0.5 + rng.next_unit() * 3;
        std::vector<double> x = {rng.next_unit(), rng.next_unit() + 1, rng.next_unit() * 2};
        std::vector<Rational> p = {Rational(1, 4), Rational(1, 4), half()};
        std::vector<double> cx = x;
        for (auto& v : cx) v *= c;
        CHECK(entropy(cx, p) == doctest::Approx(c * entropy(x, p)).epsilon(1e-12));
    }
    CHECK_THROWS_AS((void)entropy({0.0, 0.0}, {half(), half()}), std::domain_error);
    CHECK_THROWS_AS((void)entropy({-1.0, 1.0}, {half(), half()}), std::domain_error);
}

TEST_CASE("variational formula matches the definition") {
    auto sys = two_point_system(3);
    RngStream rng(7);
    for (double lambda : {0.5, -0.5, 0.25}) {
        auto table = tabulate(sys, [&](const std::vector<double>& w) {
            return std::exp(lambda * path_sum(w));
        });
        auto res = variational_entropy(sys, table);
        CHECK(res.exy == doctest::Approx(res.entropy).epsilon(1e-12));
        CHECK(res.ee_y <= 1.0 + 1e-12);
    }

    // constant X
    auto const_table = tabulate(sys, [](const std::vector<double>&) { return 2.5; });
    CHECK(variational_entropy(sys, const_table).exy == doctest::Approx(0.0));

    // dominance: any feasible Y gives EXY <= Ent X
    auto table = tabulate(sys, [&](const std::vector<double>& w) { return 1.0 + path_sum(w); });
    double ent = entropy(sys, table);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> y(sys.n_states());
        for (auto& v : y) v = rng.next_unit() * 2 - 1.5;
        // normalize to E e^Y = 1, then the sup property must dominate
        double eey = 0;
        for (std::int64_t s = 0; s < sys.n_states(); ++s)
            eey += sys.state_prob(s).get_d() * std::exp(y[s]);
        double shift = std::log(eey);
        double exy = 0;
        for (std::int64_t s = 0; s < sys.n_states(); ++s)
            exy += sys.state_prob(s).get_d() * table[s] * (y[s] - shift);
        CHECK(exy <= ent + 1e-10);
    }
}

TEST_CASE("tensorization") {
    auto sys = two_point_system(3);
    // single-coordinate X: equality
    auto t1 = tabulate(sys, [](const std::vector<double>& w) { return std::exp(w[1]); });
    auto res1 = tensorization_check(sys, t1);
    CHECK(res1.lhs == doctest::Approx(res1.rhs).epsilon(1e-12));
    // positive constant product: both sides zero
    auto t2 = tabulate(sys, [](const std::vector<double>&) { return 6.0; });
    auto res2 = tensorization_check(sys, t2);
    CHECK(res2.lhs == doctest::Approx(0.0));
    CHECK(res2.rhs == doctest::Approx(0.0));
    // e^{lambda T} on the 3-edge path is a product of independent factors,
    // where tensorization is an identity
    for (double lambda : {0.5, -0.5}) {
        auto t3 = tabulate(sys, [&](const std::vector<double>& w) {
            return std::exp(lambda * path_sum(w));
        });
        auto res3 = tensorization_check(sys, t3);
        CHECK(res3.lhs == doctest::Approx(res3.rhs).epsilon(1e-12));
        CHECK(res3.lhs > 0.0);
    }
    // a genuine two-route passage time is not a product: strict inequality
    for (double lambda : {0.5, -0.5}) {
        auto t4 = tabulate(sys, [&](const std::vector<double>& w) {
            return std::exp(lambda * std::min(w[0] + w[1], 2.0 * w[2]));
        });
        auto res4 = tensorization_check(sys, t4);
        CHECK(res4.lhs < res4.rhs);
        CHECK(res4.lhs > 0.0);
    }
    // random systems: lhs <= rhs always
    RngStream rng(3);
    for (int i = 0; i < 60; ++i) {
        auto rsys = random_discrete_system(rng, 2, 4, 3);
        auto table = tabulate(rsys, [&](const std::vector<double>& w) {
            return std::exp(0.35 * path_sum(w));
        });
        auto res = tensorization_check(rsys, table);
        CHECK(res.lhs <= res.rhs + 1e-9 * std::max(1.0, std::abs(res.rhs)));
    }
}

TEST_CASE("martingale decomposition") {
    // single coordinate: V_1 = G - EG
    auto one = two_point_system(1);
    auto g1 = tabulate(one, [](const std::vector<double>& w) { return w[0] * w[0]; });
    auto vk1 = martingale_decomposition(one, g1);
    double eg = expectation(one, g1);
    for (std::int64_t s = 0; s < one.n_states(); ++s)
        CHECK(vk1[0][s] == doctest::Approx(g1[s] - eg).epsilon(1e-14));

    // two-coordinate hand enumeration for G = e^{lambda(t1+t2)}
    double lambda = 0.4;
    auto two = two_point_system(2);
    auto g = tabulate(two, [&](const std::vector<double>& w) {
        return std::exp(lambda * path_sum(w));
    });
    auto vk = martingale_decomposition(two, g);
    double m1 = (std::exp(lambda * 1) + std::exp(lambda * 2)) / 2;  // E e^{lambda t}
    for (std::int64_t s = 0; s < two.n_states(); ++s) {
        double t1 = two.coords()[0].values[two.coord_index(s, 0)];
        double want_v1 = std::exp(lambda * t1) * m1 - m1 * m1;
        double want_v2 = g[s] - std::exp(lambda * t1) * m1;
        CHECK(vk[0][s] == doctest::Approx(want_v1).epsilon(1e-13));
        CHECK(vk[1][s] == doctest::Approx(want_v2).epsilon(1e-13));
    }
}

TEST_CASE("martingale identities are exact in rational arithmetic") {
    RngStream rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        auto sys = random_discrete_system(rng, 2, 4, 3);
        // rational-valued G: quadratic polynomial in the weights
        auto table = tabulate_exact(sys, [](const std::vector<double>& w) {
            Rational acc(0);
            for (double x : w) {
                Rational q(x);  // dyadic doubles convert exactly
                acc += q + q * q;
            }
            return acc;
        });
        auto vk = martingale_decomposition(sys, table);
        Rational eg = expectation(sys, table);

        // telescoping on every state
        for (std::int64_t s = 0; s < sys.n_states(); ++s) {
            Rational sum(0);
            for (const auto& v : vk) sum += v[s];
            CHECK(sum == table[s] - eg);
        }
        // orthogonality and the variance identity, both exact
        Rational var = variance(sys, table);
        Rational sum_sq(0);
        for (size_t j = 0; j < vk.size(); ++j) {
            Rational ev2(0);
            for (std::int64_t s = 0; s < sys.n_states(); ++s)
                ev2 += sys.state_prob(s) * vk[j][s] * vk[j][s];
            sum_sq += ev2;
            for (size_t k = j + 1; k < vk.size(); ++k) {
                Rational cross(0);
                for (std::int64_t s = 0; s < sys.n_states(); ++s)
                    cross += sys.state_prob(s) * vk[j][s] * vk[k][s];
                CHECK(cross == 0);
            }
        }
        CHECK(sum_sq == var);
        // per-coordinate resampling bound E|V_k| <= E|G - G^{(k)}|
        auto bounds = resampling_bounds(sys, table);
        for (size_t k = 0; k < vk.size(); ++k) {
            Rational e_abs(0);
            for (std::int64_t s = 0; s < sys.n_states(); ++s)
                e_abs += sys.state_prob(s) * abs(vk[k][s]);
            CHECK(e_abs <= bounds[k]);
        }
    }
}

TEST_CASE("falik-samorodnitsky") {
    // constant G: degenerate convention
    auto sys1 = two_point_system(1);
    auto c = tabulate(sys1, [](const std::vector<double>&) { return 4.0; });
    auto resc = falik_samorodnitsky_check(sys1, c);
    CHECK(resc.lhs == 0.0);
    CHECK(resc.rhs == 0.0);

    // single-edge two-point: closed-form two-state computation
    auto g1 = tabulate(sys1, [](const std::vector<double>& w) { return std::exp(w[0]); });
    auto res1 = falik_samorodnitsky_check(sys1, g1);
    double a = std::exp(1.0), b = std::exp(2.0);
    double var = (a * a + b * b) / 2 - (a + b) * (a + b) / 4;
    CHECK(res1.var_g == doctest::Approx(var).epsilon(1e-12));
    // one coordinate: V_1 = G - EG, E|V_1| = (b-a)/2
    double infl = (b - a) * (b - a) / 4;
    CHECK(res1.influence == doctest::Approx(infl).epsilon(1e-12));
    CHECK(res1.lhs >= res1.rhs - 1e-12);

    // 3-edge path with G = e^{lambda T}
    auto sys3 = two_point_system(3);
    for (double lambda : {-0.5, 0.5}) {
        auto g = tabulate(sys3, [&](const std::vector<double>& w) {
            return std::exp(lambda * path_sum(w));
        });
        auto res = falik_samorodnitsky_check(sys3, g);
        CHECK(res.lhs >= res.rhs - 1e-12 * std::abs(res.rhs));
        CHECK(res.lhs > 0.0);
    }

    // random sweep
    RngStream rng(23);
    for (int i = 0; i < 60; ++i) {
        auto rsys = random_discrete_system(rng, 2, 4, 3);
        double lambda = (rng.next_unit() - 0.5);
        auto g = tabulate(rsys, [&](const std::vector<double>& w) {
            return std::exp(lambda * path_sum(w));
        });
        auto res = falik_samorodnitsky_check(rsys, g);
        CHECK(res.lhs >= res.rhs - 1e-9 * std::max(1.0, std::abs(res.rhs)));
    }
}

TEST_CASE("influence sum symmetry and constants") {
    auto sys = two_point_system(2);
    auto c = tabulate(sys, [](const std::vector<double>&) { return 1.0; });
    CHECK(influence_sum(sys, c) == doctest::Approx(0.0));

    auto g = tabulate(sys, [](const std::vector<double>& w) {
        return std::exp(0.3 * (w[0] + w[1]));
    });
    auto vk = martingale_decomposition(sys, g);
    double e1 = 0, e2 = 0;
    for (std::int64_t s = 0; s < sys.n_states(); ++s) {
        double p = sys.state_prob(s).get_d();
        e1 += p * std::abs(vk[0][s]);
        e2 += p * std::abs(vk[1][s]);
    }
    // exchangeable coordinates entering G symmetrically
    CHECK(e1 == doctest::Approx(e2).epsilon(1e-12));
}

TEST_CASE("discrete derivatives on bit-driven systems") {
    auto uni = WeightDistribution::uniform();
    auto sys = DiscreteSystem::from_bits(uni, 2, 2);
    REQUIRE(sys.n_states() == 16);

    // G independent of coordinate 1: its derivatives vanish
    auto g0 = tabulate(sys, [](const std::vector<double>& w) { return 3.0 * w[0]; });
    auto only0 = DiscreteSystem::from_bits(uni, 1, 2);
    auto g0_only = tabulate(only0, [](const std::vector<double>& w) { return 3.0 * w[0]; });
    CHECK(discrete_derivative_sum(sys, g0) ==
          doctest::Approx(discrete_derivative_sum(only0, g0_only)).epsilon(1e-12));

    // monotone G has non-negative derivatives pointwise
    auto g = tabulate(sys, [](const std::vector<double>& w) { return w[0] + 2 * w[1]; });
    for (int c = 0; c < sys.n_coords(); ++c) {
        const std::int64_t inner = sys.suffix_size(c);
        for (unsigned j = 1; j <= sys.bit_depth(); ++j) {
            int mask = 1 << (sys.bit_depth() - j);
            for (std::int64_t s = 0; s < sys.n_states(); ++s) {
                int idx = sys.coord_index(s, c);
                std::int64_t plus = s + std::int64_t((idx | mask) - idx) * inner;
                std::int64_t minus = s + std::int64_t((idx & ~mask) - idx) * inner;
                CHECK(g[plus] >= g[minus]);
            }
        }
    }

    // Bernoulli log-Sobolev chain: sum Ent(V_k^2) <= sum E (Delta G)^2
    for (double lambda : {0.5, -0.5}) {
        for (const auto& dist :
             {WeightDistribution::uniform(), WeightDistribution::two_point(1, 2, 0.5)}) {
            auto bsys = DiscreteSystem::from_bits(dist, 2, 2);
            auto ge = tabulate(bsys, [&](const std::vector<double>& w) {
                return std::exp(lambda * path_sum(w));
            });
            auto fs = falik_samorodnitsky_check(bsys, ge);
            double dsum = discrete_derivative_sum(bsys, ge);
            CHECK(fs.lhs <= dsum + 1e-9 * std::max(1.0, dsum));
        }
    }
}

TEST_CASE("symmetrized log-Sobolev inequality") {
    auto sys = two_point_system(1, 0.0, 1.0);
    auto x = tabulate(sys, [](const std::vector<double>& w) { return w[0]; });

    auto zero = symmetrized_lsi_check(sys, x, 0.0);
    CHECK(zero.lhs == 0.0);
    CHECK(zero.rhs == 0.0);

    auto cx = tabulate(sys, [](const std::vector<double>&) { return 1.0; });
    auto constant = symmetrized_lsi_check(sys, cx, 1.0);
    CHECK(constant.lhs == doctest::Approx(0.0));
    CHECK(constant.rhs == doctest::Approx(0.0));

    // X in {0,1} fair, lambda = 1: closed forms
    auto res = symmetrized_lsi_check(sys, x, 1.0);
    double e = std::exp(1.0);
    double want_lhs = e / 2 - (1 + e) / 2 * std::log((1 + e) / 2);
    double want_rhs = (e - 1) / 4;  // only the (X,X') = (0,1) pair contributes
    CHECK(res.lhs == doctest::Approx(want_lhs).epsilon(1e-13));
    CHECK(res.rhs == doctest::Approx(want_rhs).epsilon(1e-13));
    CHECK(res.lhs <= res.rhs);

    // random sweep with the overflow guard |lambda| range(X) <= 30
    RngStream rng(5);
    for (int i = 0; i < 60; ++i) {
        auto rsys = random_discrete_system(rng, 1, 3, 3);
        double lambda = (rng.next_unit() * 4 - 2);
        auto xt = tabulate(rsys, path_sum);
        auto r = symmetrized_lsi_check(rsys, xt, lambda);
        CHECK(r.lhs <= r.rhs + 1e-9 * std::max(1.0, std::abs(r.rhs)));
    }
}

TEST_CASE("theorem-4 style bound bookkeeping") {
    auto two12 = WeightDistribution::two_point(1, 2, 0.5);

    // single-edge lattice, x = e1, m = 0
    LatticeWindow line({0, 0}, {1, 0});
    FiniteSupport sup{{1.0, 2.0}, {half(), half()}};
    DiscreteSystem sys({sup}, "single_edge");

    auto zero = theorem4_bound_check(sys, line, two12, {1, 0}, 0, 0.0);
    CHECK(zero.lhs == 0.0);
    CHECK(zero.ratio == 0.0);

    double lambda = 0.25;
    auto res = theorem4_bound_check(sys, line, two12, {1, 0}, 0, lambda);
    // closed-form: G = e^{lambda t}, Geo = {e}, F(t) in {1/2, 1}
    double ga = std::exp(lambda * 1), gb = std::exp(lambda * 2);
    double eg = (ga + gb) / 2;
    double lhs = 0.0;
    {
        double va = (ga - eg) * (ga - eg), vb = (gb - eg) * (gb - eg);
        double ex = (va + vb) / 2;
        lhs = (va > 0 ? va * std::log(va) : 0.0) / 2 + (vb > 0 ? vb * std::log(vb) : 0.0) / 2 -
              ex * std::log(ex);
    }
    double rhs = lambda * lambda *
                 ((std::exp(2 * lambda * 1) * (1 - std::log(0.5))) / 2 +
                  (std::exp(2 * lambda * 2) * (1 - std::log(1.0))) / 2);
    CHECK(res.lhs == doctest::Approx(lhs).epsilon(1e-12));
    CHECK(res.rhs == doctest::Approx(rhs).epsilon(1e-12));
    CHECK(res.ratio == doctest::Approx(lhs / rhs).epsilon(1e-12));

    // small genuine window: finite ratio, both signs of lambda
    LatticeWindow win({0, 0}, {2, 1});
    FiniteSupport sup7{{1.0, 2.0}, {half(), half()}};
    DiscreteSystem sys7(std::vector<FiniteSupport>(win.edge_count(), sup7), "window_2x1");
    for (double lam : {0.25, -0.25}) {
        auto r = theorem4_bound_check(sys7, win, two12, {2, 0}, 0, lam);
        CHECK(std::isfinite(r.ratio));
        CHECK(r.rhs > 0.0);
    }
}

TEST_CASE("quadrature inequality cases") {
    // documented example: a <= tau branch
    StepFunctionPair p1{StepFn::constant(1), StepFn::indicator_at_least(Rational(1, 4)),
                        Rational(1, 4), Rational(1, 2)};
    auto r1 = uniformvar_quadrature(p1);
    CHECK(r1.which == QuadratureCase::SmallA);
    CHECK(r1.lhs == Rational(1, 4));
    CHECK(r1.bound == Rational(3, 8));

    // documented equality case: tau <= a branch
    StepFunctionPair p2{StepFn::constant(1), StepFn::indicator_at_least(half()), half(),
                        Rational(1, 4)};
    auto r2 = uniformvar_quadrature(p2);
    CHECK(r2.which == QuadratureCase::SmallTau);
    CHECK(r2.lhs == Rational(1, 4));
    CHECK(r2.bound == Rational(1, 4));

    // constant f: zero lhs
    StepFunctionPair p3{StepFn::constant(2), StepFn::constant(1), Rational(0), Rational(1, 3)};
    auto r3 = uniformvar_quadrature(p3);
    CHECK(r3.lhs == 0);

    // tie a == tau selects the tau-branch
    StepFunctionPair p4{StepFn::constant(1), StepFn::indicator_at_least(Rational(1, 4)),
                        Rational(1, 4), Rational(1, 4)};
    CHECK(uniformvar_quadrature(p4).which == QuadratureCase::SmallTau);

    // violated preconditions
    StepFunctionPair bad1{StepFn::constant(1), StepFn::indicator_at_least(half()), Rational(1, 4),
                          Rational(1, 4)};  // f not constant on [1/4, 1]
    CHECK_THROWS_AS(uniformvar_quadrature(bad1), std::invalid_argument);
    StepFunctionPair bad2{StepFn::constant(1), StepFn::constant(1), Rational(1, 2),
                          Rational(3, 4)};  // tau > 1/2
    CHECK_THROWS_AS(uniformvar_quadrature(bad2), std::invalid_argument);
    StepFn decreasing;
    decreasing.breaks = {Rational(0), half(), Rational(1)};
    decreasing.values = {Rational(2), Rational(1)};
    StepFunctionPair bad3{StepFn::constant(1), decreasing, Rational(1), Rational(1, 4)};
    CHECK_THROWS_AS(uniformvar_quadrature(bad3), std::invalid_argument);
}
