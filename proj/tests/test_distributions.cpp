#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "distributions.hpp"
#include "rng.hpp"

using namespace fpp;

TEST_CASE("inverse_cdf examples") {
    auto uni = WeightDistribution::uniform();
    CHECK(uni.inverse_cdf(0.3) == doctest::Approx(0.3).epsilon(1e-15));

    auto tp = WeightDistribution::two_point(1, 2, 0.5);
    CHECK(tp.inverse_cdf(0.3) == 1.0);
    CHECK(tp.inverse_cdf(0.7) == 2.0);
    CHECK(tp.inverse_cdf(0.5) == 1.0);  // right-continuous inverse at the atom

    auto expo = WeightDistribution::exponential(1.0);
    CHECK(expo.inverse_cdf(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS((void)uni.inverse_cdf(1.0), std::domain_error);
    CHECK_THROWS_AS((void)uni.inverse_cdf(-0.1), std::domain_error);
}

TEST_CASE("right-continuous inverse contract") {
    std::vector<WeightDistribution> dists = {
        WeightDistribution::uniform(), WeightDistribution::exponential(2.0),
        WeightDistribution::two_point(0.5, 1.5, 0.25), WeightDistribution::point_mass(1.0),
        WeightDistribution::piecewise({{0.0, 0.0}, {1.0, 0.5}, {3.0, 1.0}})};
    RngStream rng(42);
    for (const auto& d : dists) {
        for (int i = 0; i < 400; ++i) {
            double u = rng.next_unit() * 0.999;
            double x = rng.next_unit() * 4.0;
            bool lhs = d.inverse_cdf(u) <= x;
            bool rhs = u <= d.cdf(x);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("encode_uniform examples") {
    CHECK(encode_uniform({1, 0, 1}, 3) == 0.625);
    CHECK(encode_uniform({0, 0, 0, 0}, 4) == 0.0);
    CHECK(encode_uniform({1, 1, 1, 1}, 4) == 0.9375);
    CHECK_THROWS(encode_uniform({1, 0}, 3));
}

TEST_CASE("sample_weight equals inverse of encoded bits") {
    auto tp = WeightDistribution::two_point(1, 2, 0.5);
    RngStream s1(7);
    auto [w, enc] = tp.sample_weight(s1, 3);
    CHECK(w == tp.inverse_cdf(encode_uniform(enc)));

    auto expo = WeightDistribution::exponential(1.0);
    for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
        RngStream s(seed);
        auto [we, ence] = expo.sample_weight(s, 32);
        CHECK(we == expo.inverse_cdf(encode_uniform(ence)));  // bit-exact composition
    }

    // All-zero bits force the support infimum.
    BernoulliEncoding zero{3, 0};
    CHECK(tp.inverse_cdf(encode_uniform(zero)) == 1.0);
}

TEST_CASE("monotone coupling in the bits") {
    std::vector<WeightDistribution> dists = {
        WeightDistribution::uniform(), WeightDistribution::exponential(1.0),
        WeightDistribution::two_point(1, 2, 0.5),
        WeightDistribution::piecewise({{0.0, 0.0}, {0.5, 0.75}, {2.0, 1.0}})};
    RngStream rng(3);
    for (const auto& d : dists) {
        for (int i = 0; i < 500; ++i) {
            unsigned depth = 16;
            std::uint64_t lo = rng.next_bits(depth);
            std::uint64_t hi = lo | rng.next_bits(depth);  // coordinatewise >=
            double ulo = encode_uniform(BernoulliEncoding{depth, lo});
            double uhi = encode_uniform(BernoulliEncoding{depth, hi});
            CHECK(ulo <= uhi);
            CHECK(d.inverse_cdf(ulo) <= d.inverse_cdf(uhi));
        }
    }
}

TEST_CASE("animal weight examples") {
    auto uni = WeightDistribution::uniform();
    CHECK(uni.animal_weight(1.0) == doctest::Approx(1.0));
    CHECK(uni.animal_weight(std::exp(-1.0)) == doctest::Approx(2.0).epsilon(1e-12));
    auto tp = WeightDistribution::two_point(1, 2, 0.5);
    CHECK(tp.animal_weight(1.0) == doctest::Approx(1.0 + std::log(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS((void)tp.animal_weight(0.5), std::domain_error);
}

TEST_CASE("animal weight tail dominated by e^{1-r}") {
    const int n = 200000;
    for (const auto& d : {WeightDistribution::uniform(), WeightDistribution::exponential(1.0)}) {
        RngStream rng(11);
        std::vector<double> w(n);
        for (int i = 0; i < n; ++i) {
            RngStream s(rng.next_u64());
            w[i] = d.animal_weight(d.sample_weight(s, 32).first);
        }
        for (int r = 1; r <= 8; ++r) {
            double count = 0;
            for (double v : w) count += v >= r;
            double p_hat = count / n;
            double bound = std::exp(1.0 - r);
            double se = std::sqrt(std::max(p_hat * (1 - p_hat), 1e-12) / n);
            CHECK(p_hat <= bound + 3 * se);
        }
    }
}

TEST_CASE("Kolmogorov-Smirnov distance of the sampling path") {
    const int n = 100000;
    for (const auto& d : {WeightDistribution::uniform(), WeightDistribution::exponential(1.0)}) {
        std::vector<double> xs(n);
        RngStream rng(5);
        for (int i = 0; i < n; ++i) {
            RngStream s(rng.next_u64());
            xs[i] = d.sample_weight(s, 32).first;
        }
        std::sort(xs.begin(), xs.end());
        double ks = 0;
        for (int i = 0; i < n; ++i) {
            double F = d.cdf(xs[i]);
            ks = std::max(ks, std::abs(F - double(i) / n));
            ks = std::max(ks, std::abs(double(i + 1) / n - F));
        }
        CHECK(ks < 0.01);
    }
}

TEST_CASE("truncation error non-increasing in bit depth") {
    RngStream rng(17);
    for (const auto& d : {WeightDistribution::uniform(), WeightDistribution::exponential(1.0)}) {
        for (int i = 0; i < 200; ++i) {
            std::uint64_t full = rng.next_bits(48);
            double u = std::ldexp(double(full), -48) * 0.9;  // stay on a Lipschitz stretch
            double prev = std::numeric_limits<double>::infinity();
            for (unsigned J : {4u, 8u, 16u, 24u, 32u}) {
                double uj = std::ldexp(double(full >> (48 - J)), -int(J)) * 0.9;
                double err = std::abs(d.inverse_cdf(uj) - d.inverse_cdf(u));
                CHECK(err <= prev + 1e-12);
                prev = err;
            }
        }
    }
}

TEST_CASE("subcriticality validation") {
    CHECK(WeightDistribution::bernoulli(0.4).validate_subcritical(2));
    CHECK_FALSE(WeightDistribution::bernoulli(0.5).validate_subcritical(2));
    CHECK(WeightDistribution::uniform().validate_subcritical(3));  // zero atom
    CHECK(WeightDistribution::exponential(1.0).validate_subcritical(6));
    CHECK_THROWS_AS((void)WeightDistribution::uniform().validate_subcritical(7),
                    std::domain_error);
    CHECK_FALSE(WeightDistribution::bernoulli(0.21).validate_subcritical(3));
}

TEST_CASE("piecewise CDF table") {
    auto pw = WeightDistribution::piecewise({{0.0, 0.0}, {1.0, 0.5}, {2.0, 1.0}});
    CHECK(pw.cdf(0.5) == doctest::Approx(0.25));
    CHECK(pw.inverse_cdf(0.25) == doctest::Approx(0.5));
    CHECK(pw.support_infimum() == 0.0);
    CHECK(pw.atom_at_zero() == 0.0);

    // Atom at the left endpoint of the table.
    auto atom = WeightDistribution::piecewise({{1.0, 0.3}, {2.0, 1.0}});
    CHECK(atom.inverse_cdf(0.2) == 1.0);
    CHECK(atom.inverse_cdf(0.3) == 1.0);
    CHECK(atom.inverse_cdf(0.65) == doctest::Approx(1.5));
    CHECK(atom.support_infimum() == 1.0);

    CHECK_THROWS(WeightDistribution::piecewise({{0.0, 0.0}, {1.0, 0.9}}));
    CHECK_THROWS(WeightDistribution::piecewise({{1.0, 0.0}, {0.5, 1.0}}));
    CHECK_THROWS(WeightDistribution::piecewise({{0.0, 0.5}, {1.0, 0.2}}));
}

TEST_CASE("rational scale detection") {
    CHECK(WeightDistribution::two_point(1, 2, 0.5).rational_scale() == 1);
    CHECK(WeightDistribution::two_point(0.5, 1.5, 0.25).rational_scale() == 2);
    CHECK(WeightDistribution::two_point(1.0 / 3, 2.0 / 3, 0.5).rational_scale() == 3);
    CHECK(WeightDistribution::point_mass(0.25).rational_scale() == 4);
    CHECK(!WeightDistribution::uniform().rational_scale());
    CHECK(!WeightDistribution::exponential(1.0).rational_scale());
}

TEST_CASE("parse compact forms") {
    CHECK(WeightDistribution::parse("uniform", {}).name() == "uniform");
    CHECK(WeightDistribution::parse("exponential", {2.0}).params()[0] == 2.0);
    CHECK(WeightDistribution::parse("two_point", {1, 2, 0.5}).kind() ==
          WeightDistribution::Kind::TwoPoint);
    CHECK_THROWS(WeightDistribution::parse("gamma", {1.0}));
    CHECK_THROWS(WeightDistribution::parse("two_point", {1.0}));
}
