#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "animals.hpp"
#include "support/oracle.hpp"

using namespace fpp;

namespace {

AnimalInstance random_instance(std::uint64_t seed) {
    LatticeWindow win({-3, -3}, {3, 3});
    AnimalInstance inst{win, std::vector<double>(win.edge_count())};
    RngStream rng(seed);
    for (auto& w : inst.weights) w = rng.next_unit() * 3.0;
    return inst;
}

AnimalInstance constant_instance(double c) {
    LatticeWindow win({-3, -3}, {3, 3});
    return {win, std::vector<double>(win.edge_count(), c)};
}

}  // namespace

TEST_CASE("size one equals the best origin edge") {
    auto inst = random_instance(5);
    double best = 0;
    std::int64_t oi = inst.window.vertex_index({0, 0});
    for (int axis = 0; axis < 2; ++axis)
        for (bool pos : {true, false}) {
            auto e = inst.window.incident_edge(oi, axis, pos);
            if (e >= 0) best = std::max(best, inst.weights[e]);
        }
    CHECK(exact_Nn(inst, 1, 10) == best);
    CHECK(greedy_Nn(inst, 1).value == best);
}

TEST_CASE("constant weights give c times n") {
    auto inst = constant_instance(1.5);
    for (int n : {1, 2, 3, 5}) {
        CHECK(exact_Nn(inst, n, 10) == doctest::Approx(1.5 * n).epsilon(1e-12));
        auto g = greedy_Nn(inst, n);
        CHECK(g.complete);
        CHECK(g.value == doctest::Approx(1.5 * n).epsilon(1e-12));
    }
}

TEST_CASE("exact enumeration matches unpruned brute force") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto inst = random_instance(seed);
        for (int n : {2, 3, 4}) {
            double want = oracle::brute_force_Nn(inst.window, inst.weights, n);
            CHECK(exact_Nn(inst, n, 10) == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("greedy is a lower bound and can be strictly worse") {
    for (std::uint64_t seed = 30; seed < 45; ++seed) {
        auto inst = random_instance(seed);
        for (int n : {1, 2, 4, 6}) {
            auto g = greedy_Nn(inst, n);
            REQUIRE(g.complete);
            CHECK(g.value <= exact_Nn(inst, n, 10) + 1e-12);
        }
    }

    // High-weight edge hidden behind a cheap bridge defeats the greedy walk.
    auto inst = constant_instance(0.01);
    auto& win = inst.window;
    auto set_w = [&](Coord a, int axis, double w) {
        inst.weights[win.edge_at(win.vertex_index(a), axis)] = w;
    };
    set_w({0, 0}, 1, 1.0);    // north
    set_w({0, -1}, 1, 1.0);   // south
    set_w({-1, 0}, 0, 1.0);   // west
    set_w({0, 0}, 0, 0.1);    // cheap bridge east
    set_w({1, 0}, 0, 10.0);   // treasure behind it
    double exact = exact_Nn(inst, 2, 10);
    auto greedy = greedy_Nn(inst, 2);
    CHECK(exact == doctest::Approx(10.1));
    CHECK(greedy.value < exact);
}

TEST_CASE("monotone growth in n") {
    auto inst = random_instance(77);
    double prev = 0;
    for (int n = 1; n <= 7; ++n) {
        double v = exact_Nn(inst, n, 10);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("animal weights from a sampled configuration are at least one") {
    auto uni = WeightDistribution::uniform();
    auto inst = sample_animal_instance(uni, 2, 5, 999, 0, 32);
    for (double w : inst.weights) CHECK(w >= 1.0);
    // so N_n >= n
    for (int n : {1, 3, 5}) CHECK(exact_Nn(inst, n, 10) >= double(n));
}

TEST_CASE("cap is enforced") {
    auto inst = random_instance(3);
    CHECK_THROWS_AS((void)exact_Nn(inst, 11, 10), std::domain_error);
    CHECK(animal_exact_cap(2) == 10);
    CHECK(animal_exact_cap(3) == 7);
}

TEST_CASE("growth statistics anchors") {
    auto point = WeightDistribution::point_mass(1.0);
    auto stats = animal_growth_stats(point, 2, 1, 4, 8, {0.0, 0.1, 0.5}, 42, 32,
                                     animal_exact_cap(2), false);
    CHECK(stats.replicas_used == 8);
    for (const auto& row : stats.rows) {
        CHECK(row.exact);
        CHECK(row.mean_ratio == doctest::Approx(1.0));  // N_n = n when w = 1
        // log E e^{beta n} / n = beta exactly; beta = 0 gives 0
        CHECK(row.log_mgf_over_n == doctest::Approx(row.beta).epsilon(1e-12));
        CHECK(row.stderr_log_mgf == doctest::Approx(0.0));
    }

    auto uni = WeightDistribution::uniform();
    auto ustats = animal_growth_stats(uni, 2, 2, 5, 6, {0.0, 0.1}, 7, 32, animal_exact_cap(2),
                                      false);
    for (const auto& row : ustats.rows) {
        CHECK(std::isfinite(row.log_mgf_over_n));
        if (row.beta == 0.0) CHECK(row.log_mgf_over_n == doctest::Approx(0.0));
        CHECK(row.mean_ratio >= 1.0);
    }

    CHECK_THROWS_AS(animal_growth_stats(uni, 2, 1, 12, 2, {0.0}, 1, 32, 10, false),
                    std::domain_error);
}
