#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "geodesics.hpp"
#include "support/oracle.hpp"

using namespace fpp;

namespace {

DistPtr uni() { return std::make_shared<WeightDistribution>(WeightDistribution::uniform()); }
DistPtr expo() {
    return std::make_shared<WeightDistribution>(WeightDistribution::exponential(1.0));
}
DistPtr two12() {
    return std::make_shared<WeightDistribution>(WeightDistribution::two_point(1, 2, 0.5));
}
DistPtr ones() { return std::make_shared<WeightDistribution>(WeightDistribution::point_mass(1)); }

EdgeConfig unit_config(const LatticeWindow& win) {
    return manual_config(ones(), win, std::vector<double>(win.edge_count(), 1.0));
}

std::int64_t edge_between(const LatticeWindow& win, const Coord& a, const Coord& b) {
    for (int axis = 0; axis < win.dim(); ++axis) {
        Coord lo = a, hi = b;
        if (hi[axis] < lo[axis]) std::swap(lo, hi);
        Coord diff = hi;
        for (int i = 0; i < win.dim(); ++i) diff[i] -= lo[i];
        bool unit = diff[axis] == 1;
        for (int i = 0; unit && i < win.dim(); ++i)
            if (i != axis && diff[i] != 0) unit = false;
        if (unit) return win.edge_at(win.vertex_index(lo), axis);
    }
    return -1;
}

}  // namespace

TEST_CASE("unit weights give l1 distance") {
    auto cfg = unit_config(window_for({3, 2}, 0, 2));
    auto pr = passage_time(cfg, {0, 0}, {3, 2});
    CHECK(pr.T == 5.0);
    CHECK_FALSE(pr.boundary_touched);
    CHECK(max_geodesic_length(cfg, {0, 0}, {3, 2}) == 5);
}

TEST_CASE("expensive direct edge forces the detour") {
    LatticeWindow win({-1, -1}, {2, 1});
    auto weights = std::vector<double>(win.edge_count(), 1.0);
    std::int64_t direct = edge_between(win, {0, 0}, {1, 0});
    REQUIRE(direct >= 0);
    weights[direct] = 5.0;
    auto cfg = manual_config(ones(), win, weights);
    auto rep = geodesic_report(cfg, {0, 0}, {1, 0});
    CHECK(rep.T == 3.0);
    auto orc = oracle::enumerate_paths(cfg, {0, 0}, {1, 0});
    CHECK(orc.T == 3.0);
}

TEST_CASE("oracle equivalence on small random windows") {
    RngStream seeds(2024);
    std::vector<DistPtr> dists = {uni(), expo(), two12()};
    int checked = 0;
    for (int rep = 0; rep < 60; ++rep) {
        const auto& dist = dists[rep % dists.size()];
        LatticeWindow win = (rep % 2) ? LatticeWindow({0, 0}, {2, 2}) : LatticeWindow({0, 0}, {2, 1});
        auto cfg = sample_config(dist, win, seeds.next_u64(), 0, 32);
        Coord u{0, 0};
        Coord v = (rep % 2) ? Coord{2, 2} : Coord{2, 1};

        auto got = geodesic_report(cfg, u, v);
        auto want = oracle::enumerate_paths(cfg, u, v);
        CHECK(got.T == want.T);
        CHECK(got.max_length == want.max_length);
        CHECK(got.max_length_exact);
        CHECK(got.geo_set == want.geo_set);
        CHECK(got.unique_geodesic == (want.n_geodesics == 1));
        ++checked;
    }
    CHECK(checked == 60);
}

TEST_CASE("symmetric diamond has empty intersection") {
    auto cfg = unit_config(LatticeWindow({0, 0}, {1, 1}));
    auto rep = geodesic_report(cfg, {0, 0}, {1, 1});
    CHECK(rep.T == 2.0);
    CHECK(rep.geo_set.empty());
    CHECK(rep.max_length == 2);
    CHECK_FALSE(rep.unique_geodesic);
}

TEST_CASE("shared bottleneck edge is the whole intersection") {
    LatticeWindow win({0, 0}, {2, 1});
    auto weights = std::vector<double>(win.edge_count(), 1.0);
    std::int64_t blocked = edge_between(win, {2, 0}, {2, 1});
    weights[blocked] = 5.0;
    auto cfg = manual_config(ones(), win, weights);
    auto rep = geodesic_report(cfg, {0, 0}, {2, 1});
    std::int64_t bottleneck = edge_between(win, {1, 1}, {2, 1});
    CHECK(rep.T == 3.0);
    CHECK(rep.geo_set == std::vector<std::int64_t>{bottleneck});
    auto orc = oracle::enumerate_paths(cfg, {0, 0}, {2, 1});
    CHECK(orc.n_geodesics == 2);
    CHECK(orc.geo_set == rep.geo_set);
}

TEST_CASE("critical value on the unit gadget") {
    LatticeWindow win({-1, -1}, {2, 1});
    auto cfg = unit_config(win);
    std::int64_t e = edge_between(win, {0, 0}, {1, 0});
    auto cv = critical_value(cfg, e, {0, 0}, {1, 0});
    CHECK(cv.through == 0.0);
    CHECK(cv.avoid == 3.0);
    CHECK(cv.D == 3.0);

    // Lemma identity at s=1, t=2: increment = min{t-s, (D-s)+} = 1.
    auto Ts = passage_time(cfg, {0, 0}, {1, 0}, Overlay{e, 1.0}).T;
    auto Tt = passage_time(cfg, {0, 0}, {1, 0}, Overlay{e, 2.0}).T;
    CHECK(Tt - Ts == 1.0);
}

TEST_CASE("critical value clamps to zero behind expensive detours") {
    LatticeWindow win({-1, -1}, {2, 2});
    auto cfg = unit_config(win);
    std::int64_t e = edge_between(win, {0, 1}, {1, 1});
    auto cv = critical_value(cfg, e, {0, 0}, {1, 0});
    CHECK(cv.through == 2.0);
    CHECK(cv.avoid == 1.0);
    CHECK(cv.D == 0.0);
}

TEST_CASE("critical value does not depend on the edge's own weight") {
    RngStream seeds(99);
    for (int rep = 0; rep < 20; ++rep) {
        auto cfg = sample_config(uni(), window_for({3, 1}, 0, 2), seeds.next_u64(), 0, 32);
        std::int64_t e = std::int64_t(seeds.next_below(cfg.window.edge_count()));
        auto cv = critical_value(cfg, e, {0, 0}, {3, 1});
        auto modified = cfg;
        modified.weights[e] = 123.456;
        auto cv2 = critical_value(modified, e, {0, 0}, {3, 1});
        CHECK(cv.D == cv2.D);
    }
}

TEST_CASE("lemma identity on random tuples") {
    RngStream seeds(31337);
    std::vector<DistPtr> dists = {uni(), two12()};
    for (int rep = 0; rep < 200; ++rep) {
        const auto& dist = dists[rep % dists.size()];
        Coord x{3, 1};
        auto cfg = sample_config(dist, window_for(x, 1, 3), seeds.next_u64(), rep, 32);
        std::int64_t e = std::int64_t(seeds.next_below(cfg.window.edge_count()));
        Coord z{int(seeds.next_below(2)), int(seeds.next_below(2))};
        Coord zx = z + x;

        double s = 0.25 * double(seeds.next_below(9));
        double t = s + 0.25 * double(seeds.next_below(9));
        auto cv = critical_value(cfg, e, z, x);
        double Ts = passage_time(cfg, z, zx, Overlay{e, s}).T;
        double Tt = passage_time(cfg, z, zx, Overlay{e, t}).T;
        double want = std::min(t - s, std::max(cv.D - s, 0.0));
        CHECK(Tt - Ts == doctest::Approx(want).epsilon(1e-9));

        if (s < cv.D - 1e-6) {
            auto geo = geodesic_intersection(cfg, z, zx, Overlay{e, s});
            CHECK(std::find(geo.begin(), geo.end(), e) != geo.end());
        }
    }
}

TEST_CASE("monotone coupling of passage times in one weight") {
    RngStream seeds(8);
    auto cfg = sample_config(expo(), window_for({4, 0}, 0, 3), 55, 0, 32);
    for (int rep = 0; rep < 100; ++rep) {
        std::int64_t e = std::int64_t(seeds.next_below(cfg.window.edge_count()));
        double w = cfg.weights[e];
        double base = passage_time(cfg, {0, 0}, {4, 0}).T;
        double up = passage_time(cfg, {0, 0}, {4, 0}, Overlay{e, w + 0.5}).T;
        double down = passage_time(cfg, {0, 0}, {4, 0}, Overlay{e, w * 0.5}).T;
        CHECK(up >= base);
        CHECK(down <= base);
    }
}

TEST_CASE("passage time is a pseudo-metric") {
    auto cfg = sample_config(uni(), LatticeWindow({-3, -3}, {3, 3}), 77, 0, 32);
    RngStream rng(123);
    for (int rep = 0; rep < 40; ++rep) {
        Coord a{int(rng.next_below(7)) - 3, int(rng.next_below(7)) - 3};
        Coord b{int(rng.next_below(7)) - 3, int(rng.next_below(7)) - 3};
        Coord c{int(rng.next_below(7)) - 3, int(rng.next_below(7)) - 3};
        CHECK(passage_time(cfg, a, a).T == 0.0);
        double ab = passage_time(cfg, a, b).T;
        double ba = passage_time(cfg, b, a).T;
        CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
        double ac = passage_time(cfg, a, c).T;
        double cb = passage_time(cfg, c, b).T;
        CHECK(ab <= ac + cb + 1e-12);
    }
}

TEST_CASE("geodesic path sums to T exactly") {
    RngStream seeds(6);
    for (int rep = 0; rep < 30; ++rep) {
        auto cfg = sample_config(uni(), window_for({4, 2}, 0, 2), seeds.next_u64(), 0, 32);
        auto report = geodesic_report(cfg, {0, 0}, {4, 2});
        double sum = 0;
        for (auto e : report.path) sum += cfg.weights[e];
        CHECK(sum == doctest::Approx(report.T).epsilon(1e-12));
        CHECK(report.max_length >= long(report.path.size()));
        CHECK(long(report.path.size()) >= 6);
        for (auto e : report.geo_set)
            CHECK(std::find(report.path.begin(), report.path.end(), e) != report.path.end());
    }
}

TEST_CASE("boundary touch flag") {
    // On a line every optimal path hugs the boundary.
    auto line = unit_config(LatticeWindow({0, 0}, {3, 0}));
    CHECK(passage_time(line, {0, 0}, {3, 0}).boundary_touched);
    // With padding the straight geodesic stays interior.
    auto padded = unit_config(window_for({3, 0}, 0, 2));
    CHECK_FALSE(passage_time(padded, {0, 0}, {3, 0}).boundary_touched);
}

TEST_CASE("kesten indicator") {
    GeodesicReport r;
    r.T = 10;
    r.max_length = 4;
    CHECK(kesten_indicator(r, 1.0) == 0);
    r.T = 2;
    CHECK(kesten_indicator(r, 1.0) == 4);
    auto cfg = unit_config(window_for({3, 0}, 0, 2));
    auto rep = geodesic_report(cfg, {0, 0}, {3, 0});
    CHECK(kesten_indicator(rep, 1.0) == 0);  // T = G = |x|_1
    CHECK_THROWS_AS(kesten_indicator(rep, 0.0), std::domain_error);
}

TEST_CASE("geodesic log weight") {
    // Empty Geo set on the symmetric diamond.
    auto diamond = unit_config(LatticeWindow({0, 0}, {1, 1}));
    CHECK(geodesic_log_weight(diamond, {0, 0}, {1, 1}) == 0.0);

    // Unique geodesic with uniform marginal: sum of 1 - ln t_e.
    RngStream seeds(40);
    auto cfg = sample_config(uni(), window_for({3, 0}, 0, 3), seeds.next_u64(), 0, 32);
    auto rep = geodesic_report(cfg, {0, 0}, {3, 0});
    REQUIRE(rep.unique_geodesic);
    double want = 0;
    for (auto e : rep.path) want += 1.0 - std::log(cfg.weights[e]);
    CHECK(geodesic_log_weight(cfg, {0, 0}, {3, 0}) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("geo membership matches removal oracle exactly") {
    RngStream seeds(91);
    std::vector<DistPtr> dists = {uni(), two12()};
    for (int rep = 0; rep < 40; ++rep) {
        auto cfg = sample_config(dists[rep % 2], LatticeWindow({0, 0}, {2, 2}),
                                 seeds.next_u64(), 0, 32);
        auto want = oracle::enumerate_paths(cfg, {0, 0}, {2, 2});
        auto geo = geodesic_intersection(cfg, {0, 0}, {2, 2});
        CHECK(geo == want.geo_set);
        // Removal strictly raises T for exactly the Geo edges.
        for (auto e : want.geo_set) {
            double raised = oracle::min_cost_avoiding(want, e);
            CHECK(raised > want.T);
        }
    }
}
