#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "projangles/eigen.hpp"
#include "projangles/spectra.hpp"

using namespace pa;

namespace {

BipartiteGraph six_cycle() {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
    for (std::uint32_t i = 0; i < 3; ++i) {
        e.push_back({i, i});
        e.push_back({i, (i + 1) % 3});
    }
    return make_bipartite(3, 3, std::move(e));
}

BipartiteGraph complete_bipartite(std::uint32_t a, std::uint32_t b) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
    for (std::uint32_t i = 0; i < a; ++i)
        for (std::uint32_t j = 0; j < b; ++j) e.push_back({i, j});
    return make_bipartite(a, b, std::move(e));
}

// slow oracle: kappa straight from the dense normalized Laplacian
double kappa_dense(const BipartiteGraph& g) {
    SymEigen eg = sym_eigen(normalized_laplacian(g));
    for (double v : eg.values)
        if (v > 1e-9 && v < 2.0 - 1e-9) return v;
    return -1.0;
}

}  // namespace

TEST_CASE("graph construction validates its input") {
    CHECK_THROWS_AS(make_bipartite(2, 2, {{0, 0}, {0, 0}, {1, 1}}), Error);  // duplicate
    CHECK_THROWS_AS(make_bipartite(2, 2, {{0, 0}, {2, 1}}), Error);          // out of range
    CHECK_THROWS_AS(make_bipartite(2, 2, {{0, 0}, {0, 1}}), Error);          // isolated vertex
}

TEST_CASE("kappa golden values") {
    CHECK(kappa(complete_bipartite(3, 3)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kappa(six_cycle()) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(kappa(projective_plane_graph(2)) ==
          doctest::Approx(1.0 - std::sqrt(2.0) / 3.0).epsilon(1e-10));
}

TEST_CASE("kappa rejects disconnected graphs and names the component count") {
    BipartiteGraph two = make_bipartite(2, 2, {{0, 0}, {1, 1}});
    CHECK_THROWS_WITH_AS(kappa(two), doctest::Contains("2 components"), Error);
}

TEST_CASE("kappa agrees with the dense normalized-Laplacian route") {
    for (const BipartiteGraph& g :
         {six_cycle(), projective_plane_graph(2), gq2_graph(), projective_plane_graph(3)})
        CHECK(kappa(g) == doctest::Approx(kappa_dense(g)).epsilon(1e-9));
}

TEST_CASE("b_delta_r values") {
    SpectralReport heawood = b_delta_r(projective_plane_graph(2), 5.0);
    CHECK(heawood.v_min == 7);
    CHECK(heawood.b_value ==
          doctest::Approx(std::sqrt(2.0) / 3.0 * std::pow(7.0, 0.2)).epsilon(1e-10));

    CHECK(b_delta_r(complete_bipartite(3, 4), 2.0).b_value == doctest::Approx(0.0).epsilon(1e-12));

    SpectralReport c6 = b_delta_r(six_cycle(), 4.0);
    CHECK(c6.b_value == doctest::Approx(0.5 * std::pow(3.0, 0.25)).epsilon(1e-12));
    CHECK(c6.b_value == doctest::Approx(0.658037).epsilon(1e-5));

    CHECK_THROWS_AS(b_delta_r(six_cycle(), 0.5), Error);
}

TEST_CASE("projective plane generators") {
    // q = 2 is the Heawood graph
    BipartiteGraph heawood = projective_plane_graph(2);
    CHECK(heawood.n1 == 7);
    CHECK(heawood.n2 == 7);
    CHECK(heawood.edges.size() == 21);
    CHECK(girth(heawood) == 6);
    for (std::size_t d : degrees_part1(heawood)) CHECK(d == 3);

    for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
        BipartiteGraph g = projective_plane_graph(q);
        const std::size_t expect = static_cast<std::size_t>(q) * q + q + 1;
        CHECK(g.n1 == expect);
        CHECK(g.n2 == expect);
        CHECK(g.n1 == mgon_vmin(3, q, q).value);
        for (std::size_t d : degrees_part1(g)) CHECK(d == q + 1);
        for (std::size_t d : degrees_part2(g)) CHECK(d == q + 1);
        CHECK(girth(g) == 6);
        CHECK(is_connected(g));
    }
    CHECK_THROWS_AS(projective_plane_graph(6), Error);
    CHECK_THROWS_AS(projective_plane_graph(11), Error);
}

TEST_CASE("mgon_vmin formulas") {
    CHECK(mgon_vmin(3, 2, 2).value == 7);
    CHECK(mgon_vmin(4, 2, 2).value == 15);
    CHECK(mgon_vmin(3, 1, 1).value == 3);
    CHECK(mgon_vmin(6, 2, 2).value == (16 + 4 + 1) * 3);
    CHECK(mgon_vmin(8, 2, 2).value == (16 + 1) * 5 * 3);

    VminResult swapped = mgon_vmin(4, 2, 5);  // s < t: arguments exchanged
    CHECK(swapped.swapped);
    CHECK(swapped.value == mgon_vmin(4, 5, 2).value);
    CHECK_FALSE(mgon_vmin(4, 5, 2).swapped);

    CHECK_THROWS_AS(mgon_vmin(5, 2, 2), Error);
    CHECK_THROWS_AS(mgon_vmin(3, 0, 0), Error);
}

TEST_CASE("generalized quadrangle GQ(2,2)") {
    BipartiteGraph g = gq2_graph();
    CHECK(g.n1 == 15);
    CHECK(g.n2 == 15);
    CHECK(g.n1 == mgon_vmin(4, 2, 2).value);
    for (std::size_t d : degrees_part1(g)) CHECK(d == 3);
    for (std::size_t d : degrees_part2(g)) CHECK(d == 3);
    CHECK(girth(g) == 8);
    CHECK(kappa(g) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(b_delta_r(g, 9.0).b_value ==
          doctest::Approx(2.0 / 3.0 * std::pow(15.0, 1.0 / 9.0)).epsilon(1e-10));
}

TEST_CASE("thickness_threshold") {
    ThicknessSweep sweep = thickness_threshold(3, 5.0, 0.7);
    REQUIRE(sweep.threshold_q.has_value());
    CHECK(*sweep.threshold_q == 2);
    CHECK_FALSE(sweep.regime_warning);
    CHECK(sweep.rows.size() == 7);
    // the q = 2 row carries the Heawood quantities
    CHECK(sweep.rows[0].b_value ==
          doctest::Approx(std::sqrt(2.0) / 3.0 * std::pow(7.0, 0.2)).epsilon(1e-10));
    // closed-form agreement across the table: b = sqrt(q)/(q+1) (q^2+q+1)^(1/5)
    for (const SweepRow& row : sweep.rows) {
        const double q = row.q;
        CHECK(row.b_value ==
              doctest::Approx(std::sqrt(q) / (q + 1.0) * std::pow(q * q + q + 1.0, 0.2))
                  .epsilon(1e-9));
    }

    ThicknessSweep none = thickness_threshold(3, 5.0, 0.5);
    CHECK_FALSE(none.threshold_q.has_value());
    CHECK(none.rows.size() == 7);

    ThicknessSweep warn = thickness_threshold(3, 4.0, 0.7);
    CHECK(warn.regime_warning);
    CHECK(warn.rows.size() == 7);  // the sweep still runs

    ThicknessSweep gq = thickness_threshold(4, 9.0, 0.95);
    REQUIRE(gq.threshold_q.has_value());
    CHECK(*gq.threshold_q == 2);

    CHECK_THROWS_AS(thickness_threshold(6, 20.0, 0.5), Error);
    CHECK_THROWS_AS(thickness_threshold(3, 5.0, 0.0), Error);
}

TEST_CASE("normalized Laplacian spectrum lies in [0, 2]") {
    for (const BipartiteGraph& g : {six_cycle(), gq2_graph(), projective_plane_graph(3)}) {
        SymEigen eg = sym_eigen(normalized_laplacian(g));
        CHECK(eg.values.front() >= -1e-10);
        CHECK(eg.values.back() <= 2.0 + 1e-10);
    }
}
