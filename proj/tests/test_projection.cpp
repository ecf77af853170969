#include <doctest.h>

#include <cmath>

#include "projangles/eigen.hpp"
#include "projangles/simplex.hpp"
#include "test_util.hpp"

using namespace pa;

namespace {

const NormContext kL2 = NormContext::lp(2.0);

Projection line_projection(double angle_rad) {
    Matrix dir{{std::cos(angle_rad)}, {std::sin(angle_rad)}};
    Matrix normal{{-std::sin(angle_rad)}, {std::cos(angle_rad)}};
    return make_projection(dir, normal, kL2);
}

Projection zero_projection(std::size_t n) { return projection_from_op(Matrix(n, n, 0.0), kL2); }

}  // namespace

TEST_CASE("make_projection examples") {
    // coordinate projection
    Matrix e1{{1.0}, {0.0}};
    Matrix e2{{0.0}, {1.0}};
    Projection p = make_projection(e1, e2, kL2);
    CHECK(p.op(0, 0) == doctest::Approx(1.0));
    CHECK(p.op(1, 1) == doctest::Approx(0.0));
    CHECK(p.rank() == 1);

    // oblique: image e1, kernel span(e1+e2)
    Matrix diag{{1.0}, {1.0}};
    Projection ob = make_projection(e1, diag, kL2);
    CHECK(ob.op(0, 0) == doctest::Approx(1.0));
    CHECK(ob.op(0, 1) == doctest::Approx(-1.0));
    CHECK(ob.op(1, 0) == doctest::Approx(0.0));
    CHECK(ob.op(1, 1) == doctest::Approx(0.0));
    CHECK(operator_norm(ob.op, kL2).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    // whole space: empty kernel
    Projection full = make_projection(Matrix::identity(3), Matrix(3, 0), kL2);
    CHECK((full.op - Matrix::identity(3)).frobenius() <= 1e-12);

    // degenerate: image and kernel parallel
    CHECK_THROWS_AS(make_projection(e1, e1, kL2), Error);
}

TEST_CASE("projection invariants after construction") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        Matrix img = testutil::random_matrix(6, 2, seed);
        Matrix ker = testutil::random_matrix(6, 4, seed + 40);
        Projection p = make_projection(img, ker, kL2);
        CHECK(p.idem_residual <= 1e-8 * (1.0 + p.op.frobenius()));
        CHECK(p.rank() + p.kernel.cols() == p.dim());
        CHECK((p.op * p.image - p.image).frobenius() <= 1e-8);
        CHECK((p.op * p.kernel).frobenius() <= 1e-8);
    }
}

TEST_CASE("pair_angle trivial and Friedrichs cases") {
    Projection p = make_projection(testutil::random_matrix(5, 2, 3),
                                   testutil::random_matrix(5, 3, 4), kL2);
    CHECK(pair_angle(p, p, p) == 0.0);

    // two lines at 60 degrees, intersection {0}
    Projection a = line_projection(0.0);
    Projection b = line_projection(M_PI / 3.0);
    Projection zero = zero_projection(2);
    CHECK(pair_angle(a, b, zero) == doctest::Approx(0.5).epsilon(1e-12));

    // the p = infinity measurement dominates the p = 2 value on this instance
    NormContext linf = NormContext::lp(kInf);
    Projection ai = projection_from_op(a.op, linf);
    Projection bi = projection_from_op(b.op, linf);
    Projection zi = projection_from_op(Matrix(2, 2, 0.0), linf);
    CHECK(pair_angle(ai, bi, zi) >= 0.5 - 1e-12);
}

TEST_CASE("pair_angle preconditions name the failing identity") {
    Projection a = line_projection(0.0);
    Projection b = line_projection(M_PI / 3.0);
    // wrong P12: the identity (its image is not the intersection, absorption fails)
    Projection id2 = projection_from_op(Matrix::identity(2), kL2);
    CHECK_THROWS_WITH_AS(pair_angle(a, b, id2),
                         doctest::Contains("P12 P1"), Error);
}

TEST_CASE("Hilbert agreement: pair_angle equals the Friedrichs cosine") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        Matrix b1 = image_basis(testutil::random_matrix(8, 5, 2000 + seed));
        Matrix b2 = image_basis(testutil::random_matrix(8, 6, 3000 + seed));
        Projection p1 = projection_from_op(b1 * b1.transposed(), kL2);
        Projection p2 = projection_from_op(b2 * b2.transposed(), kL2);
        Matrix inter = intersect_subspaces(b1, b2);
        Projection p12 = inter.cols() ? projection_from_op(inter * inter.transposed(), kL2)
                                      : zero_projection(8);
        const double angle = pair_angle(p1, p2, p12);
        const double friedrichs = friedrichs_cosine(b1, b2);
        CHECK(angle == doctest::Approx(friedrichs).epsilon(1e-8));
        CHECK(angle <= 1.0 + 1e-10);  // orthogonal projections in Hilbert space
    }
}

TEST_CASE("theorem_constants formulas") {
    TheoremConstants tc = theorem_constants(2, 1.0, 0.1);
    CHECK(std::abs(tc.rate - 13.0 / 18.0) <= 1e-12);
    CHECK(std::abs(tc.constant - 3.6) <= 1e-12);

    TheoremConstants t0 = theorem_constants(2, 1.0, 0.0);
    CHECK(t0.rate == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(t0.constant == doctest::Approx(2.0).epsilon(1e-14));

    TheoremConstants t3 = theorem_constants(3, 1.0, 0.0);
    CHECK(t3.rate == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(t3.constant == doctest::Approx(4.0).epsilon(1e-14));

    CHECK(theorem_constants(2, 1.0, 0.19).rate < 1.0);
    CHECK_THROWS_AS(theorem_constants(2, 1.0, 0.2), Error);   // gamma >= 1/(8N-11)
    CHECK_THROWS_AS(theorem_constants(3, 2.0, 0.01), Error);  // beta too large
    CHECK_THROWS_AS(theorem_constants(1, 1.0, 0.0), Error);
}

TEST_CASE("find_beta0_gamma0 feasibility") {
    for (std::size_t n = 2; n <= 6; ++n) {
        CorollaryConstants cc = find_beta0_gamma0(n);
        CHECK(cc.beta0 > 1.0);
        CHECK(cc.gamma0 > 0.0);
        TheoremConstants tc = theorem_constants(n, cc.beta0, cc.gamma0);
        CHECK(tc.rate <= (2.0 * n - 1.0) / (2.0 * n) + 1e-15);
        CHECK(tc.constant <= 4.0 * n + 1e-12);
    }
    // N = 2: the trivial probe point (beta, gamma) = (1, 0) is in the search space
    TheoremConstants probe = theorem_constants(2, 1.0, 0.0);
    CHECK(probe.rate <= 0.75);
    CHECK(probe.constant <= 8.0);
}

TEST_CASE("averaged_iteration on equal projections stops after one step") {
    Projection p = make_projection(testutil::random_matrix(6, 3, 5),
                                   testutil::random_matrix(6, 3, 6), kL2);
    AveragedResult res = averaged_iteration({p, p, p});
    CHECK(res.converged);
    CHECK(res.iterations == 1);
    REQUIRE(res.limit.has_value());
    CHECK((res.limit->op - p.op).frobenius() <= 1e-10);
}

TEST_CASE("averaged_iteration on the 60-degree pair") {
    Projection a = line_projection(0.0);
    Projection b = line_projection(M_PI / 3.0);
    Matrix t = (a.op + b.op) * 0.5;
    SymEigen eg = sym_eigen(t);
    CHECK(eg.values[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(eg.values[1] == doctest::Approx(0.75).epsilon(1e-12));

    AveragedResult res = averaged_iteration({a, b});
    CHECK(res.converged);
    REQUIRE(res.limit.has_value());
    CHECK(res.limit->rank() == 0);  // intersection is {0}
    CHECK(res.intersection_rank == 0);
    CHECK(res.rank_matches);
    // measured gamma = 0.5 violates gamma < 1/5: out of regime, yet convergent
    CHECK(res.certificate.gamma == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(res.certificate.gamma_measured);
    CHECK_FALSE(res.certificate.in_regime);
}

TEST_CASE("certificate soundness on in-regime synthesized instances") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const std::size_t nproj = 2 + seed % 2;
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unif(1e-4, 0.9 / (8.0 * nproj - 11.0));
        const double gamma = unif(rng);
        SimplexFamily fam = synthesized_family(nproj - 1, gamma, 7000 + seed);
        std::vector<Projection> ps;
        for (const auto& [face, proj] : fam.codim1()) ps.push_back(proj);

        AveragedResult res = averaged_iteration(ps);
        REQUIRE(res.converged);
        CHECK(res.certificate.in_regime);
        CHECK(res.certificate.gamma == doctest::Approx(gamma).epsilon(1e-6));
        CHECK(res.certificate.bound_held);
        CHECK(res.limit->idem_residual <= 1e-8);
        CHECK(res.rank_matches);
    }
}

TEST_CASE("canonical_check") {
    // orthogonal projections with the orthogonal intersection projection
    Matrix b1 = image_basis(testutil::random_matrix(6, 4, 41));
    Matrix b2 = image_basis(testutil::random_matrix(6, 4, 42));
    Projection p1 = projection_from_op(b1 * b1.transposed(), kL2);
    Projection p2 = projection_from_op(b2 * b2.transposed(), kL2);
    Matrix inter = intersect_subspaces(b1, b2);
    REQUIRE(inter.cols() == 2);  // 4 + 4 - 6
    Projection cand = projection_from_op(inter * inter.transposed(), kL2);
    CHECK(canonical_check({p1, p2}, cand) == CanonicalCheck::matches);

    // all identity
    Projection id = projection_from_op(Matrix::identity(4), kL2);
    CHECK(canonical_check({id, id}, id) == CanonicalCheck::matches);

    // commuting coordinate projections
    Matrix d1(3, 3, 0.0), d2(3, 3, 0.0), d12(3, 3, 0.0);
    d1(0, 0) = d1(1, 1) = 1.0;
    d2(1, 1) = d2(2, 2) = 1.0;
    d12(1, 1) = 1.0;
    CHECK(canonical_check({projection_from_op(d1, kL2), projection_from_op(d2, kL2)},
                          projection_from_op(d12, kL2)) == CanonicalCheck::matches);

    // wrong-rank candidate: not applicable rather than false
    CHECK(canonical_check({p1, p2}, p1) == CanonicalCheck::not_applicable);
}
