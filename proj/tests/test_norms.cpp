#include <doctest.h>

#include <cmath>

#include "projangles/eigen.hpp"
#include "projangles/groups.hpp"
#include "test_util.hpp"

using namespace pa;

TEST_CASE("operator norms with closed forms") {
    Matrix a{{0.0, 2.0}, {0.0, 0.0}};
    NormEstimate e = operator_norm(a, NormContext::lp(2.0));
    CHECK(e.kind == NormKind::exact);
    CHECK(e.value == doctest::Approx(2.0).epsilon(1e-12));

    Matrix b{{1.0, -2.0}, {3.0, 4.0}};
    NormEstimate e1 = operator_norm(b, NormContext::lp(1.0));
    CHECK(e1.kind == NormKind::exact);
    // max absolute column sum, accumulated independently here
    double want = std::max(std::abs(1.0) + std::abs(3.0), std::abs(-2.0) + std::abs(4.0));
    CHECK(e1.value == doctest::Approx(want).epsilon(1e-14));

    for (double p : {1.0, 1.5, 2.0, 3.0, kInf})
        CHECK(operator_norm(Matrix::identity(4), NormContext::lp(p)).value ==
              doctest::Approx(1.0).epsilon(1e-9));

    NormEstimate einf = operator_norm(b, NormContext::lp(kInf));
    CHECK(einf.value == doctest::Approx(7.0).epsilon(1e-14));
}

TEST_CASE("operator_norm rejects p < 1") {
    CHECK_THROWS_AS(operator_norm(Matrix::identity(2), NormContext{0.5}), Error);
    CHECK_THROWS_AS(NormContext::lp(0.99), Error);
    CHECK_THROWS_AS(NormContext::lp(std::nan("")), Error);
}

TEST_CASE("operator_norm is submultiplicative on exact kinds") {
    for (std::uint64_t seed = 1; seed <= 34; ++seed) {
        const std::size_t n = 2 + seed % 5;
        Matrix a = testutil::random_matrix(n, n, seed);
        Matrix b = testutil::random_matrix(n, n, seed + 1000);
        for (double p : {1.0, 2.0, kInf}) {
            const NormContext ctx = NormContext::lp(p);
            const double ab = operator_norm(a * b, ctx).value;
            CHECK(ab <= operator_norm(a, ctx).value * operator_norm(b, ctx).value + 1e-9);
        }
    }
}

TEST_CASE("schatten norm basics") {
    CHECK(schatten_norm(Matrix::identity(3), 2.0) == doctest::Approx(std::sqrt(3.0)));
    // rank-1 orthogonal projection has a single unit singular value
    Matrix u = testutil::random_matrix(5, 1, 3);
    const double nu = u.frobenius();
    u *= 1.0 / nu;
    Matrix p = u * u.transposed();
    for (double r : {1.0, 2.0, 7.0, kInf})
        CHECK(schatten_norm(p, r) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(schatten_norm(Matrix::identity(3), kInf) == doctest::Approx(1.0));
    CHECK_THROWS_AS(schatten_norm(Matrix::identity(2), 0.5), Error);
}

TEST_CASE("schatten norm of the S3 commutator defect at r=2") {
    GroupModel model = builtin_model("s3");
    GroupRep reg = regular_representation(model.group, NormContext::lp(2.0));
    std::vector<Face> sigmas = codim1_faces(1);
    Projection p1 = averaging_operator(reg, model.group, model.family.assigned.at(sigmas[0]));
    Projection p2 = averaging_operator(reg, model.group, model.family.assigned.at(sigmas[1]));
    Subgroup whole(model.group.order);
    for (std::uint16_t i = 0; i < model.group.order; ++i) whole[i] = i;
    Projection p12 = averaging_operator(reg, model.group, whole);

    Matrix defect = p1.op * p2.op - p12.op;
    CHECK(schatten_norm(defect, 2.0) == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-10));
    // nonzero singular values are {1/2, 1/2}
    Svd s = svd(defect);
    CHECK(s.sigma[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(s.sigma[1] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(s.sigma[2] <= 1e-10);
}

TEST_CASE("schatten norm is non-increasing in r") {
    const double grid[] = {1.0, 2.0, 4.0, 8.0, kInf};
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        Matrix a = testutil::random_matrix(2 + seed % 5, 2 + (seed / 2) % 5, 500 + seed);
        double prev = kInf;
        for (double r : grid) {
            const double cur = schatten_norm(a, r);
            CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("power iteration and mesh oracle agree at p=2 for dim <= 3") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const std::size_t n = 2 + seed % 2;
        Matrix a = testutil::random_matrix(n, n, 900 + seed);
        const double power = lp_norm_lower_bound(a, 2.0, kDefaultSeed, 8);
        Bracket mesh = lp_norm_bracket(a, 2.0);
        CHECK(std::abs(power - mesh.lower) <= 1e-3 * std::max(1.0, mesh.lower));
        // the exact value sits inside the bracket
        const double exact = spectral_norm(a);
        CHECK(exact >= mesh.lower - 1e-9);
        CHECK(exact <= mesh.upper + 1e-9);
    }
}

TEST_CASE("bracketed estimates at odd p for small matrices") {
    Matrix a = testutil::random_matrix(3, 3, 77);
    NormEstimate e = operator_norm(a, NormContext::lp(1.5));
    CHECK(e.kind == NormKind::bracketed);
    CHECK(e.slack >= 0.0);
    // lower bound consistency: value is a certified lower end
    CHECK(e.value <= e.value + e.slack);

    Matrix big = testutil::random_matrix(6, 6, 78);
    NormEstimate lb = operator_norm(big, NormContext::lp(3.0));
    CHECK(lb.kind == NormKind::lower_bound);
}

TEST_CASE("tensor block norm basics") {
    Matrix id = Matrix::identity(4);
    for (double p : {1.0, 2.0, 4.0, kInf})
        for (std::size_t m : {1u, 2u, 5u})
            CHECK(tensor_block_norm(id, m, NormContext::lp(p)).value ==
                  doctest::Approx(1.0).epsilon(1e-9));

    Matrix t = testutil::random_matrix(4, 4, 21);
    NormEstimate scalar = tensor_block_norm(t, 1, NormContext::lp(7.0));
    CHECK(scalar.kind == NormKind::exact);
    CHECK(scalar.value == doctest::Approx(spectral_norm(t)).epsilon(1e-10));

    CHECK_THROWS_AS(tensor_block_norm(t, 0, NormContext::lp(2.0)), Error);
    CHECK_THROWS_AS(tensor_block_norm(Matrix(2, 3, 1.0), 2, NormContext::lp(2.0)), Error);
}

TEST_CASE("tensor block norm interpolation instance (theta = 2/p)") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Matrix t = testutil::random_matrix(4, 4, 4000 + seed);
        const std::size_t m = 1 + seed % 3;
        NormEstimate n2 = tensor_block_norm(t, m, NormContext::lp(2.0));
        NormEstimate n4 = tensor_block_norm(t, m, NormContext::lp(4.0));
        NormEstimate ninf = tensor_block_norm(t, m, NormContext::lp(kInf));
        const double upper_inf = ninf.value + ninf.slack;
        const double upper_2 = n2.value + n2.slack;
        // certified-lower vs certified-upper instance of the interpolation fact
        CHECK(n4.value <= std::sqrt(upper_inf * upper_2) + 1e-9);
        // the lp lower bounds are sandwiched by the l2 value and upper ends
        CHECK(n4.value + 1e-9 >= n2.value);
        CHECK(ninf.value + ninf.slack + 1e-9 >= n2.value);
    }
}
