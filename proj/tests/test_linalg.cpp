#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "projangles/eigen.hpp"
#include "projangles/spectra.hpp"
#include "test_util.hpp"

using namespace pa;

TEST_CASE("sym_eigen identity and diagonal") {
    SymEigen id = sym_eigen(Matrix::identity(3));
    for (double v : id.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

    Matrix d(3, 3, 0.0);
    d(0, 0) = 3.0;
    d(1, 1) = 1.0;
    d(2, 2) = 2.0;
    SymEigen eg = sym_eigen(d);
    CHECK(eg.values[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eg.values[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(eg.values[2] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("sym_eigen rejects bad input") {
    CHECK_THROWS_AS(sym_eigen(Matrix(2, 3, 1.0)), Error);
    Matrix asym{{0.0, 1.0}, {0.5, 0.0}};
    CHECK_THROWS_AS(sym_eigen(asym), Error);
}

TEST_CASE("sym_eigen postconditions on random symmetric matrices") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const std::size_t n = 3 + seed % 9;
        Matrix a = testutil::random_symmetric(n, seed);
        SymEigen eg = sym_eigen(a);
        Matrix lam(n, n, 0.0);
        for (std::size_t k = 0; k < n; ++k) lam(k, k) = eg.values[k];
        CHECK((a * eg.vectors - eg.vectors * lam).frobenius() <=
              1e-10 * static_cast<double>(n) * a.frobenius());
        CHECK((eg.vectors.transposed() * eg.vectors - Matrix::identity(n)).frobenius() <=
              1e-10 * static_cast<double>(n));
        CHECK(std::is_sorted(eg.values.begin(), eg.values.end()));
    }
}

TEST_CASE("Heawood normalized Laplacian: smallest positive eigenvalue") {
    BipartiteGraph heawood = projective_plane_graph(2);
    Matrix lap = normalized_laplacian(heawood);
    SymEigen eg = sym_eigen(lap);

    double smallest_positive = 2.0;
    for (double v : eg.values)
        if (v > 1e-9) smallest_positive = std::min(smallest_positive, v);
    CHECK(smallest_positive == doctest::Approx(1.0 - std::sqrt(2.0) / 3.0).epsilon(1e-10));

    // Cross-check through the characteristic polynomial: the adjacency matrix
    // is annihilated by (A^2 - 9 I)(A^2 - 2 I), i.e. the spectrum lies in
    // {+-3, +-sqrt(2)}.
    Matrix adj(14, 14, 0.0);
    for (const auto& [u, v] : heawood.edges) {
        adj(u, 7 + v) = 1.0;
        adj(7 + v, u) = 1.0;
    }
    Matrix a2 = adj * adj;
    Matrix ann = (a2 - Matrix::identity(14) * 9.0) * (a2 - Matrix::identity(14) * 2.0);
    CHECK(ann.frobenius() <= 1e-9);
}

TEST_CASE("svd reconstructs and ranks correctly") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const std::size_t m = 2 + seed % 6;
        const std::size_t n = 2 + (3 * seed) % 6;
        Matrix a = testutil::random_matrix(m, n, 100 + seed);
        Svd s = svd(a);
        Matrix sig(m, n, 0.0);
        for (std::size_t k = 0; k < s.sigma.size(); ++k) sig(k, k) = s.sigma[k];
        CHECK((s.u * sig * s.v.transposed() - a).frobenius() <= 1e-10 * (1.0 + a.frobenius()));
        CHECK(std::is_sorted(s.sigma.rbegin(), s.sigma.rend()));
        CHECK(rank(a) == std::min(m, n));  // random matrices have full rank
    }
}

TEST_CASE("rank-deficient svd splits image and kernel") {
    Matrix u = testutil::random_matrix(5, 1, 7);
    Matrix v = testutil::random_matrix(4, 1, 8);
    Matrix a = u * v.transposed();
    CHECK(rank(a) == 1);
    Matrix img = image_basis(a);
    Matrix ker = kernel_basis(a);
    CHECK(img.cols() == 1);
    CHECK(ker.cols() == 3);
    CHECK((a * ker).frobenius() <= 1e-10 * a.frobenius());
    CHECK(subspace_residual(img, u) <= 1e-10);
}

TEST_CASE("subspace intersection") {
    // span{e1, e2} and span{e2, e3} in R^4 meet in span{e2}
    Matrix b1(4, 2, 0.0);
    b1(0, 0) = 1.0;
    b1(1, 1) = 1.0;
    Matrix b2(4, 2, 0.0);
    b2(1, 0) = 1.0;
    b2(2, 1) = 1.0;
    Matrix inter = intersect_subspaces(b1, b2);
    REQUIRE(inter.cols() == 1);
    CHECK(std::abs(inter(1, 0)) == doctest::Approx(1.0).epsilon(1e-12));

    Matrix e1(4, 1, 0.0);
    e1(0, 0) = 1.0;
    CHECK(intersect_subspaces(b2, e1).cols() == 0);
    CHECK(intersect_subspaces(b1, Matrix(4, 0)).cols() == 0);
}

TEST_CASE("solve and inverse") {
    Matrix a = testutil::random_matrix(6, 6, 11);
    Matrix x = solve(a, Matrix::identity(6));
    CHECK((a * x - Matrix::identity(6)).frobenius() <= 1e-9);
    CHECK_THROWS_AS(solve(Matrix(3, 3, 0.0), Matrix::identity(3)), Error);
}

TEST_CASE("bipartite spectral symmetry: eigenvalues pair as lambda <-> 2-lambda") {
    auto check_graph = [](const BipartiteGraph& g) {
        SymEigen eg = sym_eigen(normalized_laplacian(g));
        const std::size_t n = eg.values.size();
        for (std::size_t i = 0; i < n; ++i)
            CHECK(eg.values[i] + eg.values[n - 1 - i] == doctest::Approx(2.0).epsilon(1e-8));
    };
    check_graph(projective_plane_graph(2));
    check_graph(gq2_graph());
    check_graph(make_bipartite(3, 4, {{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 2}, {2, 3}, {0, 3}}));
}
