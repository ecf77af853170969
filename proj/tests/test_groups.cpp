#include <doctest.h>

#include <cmath>
#include <random>

#include "projangles/eigen.hpp"
#include "projangles/groups.hpp"

using namespace pa;

namespace {

const NormContext kL2 = NormContext::lp(2.0);

Subgroup whole_group(const FiniteGroup& g) {
    Subgroup k(g.order);
    for (std::uint16_t i = 0; i < g.order; ++i) k[i] = i;
    return k;
}

}  // namespace

TEST_CASE("permutation groups expand to the right orders") {
    CHECK(builtin_model("s3").group.order == 6);
    CHECK(builtin_model("d4").group.order == 8);
    CHECK(builtin_model("s4").group.order == 24);
    CHECK(builtin_model("s3").group.labels[0] == "e");
    CHECK_THROWS_AS(builtin_model("zz"), Error);
}

TEST_CASE("group table validation") {
    // broken associativity: tamper with one entry of the S3 table
    FiniteGroup s3 = builtin_model("s3").group;
    std::vector<std::uint16_t> bad = s3.mul;
    bad[7] = static_cast<std::uint16_t>((bad[7] + 1) % 6);
    CHECK_THROWS_AS(group_from_table(6, bad), Error);
}

TEST_CASE("subgroups and generated subgroups") {
    FiniteGroup s3 = builtin_model("s3").group;
    Subgroup k = generated_subgroup(s3, {1});
    CHECK(k.size() == 2);
    CHECK(is_subgroup(s3, k));
    CHECK_FALSE(is_subgroup(s3, Subgroup{1}));           // no identity
    CHECK(generated_subgroup(s3, {1, 2}).size() == 6);   // two transpositions generate S3

    std::vector<std::uint16_t> to_parent;
    FiniteGroup sub = subgroup_as_group(s3, k, &to_parent);
    CHECK(sub.order == 2);
    CHECK(to_parent[0] == 0);
}

TEST_CASE("averaging operators") {
    GroupModel model = builtin_model("s3");
    GroupRep reg = regular_representation(model.group, kL2);
    CHECK(reg.sup_norm_bound == doctest::Approx(1.0).epsilon(1e-12));

    // K = {e} gives the identity
    Projection id = averaging_operator(reg, model.group, Subgroup{0});
    CHECK((id.op - Matrix::identity(6)).frobenius() <= 1e-12);

    // K = G averages onto the constants
    Projection constants = averaging_operator(reg, model.group, whole_group(model.group));
    CHECK(constants.rank() == 1);
    for (double v : constants.op.data()) CHECK(v == doctest::Approx(1.0 / 6.0).epsilon(1e-12));

    // a transposition subgroup fixes a 3-dimensional space
    Projection half = averaging_operator(reg, model.group, generated_subgroup(model.group, {1}));
    CHECK(half.rank() == 3);
    CHECK(half.idem_residual <= 1e-9);

    CHECK_THROWS_AS(averaging_operator(reg, model.group, Subgroup{0, 1, 2}), Error);
}

TEST_CASE("build_simplex_family is exactly consistent") {
    for (const std::string& name : builtin_model_names()) {
        GroupModel model = builtin_model(name);
        GroupRep reg = regular_representation(model.group, kL2);
        SimplexFamily fam = build_simplex_family(reg, model.group, model.family);
        ConsistencyReport rep = consistency_check(fam);
        CHECK(rep.max_residual <= 1e-10);
        CHECK(rep.pass);
    }
}

TEST_CASE("S3 family pairwise angle is the dihedral cosine") {
    GroupModel model = builtin_model("s3");
    GroupRep reg = regular_representation(model.group, kL2);
    SimplexFamily fam = build_simplex_family(reg, model.group, model.family);
    std::vector<Face> sig = codim1_faces(1);
    CHECK(angle_no_consistency(fam, sig[0], sig[1]) == doctest::Approx(0.5).epsilon(1e-9));

    // Friedrichs agreement: the fixed spaces meet at 60 degrees
    const Projection& p1 = fam.codim1().at(sig[0]);
    const Projection& p2 = fam.codim1().at(sig[1]);
    CHECK(friedrichs_cosine(p1.image, p2.image) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("family with every subgroup equal to the whole group") {
    GroupModel model = builtin_model("s3");
    SubgroupFamily fam;
    fam.n = 1;
    fam.assigned[face_from_vertices({0}, 1)] = whole_group(model.group);
    fam.assigned[face_from_vertices({1}, 1)] = whole_group(model.group);
    fam.assigned[full_face(1)] = whole_group(model.group);
    for (double p : {2.0, 4.0, kInf}) {
        std::vector<AngleSweepRow> rows = lp_angle_sweep(model.group, fam, {p});
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].value <= 1e-9);
    }
}

TEST_CASE("coset link graphs") {
    GroupModel s3 = builtin_model("s3");
    Subgroup k1 = generated_subgroup(s3.group, {1});
    Subgroup k2 = s3.family.assigned.at(codim1_faces(1)[0]) == k1
                      ? s3.family.assigned.at(codim1_faces(1)[1])
                      : s3.family.assigned.at(codim1_faces(1)[0]);
    BipartiteGraph hex = coset_link_graph(s3.group, k1, k2, whole_group(s3.group));
    CHECK(hex.n1 == 3);
    CHECK(hex.n2 == 3);
    CHECK(girth(hex) == 6);
    for (std::size_t d : degrees_part1(hex)) CHECK(d == 2);

    // K1 = K2 = ambient: a single edge between two vertices
    BipartiteGraph point = coset_link_graph(s3.group, k1, k1, k1);
    CHECK(point.n1 == 1);
    CHECK(point.n2 == 1);
    CHECK(point.edges.size() == 1);

    GroupModel d4 = builtin_model("d4");
    std::vector<Face> sig = codim1_faces(1);
    BipartiteGraph oct = coset_link_graph(d4.group, d4.family.assigned.at(sig[0]),
                                          d4.family.assigned.at(sig[1]), whole_group(d4.group));
    CHECK(oct.n1 == 4);
    CHECK(oct.n2 == 4);
    CHECK(girth(oct) == 8);
    for (std::size_t d : degrees_part1(oct)) CHECK(d == 2);
}

TEST_CASE("schatten link bound on the S3 hexagon model") {
    GroupModel model = builtin_model("s3");
    std::vector<Face> sig = codim1_faces(1);
    const Subgroup& k1 = model.family.assigned.at(sig[0]);
    const Subgroup& k2 = model.family.assigned.at(sig[1]);
    SchattenLinkReport rep =
        schatten_link_bound_check(model.group, k1, k2, whole_group(model.group), 2.0);
    CHECK(rep.lhs == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-10));
    CHECK(rep.rhs == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-10));
    CHECK(rep.kappa == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(rep.v_min == 3);
    CHECK(rep.pass);

    // K1 = K2 collapses the left side exactly
    GroupRep reg = regular_representation(model.group, kL2);
    Projection p1 = averaging_operator(reg, model.group, k1);
    CHECK(schatten_norm(p1.op * p1.op - p1.op, 2.0) <= 1e-12);
}

TEST_CASE("schatten link bound on D4 at r in {2, 3}") {
    GroupModel model = builtin_model("d4");
    std::vector<Face> sig = codim1_faces(1);
    for (double r : {2.0, 3.0}) {
        SchattenLinkReport rep = schatten_link_bound_check(
            model.group, model.family.assigned.at(sig[0]), model.family.assigned.at(sig[1]),
            whole_group(model.group), r);
        CHECK(rep.pass);
        CHECK(rep.lhs > 0.0);
        CHECK(rep.v_min == 4);
    }
}

TEST_CASE("pi(f) bound instances") {
    GroupModel model = builtin_model("s3");
    GroupRep reg = regular_representation(model.group, kL2);

    // f = k_K: pi(f) is a projection of norm one in the unitary case
    Subgroup k = generated_subgroup(model.group, {1});
    std::vector<double> f(model.group.order, 0.0);
    for (std::uint16_t x : k) f[x] = 1.0 / static_cast<double>(k.size());
    PiFBoundReport rep = pi_f_bound_check(reg, model.group, f);
    CHECK(rep.lhs == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.bound >= 1.0 - 1e-10);
    CHECK(rep.holds);

    // f = delta_e
    std::vector<double> delta(model.group.order, 0.0);
    delta[0] = 1.0;
    PiFBoundReport rep2 = pi_f_bound_check(reg, model.group, delta);
    CHECK(rep2.lhs == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep2.holds);

    // conjugated representation: sup norm is exactly ||S|| ||S^-1|| = 2
    Matrix s = Matrix::identity(6);
    s(0, 0) = 2.0;
    GroupRep conj = conjugated_representation(model.group, reg, s);
    CHECK(conj.sup_norm_bound == doctest::Approx(2.0).epsilon(1e-10));
    std::mt19937_64 rng(77);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> rf(model.group.order);
        for (double& v : rf) v = gauss(rng);
        CHECK(pi_f_bound_check(conj, model.group, rf).holds);
    }
}

TEST_CASE("lp angle sweep anchors at the exact p = 2 column") {
    GroupModel model = builtin_model("s3");
    std::vector<AngleSweepRow> rows = lp_angle_sweep(model.group, model.family, {2.0, 4.0, kInf});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].p == 2.0);
    CHECK(rows[0].value == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(rows[0].kind == NormKind::exact);
    // away from p = 2 the estimates carry their kind tags; nothing is asserted
    // about an ordering between them
    CHECK(rows[1].kind == NormKind::lower_bound);
    CHECK(rows[2].kind == NormKind::exact);  // p = inf row norm is exact
}

TEST_CASE("absorption exactness for nested subgroups") {
    GroupModel model = builtin_model("s4");
    GroupRep reg = regular_representation(model.group, kL2);
    Subgroup k = generated_subgroup(model.group, {1});              // <(1 2)>
    Subgroup h = generated_subgroup(model.group, {1, 2});           // <(1 2), (2 3)> = S3
    Projection pk = averaging_operator(reg, model.group, k);
    Projection ph = averaging_operator(reg, model.group, h);
    for (std::uint16_t g : h)
        CHECK((ph.op * reg.mats[g] - ph.op).max_abs() <= 1e-10);
    CHECK((ph.op * pk.op - ph.op).frobenius() <= 1e-10);
}
