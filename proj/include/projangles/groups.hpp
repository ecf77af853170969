#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "projangles/simplex.hpp"
#include "projangles/spectra.hpp"

namespace pa {

// Finite group as a multiplication table. Identity sits at index 0; the
// constructor spot-checks associativity on 1000 seeded random triples and the
// inverse table against the multiplication table.
struct FiniteGroup {
    std::size_t order = 0;
    std::vector<std::uint16_t> mul;  // order x order, row g, column h -> gh
    std::vector<std::uint16_t> inv;
    std::vector<std::string> labels;

    std::uint16_t product(std::uint16_t g, std::uint16_t h) const { return mul[g * order + h]; }
};

FiniteGroup group_from_table(std::size_t order, std::vector<std::uint16_t> mul,
                             std::vector<std::string> labels = {});

// Cycle form, 1-based, e.g. {{1,2},{3,4}} for (1 2)(3 4).
using PermCycles = std::vector<std::vector<int>>;

// Expands permutation generators to a multiplication table by breadth-first
// closure; element order is the BFS order from the identity. Order capped at
// 120 (dense regular representations scale as order^2).
FiniteGroup group_from_permutations(std::size_t degree, const std::vector<PermCycles>& generators);

using Subgroup = std::vector<std::uint16_t>;  // sorted element indices

bool is_subgroup(const FiniteGroup& g, const Subgroup& k);
Subgroup generated_subgroup(const FiniteGroup& g, const std::vector<std::uint16_t>& generators);

// Re-index a subgroup as a standalone group; to_parent maps new indices back.
FiniteGroup subgroup_as_group(const FiniteGroup& g, const Subgroup& k,
                              std::vector<std::uint16_t>* to_parent = nullptr);

// Subgroups attached to the codimension-1 faces and the top face of an
// n-simplex; smaller faces derive their subgroup as the one generated by the
// union over the faces containing them.
struct SubgroupFamily {
    std::size_t n = 0;
    FaceMap<Subgroup> assigned;  // codim-1 faces and the full face

    Subgroup subgroup_for_face(const FiniteGroup& g, Face tau) const;
};

void validate_subgroup_family(const FiniteGroup& g, const SubgroupFamily& fam);

// Representation by explicit matrices. pi(e) = I and the homomorphism law are
// spot-checked on 1000 seeded random pairs; sup_norm_bound records the
// measured sup over group elements of ||pi(g)|| in ctx.
struct GroupRep {
    std::size_t dim = 0;
    NormContext ctx;
    std::vector<Matrix> mats;  // one per group element
    double sup_norm_bound = 1.0;
};

GroupRep make_rep(const FiniteGroup& g, std::vector<Matrix> mats, NormContext ctx);
GroupRep regular_representation(const FiniteGroup& g, NormContext ctx);
GroupRep conjugated_representation(const FiniteGroup& g, const GroupRep& rep, const Matrix& s);

// pi(k_K) = (1/|K|) sum_{g in K} pi(g); idempotent within 1e-9 and its image
// is the fixed space of K (rank-checked against the stacked pi(g) - I).
Projection averaging_operator(const GroupRep& rep, const FiniteGroup& g, const Subgroup& k);

// Simplex family with P_sigma = pi(k_{G_sigma}); consistency is exact up to
// rounding because subgroup averaging absorbs its own elements.
SimplexFamily build_simplex_family(const GroupRep& rep, const FiniteGroup& g,
                                   const SubgroupFamily& fam);

// Bipartite graph on the cosets gK1 and gK2 inside `ambient`, with an edge
// when the cosets intersect; a finite model of a 1-dimensional link.
BipartiteGraph coset_link_graph(const FiniteGroup& g, const Subgroup& k1, const Subgroup& k2,
                                const Subgroup& ambient);

struct SchattenLinkReport {
    double lhs = 0.0;  // || pi(k1) pi(k2) - pi(k12) ||_{S^r} in the regular rep of ambient
    double rhs = 0.0;  // b_value of the coset link graph at r
    double kappa = 0.0;
    std::uint64_t v_min = 0;
    double r = 0.0;
    bool pass = false;  // lhs <= rhs + 1e-9
};

SchattenLinkReport schatten_link_bound_check(const FiniteGroup& g, const Subgroup& k1,
                                             const Subgroup& k2, const Subgroup& ambient,
                                             double r);

struct PiFBoundReport {
    double lhs = 0.0;          // || sum_g f(g) pi(g) || in ctx
    double sup_norm = 1.0;     // measured sup_g || pi(g) ||
    NormEstimate block_norm;   // || (lambda tensor id)(f) ||
    double bound = 0.0;        // sup^2 * upper(block_norm)
    bool holds = false;
};

// Instance of the pi(f) norm bound: compares || pi(f) || against
// (sup_g ||pi(g)||)^2 || (lambda tensor id_X)(f) || with X = lp^dim.
PiFBoundReport pi_f_bound_check(const GroupRep& rep, const FiniteGroup& g,
                                const std::vector<double>& f);

struct AngleSweepRow {
    double p = 0.0;
    Face sigma1 = 0;
    Face sigma2 = 0;
    double value = 0.0;
    NormKind kind = NormKind::exact;
    double slack = 0.0;
};

// Pairwise angles of the averaging projections measured in each lp context
// (p = 2 is the exact anchor column).
std::vector<AngleSweepRow> lp_angle_sweep(const FiniteGroup& g, const SubgroupFamily& fam,
                                          const std::vector<double>& ps);

// Shipped desk models: "s3" (hexagon link), "d4" (octagon link), "s4" (the
// three rank-1 parabolic subgroups on a 2-simplex).
struct GroupModel {
    std::string name;
    FiniteGroup group;
    SubgroupFamily family;
};

GroupModel builtin_model(std::string_view name);
std::vector<std::string> builtin_model_names();

}  // namespace pa
