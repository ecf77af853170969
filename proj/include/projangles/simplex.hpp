#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "projangles/projection.hpp"

namespace pa {

// A face of the simplex {0, ..., n} as a vertex bitmask.
using Face = std::uint32_t;

Face face_from_vertices(const std::vector<int>& vertices, std::size_t n);
std::vector<int> face_vertices(Face f);
std::size_t face_card(Face f);
inline bool face_subset(Face a, Face b) { return (a & ~b) == 0; }
inline Face full_face(std::size_t n) { return (Face{1} << (n + 1)) - 1; }
std::string face_label(Face f);  // vertices joined by spaces, "empty" for {}

// Deterministic face order: lexicographic by sorted vertex lists, prefixes
// first ({} < {0} < {0,1} < {0,2} < {1} < ...).
struct FaceLexLess {
    bool operator()(Face a, Face b) const;
};

std::vector<Face> all_subfaces(Face f);            // in FaceLexLess order
std::vector<Face> codim1_faces(std::size_t n);     // faces of cardinality n

template <class T>
using FaceMap = std::map<Face, T, FaceLexLess>;

// Limit projection for one face plus its convergence metadata.
struct PTauRecord {
    Projection proj;
    std::size_t iterations = 0;
    bool corollary_bound_held = true;  // ||T^i - P_tau|| <= 4N ((2N-1)/(2N))^(i-1)
    Certificate certificate;
    std::vector<double> residuals;
};

// Projections indexed by the codimension-1 faces of an n-simplex plus the top
// projection; limit projections P_tau are generated on demand and cached.
// The cache is append-only and mutex guarded; concurrent computations for
// distinct faces are fine and recomputations for the same face are idempotent.
class SimplexFamily {
public:
    SimplexFamily(std::size_t n, NormContext ctx, Projection p_top,
                  FaceMap<Projection> p_codim1);

    SimplexFamily(SimplexFamily&&) noexcept = default;
    SimplexFamily& operator=(SimplexFamily&&) noexcept = default;

    std::size_t n() const { return n_; }
    std::size_t dim() const { return p_top_.dim(); }
    NormContext ctx() const { return ctx_; }
    Face top() const { return full_face(n_); }
    const Projection& p_top() const { return p_top_; }
    const FaceMap<Projection>& codim1() const { return p_codim1_; }

    // Average of the P_sigma over codimension-1 sigma containing tau (the top
    // projection itself when tau is the whole simplex).
    Matrix t_tau(Face tau) const;

    // The limit projection P_tau = lim T_tau^i; throws a non-convergence
    // diagnostic when the iteration fails to meet the Cauchy criterion.
    const PTauRecord& p_tau(Face tau, double tol = 1e-12) const;

private:
    struct Cache {
        std::mutex mu;
        FaceMap<PTauRecord> entries;
    };

    std::size_t n_;
    NormContext ctx_;
    Projection p_top_;
    FaceMap<Projection> p_codim1_;
    mutable std::unique_ptr<Cache> cache_;
};

// max over all orderings of || P_{sigma_pi(0)} ... P_{sigma_pi(k)} (I - P_tau) ||
// with tau the intersection of the sigmas; at most 7 faces (5040 orderings).
double multi_angle(const SimplexFamily& family, const std::vector<Face>& sigmas);

struct ConsistencyEntry {
    Face tau;
    Face sigma;
    double residual;
};

struct ConsistencyReport {
    double max_residual = 0.0;
    bool pass = false;  // max_residual <= 1e-7
    std::vector<ConsistencyEntry> entries;
};

// Absorption residuals || P_tau P_sigma - P_tau || over tau inside sigma; by
// the criterion proposition this certifies full consistency.
ConsistencyReport consistency_check(const SimplexFamily& family);

struct SmallAngleReport {
    double norm_bound = 0.0;  // 4(n+1)+2
    double max_norm = 0.0;
    bool norm_pass = false;
    double epsilon = 0.0;
    double max_product = 0.0;  // max || P_tau P_tau' (I - P_eta) ||
    bool product_pass = false;
    bool pass = false;
};

SmallAngleReport small_angle_verify(const SimplexFamily& family, double epsilon);

enum class DecompositionMethod { tree_series, oracle };

struct DecompositionResult {
    Face eta = 0;
    DecompositionMethod method = DecompositionMethod::oracle;
    FaceMap<Matrix> summand_bases;  // orthonormal basis of X^tau per tau
    FaceMap<Matrix> r_ops;          // the projections R_tau
    std::size_t truncation_depth = 0;
    bool rank_additivity = false;
    bool direct_sum_ok = false;
    bool failed = false;  // a decomposition failure is a valid outcome
    std::string failure_reason;
    std::map<std::string, double> residuals;
};

// Builds the R_tau bottom-up through the labelled-tree series of the
// decomposition proof, truncated at the certified geometric depth. Throws an
// in-applicability error when the measured rho = d C^2 eps reaches 1.
DecompositionResult decompose_tree(const SimplexFamily& family, Face eta, double tol);

// Direct route: X^tau = Im P_tau intersected with the kernels of all smaller
// P_tau', by SVD thresholding. Rank mismatch is reported, not thrown.
DecompositionResult decompose_oracle(const SimplexFamily& family, Face eta);

// max over faces of || P_tau P_tau' - P_tau' P_tau || (no consistency needed).
double almost_commutativity(const SimplexFamily& family);

// Appendix angle: max{ ||P_tau P_tau' (I - P_meet)||, ||P_tau' P_tau (I - P_meet)|| }
// with P_meet the limit projection of the intersection face.
double angle_no_consistency(const SimplexFamily& family, Face tau, Face tau2);

// Test family generator: block-diagonal sums of 2x2 rotation-perturbed
// coordinate projections with the given pairwise angle, conjugated by a
// seeded random orthogonal map. Consistent by construction; every pairwise
// angle equals `angle` exactly (p = 2).
SimplexFamily synthesized_family(std::size_t n, double angle, std::uint64_t seed);

// Same construction with basis noise applied and projections rebuilt, used to
// exercise the failure paths of the consistency checker.
SimplexFamily perturbed_synthesized_family(std::size_t n, double angle, double noise,
                                           std::uint64_t seed);

}  // namespace pa
