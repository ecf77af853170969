#pragma once

#include <optional>
#include <vector>

#include "projangles/norms.hpp"

namespace pa {

// Idempotent operator with certified residual and recorded image/kernel
// bases (orthonormal columns). Oblique unless image and kernel are
// perpendicular.
struct Projection {
    Matrix op;
    NormContext ctx;
    double idem_residual = 0.0;  // ||P^2 - P||_F
    Matrix image;
    Matrix kernel;

    std::size_t dim() const { return op.rows(); }
    std::size_t rank() const { return image.cols(); }
};

// Wraps an operator as a Projection, verifying ||P^2 - P||_F <= 1e-8 (1+||P||_F)
// and rebuilding the bases from the operator itself.
Projection projection_from_op(Matrix op, NormContext ctx);

// The unique projection with the given image and kernel spans. The two bases
// must jointly span the space with condition number <= 1e8. An empty kernel
// basis (0 columns) is the {0} kernel.
Projection make_projection(const Matrix& image_basis, const Matrix& kernel_basis,
                           NormContext ctx);

// cos of the angle between two projections relative to a given projection
// P12 onto the intersection of their images:
//   max{ ||P1 (P2 - P12)||, ||P2 (P1 - P12)|| }   (ctx norm).
// Preconditions: P12 P1 = P12 and P12 P2 = P12 within 1e-8, and
// Im P12 = Im P1 intersect Im P2. The value is reported as measured and never
// clamped to [0, 1].
double pair_angle(const Projection& p1, const Projection& p2, const Projection& p12);

// Friedrichs cosine of two subspaces (orthonormal bases) after deflating the
// intersection; the Hilbert-space gold standard pair_angle must match for
// orthogonal projections.
double friedrichs_cosine(const Matrix& basis1, const Matrix& basis2);

struct TheoremConstants {
    double rate = 0.0;
    double constant = 0.0;
};

bool quick_convergence_in_regime(std::size_t n, double beta, double gamma);

// r = (1+(N-2)b)/N + (4-6/N)((1+b)/(1-g)) g and C = (2N-2)b^2/(N(1-r));
// throws an out-of-regime domain error when the hypothesis fails.
TheoremConstants theorem_constants(std::size_t n, double beta, double gamma);

struct CorollaryConstants {
    double beta0 = 0.0;
    double gamma0 = 0.0;
};

// Grid-searched (beta0, gamma0) with gamma maximal subject to
// r <= (2N-1)/(2N) and C <= 4N. Grid: beta descending from 1.1 in 1e-3 steps
// (all > 1), gamma in 1e-4 steps.
CorollaryConstants find_beta0_gamma0(std::size_t n);

struct Certificate {
    std::size_t n = 0;
    double beta = 1.0;   // measured max projection norm
    double gamma = 0.0;  // measured max pairwise angle
    bool in_regime = false;
    double rate = 0.0;      // meaningful only when in_regime
    double constant = 0.0;  // meaningful only when in_regime
    std::size_t iterations = 0;
    double final_residual = 0.0;
    bool bound_held = false;  // ||T^i - limit|| <= C r^(i-1) + 1e-9 at every i
    bool gamma_measured = true;
};

struct AveragedOptions {
    double tol = 1e-12;
    std::size_t max_iter = 20000;
    std::uint64_t seed = kDefaultSeed;
};

struct AveragedResult {
    bool converged = false;
    Matrix limit_op;                    // last iterate (the limit when converged)
    std::optional<Projection> limit;    // built only for converged runs
    Certificate certificate;
    std::vector<double> step_residuals;   // ||T^(i+1) - T^i||
    std::vector<double> limit_residuals;  // ||T^i - limit||, recomputed post hoc
    std::size_t iterations = 0;
    std::size_t intersection_rank = 0;  // oracle: dim of the image intersection
    bool rank_matches = false;
};

// Iterates T = (P_1 + ... + P_N)/N until ||T^(i+1) - T^i|| <= tol. Measures
// beta and gamma from the inputs (pairwise limits act as the P_{j1,j2}) and
// attaches the quick-convergence certificate when the hypotheses hold.
// Non-convergent runs come back as diagnostics, not exceptions.
AveragedResult averaged_iteration(const std::vector<Projection>& projections,
                                  const AveragedOptions& opts = {});

enum class CanonicalCheck { matches, differs, not_applicable };

// Whether the averaged limit equals the given candidate within tol. Candidate
// must project onto the intersection of the images and absorb every P_j;
// otherwise the answer is not_applicable (distinct from differs).
CanonicalCheck canonical_check(const std::vector<Projection>& projections,
                               const Projection& candidate, double tol = 1e-6);

// Power limit of an arbitrary square contraction-like operator; nullopt when
// the Cauchy criterion is not met within max_iter.
std::optional<Matrix> iterate_to_limit(const Matrix& t, double tol, std::size_t max_iter);

}  // namespace pa
