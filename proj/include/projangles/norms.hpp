#pragma once

#include <cstdint>
#include <limits>

#include "projangles/matrix.hpp"

namespace pa {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr std::uint64_t kDefaultSeed = 0x9e3779b97f4a7c15ull;

// Which lp norm governs operator norms on domain and codomain. p = 2 allows
// exact spectral evaluation; p outside {1, 2, inf} flags approximate norms.
struct NormContext {
    double p = 2.0;

    static NormContext lp(double p);
    bool is_hilbert() const noexcept { return p == 2.0; }
    bool is_exact_p() const noexcept { return p == 1.0 || p == 2.0 || p == kInf; }
    bool operator==(const NormContext& o) const noexcept { return p == o.p; }
};

enum class NormKind { exact, lower_bound, bracketed };

// value is exact (slack 0), a lower bound, or a bracketed measurement with
// the true value inside [value - slack, value + slack] (for brackets the
// value is the certified lower end and value + slack the certified upper).
struct NormEstimate {
    double value = 0.0;
    NormKind kind = NormKind::exact;
    double slack = 0.0;

    double lower() const noexcept { return kind == NormKind::bracketed ? value - slack : value; }
    double upper() const noexcept {
        return kind == NormKind::lower_bound ? kInf : value + slack;
    }
};

const char* norm_kind_name(NormKind k);

double lp_vector_norm(std::span<const double> x, double p);

// lp -> lp operator norm. Exact for p in {1, 2, inf}; otherwise a dual-pair
// power-iteration lower bound (>= 8 seeded random restarts), upgraded to a
// certified bracket by the sphere-mesh oracle when min(rows, cols) <= 3.
NormEstimate operator_norm(const Matrix& a, const NormContext& ctx,
                           std::uint64_t seed = kDefaultSeed);

// (sum_i s_i(A)^r)^(1/r); r = inf gives the largest singular value.
double schatten_norm(const Matrix& a, double r);

// Norm of T acting blockwise on functions Omega -> lp^m, measured in the
// mixed norm (sum_w ||f(w)||_p^2)^(1/2). Exact ||T||_2 for p = 2 or m = 1,
// otherwise a bracket combining a mixed-norm power-iteration lower bound with
// rigorous upper bounds (trace norm, entrywise-|T| spectral norm, and the
// Banach-Mazur factor m^|1/2-1/p| times ||T||_2).
NormEstimate tensor_block_norm(const Matrix& t, std::size_t block_dim, const NormContext& ctx,
                               std::uint64_t seed = kDefaultSeed);

// Estimation primitives, exposed so the two routes can be compared directly.
double lp_norm_lower_bound(const Matrix& a, double p, std::uint64_t seed, int restarts = 8);

struct Bracket {
    double lower = 0.0;
    double upper = 0.0;
};

// Certified bracket of the lp -> lp norm via a 0.01-radian sphere mesh with
// Lipschitz-pruned branch-and-bound refinement. Requires min(rows, cols) <= 3.
Bracket lp_norm_bracket(const Matrix& a, double p);

}  // namespace pa
