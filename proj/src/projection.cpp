#include "projangles/projection.hpp"

#include <cmath>
#include <sstream>

#include "projangles/eigen.hpp"

namespace pa {

namespace {

double idem_residual_of(const Matrix& op) { return (op * op - op).frobenius(); }

void check_idempotent(const Matrix& op, double residual) {
    if (residual > 1e-8 * (1.0 + op.frobenius())) {
        std::ostringstream os;
        os << "operator is not a projection: ||P^2 - P||_F = " << residual;
        raise_domain(os.str());
    }
}

}  // namespace

Projection projection_from_op(Matrix op, NormContext ctx) {
    op.validate("projection");
    if (!op.square()) raise_domain("projection operator must be square");
    Projection p;
    p.idem_residual = idem_residual_of(op);
    check_idempotent(op, p.idem_residual);
    // Every nonzero singular value of a projection is >= 1 (P acts as the
    // identity on its image), so rank splits at the absolute threshold 1/2;
    // the relative policy would hallucinate rank on a near-zero limit.
    const std::size_t n = op.rows();
    Svd s = svd(op);
    std::size_t r = 0;
    while (r < s.sigma.size() && s.sigma[r] >= 0.5) ++r;
    p.image = Matrix(n, r);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < n; ++i) p.image(i, j) = s.u(i, j);
    p.kernel = Matrix(n, n - r);
    for (std::size_t j = r; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) p.kernel(i, j - r) = s.v(i, j);
    p.op = std::move(op);
    p.ctx = ctx;
    return p;
}

Projection make_projection(const Matrix& image_basis_in, const Matrix& kernel_basis_in,
                           NormContext ctx) {
    if (image_basis_in.empty()) raise_domain("make_projection: image basis is empty");
    const std::size_t n = image_basis_in.rows();
    if (!kernel_basis_in.empty() && kernel_basis_in.rows() != n)
        raise_domain("make_projection: basis dimension mismatch");

    Matrix joint = concat_columns(image_basis_in, kernel_basis_in);
    if (joint.cols() != n || rank(joint) != n || cond2(joint) > 1e8)
        raise_domain(
            "make_projection: degenerate basis, image and kernel must jointly span the space "
            "with condition number <= 1e8");

    // P = [B_im | 0] S^{-1}, S = [B_im | B_ker].
    Matrix sinv = inverse(joint);
    const std::size_t r = image_basis_in.cols();
    Matrix p(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < r; ++k) s += image_basis_in(i, k) * sinv(k, j);
            p(i, j) = s;
        }

    Projection out;
    out.op = std::move(p);
    out.ctx = ctx;
    out.idem_residual = idem_residual_of(out.op);
    check_idempotent(out.op, out.idem_residual);
    out.image = image_basis(image_basis_in);
    out.kernel = kernel_basis_in.empty() ? Matrix(n, 0) : image_basis(kernel_basis_in);
    return out;
}

double pair_angle(const Projection& p1, const Projection& p2, const Projection& p12) {
    if (p1.dim() != p2.dim() || p1.dim() != p12.dim())
        raise_domain("pair_angle: dimension mismatch");
    if (!(p1.ctx == p2.ctx) || !(p1.ctx == p12.ctx))
        raise_domain("pair_angle: norm context mismatch");

    const double abs1 = (p12.op * p1.op - p12.op).frobenius();
    const double abs2 = (p12.op * p2.op - p12.op).frobenius();
    if (abs1 > 1e-8) {
        std::ostringstream os;
        os << "pair_angle precondition failed: ||P12 P1 - P12|| = " << abs1 << " > 1e-8";
        raise_domain(os.str());
    }
    if (abs2 > 1e-8) {
        std::ostringstream os;
        os << "pair_angle precondition failed: ||P12 P2 - P12|| = " << abs2 << " > 1e-8";
        raise_domain(os.str());
    }
    Matrix inter = intersect_subspaces(p1.image, p2.image);
    if (inter.cols() != p12.rank())
        raise_domain("pair_angle precondition failed: Im P12 != Im P1 intersect Im P2 (rank)");
    if (p12.rank() > 0 && subspace_residual(inter, p12.image) > 1e-6)
        raise_domain("pair_angle precondition failed: Im P12 not inside Im P1 intersect Im P2");

    const double a = operator_norm(p1.op * (p2.op - p12.op), p1.ctx).value;
    const double b = operator_norm(p2.op * (p1.op - p12.op), p1.ctx).value;
    return std::max(a, b);
}

double friedrichs_cosine(const Matrix& basis1, const Matrix& basis2) {
    if (basis1.cols() == 0 || basis2.cols() == 0) return 0.0;
    Matrix inter = intersect_subspaces(basis1, basis2);
    // Deflate the intersection from the first subspace.
    Matrix b1 = basis1;
    if (inter.cols() > 0) {
        Matrix proj = inter * (inter.transposed() * basis1);
        b1 = image_basis(basis1 - proj);
        if (b1.cols() == 0) return 0.0;
    }
    Matrix g = b1.transposed() * basis2;
    return spectral_norm(g);
}

bool quick_convergence_in_regime(std::size_t n, double beta, double gamma) {
    if (n < 2) return false;
    if (!std::isfinite(beta) || !std::isfinite(gamma) || gamma < 0.0) return false;
    const double nn = static_cast<double>(n);
    if (gamma >= 1.0 / (8.0 * nn - 11.0)) return false;
    const double denom = (nn - 2.0) + (3.0 * nn - 4.0) * gamma;
    if (denom <= 0.0) return true;  // N = 2, gamma = 0: the beta bound is vacuous
    return beta < 1.0 + (1.0 - (8.0 * nn - 11.0) * gamma) / denom;
}

TheoremConstants theorem_constants(std::size_t n, double beta, double gamma) {
    if (n < 2) raise_domain("theorem_constants: N >= 2 required");
    if (!quick_convergence_in_regime(n, beta, gamma)) {
        std::ostringstream os;
        os << "theorem_constants: out of regime for N=" << n << ", beta=" << beta
           << ", gamma=" << gamma;
        raise_domain(os.str());
    }
    const double nn = static_cast<double>(n);
    const double r =
        (1.0 + (nn - 2.0) * beta) / nn + (4.0 - 6.0 / nn) * ((1.0 + beta) / (1.0 - gamma)) * gamma;
    const double c = (2.0 * nn - 2.0) * beta * beta / (nn * (1.0 - r));
    return TheoremConstants{r, c};
}

CorollaryConstants find_beta0_gamma0(std::size_t n) {
    if (n < 2) raise_domain("find_beta0_gamma0: N >= 2 required");
    const double nn = static_cast<double>(n);
    const double rate_cap = (2.0 * nn - 1.0) / (2.0 * nn);
    const double const_cap = 4.0 * nn;
    const double gamma_lim = 1.0 / (8.0 * nn - 11.0);

    const long gsteps = static_cast<long>(std::floor((gamma_lim - 1e-12) / 1e-4));
    for (long gi = gsteps; gi >= 1; --gi) {
        const double gamma = static_cast<double>(gi) * 1e-4;
        for (long bi = 100; bi >= 1; --bi) {
            const double beta = 1.0 + static_cast<double>(bi) * 1e-3;  // 1.100 .. 1.001
            if (!quick_convergence_in_regime(n, beta, gamma)) continue;
            TheoremConstants tc = theorem_constants(n, beta, gamma);
            if (tc.rate <= rate_cap && tc.constant <= const_cap)
                return CorollaryConstants{beta, gamma};
        }
    }
    // The corollary's proof guarantees feasibility; reaching this means the
    // grid is too coarse for this N.
    raise_domain("find_beta0_gamma0: no feasible grid point found");
}

std::optional<Matrix> iterate_to_limit(const Matrix& t, double tol, std::size_t max_iter) {
    Matrix cur = t;
    for (std::size_t i = 1; i <= max_iter; ++i) {
        Matrix next = t * cur;
        const double res = (next - cur).frobenius();
        cur = std::move(next);
        if (res <= tol) return cur;
    }
    return std::nullopt;
}

namespace {

// Measured pairwise angle: the averaged limit of the pair acts as P_{j1,j2}.
// Returns nullopt when no absorbing pair projection can be certified.
std::optional<double> measured_pair_angle(const Projection& a, const Projection& b,
                                          const AveragedOptions& opts) {
    Matrix t = (a.op + b.op) * 0.5;
    std::optional<Matrix> lim = iterate_to_limit(t, std::min(opts.tol, 1e-12), opts.max_iter);
    if (!lim) return std::nullopt;
    const double idem = idem_residual_of(*lim);
    if (idem > 1e-8 * (1.0 + lim->frobenius())) return std::nullopt;
    Projection p12;
    try {
        p12 = projection_from_op(*lim, a.ctx);
        return pair_angle(a, b, p12);
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace

AveragedResult averaged_iteration(const std::vector<Projection>& projections,
                                  const AveragedOptions& opts) {
    const std::size_t n = projections.size();
    if (n < 2) raise_domain("averaged_iteration: at least two projections required");
    const std::size_t dim = projections[0].dim();
    for (const Projection& p : projections) {
        if (p.dim() != dim) raise_domain("averaged_iteration: dimension mismatch");
        if (!(p.ctx == projections[0].ctx))
            raise_domain("averaged_iteration: norm context mismatch");
    }
    const NormContext ctx = projections[0].ctx;

    Matrix t(dim, dim, 0.0);
    for (const Projection& p : projections) t += p.op;
    t *= 1.0 / static_cast<double>(n);

    AveragedResult out;
    out.certificate.n = n;

    // Measured hypothesis data.
    double beta = 0.0;
    for (const Projection& p : projections)
        beta = std::max(beta, operator_norm(p.op, ctx, opts.seed).value);
    out.certificate.beta = std::max(beta, 1.0);

    double gamma = 0.0;
    bool gamma_ok = true;
    for (std::size_t i = 0; i < n && gamma_ok; ++i)
        for (std::size_t j = i + 1; j < n && gamma_ok; ++j) {
            std::optional<double> ang = measured_pair_angle(projections[i], projections[j], opts);
            if (!ang)
                gamma_ok = false;
            else
                gamma = std::max(gamma, *ang);
        }
    out.certificate.gamma = gamma;
    out.certificate.gamma_measured = gamma_ok;
    out.certificate.in_regime =
        gamma_ok && quick_convergence_in_regime(n, out.certificate.beta, gamma);
    if (out.certificate.in_regime) {
        TheoremConstants tc = theorem_constants(n, out.certificate.beta, gamma);
        out.certificate.rate = tc.rate;
        out.certificate.constant = tc.constant;
    }

    // Main power iteration.
    Matrix cur = t;
    for (std::size_t i = 1; i <= opts.max_iter; ++i) {
        Matrix next = t * cur;
        const double res = operator_norm(next - cur, ctx, opts.seed).value;
        out.step_residuals.push_back(res);
        cur = std::move(next);
        if (res <= opts.tol) {
            out.converged = true;
            out.iterations = i;
            break;
        }
    }
    out.limit_op = cur;
    out.certificate.iterations = out.converged ? out.iterations : opts.max_iter;
    out.certificate.final_residual =
        out.step_residuals.empty() ? 0.0 : out.step_residuals.back();

    std::vector<Matrix> images;
    images.reserve(n);
    for (const Projection& p : projections) images.push_back(p.image);
    out.intersection_rank = intersect_subspaces(images).cols();

    if (out.converged) {
        try {
            out.limit = projection_from_op(out.limit_op, ctx);
            out.rank_matches = out.limit->rank() == out.intersection_rank;
        } catch (const Error&) {
            out.limit.reset();
            out.rank_matches = false;
        }
        // Second pass: residuals against the limit, for certificate soundness.
        out.limit_residuals.reserve(out.iterations);
        Matrix again = t;
        for (std::size_t i = 1; i <= out.iterations; ++i) {
            out.limit_residuals.push_back(operator_norm(again - out.limit_op, ctx, opts.seed).value);
            if (i < out.iterations) again = t * again;
        }
        if (out.certificate.in_regime) {
            bool held = true;
            for (std::size_t i = 1; i <= out.limit_residuals.size(); ++i) {
                const double bound = out.certificate.constant *
                                     std::pow(out.certificate.rate, static_cast<double>(i) - 1.0);
                if (out.limit_residuals[i - 1] > bound + 1e-9) {
                    held = false;
                    break;
                }
            }
            out.certificate.bound_held = held;
        }
    }
    return out;
}

CanonicalCheck canonical_check(const std::vector<Projection>& projections,
                               const Projection& candidate, double tol) {
    if (projections.size() < 2) raise_domain("canonical_check: at least two projections required");
    std::vector<Matrix> images;
    for (const Projection& p : projections) {
        if (p.dim() != candidate.dim()) raise_domain("canonical_check: dimension mismatch");
        images.push_back(p.image);
    }
    Matrix inter = intersect_subspaces(images);
    if (candidate.rank() != inter.cols()) return CanonicalCheck::not_applicable;
    if (candidate.rank() > 0 && subspace_residual(inter, candidate.image) > 1e-6)
        return CanonicalCheck::not_applicable;
    for (const Projection& p : projections)
        if ((candidate.op * p.op - candidate.op).frobenius() > 1e-8)
            return CanonicalCheck::not_applicable;

    AveragedResult avg = averaged_iteration(projections);
    if (!avg.converged) return CanonicalCheck::not_applicable;
    const double diff = operator_norm(avg.limit_op - candidate.op, candidate.ctx).value;
    return diff <= tol ? CanonicalCheck::matches : CanonicalCheck::differs;
}

}  // namespace pa
