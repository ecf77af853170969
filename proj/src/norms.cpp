#include "projangles/norms.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

#include "projangles/eigen.hpp"

namespace pa {

NormContext NormContext::lp(double p) {
    if (std::isnan(p) || p < 1.0) raise_domain("norm context requires p >= 1");
    return NormContext{p};
}

const char* norm_kind_name(NormKind k) {
    switch (k) {
        case NormKind::exact: return "exact";
        case NormKind::lower_bound: return "lower-bound";
        case NormKind::bracketed: return "bracketed";
    }
    return "?";
}

double lp_vector_norm(std::span<const double> x, double p) {
    if (x.empty()) return 0.0;
    if (p == kInf) {
        double m = 0.0;
        for (double v : x) m = std::max(m, std::abs(v));
        return m;
    }
    if (p == 1.0) {
        double s = 0.0;
        for (double v : x) s += std::abs(v);
        return s;
    }
    if (p == 2.0) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return std::sqrt(s);
    }
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (double v : x) s += std::pow(std::abs(v) / m, p);
    return m * std::pow(s, 1.0 / p);
}

namespace {

double dual_exponent(double p) {
    if (p == 1.0) return kInf;
    if (p == kInf) return 1.0;
    return p / (p - 1.0);
}

// z with ||z||_q = 1 and <z, y> = ||y||_p (q dual to p). Deterministic on the
// p = inf tie: the first argmax coordinate wins.
std::vector<double> lp_dual_vector(std::span<const double> y, double p) {
    std::vector<double> z(y.size(), 0.0);
    if (p == kInf) {
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < y.size(); ++i)
            if (std::abs(y[i]) > best) {
                best = std::abs(y[i]);
                arg = i;
            }
        if (best > 0.0) z[arg] = y[arg] > 0.0 ? 1.0 : -1.0;
        return z;
    }
    if (p == 1.0) {
        for (std::size_t i = 0; i < y.size(); ++i) z[i] = y[i] > 0.0 ? 1.0 : (y[i] < 0.0 ? -1.0 : 0.0);
        return z;
    }
    double m = 0.0;
    for (double v : y) m = std::max(m, std::abs(v));
    if (m == 0.0) return z;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double a = std::abs(y[i]) / m;
        z[i] = (y[i] >= 0.0 ? 1.0 : -1.0) * std::pow(a, p - 1.0);
    }
    const double q = dual_exponent(p);
    const double nz = lp_vector_norm(z, q);
    if (nz > 0.0)
        for (double& v : z) v /= nz;
    return z;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// One run of the dual-pair (Boyd/Higham) power method from a given start;
// returns a valid lower bound on ||A||_p.
double lp_power_run(const Matrix& a, double p, std::vector<double> x) {
    const double q = dual_exponent(p);
    double nx = lp_vector_norm(x, p);
    if (nx == 0.0) return 0.0;
    for (double& v : x) v /= nx;
    double gamma = 0.0;
    for (int it = 0; it < 100; ++it) {
        std::vector<double> y = mat_vec(a, x);
        const double g = lp_vector_norm(y, p);
        if (g <= gamma * (1.0 + 1e-13)) {
            gamma = std::max(gamma, g);
            break;
        }
        gamma = g;
        if (g == 0.0) break;
        std::vector<double> dy = lp_dual_vector(y, p);
        std::vector<double> z = mat_tvec(a, dy);
        const double nzq = lp_vector_norm(z, q);
        if (nzq <= dot(z, x) * (1.0 + 1e-13)) break;
        x = lp_dual_vector(z, q);
    }
    return gamma;
}

std::vector<double> random_unit(std::size_t n, double p, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x(n);
    for (double& v : x) v = gauss(rng);
    const double nx = lp_vector_norm(x, p);
    if (nx > 0.0)
        for (double& v : x) v /= nx;
    else
        x[0] = 1.0;
    return x;
}

double l1_operator_norm(const Matrix& a) {
    double best = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

double linf_operator_norm(const Matrix& a) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

// Riesz-Thorin upper bound ||A||_p <= ||A||_1^(1/p) ||A||_inf^(1-1/p).
double interpolation_upper(const Matrix& a, double p) {
    const double n1 = l1_operator_norm(a);
    const double ninf = linf_operator_norm(a);
    if (p == kInf) return ninf;
    if (n1 == 0.0 || ninf == 0.0) return 0.0;
    return std::pow(n1, 1.0 / p) * std::pow(ninf, 1.0 - 1.0 / p);
}

// ---------------------------------------------------------------------------
// Sphere-mesh oracle with branch-and-bound refinement (domain dim <= 3)
// ---------------------------------------------------------------------------

struct MeshCell {
    double c0 = 0.0, c1 = 0.0;  // center angles
    double h0 = 0.0, h1 = 0.0;  // half widths
    double g = 0.0;             // objective at center
    double bound = 0.0;         // certified upper bound over the cell
    bool operator<(const MeshCell& o) const { return bound < o.bound; }
};

std::vector<double> sphere_point(std::size_t dim, double t0, double t1, double p) {
    std::vector<double> u(dim, 0.0);
    if (dim == 1) {
        u[0] = 1.0;
    } else if (dim == 2) {
        u[0] = std::cos(t0);
        u[1] = std::sin(t0);
    } else {
        u[0] = std::sin(t1) * std::cos(t0);
        u[1] = std::sin(t1) * std::sin(t0);
        u[2] = std::cos(t1);
    }
    const double n = lp_vector_norm(u, p);
    if (n > 0.0)
        for (double& v : u) v /= n;
    return u;
}

Bracket mesh_bracket_direct(const Matrix& a, double p) {
    const std::size_t dim = a.cols();
    const double uub = interpolation_upper(a, p);
    auto eval = [&](double t0, double t1) {
        std::vector<double> x = sphere_point(dim, t0, t1, p);
        return lp_vector_norm(mat_vec(a, x), p);
    };
    if (dim == 1) {
        const double g = eval(0.0, 0.0);
        return Bracket{g, g};
    }

    // Rigorous Lipschitz constants of the angle -> lp-sphere parameterization
    // (||dx/dt||_p <= 2 ||du/dt||_p / ||u||_p with the crude bounds below).
    const double lip0 = (dim == 2 ? 4.0 : 5.0) * uub;
    const double lip1 = (dim == 2 ? 0.0 : 8.7) * uub;
    const double range0 = dim == 2 ? 3.15 : 6.30;  // covers [0, pi] / [0, 2pi]
    const double range1 = dim == 2 ? 0.0 : 3.15;   // covers [0, pi]

    const double step = 0.01;
    std::priority_queue<MeshCell> heap;
    double best = 0.0;
    const std::size_t n0 = static_cast<std::size_t>(std::ceil(range0 / step));
    const std::size_t n1 = dim == 2 ? 1 : static_cast<std::size_t>(std::ceil(range1 / step));
    for (std::size_t i = 0; i < n0; ++i) {
        for (std::size_t j = 0; j < n1; ++j) {
            MeshCell cell;
            cell.h0 = step / 2.0;
            cell.h1 = dim == 2 ? 0.0 : step / 2.0;
            cell.c0 = (static_cast<double>(i) + 0.5) * step;
            cell.c1 = dim == 2 ? 0.0 : (static_cast<double>(j) + 0.5) * step;
            cell.g = eval(cell.c0, cell.c1);
            cell.bound = cell.g + lip0 * cell.h0 + lip1 * cell.h1;
            best = std::max(best, cell.g);
            heap.push(cell);
        }
    }

    const double gap_target = std::max(1e-9, 1e-7 * best);
    double upper = best;
    for (long pops = 0; pops < 400000 && !heap.empty(); ++pops) {
        MeshCell top = heap.top();
        upper = top.bound;
        if (top.bound <= best + gap_target) break;
        heap.pop();
        const int splits1 = dim == 2 ? 1 : 2;
        for (int s0 = 0; s0 < 2; ++s0) {
            for (int s1 = 0; s1 < splits1; ++s1) {
                MeshCell child;
                child.h0 = top.h0 / 2.0;
                child.h1 = dim == 2 ? 0.0 : top.h1 / 2.0;
                child.c0 = top.c0 + (s0 == 0 ? -child.h0 : child.h0);
                child.c1 = dim == 2 ? 0.0 : top.c1 + (s1 == 0 ? -child.h1 : child.h1);
                child.g = eval(child.c0, child.c1);
                child.bound = child.g + lip0 * child.h0 + lip1 * child.h1;
                best = std::max(best, child.g);
                heap.push(child);
            }
        }
    }
    if (!heap.empty()) upper = std::max(best, heap.top().bound);
    upper = std::min(upper, uub);
    upper = std::max(upper, best);
    return Bracket{best, upper};
}

}  // namespace

double lp_norm_lower_bound(const Matrix& a, double p, std::uint64_t seed, int restarts) {
    std::mt19937_64 rng(seed);
    double best = 0.0;
    // Deterministic starts: all-ones and the leading 2-norm singular direction.
    std::vector<double> ones(a.cols(), 1.0);
    best = std::max(best, lp_power_run(a, p, ones));
    Svd s = svd(a);
    if (!s.sigma.empty() && s.sigma[0] > 0.0) {
        std::vector<double> v0(a.cols());
        for (std::size_t i = 0; i < a.cols(); ++i) v0[i] = s.v(i, 0);
        best = std::max(best, lp_power_run(a, p, v0));
    }
    for (int r = 0; r < restarts; ++r)
        best = std::max(best, lp_power_run(a, p, random_unit(a.cols(), p, rng)));
    return best;
}

Bracket lp_norm_bracket(const Matrix& a, double p) {
    a.validate("lp_norm_bracket");
    if (std::min(a.rows(), a.cols()) > 3)
        raise_domain("lp_norm_bracket: mesh oracle requires min(rows, cols) <= 3");
    if (a.cols() <= 3) return mesh_bracket_direct(a, p);
    // ||A||_p = ||A^T||_q lets the mesh run over the small side.
    return mesh_bracket_direct(a.transposed(), dual_exponent(p));
}

NormEstimate operator_norm(const Matrix& a, const NormContext& ctx, std::uint64_t seed) {
    a.validate("operator_norm");
    if (std::isnan(ctx.p) || ctx.p < 1.0) raise_domain("operator_norm requires p >= 1");
    const double p = ctx.p;
    if (p == 2.0) return NormEstimate{spectral_norm(a), NormKind::exact, 0.0};
    if (p == 1.0) return NormEstimate{l1_operator_norm(a), NormKind::exact, 0.0};
    if (p == kInf) return NormEstimate{linf_operator_norm(a), NormKind::exact, 0.0};

    const double lower = lp_norm_lower_bound(a, p, seed);
    if (std::min(a.rows(), a.cols()) <= 3) {
        Bracket b = lp_norm_bracket(a, p);
        b.lower = std::max(b.lower, lower);
        b.upper = std::max(b.upper, b.lower);
        // value is the polished maximum; [value - slack, value + slack]
        // still contains the truth because truth is in [lower, upper].
        return NormEstimate{b.lower, NormKind::bracketed, b.upper - b.lower};
    }
    return NormEstimate{lower, NormKind::lower_bound, 0.0};
}

double schatten_norm(const Matrix& a, double r) {
    a.validate("schatten_norm");
    if (std::isnan(r) || r < 1.0) raise_domain("schatten norm requires r >= 1");
    Svd s = svd(a);
    if (s.sigma.empty()) return 0.0;
    const double s1 = s.sigma[0];
    if (r == kInf || s1 <= 0.0) return s1;
    double acc = 0.0;
    for (double x : s.sigma) acc += std::pow(x / s1, r);
    return s1 * std::pow(acc, 1.0 / r);
}

namespace {

// ---------------------------------------------------------------------------
// Mixed norm l2(Omega; lp^m)
// ---------------------------------------------------------------------------

struct MixedNorm {
    std::size_t blocks;
    std::size_t m;
    double p;

    double norm(std::span<const double> f) const {
        double s = 0.0;
        for (std::size_t w = 0; w < blocks; ++w) {
            const double b = lp_vector_norm(f.subspan(w * m, m), p);
            s += b * b;
        }
        return std::sqrt(s);
    }

    // Unit dual vector (in l2(lq^m)) pairing to norm(f).
    std::vector<double> dual(std::span<const double> f) const {
        std::vector<double> z(f.size(), 0.0);
        const double n = norm(f);
        if (n == 0.0) return z;
        for (std::size_t w = 0; w < blocks; ++w) {
            auto blk = f.subspan(w * m, m);
            const double bn = lp_vector_norm(blk, p);
            if (bn == 0.0) continue;
            std::vector<double> d = lp_dual_vector(blk, p);
            const double scale = bn / n;
            for (std::size_t i = 0; i < m; ++i) z[w * m + i] = scale * d[i];
        }
        return z;
    }
};

std::vector<double> block_apply(const Matrix& t, std::size_t m, std::span<const double> f,
                                bool transpose) {
    const std::size_t n = t.rows();
    std::vector<double> y(n * m, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double c = transpose ? t(j, i) : t(i, j);
            if (c == 0.0) continue;
            for (std::size_t k = 0; k < m; ++k) y[i * m + k] += c * f[j * m + k];
        }
    return y;
}

double mixed_power_run(const Matrix& t, std::size_t m, double p, std::vector<double> x) {
    MixedNorm prim{t.rows(), m, p};
    MixedNorm dualn{t.rows(), m, dual_exponent(p)};
    double nx = prim.norm(x);
    if (nx == 0.0) return 0.0;
    for (double& v : x) v /= nx;
    double gamma = 0.0;
    for (int it = 0; it < 120; ++it) {
        std::vector<double> y = block_apply(t, m, x, false);
        const double g = prim.norm(y);
        if (g <= gamma * (1.0 + 1e-13)) {
            gamma = std::max(gamma, g);
            break;
        }
        gamma = g;
        if (g == 0.0) break;
        std::vector<double> z = block_apply(t, m, prim.dual(y), true);
        const double nz = dualn.norm(z);
        if (nz <= dot(z, x) * (1.0 + 1e-13)) break;
        x = dualn.dual(z);
    }
    return gamma;
}

Matrix entrywise_abs(const Matrix& a) {
    Matrix b = a;
    for (double& v : b.data()) v = std::abs(v);
    return b;
}

}  // namespace

NormEstimate tensor_block_norm(const Matrix& t, std::size_t block_dim, const NormContext& ctx,
                               std::uint64_t seed) {
    t.validate("tensor_block_norm");
    if (!t.square()) raise_domain("tensor_block_norm: operator on l2(Omega) must be square");
    if (block_dim == 0) raise_domain("tensor_block_norm: block dimension must be positive");
    if (std::isnan(ctx.p) || ctx.p < 1.0) raise_domain("tensor_block_norm requires p >= 1");

    const double s2 = spectral_norm(t);
    if (ctx.p == 2.0 || block_dim == 1 || t.rows() == 1)
        return NormEstimate{s2, NormKind::exact, 0.0};

    const double p = ctx.p;
    std::mt19937_64 rng(seed);
    double lower = s2;  // constant-direction blocks realize ||T||_2 in any lp
    std::vector<double> ones(t.rows() * block_dim, 1.0);
    lower = std::max(lower, mixed_power_run(t, block_dim, p, ones));
    for (int r = 0; r < 8; ++r) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<double> x(t.rows() * block_dim);
        for (double& v : x) v = gauss(rng);
        lower = std::max(lower, mixed_power_run(t, block_dim, p, x));
    }

    const double bm_exp = std::abs(0.5 - (p == kInf ? 0.0 : 1.0 / p));
    double upper = schatten_norm(t, 1.0);
    upper = std::min(upper, spectral_norm(entrywise_abs(t)));
    upper = std::min(upper, std::pow(static_cast<double>(block_dim), bm_exp) * s2);
    upper = std::max(upper, lower);
    return NormEstimate{lower, NormKind::bracketed, upper - lower};
}

}  // namespace pa
