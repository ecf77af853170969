#include "projangles/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pa {

namespace {

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

// Fix eigenvector signs so results are reproducible: the entry of largest
// magnitude (first such index on ties) is made positive.
void fix_column_signs(Matrix& v) {
    for (std::size_t j = 0; j < v.cols(); ++j) {
        std::size_t arg = 0;
        double best = 0.0;
        for (std::size_t i = 0; i < v.rows(); ++i) {
            if (std::abs(v(i, j)) > best) {
                best = std::abs(v(i, j));
                arg = i;
            }
        }
        if (v(arg, j) < 0.0)
            for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) = -v(i, j);
    }
}

}  // namespace

SymEigen sym_eigen(const Matrix& a) {
    a.validate("sym_eigen");
    if (!a.square()) raise_domain("sym_eigen: matrix is not square");
    if (sym_check_residual(a) > 1e-10 * (1.0 + a.max_abs()))
        raise_domain("sym_eigen: matrix is not symmetric within tolerance");

    const std::size_t n = a.rows();
    Matrix w = a;
    // Symmetrize exactly so rounding in the input cannot leak through.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double m = 0.5 * (w(i, j) + w(j, i));
            w(i, j) = m;
            w(j, i) = m;
        }

    Matrix v = Matrix::identity(n);
    const double scale = std::max(w.frobenius(), std::numeric_limits<double>::min());
    const double stop = 1e-15 * scale * static_cast<double>(n);

    for (int sweep = 0; sweep < 60; ++sweep) {
        if (off_diagonal_norm(w) <= stop) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = w(p, q);
                if (std::abs(apq) <= 1e-18 * scale) continue;
                const double app = w(p, p);
                const double aqq = w(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0)
                                     ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                                     : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double wkp = w(k, p);
                    const double wkq = w(k, q);
                    w(k, p) = c * wkp - s * wkq;
                    w(k, q) = s * wkp + c * wkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double wpk = w(p, k);
                    const double wqk = w(q, k);
                    w(p, k) = c * wpk - s * wqk;
                    w(q, k) = s * wpk + c * wqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return w(i, i) < w(j, j); });

    SymEigen out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = w(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    fix_column_signs(out.vectors);
    return out;
}

namespace {

// Complete the first `have` orthonormal columns of u to a full basis by
// Gram-Schmidt against coordinate vectors, in index order.
void complete_basis(Matrix& u, std::size_t have) {
    const std::size_t n = u.rows();
    std::size_t next = have;
    for (std::size_t e = 0; e < n && next < n; ++e) {
        std::vector<double> cand(n, 0.0);
        cand[e] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < next; ++j) {
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) dot += cand[i] * u(i, j);
                for (std::size_t i = 0; i < n; ++i) cand[i] -= dot * u(i, j);
            }
        }
        double nrm = 0.0;
        for (double c : cand) nrm += c * c;
        nrm = std::sqrt(nrm);
        if (nrm > 1e-6) {
            for (std::size_t i = 0; i < n; ++i) u(i, next) = cand[i] / nrm;
            ++next;
        }
    }
    if (next < n) raise_domain("svd: failed to complete orthonormal basis");
}

Svd svd_tall(const Matrix& a) {
    // rows >= cols here.
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    Matrix g = a.transposed() * a;
    SymEigen eg = sym_eigen(g);

    Svd out;
    out.v = Matrix(n, n);
    out.sigma.assign(n, 0.0);
    // eigenvalues ascending -> singular values descending
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = n - 1 - k;
        for (std::size_t i = 0; i < n; ++i) out.v(i, k) = eg.vectors(i, src);
    }
    out.u = Matrix(m, m, 0.0);

    std::size_t nonzero = 0;
    std::vector<double> av(m);
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<double> vk(n);
        for (std::size_t i = 0; i < n; ++i) vk[i] = out.v(i, k);
        av = mat_vec(a, vk);
        double s = 0.0;
        for (double x : av) s += x * x;
        s = std::sqrt(s);
        out.sigma[k] = s;
        const double lead = out.sigma[0];
        if (s > 1e-14 * std::max(lead, 1e-300) && s > 0.0) {
            for (std::size_t i = 0; i < m; ++i) out.u(i, k) = av[i] / s;
            nonzero = k + 1;
        }
    }
    // Re-orthonormalize the computed U columns (clustered singular values can
    // degrade orthogonality), then complete to a full basis.
    for (std::size_t j = 0; j < nonzero; ++j) {
        for (std::size_t j2 = 0; j2 < j; ++j2) {
            double dot = 0.0;
            for (std::size_t i = 0; i < m; ++i) dot += out.u(i, j) * out.u(i, j2);
            for (std::size_t i = 0; i < m; ++i) out.u(i, j) -= dot * out.u(i, j2);
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < m; ++i) nrm += out.u(i, j) * out.u(i, j);
        nrm = std::sqrt(nrm);
        if (nrm > 1e-12)
            for (std::size_t i = 0; i < m; ++i) out.u(i, j) /= nrm;
    }
    complete_basis(out.u, nonzero);
    fix_column_signs(out.v);
    // Keep U consistent with the sign-fixed V: recompute u_k = A v_k / sigma_k.
    for (std::size_t k = 0; k < nonzero; ++k) {
        if (out.sigma[k] <= 0.0) continue;
        std::vector<double> vk(n);
        for (std::size_t i = 0; i < n; ++i) vk[i] = out.v(i, k);
        av = mat_vec(a, vk);
        for (std::size_t i = 0; i < m; ++i) out.u(i, k) = av[i] / out.sigma[k];
    }
    return out;
}

}  // namespace

Svd svd(const Matrix& a) {
    a.validate("svd");
    if (a.rows() >= a.cols()) return svd_tall(a);
    Svd t = svd_tall(a.transposed());
    return Svd{t.v, std::move(t.sigma), t.u};
}

std::size_t rank(const Svd& s) {
    if (s.sigma.empty()) return 0;
    const double s1 = s.sigma[0];
    if (s1 <= 0.0) return 0;
    std::size_t r = 0;
    for (double x : s.sigma)
        if (x > kRankRelTol * s1) ++r;
    return r;
}

std::size_t rank(const Matrix& a) { return rank(svd(a)); }

double spectral_norm(const Matrix& a) {
    Svd s = svd(a);
    return s.sigma.empty() ? 0.0 : s.sigma[0];
}

double cond2(const Matrix& a) {
    Svd s = svd(a);
    if (s.sigma.empty() || s.sigma[0] <= 0.0) return std::numeric_limits<double>::infinity();
    const double last = s.sigma.back();
    if (last <= 0.0) return std::numeric_limits<double>::infinity();
    return s.sigma[0] / last;
}

Matrix image_basis(const Matrix& a) {
    if (a.empty()) return Matrix(a.rows(), 0);
    Svd s = svd(a);
    const std::size_t r = rank(s);
    Matrix b(a.rows(), r);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) b(i, j) = s.u(i, j);
    return b;
}

Matrix kernel_basis(const Matrix& a) {
    if (a.empty()) return Matrix(a.cols(), 0);
    Svd s = svd(a);
    const std::size_t r = rank(s);
    const std::size_t n = a.cols();
    Matrix b(n, n - r);
    for (std::size_t j = r; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) b(i, j - r) = s.v(i, j);
    return b;
}

Matrix intersect_subspaces(const Matrix& u, const Matrix& v) {
    if (u.empty() || v.empty()) return Matrix(std::max(u.rows(), v.rows()), 0);
    if (u.rows() != v.rows()) raise_domain("subspace intersection: dimension mismatch");
    Matrix negv = v;
    negv *= -1.0;
    Matrix w = concat_columns(u, negv);
    Matrix nul = kernel_basis(w);
    if (nul.cols() == 0) return Matrix(u.rows(), 0);
    // Each null vector (a; b) satisfies U a = V b, a point of the intersection.
    Matrix pts(u.rows(), nul.cols(), 0.0);
    for (std::size_t j = 0; j < nul.cols(); ++j)
        for (std::size_t i = 0; i < u.rows(); ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < u.cols(); ++k) s += u(i, k) * nul(k, j);
            pts(i, j) = s;
        }
    return image_basis(pts);
}

Matrix intersect_subspaces(const std::vector<Matrix>& bases) {
    if (bases.empty()) raise_domain("subspace intersection: no inputs");
    Matrix acc = bases.front();
    for (std::size_t k = 1; k < bases.size(); ++k) {
        acc = intersect_subspaces(acc, bases[k]);
        if (acc.cols() == 0) break;
    }
    return acc;
}

double subspace_residual(const Matrix& basis, const Matrix& x) {
    const double nx = x.frobenius();
    if (nx == 0.0) return 0.0;
    if (basis.cols() == 0) return 1.0;
    Matrix proj = basis * (basis.transposed() * x);
    return (x - proj).frobenius() / nx;
}

Matrix solve(const Matrix& a, const Matrix& rhs) {
    if (!a.square()) raise_domain("solve: matrix is not square");
    if (a.rows() != rhs.rows()) raise_domain("solve: shape mismatch");
    const std::size_t n = a.rows();
    Matrix lu = a;
    Matrix x = rhs;
    std::vector<std::size_t> piv(n);
    std::iota(piv.begin(), piv.end(), 0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu(i, k)) > std::abs(lu(p, k))) p = i;
        if (std::abs(lu(p, k)) < 1e-300) raise_domain("solve: singular matrix");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
            for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(k, j), x(p, j));
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = lu(i, k) / lu(k, k);
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) lu(i, j) -= f * lu(k, j);
            for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= f * x(k, j);
        }
    }
    for (std::size_t kk = n; kk-- > 0;) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            double s = x(kk, j);
            for (std::size_t i = kk + 1; i < n; ++i) s -= lu(kk, i) * x(i, j);
            x(kk, j) = s / lu(kk, kk);
        }
    }
    return x;
}

Matrix inverse(const Matrix& a) { return solve(a, Matrix::identity(a.rows())); }

}  // namespace pa
