#include "projangles/simplex.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <sstream>

#include "projangles/eigen.hpp"

namespace pa {

Face face_from_vertices(const std::vector<int>& vertices, std::size_t n) {
    Face f = 0;
    for (int v : vertices) {
        if (v < 0 || static_cast<std::size_t>(v) > n) raise_domain("face vertex out of range");
        f |= Face{1} << v;
    }
    return f;
}

std::vector<int> face_vertices(Face f) {
    std::vector<int> v;
    for (int i = 0; i < 32; ++i)
        if (f & (Face{1} << i)) v.push_back(i);
    return v;
}

std::size_t face_card(Face f) { return static_cast<std::size_t>(std::popcount(f)); }

std::string face_label(Face f) {
    if (f == 0) return "empty";
    std::ostringstream os;
    bool first = true;
    for (int v : face_vertices(f)) {
        if (!first) os << ' ';
        os << v;
        first = false;
    }
    return os.str();
}

bool FaceLexLess::operator()(Face a, Face b) const {
    const std::vector<int> va = face_vertices(a);
    const std::vector<int> vb = face_vertices(b);
    return std::lexicographical_compare(va.begin(), va.end(), vb.begin(), vb.end());
}

std::vector<Face> all_subfaces(Face f) {
    std::vector<Face> out;
    Face sub = 0;
    // enumerate all submasks including 0 and f
    while (true) {
        out.push_back(sub);
        if (sub == f) break;
        sub = (sub - f) & f;
    }
    std::sort(out.begin(), out.end(), FaceLexLess{});
    return out;
}

std::vector<Face> codim1_faces(std::size_t n) {
    std::vector<Face> out;
    const Face full = full_face(n);
    for (std::size_t i = 0; i <= n; ++i) out.push_back(full & ~(Face{1} << i));
    std::sort(out.begin(), out.end(), FaceLexLess{});
    return out;
}

SimplexFamily::SimplexFamily(std::size_t n, NormContext ctx, Projection p_top,
                             FaceMap<Projection> p_codim1)
    : n_(n), ctx_(ctx), p_top_(std::move(p_top)), p_codim1_(std::move(p_codim1)),
      cache_(std::make_unique<Cache>()) {
    const Face top = full_face(n_);
    if (p_codim1_.size() != n_ + 1)
        raise_domain("simplex family: expected one projection per codimension-1 face");
    for (const auto& [face, proj] : p_codim1_) {
        if (face_card(face) != n_ || !face_subset(face, top))
            raise_domain("simplex family: key is not a codimension-1 face");
        if (proj.dim() != p_top_.dim())
            raise_domain("simplex family: projection dimensions differ");
        if (!(proj.ctx == ctx_) || !(p_top_.ctx == ctx_))
            raise_domain("simplex family: norm context mismatch");
        const double absorb = (proj.op * p_top_.op - proj.op).frobenius();
        if (absorb > 1e-8) {
            std::ostringstream os;
            os << "simplex family: P_sigma P_top != P_sigma for sigma = {" << face_label(face)
               << "}, residual " << absorb;
            raise_domain(os.str());
        }
    }
}

Matrix SimplexFamily::t_tau(Face tau) const {
    const Face top = full_face(n_);
    if (!face_subset(tau, top)) raise_domain("t_tau: face outside the simplex");
    if (tau == top) return p_top_.op;
    Matrix sum(dim(), dim(), 0.0);
    std::size_t count = 0;
    for (const auto& [sigma, proj] : p_codim1_) {
        if (!face_subset(tau, sigma)) continue;
        sum += proj.op;
        ++count;
    }
    // |simplex \ tau| codimension-1 faces contain tau
    sum *= 1.0 / static_cast<double>(count);
    return sum;
}

const PTauRecord& SimplexFamily::p_tau(Face tau, double tol) const {
    const Face top = full_face(n_);
    if (!face_subset(tau, top)) raise_domain("p_tau: face outside the simplex");
    {
        std::lock_guard<std::mutex> lock(cache_->mu);
        auto it = cache_->entries.find(tau);
        if (it != cache_->entries.end()) return it->second;
    }

    PTauRecord rec;
    if (tau == top) {
        rec.proj = p_top_;
        rec.iterations = 0;
    } else if (face_card(tau) == n_) {
        rec.proj = p_codim1_.at(tau);
        rec.iterations = 0;
    } else {
        std::vector<Projection> members;
        for (const auto& [sigma, proj] : p_codim1_)
            if (face_subset(tau, sigma)) members.push_back(proj);
        AveragedOptions opts;
        opts.tol = tol;
        AveragedResult avg = averaged_iteration(members, opts);
        if (!avg.converged || !avg.limit) {
            std::ostringstream os;
            os << "p_tau: averaged iteration for face {" << face_label(tau)
               << "} did not converge within " << opts.max_iter
               << " iterations; last residual "
               << (avg.step_residuals.empty() ? 0.0 : avg.step_residuals.back());
            throw Error(ErrorKind::nonconvergence, os.str());
        }
        rec.proj = *avg.limit;
        rec.iterations = avg.iterations;
        rec.certificate = avg.certificate;
        rec.residuals = avg.step_residuals;
        const double nn = static_cast<double>(members.size());
        rec.corollary_bound_held = true;
        for (std::size_t i = 1; i <= avg.limit_residuals.size(); ++i) {
            const double bound =
                4.0 * nn * std::pow((2.0 * nn - 1.0) / (2.0 * nn), static_cast<double>(i) - 1.0);
            if (avg.limit_residuals[i - 1] > bound + 1e-9) {
                rec.corollary_bound_held = false;
                break;
            }
        }
    }

    std::lock_guard<std::mutex> lock(cache_->mu);
    auto [it, inserted] = cache_->entries.emplace(tau, std::move(rec));
    (void)inserted;  // first computation wins; results agree by determinism
    return it->second;
}

double multi_angle(const SimplexFamily& family, const std::vector<Face>& sigmas) {
    if (sigmas.empty()) raise_domain("multi_angle: no faces given");
    if (sigmas.size() > 7)
        raise_domain("multi_angle: permutation cap exceeded (at most 7 faces, 5040 orderings)");
    Face tau = full_face(family.n());
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        if (face_card(sigmas[i]) != family.n())
            raise_domain("multi_angle: faces must have codimension 1");
        for (std::size_t j = i + 1; j < sigmas.size(); ++j)
            if (sigmas[i] == sigmas[j]) raise_domain("multi_angle: faces must be pairwise distinct");
        tau &= sigmas[i];
    }
    const Matrix& ptau = family.p_tau(tau).proj.op;
    Matrix complement = Matrix::identity(family.dim()) - ptau;

    std::vector<std::size_t> idx(sigmas.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end());
    double best = 0.0;
    do {
        Matrix m = complement;
        for (std::size_t pos = idx.size(); pos-- > 0;)
            m = family.codim1().at(sigmas[idx[pos]]).op * m;
        best = std::max(best, operator_norm(m, family.ctx()).value);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return best;
}

ConsistencyReport consistency_check(const SimplexFamily& family) {
    ConsistencyReport report;
    const Face top = full_face(family.n());
    for (Face tau : all_subfaces(top)) {
        if (tau == top) continue;
        const Matrix& ptau = family.p_tau(tau).proj.op;
        for (const auto& [sigma, proj] : family.codim1()) {
            if (!face_subset(tau, sigma)) continue;
            const double res = operator_norm(ptau * proj.op - ptau, family.ctx()).value;
            report.entries.push_back({tau, sigma, res});
            report.max_residual = std::max(report.max_residual, res);
        }
    }
    report.pass = report.max_residual <= 1e-7;
    return report;
}

SmallAngleReport small_angle_verify(const SimplexFamily& family, double epsilon) {
    ConsistencyReport cons = consistency_check(family);
    if (!cons.pass)
        raise_domain("small_angle_verify: family is not consistent (residual " +
                     std::to_string(cons.max_residual) + ")");

    SmallAngleReport rep;
    rep.epsilon = epsilon;
    rep.norm_bound = 4.0 * (static_cast<double>(family.n()) + 1.0) + 2.0;
    const Face top = full_face(family.n());
    const std::vector<Face> faces = all_subfaces(top);
    const Matrix id = Matrix::identity(family.dim());

    for (Face tau : faces)
        rep.max_norm =
            std::max(rep.max_norm, operator_norm(family.p_tau(tau).proj.op, family.ctx()).value);
    rep.norm_pass = rep.max_norm <= rep.norm_bound;

    for (Face tau : faces) {
        const Matrix& ptau = family.p_tau(tau).proj.op;
        for (Face tau2 : faces) {
            const Matrix& ptau2 = family.p_tau(tau2).proj.op;
            const Matrix prod = ptau * ptau2;
            const Face meet = tau & tau2;
            for (Face eta : faces) {
                if (!face_subset(meet, eta)) continue;
                const Matrix& peta = family.p_tau(eta).proj.op;
                const double v = operator_norm(prod * (id - peta), family.ctx()).value;
                rep.max_product = std::max(rep.max_product, v);
            }
        }
    }
    rep.product_pass = rep.max_product <= epsilon;
    rep.pass = rep.norm_pass && rep.product_pass;
    return rep;
}

double angle_no_consistency(const SimplexFamily& family, Face tau, Face tau2) {
    const Matrix& a = family.p_tau(tau).proj.op;
    const Matrix& b = family.p_tau(tau2).proj.op;
    const Matrix& meet = family.p_tau(tau & tau2).proj.op;
    const Matrix comp = Matrix::identity(family.dim()) - meet;
    const double x = operator_norm(a * b * comp, family.ctx()).value;
    const double y = operator_norm(b * a * comp, family.ctx()).value;
    return std::max(x, y);
}

double almost_commutativity(const SimplexFamily& family) {
    const std::vector<Face> faces = all_subfaces(full_face(family.n()));
    double best = 0.0;
    for (std::size_t i = 0; i < faces.size(); ++i) {
        const Matrix& a = family.p_tau(faces[i]).proj.op;
        for (std::size_t j = i + 1; j < faces.size(); ++j) {
            const Matrix& b = family.p_tau(faces[j]).proj.op;
            best = std::max(best, operator_norm(a * b - b * a, family.ctx()).value);
        }
    }
    return best;
}

namespace {

struct TreeLevel {
    double c_bound = 0.0;
    double eps = 0.0;
    double rho = 0.0;
    std::size_t depth = 0;
};

// One tree-series evaluation: L = I + sum_j sum over reduced label words of
// (-1)^j R_{tau_j} ... R_{tau_1}, accumulated per last label so each depth
// step costs one multiplication per label.
Matrix tree_series(const std::vector<const Matrix*>& labels, std::size_t dim, std::size_t depth) {
    const std::size_t L = labels.size();
    Matrix total = Matrix::identity(dim);
    std::vector<Matrix> by_last(L);
    Matrix level_sum(dim, dim, 0.0);
    for (std::size_t a = 0; a < L; ++a) {
        by_last[a] = *labels[a] * -1.0;
        level_sum += by_last[a];
    }
    total += level_sum;
    for (std::size_t j = 2; j <= depth; ++j) {
        std::vector<Matrix> next(L);
        Matrix next_sum(dim, dim, 0.0);
        for (std::size_t a = 0; a < L; ++a) {
            Matrix others = level_sum - by_last[a];
            next[a] = (*labels[a] * others) * -1.0;
            next_sum += next[a];
        }
        by_last = std::move(next);
        level_sum = std::move(next_sum);
        total += level_sum;
    }
    return total;
}

}  // namespace

DecompositionResult decompose_tree(const SimplexFamily& family, Face eta, double tol) {
    if (!face_subset(eta, full_face(family.n())))
        raise_domain("decompose_tree: face outside the simplex");
    ConsistencyReport cons = consistency_check(family);
    if (!cons.pass)
        raise_domain("decompose_tree: in-applicability, family is not consistent (residual " +
                     std::to_string(cons.max_residual) + ")");

    DecompositionResult result;
    result.eta = eta;
    result.method = DecompositionMethod::tree_series;

    const std::size_t dim = family.dim();
    std::vector<Face> faces = all_subfaces(eta);
    std::stable_sort(faces.begin(), faces.end(),
                     [](Face a, Face b) { return face_card(a) < face_card(b); });

    FaceMap<Matrix> r_ops;
    const Matrix& p_empty = family.p_tau(0).proj.op;
    std::size_t max_depth = 0;
    double max_rho = 0.0;

    for (Face tau : faces) {
        const std::size_t card = face_card(tau);
        if (card == 0) {
            r_ops[tau] = p_empty;
            continue;
        }
        if (card == 1) {
            r_ops[tau] = family.p_tau(tau).proj.op - p_empty;
            continue;
        }
        // Proper subsets of tau label the tree edges.
        std::vector<Face> labels_faces;
        for (Face s : all_subfaces(tau))
            if (s != tau) labels_faces.push_back(s);
        const double d = static_cast<double>((std::size_t{1} << card) - 2);

        TreeLevel lv;
        for (Face s : labels_faces)
            lv.c_bound = std::max(lv.c_bound, operator_norm(r_ops.at(s), family.ctx()).value);
        for (std::size_t i = 0; i < labels_faces.size(); ++i)
            for (std::size_t j = i + 1; j < labels_faces.size(); ++j)
                lv.eps = std::max(lv.eps,
                                  angle_no_consistency(family, labels_faces[i], labels_faces[j]));
        lv.rho = d * lv.c_bound * lv.c_bound * lv.eps;
        max_rho = std::max(max_rho, lv.rho);
        // a 1e-9 margin keeps rho measured as 1 - O(rounding) out as well
        if (lv.rho >= 1.0 - 1e-9) {
            std::ostringstream os;
            os << "decompose_tree: in-applicability, tree series diverges at face {"
               << face_label(tau) << "}: rho = d C^2 eps = " << lv.rho << " >= 1";
            raise_domain(os.str());
        }
        const double tol_series = std::max(tol * 1e-3, 1e-15);
        if (lv.rho <= 1e-14) {
            lv.depth = 1;
        } else {
            const double j = std::ceil(std::log(tol_series * (1.0 - lv.rho)) / std::log(lv.rho));
            lv.depth = static_cast<std::size_t>(std::clamp(j, 1.0, 500.0));
        }
        max_depth = std::max(max_depth, lv.depth);

        std::vector<const Matrix*> labels;
        for (Face s : labels_faces) labels.push_back(&r_ops.at(s));
        Matrix l_op = tree_series(labels, dim, lv.depth);
        const Matrix& p_tau_op = family.p_tau(tau).proj.op;
        Matrix r_tau = l_op * p_tau_op;

        // Certify the series output for the top face of this recursion level.
        if (tau == eta) {
            const double idem = operator_norm(r_tau * r_tau - r_tau, family.ctx()).value;
            result.residuals["r_eta_idempotency"] = idem;
            double annihilation = 0.0;
            for (Face s : labels_faces)
                annihilation = std::max(
                    annihilation, operator_norm(r_ops.at(s) * l_op, family.ctx()).value);
            result.residuals["r_tau_l_eta"] = annihilation;
            if (idem > tol || annihilation > tol) {
                result.failed = true;
                result.failure_reason = "tree series verification exceeded tolerance";
            }
        }
        r_ops[tau] = std::move(r_tau);
    }

    result.truncation_depth = max_depth;
    result.residuals["rho_max"] = max_rho;

    std::size_t rank_sum = 0;
    Matrix concat(dim, 0);
    for (const auto& [tau, r] : r_ops) {
        // The R_tau are (approximate) projections, so genuinely nonzero
        // singular values sit at or above 1; everything below 1/2 is the
        // truncation noise of a zero summand.
        Svd s = svd(r);
        std::size_t rk = 0;
        while (rk < s.sigma.size() && s.sigma[rk] >= 0.5) ++rk;
        Matrix basis(dim, rk);
        for (std::size_t j = 0; j < rk; ++j)
            for (std::size_t i = 0; i < dim; ++i) basis(i, j) = s.u(i, j);
        rank_sum += rk;
        concat = concat_columns(concat, basis);
        result.summand_bases[tau] = std::move(basis);
    }
    result.r_ops = std::move(r_ops);
    const std::size_t eta_rank = family.p_tau(eta).proj.rank();
    result.rank_additivity = rank_sum == eta_rank;
    result.direct_sum_ok = concat.cols() == 0 || cond2(concat) <= 1e8;
    if (!result.rank_additivity && !result.failed) {
        result.failed = true;
        std::ostringstream os;
        os << "rank additivity failed: sum of summand ranks " << rank_sum << " != rank(P_eta) "
           << eta_rank;
        result.failure_reason = os.str();
    }
    return result;
}

DecompositionResult decompose_oracle(const SimplexFamily& family, Face eta) {
    if (!face_subset(eta, full_face(family.n())))
        raise_domain("decompose_oracle: face outside the simplex");

    DecompositionResult result;
    result.eta = eta;
    result.method = DecompositionMethod::oracle;

    const std::size_t dim = family.dim();
    std::size_t rank_sum = 0;
    Matrix concat(dim, 0);
    for (Face tau : all_subfaces(eta)) {
        Matrix basis;
        if (tau == 0) {
            basis = family.p_tau(0).proj.image;  // X^empty = X_empty
        } else {
            std::vector<Matrix> pieces{family.p_tau(tau).proj.image};
            for (Face s : all_subfaces(tau))
                if (s != tau) pieces.push_back(family.p_tau(s).proj.kernel);
            basis = intersect_subspaces(pieces);
        }
        rank_sum += basis.cols();
        concat = concat_columns(concat, basis);
        result.summand_bases[tau] = std::move(basis);
    }

    const Projection& p_eta = family.p_tau(eta).proj;
    result.rank_additivity = rank_sum == p_eta.rank();
    result.direct_sum_ok = concat.cols() == 0 || cond2(concat) <= 1e8;
    if (!result.rank_additivity) {
        result.failed = true;
        std::ostringstream os;
        os << "rank additivity failed: sum of summand dims " << rank_sum << " != rank(P_eta) "
           << p_eta.rank();
        result.failure_reason = os.str();
        return result;
    }
    if (!result.direct_sum_ok) {
        result.failed = true;
        result.failure_reason = "summands are not in direct position (condition number > 1e8)";
        return result;
    }

    // R_tau projects onto X^tau along the other summands plus Ker P_eta.
    for (const auto& [tau, basis] : result.summand_bases) {
        if (basis.cols() == 0) {
            result.r_ops[tau] = Matrix(dim, dim, 0.0);
            continue;
        }
        Matrix complement(dim, 0);
        for (const auto& [other, obasis] : result.summand_bases)
            if (other != tau) complement = concat_columns(complement, obasis);
        complement = concat_columns(complement, p_eta.kernel);
        result.r_ops[tau] = make_projection(basis, complement, family.ctx()).op;
    }
    return result;
}

namespace {

Matrix random_orthogonal(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix q(n, n);
    for (double& v : q.data()) v = gauss(rng);
    // Modified Gram-Schmidt, deterministic for a fixed seed.
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += q(i, j) * q(i, k);
            for (std::size_t i = 0; i < n; ++i) q(i, j) -= dot * q(i, k);
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < n; ++i) nrm += q(i, j) * q(i, j);
        nrm = std::sqrt(nrm);
        if (nrm < 1e-8) {
            // astronomically unlikely; replace with a coordinate vector
            for (std::size_t i = 0; i < n; ++i) q(i, j) = i == j ? 1.0 : 0.0;
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) q(i, j) /= nrm;
    }
    return q;
}

struct SynthesizedOps {
    std::size_t dim = 0;
    FaceMap<Matrix> ops;  // codim-1 face -> projection operator (pre-rotation)
};

// One 2x2 block per pair {i, j} of left-out vertices plus one shared
// coordinate: sigma_i acts as the e1 projector on block {i,j}, sigma_j as the
// projector onto (angle, sqrt(1-angle^2)), everything else as the identity.
SynthesizedOps synthesized_ops(std::size_t n, double angle) {
    if (!(angle >= 0.0 && angle < 1.0)) raise_domain("synthesized family: angle must be in [0,1)");
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i + 1 <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j) pairs.emplace_back(i, j);
    SynthesizedOps out;
    out.dim = 2 * pairs.size() + 1;

    const double c = angle;
    const double s = std::sqrt(1.0 - angle * angle);
    const Face top = full_face(n);
    for (std::size_t m = 0; m <= n; ++m) {
        const Face sigma = top & ~(Face{1} << m);
        Matrix op = Matrix::identity(out.dim);
        for (std::size_t b = 0; b < pairs.size(); ++b) {
            const std::size_t o = 2 * b;
            if (pairs[b].first == m) {
                op(o, o) = 1.0;
                op(o, o + 1) = 0.0;
                op(o + 1, o) = 0.0;
                op(o + 1, o + 1) = 0.0;
            } else if (pairs[b].second == m) {
                op(o, o) = c * c;
                op(o, o + 1) = c * s;
                op(o + 1, o) = c * s;
                op(o + 1, o + 1) = s * s;
            }
        }
        out.ops[sigma] = std::move(op);
    }
    return out;
}

}  // namespace

SimplexFamily synthesized_family(std::size_t n, double angle, std::uint64_t seed) {
    SynthesizedOps raw = synthesized_ops(n, angle);
    Matrix q = random_orthogonal(raw.dim, seed);
    Matrix qt = q.transposed();
    NormContext ctx = NormContext::lp(2.0);
    FaceMap<Projection> codim1;
    for (auto& [face, op] : raw.ops) codim1[face] = projection_from_op(q * op * qt, ctx);
    Projection ptop = projection_from_op(Matrix::identity(raw.dim), ctx);
    return SimplexFamily(n, ctx, std::move(ptop), std::move(codim1));
}

SimplexFamily perturbed_synthesized_family(std::size_t n, double angle, double noise,
                                           std::uint64_t seed) {
    // The synthesized family stays consistent under generic basis noise (the
    // averaged limits adapt), so the defect is injected where it genuinely
    // breaks absorption: an extra 2x2 block on which two members share the
    // image line e1 but project along kernels tilted against each other by
    // `noise`. The limit projection there cannot absorb both, leaving an
    // absorption residual of about noise/2.
    SynthesizedOps raw = synthesized_ops(n, angle);
    const std::size_t dim = raw.dim + 2;
    Matrix q = random_orthogonal(dim, seed);
    Matrix qt = q.transposed();
    NormContext ctx = NormContext::lp(2.0);
    FaceMap<Projection> codim1;
    std::size_t member = 0;
    for (auto& [face, op] : raw.ops) {
        Matrix big = Matrix::identity(dim);
        for (std::size_t i = 0; i < raw.dim; ++i)
            for (std::size_t j = 0; j < raw.dim; ++j) big(i, j) = op(i, j);
        const std::size_t o = raw.dim;
        if (member == 0) {
            big(o, o) = 1.0;
            big(o + 1, o + 1) = 0.0;
        } else if (member == 1) {
            big(o, o) = 1.0;
            big(o, o + 1) = -noise;
            big(o + 1, o + 1) = 0.0;
        }
        ++member;
        codim1[face] = projection_from_op(q * big * qt, ctx);
    }
    Projection ptop = projection_from_op(Matrix::identity(dim), ctx);
    return SimplexFamily(n, ctx, std::move(ptop), std::move(codim1));
}

}  // namespace pa
