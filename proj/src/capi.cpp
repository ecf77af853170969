#include "projangles.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#include "projangles/eigen.hpp"
#include "projangles/formats.hpp"
#include "projangles/reports.hpp"

using namespace pa;

struct pa_matrix {
    Matrix m;
};
struct pa_projection {
    Projection p;
};
struct pa_family {
    SimplexFamily f;
};
struct pa_graph {
    BipartiteGraph g;
};
struct pa_group {
    GroupModel model;
};

namespace {

thread_local std::string g_last_error;

pa_status status_of(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::domain: return PA_ERR_DOMAIN;
        case ErrorKind::parse: return PA_ERR_PARSE;
        case ErrorKind::nonconvergence: return PA_ERR_NONCONVERGENCE;
        case ErrorKind::io: return PA_ERR_IO;
        case ErrorKind::internal: return PA_ERR_INTERNAL;
    }
    return PA_ERR_INTERNAL;
}

template <class Fn>
pa_status guarded(Fn&& fn) {
    try {
        fn();
        return PA_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return PA_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

pa_status require(bool ok, const char* message) {
    if (ok) return PA_OK;
    g_last_error = message;
    return PA_ERR_DOMAIN;
}

pa_norm_estimate to_c(const NormEstimate& e) {
    pa_norm_estimate out;
    out.value = e.value;
    out.kind = static_cast<pa_norm_kind>(static_cast<int>(e.kind));
    out.slack = e.slack;
    return out;
}

Face face_of(const pa_family& f, const int* vertices, size_t count) {
    std::vector<int> v(vertices, vertices + count);
    return face_from_vertices(v, f.f.n());
}

Face codim1_face_by_index(std::size_t n, std::size_t leave_out) {
    if (leave_out > n) raise_domain("face index must leave out a vertex in [0, n]");
    return full_face(n) & ~(Face{1} << leave_out);
}

}  // namespace

extern "C" {

const char* pa_version(void) { return kToolVersion; }

const char* pa_last_error(void) { return g_last_error.c_str(); }

void pa_string_free(char* s) { std::free(s); }

/* ---- matrices ---------------------------------------------------------- */

pa_status pa_matrix_create(size_t rows, size_t cols, const double* row_major, pa_matrix** out) {
    if (pa_status s = require(out && row_major, "null argument")) return s;
    return guarded([&] {
        Matrix m(rows, cols, std::vector<double>(row_major, row_major + rows * cols));
        m.validate("pa_matrix_create");
        *out = new pa_matrix{std::move(m)};
    });
}

pa_status pa_matrix_parse(const char* text, pa_matrix** out) {
    if (pa_status s = require(out && text, "null argument")) return s;
    return guarded([&] { *out = new pa_matrix{parse_matrix_text(text, "<string>")}; });
}

pa_status pa_matrix_format(const pa_matrix* m, char** text) {
    if (pa_status s = require(m && text, "null argument")) return s;
    return guarded([&] { *text = dup_string(matrix_to_text(m->m)); });
}

size_t pa_matrix_rows(const pa_matrix* m) { return m ? m->m.rows() : 0; }
size_t pa_matrix_cols(const pa_matrix* m) { return m ? m->m.cols() : 0; }

pa_status pa_matrix_get(const pa_matrix* m, size_t i, size_t j, double* out) {
    if (pa_status s = require(m && out, "null argument")) return s;
    if (pa_status s = require(i < m->m.rows() && j < m->m.cols(), "index out of range")) return s;
    *out = m->m(i, j);
    return PA_OK;
}

void pa_matrix_free(pa_matrix* m) { delete m; }

pa_status pa_sym_eigen(const pa_matrix* a, double* values, pa_matrix** vectors) {
    if (pa_status s = require(a && values, "null argument")) return s;
    return guarded([&] {
        SymEigen eg = sym_eigen(a->m);
        for (std::size_t k = 0; k < eg.values.size(); ++k) values[k] = eg.values[k];
        if (vectors) *vectors = new pa_matrix{std::move(eg.vectors)};
    });
}

pa_status pa_operator_norm(const pa_matrix* a, double p, uint64_t seed, pa_norm_estimate* out) {
    if (pa_status s = require(a && out, "null argument")) return s;
    return guarded([&] { *out = to_c(operator_norm(a->m, NormContext::lp(p), seed)); });
}

pa_status pa_schatten_norm(const pa_matrix* a, double r, double* out) {
    if (pa_status s = require(a && out, "null argument")) return s;
    return guarded([&] { *out = schatten_norm(a->m, r); });
}

pa_status pa_tensor_block_norm(const pa_matrix* t, size_t block_dim, double p, uint64_t seed,
                               pa_norm_estimate* out) {
    if (pa_status s = require(t && out, "null argument")) return s;
    return guarded(
        [&] { *out = to_c(tensor_block_norm(t->m, block_dim, NormContext::lp(p), seed)); });
}

/* ---- projections ------------------------------------------------------- */

pa_status pa_projection_make(const pa_matrix* image_basis, const pa_matrix* kernel_basis,
                             double p, pa_projection** out) {
    if (pa_status s = require(image_basis && out, "null argument")) return s;
    return guarded([&] {
        const Matrix empty(image_basis->m.rows(), 0);
        *out = new pa_projection{make_projection(
            image_basis->m, kernel_basis ? kernel_basis->m : empty, NormContext::lp(p))};
    });
}

pa_status pa_projection_from_op(const pa_matrix* op, double p, pa_projection** out) {
    if (pa_status s = require(op && out, "null argument")) return s;
    return guarded([&] { *out = new pa_projection{projection_from_op(op->m, NormContext::lp(p))}; });
}

pa_status pa_projection_parse(const char* text, pa_projection** out) {
    if (pa_status s = require(text && out, "null argument")) return s;
    return guarded([&] { *out = new pa_projection{parse_projection_text(text, "<string>")}; });
}

pa_status pa_projection_format(const pa_projection* pr, char** text) {
    if (pa_status s = require(pr && text, "null argument")) return s;
    return guarded([&] { *text = dup_string(projection_to_text(pr->p)); });
}

pa_status pa_projection_op(const pa_projection* pr, pa_matrix** out) {
    if (pa_status s = require(pr && out, "null argument")) return s;
    return guarded([&] { *out = new pa_matrix{pr->p.op}; });
}

size_t pa_projection_rank(const pa_projection* pr) { return pr ? pr->p.rank() : 0; }

void pa_projection_free(pa_projection* pr) { delete pr; }

pa_status pa_pair_angle(const pa_projection* p1, const pa_projection* p2,
                        const pa_projection* p12, double* out) {
    if (pa_status s = require(p1 && p2 && p12 && out, "null argument")) return s;
    return guarded([&] { *out = pair_angle(p1->p, p2->p, p12->p); });
}

pa_status pa_theorem_constants(size_t n, double beta, double gamma, double* rate,
                               double* constant) {
    if (pa_status s = require(rate && constant, "null argument")) return s;
    return guarded([&] {
        TheoremConstants tc = theorem_constants(n, beta, gamma);
        *rate = tc.rate;
        *constant = tc.constant;
    });
}

pa_status pa_find_beta0_gamma0(size_t n, double* beta0, double* gamma0) {
    if (pa_status s = require(beta0 && gamma0, "null argument")) return s;
    return guarded([&] {
        CorollaryConstants cc = find_beta0_gamma0(n);
        *beta0 = cc.beta0;
        *gamma0 = cc.gamma0;
    });
}

pa_status pa_averaged_iteration(const pa_projection* const* projections, size_t count,
                                double tol, size_t max_iter, pa_projection** limit,
                                pa_certificate* certificate) {
    if (pa_status s = require(projections && count >= 2, "need at least two projections"))
        return s;
    return guarded([&] {
        std::vector<Projection> ps;
        ps.reserve(count);
        for (size_t i = 0; i < count; ++i) {
            if (!projections[i]) raise_domain("null projection handle");
            ps.push_back(projections[i]->p);
        }
        AveragedOptions opts;
        opts.tol = tol > 0 ? tol : 1e-12;
        opts.max_iter = max_iter ? max_iter : 20000;
        AveragedResult res = averaged_iteration(ps, opts);
        if (certificate) {
            const Certificate& c = res.certificate;
            certificate->n = c.n;
            certificate->beta = c.beta;
            certificate->gamma = c.gamma;
            certificate->in_regime = c.in_regime ? 1 : 0;
            certificate->rate = c.in_regime ? c.rate : std::nan("");
            certificate->constant = c.in_regime ? c.constant : std::nan("");
            certificate->iterations = c.iterations;
            certificate->final_residual = c.final_residual;
            certificate->bound_held = c.bound_held ? 1 : 0;
        }
        if (!res.converged)
            throw Error(ErrorKind::nonconvergence,
                        "averaged iteration did not meet the Cauchy criterion");
        if (limit) *limit = new pa_projection{*res.limit};
    });
}

pa_status pa_canonical_check(const pa_projection* const* projections, size_t count,
                             const pa_projection* candidate, double tol, int* verdict) {
    if (pa_status s = require(projections && candidate && verdict && count >= 2,
                              "need projections, a candidate and a verdict out-pointer"))
        return s;
    return guarded([&] {
        std::vector<Projection> ps;
        for (size_t i = 0; i < count; ++i) ps.push_back(projections[i]->p);
        switch (canonical_check(ps, candidate->p, tol > 0 ? tol : 1e-6)) {
            case CanonicalCheck::matches: *verdict = 1; break;
            case CanonicalCheck::differs: *verdict = 0; break;
            case CanonicalCheck::not_applicable: *verdict = -1; break;
        }
    });
}

/* ---- simplex families --------------------------------------------------- */

pa_status pa_family_parse(const char* text, pa_family** out) {
    if (pa_status s = require(text && out, "null argument")) return s;
    return guarded([&] { *out = new pa_family{parse_family_text(text, "<string>")}; });
}

pa_status pa_family_format(const pa_family* f, char** text) {
    if (pa_status s = require(f && text, "null argument")) return s;
    return guarded([&] { *text = dup_string(family_to_text(f->f)); });
}

size_t pa_family_n(const pa_family* f) { return f ? f->f.n() : 0; }
size_t pa_family_dim(const pa_family* f) { return f ? f->f.dim() : 0; }

void pa_family_free(pa_family* f) { delete f; }

pa_status pa_family_p_tau(pa_family* f, const int* vertices, size_t count, pa_projection** out) {
    if (pa_status s = require(f && out && (vertices || count == 0), "null argument")) return s;
    return guarded([&] {
        const Face tau = face_of(*f, vertices, count);
        *out = new pa_projection{f->f.p_tau(tau).proj};
    });
}

pa_status pa_family_consistency(pa_family* f, double* max_residual, int* pass) {
    if (pa_status s = require(f && max_residual && pass, "null argument")) return s;
    return guarded([&] {
        ConsistencyReport rep = consistency_check(f->f);
        *max_residual = rep.max_residual;
        *pass = rep.pass ? 1 : 0;
    });
}

pa_status pa_family_multi_angle(pa_family* f, const int* const* faces, const size_t* face_sizes,
                                size_t face_count, double* out) {
    if (pa_status s = require(f && faces && face_sizes && out, "null argument")) return s;
    return guarded([&] {
        std::vector<Face> sigmas;
        for (size_t i = 0; i < face_count; ++i)
            sigmas.push_back(face_of(*f, faces[i], face_sizes[i]));
        *out = multi_angle(f->f, sigmas);
    });
}

pa_status pa_family_almost_commutativity(pa_family* f, double* out) {
    if (pa_status s = require(f && out, "null argument")) return s;
    return guarded([&] { *out = almost_commutativity(f->f); });
}

pa_status pa_family_angle_no_consistency(pa_family* f, const int* tau, size_t tau_len,
                                         const int* tau2, size_t tau2_len, double* out) {
    if (pa_status s = require(f && out, "null argument")) return s;
    return guarded([&] {
        *out = angle_no_consistency(f->f, face_of(*f, tau, tau_len), face_of(*f, tau2, tau2_len));
    });
}

pa_status pa_family_decompose_json(pa_family* f, const char* method, const int* eta,
                                   size_t eta_len, double tol, char** report_json) {
    if (pa_status s = require(f && method && report_json, "null argument")) return s;
    return guarded([&] {
        const Face face = eta ? face_of(*f, eta, eta_len) : full_face(f->f.n());
        const std::string which = method;
        DecompositionResult res = which == "tree"
                                      ? decompose_tree(f->f, face, tol > 0 ? tol : 1e-8)
                                      : decompose_oracle(f->f, face);
        nlohmann::json ranks;
        for (const auto& [tau, basis] : res.summand_bases) ranks[face_label(tau)] = basis.cols();
        nlohmann::json j{{"method", which == "tree" ? "tree" : "oracle"},
                         {"eta", face_label(face)},
                         {"failed", res.failed},
                         {"rank_additivity", res.rank_additivity},
                         {"direct_sum_ok", res.direct_sum_ok},
                         {"truncation_depth", res.truncation_depth},
                         {"summand_ranks", std::move(ranks)}};
        if (res.failed) j["failure_reason"] = res.failure_reason;
        *report_json = dup_string(json_to_text(j));
    });
}

/* ---- bipartite graphs --------------------------------------------------- */

pa_status pa_graph_parse(const char* text, pa_graph** out) {
    if (pa_status s = require(text && out, "null argument")) return s;
    return guarded([&] { *out = new pa_graph{parse_graph_text(text, "<string>")}; });
}

pa_status pa_graph_format(const pa_graph* g, char** text) {
    if (pa_status s = require(g && text, "null argument")) return s;
    return guarded([&] { *text = dup_string(graph_to_text(g->g)); });
}

pa_status pa_graph_projective_plane(uint32_t q, pa_graph** out) {
    if (pa_status s = require(out != nullptr, "null argument")) return s;
    return guarded([&] { *out = new pa_graph{projective_plane_graph(q)}; });
}

pa_status pa_graph_gq2(pa_graph** out) {
    if (pa_status s = require(out != nullptr, "null argument")) return s;
    return guarded([&] { *out = new pa_graph{gq2_graph()}; });
}

size_t pa_graph_part1(const pa_graph* g) { return g ? g->g.n1 : 0; }
size_t pa_graph_part2(const pa_graph* g) { return g ? g->g.n2 : 0; }

void pa_graph_free(pa_graph* g) { delete g; }

pa_status pa_graph_kappa(const pa_graph* g, double* out) {
    if (pa_status s = require(g && out, "null argument")) return s;
    return guarded([&] { *out = kappa(g->g); });
}

pa_status pa_graph_b_delta_r(const pa_graph* g, double r, pa_spectral_report* out) {
    if (pa_status s = require(g && out, "null argument")) return s;
    return guarded([&] {
        SpectralReport rep = b_delta_r(g->g, r);
        out->kappa = rep.kappa;
        out->v_min = rep.v_min;
        out->r = rep.r;
        out->b_value = rep.b_value;
    });
}

pa_status pa_mgon_vmin(int m, uint64_t s, uint64_t t, uint64_t* v_min, int* swapped) {
    if (pa_status st = require(v_min != nullptr, "null argument")) return st;
    return guarded([&] {
        VminResult res = mgon_vmin(m, s, t);
        *v_min = res.value;
        if (swapped) *swapped = res.swapped ? 1 : 0;
    });
}

pa_status pa_thickness_threshold_json(int m_prime, double r, double delta, char** report_json) {
    if (pa_status s = require(report_json != nullptr, "null argument")) return s;
    return guarded([&] {
        ThicknessSweep sweep = thickness_threshold(m_prime, r, delta);
        nlohmann::json rows = nlohmann::json::array();
        for (const SweepRow& row : sweep.rows)
            rows.push_back(nlohmann::json{{"q", row.q},
                                          {"kappa", row.kappa},
                                          {"v_min", row.v_min},
                                          {"b_value", row.b_value},
                                          {"meets_delta", row.meets_delta}});
        nlohmann::json j{{"m_prime", sweep.m_prime},
                         {"r", sweep.r},
                         {"delta", sweep.delta},
                         {"regime_warning", sweep.regime_warning},
                         {"rows", std::move(rows)}};
        if (sweep.threshold_q)
            j["threshold_q"] = *sweep.threshold_q;
        else
            j["threshold_q"] = nullptr;
        *report_json = dup_string(json_to_text(j));
    });
}

/* ---- group models -------------------------------------------------------- */

pa_status pa_group_builtin(const char* name, pa_group** out) {
    if (pa_status s = require(name && out, "null argument")) return s;
    return guarded([&] { *out = new pa_group{builtin_model(name)}; });
}

pa_status pa_group_parse(const char* group_text, const char* const* subgroup_texts,
                         size_t subgroup_count, pa_group** out) {
    if (pa_status s = require(group_text && subgroup_texts && out && subgroup_count >= 2,
                              "need a group and at least two subgroups"))
        return s;
    return guarded([&] {
        FiniteGroup g = parse_group_text(group_text, "<group>");
        SubgroupFamily fam;
        fam.n = subgroup_count - 1;
        const Face top = full_face(fam.n);
        for (size_t i = 0; i < subgroup_count; ++i)
            fam.assigned[top & ~(Face{1} << i)] =
                parse_subgroup_text(subgroup_texts[i], "<subgroup>", g);
        fam.assigned[top] = Subgroup{0};
        validate_subgroup_family(g, fam);
        *out = new pa_group{GroupModel{"custom", std::move(g), std::move(fam)}};
    });
}

size_t pa_group_order(const pa_group* g) { return g ? g->model.group.order : 0; }

void pa_group_free(pa_group* g) { delete g; }

pa_status pa_group_family(const pa_group* g, double p, pa_family** out) {
    if (pa_status s = require(g && out, "null argument")) return s;
    return guarded([&] {
        GroupRep reg = regular_representation(g->model.group, NormContext::lp(p));
        *out = new pa_family{build_simplex_family(reg, g->model.group, g->model.family)};
    });
}

pa_status pa_group_coset_link(const pa_group* g, size_t face1, size_t face2, pa_graph** out) {
    if (pa_status s = require(g && out, "null argument")) return s;
    return guarded([&] {
        const std::size_t n = g->model.family.n;
        const Subgroup k1 = g->model.family.assigned.at(codim1_face_by_index(n, face1));
        const Subgroup k2 = g->model.family.assigned.at(codim1_face_by_index(n, face2));
        Subgroup gens = k1;
        gens.insert(gens.end(), k2.begin(), k2.end());
        const Subgroup ambient = generated_subgroup(g->model.group, gens);
        *out = new pa_graph{coset_link_graph(g->model.group, k1, k2, ambient)};
    });
}

pa_status pa_group_schatten_link(const pa_group* g, size_t face1, size_t face2, double r,
                                 pa_schatten_link_report* out) {
    if (pa_status s = require(g && out, "null argument")) return s;
    return guarded([&] {
        const std::size_t n = g->model.family.n;
        const Subgroup k1 = g->model.family.assigned.at(codim1_face_by_index(n, face1));
        const Subgroup k2 = g->model.family.assigned.at(codim1_face_by_index(n, face2));
        Subgroup gens = k1;
        gens.insert(gens.end(), k2.begin(), k2.end());
        const Subgroup ambient = generated_subgroup(g->model.group, gens);
        SchattenLinkReport rep = schatten_link_bound_check(g->model.group, k1, k2, ambient, r);
        out->lhs = rep.lhs;
        out->rhs = rep.rhs;
        out->kappa = rep.kappa;
        out->v_min = rep.v_min;
        out->r = rep.r;
        out->pass = rep.pass ? 1 : 0;
    });
}

pa_status pa_group_pi_f_bound(const pa_group* g, double p, const double* f, size_t f_len,
                              double conjugate_scale, pa_pi_f_report* out) {
    if (pa_status s = require(g && f && out, "null argument")) return s;
    return guarded([&] {
        if (f_len != g->model.group.order)
            raise_domain("pa_group_pi_f_bound: f must list one coefficient per element");
        GroupRep rep = regular_representation(g->model.group, NormContext::lp(p));
        if (conjugate_scale != 1.0) {
            Matrix s = Matrix::identity(rep.dim);
            s(0, 0) = conjugate_scale;
            rep = conjugated_representation(g->model.group, rep, s);
        }
        PiFBoundReport r = pi_f_bound_check(rep, g->model.group, std::vector<double>(f, f + f_len));
        out->lhs = r.lhs;
        out->sup_norm = r.sup_norm;
        out->block_norm_value = r.block_norm.value;
        out->block_norm_slack = r.block_norm.slack;
        out->bound = r.bound;
        out->holds = r.holds ? 1 : 0;
    });
}

/* ---- batch front door ----------------------------------------------------- */

pa_status pa_run_json(const char* config_json, char** report, int* exit_code) {
    if (pa_status s = require(config_json && report, "null argument")) return s;
    RunOutput out = run_config_text(config_json);
    *report = dup_string(out.report);
    if (exit_code) *exit_code = out.exit_code;
    if (out.exit_code == 0) return PA_OK;
    g_last_error = out.report;
    return out.exit_code == 3 ? PA_ERR_NONCONVERGENCE : PA_ERR_DOMAIN;
}

} /* extern "C" */
