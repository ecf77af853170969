/* projangles — projection angles, averaged projections and link spectra.
 *
 * C interface of the shared library. All functions return pa_status; outputs
 * are written through pointers. Objects are opaque handles released with the
 * matching *_free function. On any failure the thread-local message behind
 * pa_last_error() describes what went wrong.
 */
#ifndef PROJANGLES_H
#define PROJANGLES_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pa_status {
    PA_OK = 0,
    PA_ERR_DOMAIN = 1,         /* invalid argument or violated precondition */
    PA_ERR_PARSE = 2,          /* malformed input text */
    PA_ERR_NONCONVERGENCE = 3, /* iteration budget exhausted */
    PA_ERR_IO = 4,             /* file system failure */
    PA_ERR_INTERNAL = 5
} pa_status;

typedef enum pa_norm_kind {
    PA_NORM_EXACT = 0,
    PA_NORM_LOWER_BOUND = 1,
    PA_NORM_BRACKETED = 2
} pa_norm_kind;

typedef struct pa_matrix pa_matrix;
typedef struct pa_projection pa_projection;
typedef struct pa_family pa_family; /* simplex projection family */
typedef struct pa_graph pa_graph;   /* bipartite graph */
typedef struct pa_group pa_group;   /* finite group with a subgroup family */

const char* pa_version(void);
const char* pa_last_error(void);
void pa_string_free(char* s);

/* ---- matrices ---------------------------------------------------------- */

pa_status pa_matrix_create(size_t rows, size_t cols, const double* row_major, pa_matrix** out);
pa_status pa_matrix_parse(const char* text, pa_matrix** out);
pa_status pa_matrix_format(const pa_matrix* m, char** text);
size_t pa_matrix_rows(const pa_matrix* m);
size_t pa_matrix_cols(const pa_matrix* m);
pa_status pa_matrix_get(const pa_matrix* m, size_t i, size_t j, double* out);
void pa_matrix_free(pa_matrix* m);

/* eigenvalues ascending into values[n]; eigenvector matrix optional */
pa_status pa_sym_eigen(const pa_matrix* a, double* values, pa_matrix** vectors);

typedef struct pa_norm_estimate {
    double value;
    pa_norm_kind kind;
    double slack;
} pa_norm_estimate;

/* p >= 1; pass INFINITY (or HUGE_VAL) for the sup norm */
pa_status pa_operator_norm(const pa_matrix* a, double p, uint64_t seed, pa_norm_estimate* out);
pa_status pa_schatten_norm(const pa_matrix* a, double r, double* out);
pa_status pa_tensor_block_norm(const pa_matrix* t, size_t block_dim, double p, uint64_t seed,
                               pa_norm_estimate* out);

/* ---- projections ------------------------------------------------------- */

/* kernel_basis may be NULL for the {0} kernel */
pa_status pa_projection_make(const pa_matrix* image_basis, const pa_matrix* kernel_basis,
                             double p, pa_projection** out);
pa_status pa_projection_from_op(const pa_matrix* op, double p, pa_projection** out);
pa_status pa_projection_parse(const char* text, pa_projection** out);
pa_status pa_projection_format(const pa_projection* pr, char** text);
pa_status pa_projection_op(const pa_projection* pr, pa_matrix** out);
size_t pa_projection_rank(const pa_projection* pr);
void pa_projection_free(pa_projection* pr);

pa_status pa_pair_angle(const pa_projection* p1, const pa_projection* p2,
                        const pa_projection* p12, double* out);
pa_status pa_theorem_constants(size_t n, double beta, double gamma, double* rate,
                               double* constant);
pa_status pa_find_beta0_gamma0(size_t n, double* beta0, double* gamma0);

typedef struct pa_certificate {
    size_t n;
    double beta;
    double gamma;
    int in_regime;
    double rate;     /* NaN when out of regime */
    double constant; /* NaN when out of regime */
    size_t iterations;
    double final_residual;
    int bound_held;
} pa_certificate;

/* limit may be NULL when only the certificate is wanted */
pa_status pa_averaged_iteration(const pa_projection* const* projections, size_t count,
                                double tol, size_t max_iter, pa_projection** limit,
                                pa_certificate* certificate);

/* 1 = matches, 0 = differs, -1 = not applicable */
pa_status pa_canonical_check(const pa_projection* const* projections, size_t count,
                             const pa_projection* candidate, double tol, int* verdict);

/* ---- simplex families --------------------------------------------------- */

pa_status pa_family_parse(const char* text, pa_family** out);
pa_status pa_family_format(const pa_family* f, char** text);
size_t pa_family_n(const pa_family* f);
size_t pa_family_dim(const pa_family* f);
void pa_family_free(pa_family* f);

/* faces are vertex-id arrays; P_tau of the face as a fresh projection */
pa_status pa_family_p_tau(pa_family* f, const int* vertices, size_t count,
                          pa_projection** out);
pa_status pa_family_consistency(pa_family* f, double* max_residual, int* pass);
pa_status pa_family_multi_angle(pa_family* f, const int* const* faces,
                                const size_t* face_sizes, size_t face_count, double* out);
pa_status pa_family_almost_commutativity(pa_family* f, double* out);
pa_status pa_family_angle_no_consistency(pa_family* f, const int* tau, size_t tau_len,
                                         const int* tau2, size_t tau2_len, double* out);
/* decomposition summary as a JSON report (method: "tree" or "oracle") */
pa_status pa_family_decompose_json(pa_family* f, const char* method, const int* eta,
                                   size_t eta_len, double tol, char** report_json);

/* ---- bipartite graphs --------------------------------------------------- */

pa_status pa_graph_parse(const char* text, pa_graph** out);
pa_status pa_graph_format(const pa_graph* g, char** text);
pa_status pa_graph_projective_plane(uint32_t q, pa_graph** out);
pa_status pa_graph_gq2(pa_graph** out);
size_t pa_graph_part1(const pa_graph* g);
size_t pa_graph_part2(const pa_graph* g);
void pa_graph_free(pa_graph* g);

pa_status pa_graph_kappa(const pa_graph* g, double* out);

typedef struct pa_spectral_report {
    double kappa;
    uint64_t v_min;
    double r;
    double b_value;
} pa_spectral_report;

pa_status pa_graph_b_delta_r(const pa_graph* g, double r, pa_spectral_report* out);
pa_status pa_mgon_vmin(int m, uint64_t s, uint64_t t, uint64_t* v_min, int* swapped);
/* full sweep table as a JSON report */
pa_status pa_thickness_threshold_json(int m_prime, double r, double delta, char** report_json);

/* ---- group models -------------------------------------------------------- */

/* builtin models: "s3", "d4", "s4" */
pa_status pa_group_builtin(const char* name, pa_group** out);
/* group text plus one subgroup text per codimension-1 face (top = trivial) */
pa_status pa_group_parse(const char* group_text, const char* const* subgroup_texts,
                         size_t subgroup_count, pa_group** out);
size_t pa_group_order(const pa_group* g);
void pa_group_free(pa_group* g);

/* simplex family of averaging projections in the lp regular representation */
pa_status pa_group_family(const pa_group* g, double p, pa_family** out);
pa_status pa_group_coset_link(const pa_group* g, size_t face1, size_t face2, pa_graph** out);

typedef struct pa_schatten_link_report {
    double lhs;
    double rhs;
    double kappa;
    uint64_t v_min;
    double r;
    int pass;
} pa_schatten_link_report;

/* faces indexed 0..n by the left-out vertex */
pa_status pa_group_schatten_link(const pa_group* g, size_t face1, size_t face2, double r,
                                 pa_schatten_link_report* out);

typedef struct pa_pi_f_report {
    double lhs;
    double sup_norm;
    double block_norm_value;
    double block_norm_slack;
    double bound;
    int holds;
} pa_pi_f_report;

/* f has one coefficient per group element; conjugate_scale != 1 replaces the
 * regular representation by its diag(scale, 1, ..., 1) conjugate */
pa_status pa_group_pi_f_bound(const pa_group* g, double p, const double* f, size_t f_len,
                              double conjugate_scale, pa_pi_f_report* out);

/* ---- batch front door ----------------------------------------------------- */

/* config_json as documented for the CLI; returns the report text and the CLI
 * exit code (0 ok, 2 domain error, 3 non-convergence). Report and plot files
 * named in the config are written atomically as a side effect. */
pa_status pa_run_json(const char* config_json, char** report, int* exit_code);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PROJANGLES_H */
