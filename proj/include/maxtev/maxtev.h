/* Copyright 2026 The maxtev Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the maxtev transmission eigenvalue solver.
 *
 * Every call returning maxtev_status leaves a human-readable message in
 * maxtev_last_error() on failure (per thread). Handles are opaque and owned
 * by the caller; free them with the matching *_free function. Output paths
 * are written atomically (temporary file + rename); "-" writes to stdout.
 */
#ifndef MAXTEV_MAXTEV_H
#define MAXTEV_MAXTEV_H

#include <stddef.h>

#if defined(_WIN32)
#define MAXTEV_API __declspec(dllexport)
#else
#define MAXTEV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum maxtev_status
{
  MAXTEV_OK = 0,
  MAXTEV_INVALID_ARGUMENT = 1,
  MAXTEV_NON_MANIFOLD_FACE = 2,
  MAXTEV_INVERTED_TET = 3,
  MAXTEV_UNSUPPORTED_ORDER = 4,
  MAXTEV_UNSUPPORTED_DEGREE = 5,
  MAXTEV_DEGENERATE_TET = 6,
  MAXTEV_UNKNOWN_PRESET = 7,
  MAXTEV_NOT_HERMITIAN = 8,
  MAXTEV_NO_CASE_MATCH = 9,
  MAXTEV_CASE_UNSUPPORTED = 10,
  MAXTEV_SPACE_MISMATCH = 11,
  MAXTEV_DIMENSION_MISMATCH = 12,
  MAXTEV_FACTORIZATION_FAILED = 13,
  MAXTEV_NO_CONVERGENCE = 14,
  MAXTEV_DIMENSION_TOO_LARGE = 15,
  MAXTEV_NO_EIGENVALUES_IN_WINDOW = 16,
  MAXTEV_INSUFFICIENT_DATA = 17,
  MAXTEV_DEGENERATE_ERROR = 18,
  MAXTEV_SINGULAR_SYSTEM = 19,
  MAXTEV_IO = 20,
  MAXTEV_INTERNAL = 99
} maxtev_status;

typedef struct maxtev_mesh maxtev_mesh;
typedef struct maxtev_problem maxtev_problem;
typedef struct maxtev_result maxtev_result;
typedef struct maxtev_table maxtev_table;
typedef struct maxtev_report maxtev_report;

MAXTEV_API const char *maxtev_version(void);
MAXTEV_API const char *maxtev_status_name(maxtev_status status);
MAXTEV_API const char *maxtev_last_error(void);

/* ---- meshes ---- */

typedef struct maxtev_mesh_info
{
  long vertices, edges, faces, tets;
  long boundary_vertices, boundary_edges, boundary_faces;
  double h;
  int n;
} maxtev_mesh_info;

/* domain: "cube" or "thickL"; n cells per unit length. */
MAXTEV_API maxtev_status maxtev_mesh_build(const char *domain, int n, maxtev_mesh **out);
/* Plain text "v x y z" / "t i0 i1 i2 i3" lines. */
MAXTEV_API maxtev_status maxtev_mesh_read(const char *path, maxtev_mesh **out);
MAXTEV_API maxtev_status maxtev_mesh_write(const maxtev_mesh *mesh, const char *path);
MAXTEV_API maxtev_status maxtev_mesh_write_vtk(const maxtev_mesh *mesh, const char *path);
MAXTEV_API maxtev_status maxtev_mesh_get_info(const maxtev_mesh *mesh, maxtev_mesh_info *info);
MAXTEV_API void maxtev_mesh_free(maxtev_mesh *mesh);

/* ---- discretized problems ---- */

typedef struct maxtev_problem_info
{
  int order;
  long field_dofs;  /* coupled edge space */
  long mult_dofs;   /* multiplier space */
  long nnz_k;
  double bcg;       /* |B - C G|_max / |B|_max */
  double ag;        /* |A G|_max / |A|_max */
  double k_herm;    /* |K - K^H|_max / |K|_max */
  double m_herm;
} maxtev_problem_info;

/*
 * Coefficients: preset name (two_I, sixteen_I, F1..F4), "<c>I", or nine
 * comma separated reals (row-major, Hermitian). pinned_vertex < 0 selects
 * the smallest boundary vertex.
 */
/* Checks a coefficient string without building anything. */
MAXTEV_API maxtev_status maxtev_coefficient_validate(const char *spec);
MAXTEV_API maxtev_status maxtev_problem_create(const maxtev_mesh *mesh, int order, const char *A, const char *N,
                                               int pinned_vertex, maxtev_problem **out);
MAXTEV_API maxtev_status maxtev_problem_get_info(const maxtev_problem *problem, maxtev_problem_info *info);
/* which: "K", "M", "A", "B", "C" or "G"; MatrixMarket coordinate complex. */
MAXTEV_API maxtev_status maxtev_problem_write_matrix(const maxtev_problem *problem, const char *which,
                                                     const char *path);
/*
 * All finite eigenvalues lambda = k^2 by dense QZ. Writes at most capacity
 * values; *count receives the total.
 */
MAXTEV_API maxtev_status maxtev_problem_dense_spectrum(const maxtev_problem *problem, double *re, double *im,
                                                       size_t capacity, size_t *count);
MAXTEV_API void maxtev_problem_free(maxtev_problem *problem);

/* ---- eigenvalue solves ---- */

typedef struct maxtev_solve_options
{
  int has_window;   /* keep Re k in [k_lo, k_hi] */
  double k_lo, k_hi;
  int has_shift;    /* default: (window midpoint)^2, or 0 without a window */
  double shift_re, shift_im;
  int count;        /* eigenvalues reported */
  int nev;
  double tol;
  int block_size;
  unsigned long long seed;
} maxtev_solve_options;

typedef struct maxtev_eigenpair_info
{
  double k_re, k_im;
  double lambda_re, lambda_im;
  double residual;
  double constraint;  /* |B^H x| / |x| */
  double multiplier;  /* |y| / |x| */
  int conjugate_pair;
} maxtev_eigenpair_info;

MAXTEV_API void maxtev_solve_options_init(maxtev_solve_options *opts);
MAXTEV_API maxtev_status maxtev_solve(const maxtev_problem *problem, const maxtev_solve_options *opts,
                                      maxtev_result **out);
MAXTEV_API size_t maxtev_result_size(const maxtev_result *result);
MAXTEV_API maxtev_status maxtev_result_get(const maxtev_result *result, size_t i, maxtev_eigenpair_info *info);
MAXTEV_API int maxtev_result_converged(const maxtev_result *result);
/* Cell fields v, w_minus_v and w of eigenvector i, barycenter values, max component 1. */
MAXTEV_API maxtev_status maxtev_result_write_vtk(const maxtev_problem *problem, const maxtev_result *result,
                                                 size_t i, const char *path);
/* Boundary tangential trace of w - v relative to its interior maximum. */
MAXTEV_API maxtev_status maxtev_result_tangential_ratio(const maxtev_problem *problem, const maxtev_result *result,
                                                        size_t i, double *ratio);
MAXTEV_API void maxtev_result_free(maxtev_result *result);

/* ---- convergence tables ---- */

typedef enum maxtev_reference
{
  MAXTEV_REFERENCE_NONE = 0,
  MAXTEV_REFERENCE_EXTRAPOLATE = 1,
  MAXTEV_REFERENCE_FINEST = 2,
  MAXTEV_REFERENCE_GIVEN = 3
} maxtev_reference;

#define MAXTEV_MAX_NS 64
#define MAXTEV_MAX_COUNT 16

typedef struct maxtev_experiment
{
  char name[64];
  char domain[16];
  int order;
  char A[256];
  char N[256];
  int ns[MAXTEV_MAX_NS];
  int n_count;
  double k_lo, k_hi;
  int has_shift;
  double shift_re, shift_im;
  int count;
  int nev;
  double tol;
  maxtev_reference reference;
  double reference_re[MAXTEV_MAX_COUNT], reference_im[MAXTEV_MAX_COUNT];
  int reference_count;
  char companion[64];  /* preset supplying the reference when none is given */
} maxtev_experiment;

typedef struct maxtev_table_row
{
  int n;
  double h;
  long dofs, mult_dofs;
  int count;
  double k_re[MAXTEV_MAX_COUNT], k_im[MAXTEV_MAX_COUNT];
  int has_rate[MAXTEV_MAX_COUNT];
  double rate[MAXTEV_MAX_COUNT];
  double max_residual, max_constraint, max_multiplier;
} maxtev_table_row;

typedef void (*maxtev_progress_fn)(const char *message, void *user);

MAXTEV_API size_t maxtev_preset_count(void);
MAXTEV_API const char *maxtev_preset_name(size_t i);
MAXTEV_API maxtev_status maxtev_experiment_preset(const char *name, maxtev_experiment *out);
MAXTEV_API maxtev_status maxtev_table_run(const maxtev_experiment *experiment, maxtev_progress_fn progress,
                                          void *user, maxtev_table **out);
MAXTEV_API size_t maxtev_table_rows(const maxtev_table *table);
MAXTEV_API maxtev_status maxtev_table_get_row(const maxtev_table *table, size_t i, maxtev_table_row *row);
/* *has = 0 when no reference exists for eigenvalue j. */
MAXTEV_API maxtev_status maxtev_table_get_reference(const maxtev_table *table, int j, double *re, double *im,
                                                    int *has);
/* format: "csv" or "text". */
MAXTEV_API maxtev_status maxtev_table_write(const maxtev_table *table, const char *format, const char *path);
MAXTEV_API void maxtev_table_free(maxtev_table *table);

/* ---- property checks ---- */

/*
 * property: "t_coercivity_a", "t_coercivity_c", "discrete_poincare",
 * "source_consistency" or "matrix_identities".
 */
MAXTEV_API maxtev_status maxtev_verify(const char *property, const char *domain, int order, const char *A,
                                       const char *N, const int *ns, size_t n_count, maxtev_report **out);
MAXTEV_API int maxtev_report_passed(const maxtev_report *report);
MAXTEV_API maxtev_status maxtev_report_write(const maxtev_report *report, const char *format, const char *path);
/* Same content as maxtev_report_write, returned as a string freed with maxtev_string_free. */
MAXTEV_API maxtev_status maxtev_report_format(const maxtev_report *report, const char *format, char **out);
MAXTEV_API void maxtev_report_free(maxtev_report *report);

/* Writes size bytes to path atomically ("-": stdout). */
MAXTEV_API maxtev_status maxtev_write_file(const char *path, const char *data, size_t size);
MAXTEV_API void maxtev_string_free(char *s);

/* Caps internal parallelism (same effect as MAXTEV_THREADS). */
MAXTEV_API void maxtev_set_threads(int threads);

#ifdef __cplusplus
}
#endif

#endif /* MAXTEV_MAXTEV_H */
