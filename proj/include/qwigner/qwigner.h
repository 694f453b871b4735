#ifndef QWIGNER_H
#define QWIGNER_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define QW_API __declspec(dllexport)
#else
#define QW_API __attribute__((visibility("default")))
#endif

typedef enum qw_status {
  QW_OK = 0,
  QW_ERR_VALIDATION = 1,
  QW_ERR_NUMERICAL = 2,
  QW_ERR_PROPERTY = 3,
  QW_ERR_INTERNAL = 4
} qw_status;

typedef struct qw_matrix qw_matrix;
typedef struct qw_measure qw_measure;
typedef struct qw_chirpsum qw_chirpsum;
typedef struct qw_grid qw_grid;

/* Message of the last failing call on this thread ("" if none). */
QW_API const char* qw_last_error(void);
QW_API const char* qw_version(void);
/* Frees strings returned through char** out-parameters. */
QW_API void qw_string_free(char* s);

/* Matrices: JSON as {"d","A0","B0","C0","D0"}, {"full"} or {"preset"}. */
QW_API qw_status qw_matrix_from_json(const char* json, qw_matrix** out);
QW_API qw_status qw_matrix_to_json(const qw_matrix* t, char** out);
QW_API int qw_matrix_dim(const qw_matrix* t);
QW_API void qw_matrix_free(qw_matrix* t);
QW_API qw_status qw_matrix_dual_json(const qw_matrix* t, char** out);
/* {"cohen": bool, "E": ..., "inverse": ..., "b0_minus_d0": ..., "a_plus_b": ...} */
QW_API qw_status qw_matrix_cohen_json(const qw_matrix* t, char** out);
/* Schur-complement report for T and for T^{-1}. */
QW_API qw_status qw_matrix_schur_json(const qw_matrix* t, char** out);

/* Measures: {"d","atoms":[{"r","alpha","re","im"}]}, {"quasicrystal":{..}} or {"comb":{..}}. */
QW_API qw_status qw_measure_from_json(const char* json, qw_measure** out);
QW_API qw_status qw_quasicrystal_generate(const char* spec_json, qw_measure** out);
QW_API qw_status qw_measure_to_json(const qw_measure* mu, char** out);
QW_API qw_status qw_measure_support_csv(const qw_measure* mu, char** out);
QW_API size_t qw_measure_size(const qw_measure* mu);
QW_API void qw_measure_free(qw_measure* mu);
/* Checks Sigma - Sigma against S = diff set of supp mu. */
QW_API qw_status qw_measure_differ_discrete_json(const qw_measure* mu, double tol, char** out);

/* Exact W_T of an order-zero measure. */
QW_API qw_status qw_wigner_exact(const qw_matrix* t, const qw_measure* mu, qw_chirpsum** out);
QW_API qw_status qw_chirpsum_to_json(const qw_chirpsum* w, char** out);
QW_API qw_status qw_chirpsum_support_csv(const qw_chirpsum* w, char** out);
QW_API size_t qw_chirpsum_size(const qw_chirpsum* w);
QW_API void qw_chirpsum_free(qw_chirpsum* w);

/* Grids. Signal JSON: {"type","center","width","freq","measure","box","samples"}. */
QW_API qw_status qw_signal_sample(const char* signal_json, qw_grid** out);
/* spec_json: {"x":[axis|number],"omega":[..],"t_step"?}; axis = {"lo","hi","count"}. */
QW_API qw_status qw_wigner_grid(const qw_matrix* t, const qw_grid* f, const char* spec_json, qw_grid** out);
QW_API size_t qw_grid_size(const qw_grid* g);
QW_API size_t qw_grid_rank(const qw_grid* g);
/* Interleaved (re, im) copy of the values; buf must hold 2 * qw_grid_size doubles. */
QW_API qw_status qw_grid_values(const qw_grid* g, double* buf);
/* Writes bin_path and returns the JSON sidecar naming bin_name. */
QW_API qw_status qw_grid_write(const qw_grid* g, const char* bin_path, const char* bin_name, char** sidecar_json);
QW_API qw_status qw_grid_read(const char* sidecar_path, qw_grid** out);
/* Peaks of max |F| projected onto the kept axes (comma separated indices, e.g. "0"). */
QW_API qw_status qw_grid_peaks_csv(const qw_grid* g, const char* keep_axes, double rel_threshold,
                                   double cluster_radius, char** out);
QW_API void qw_grid_free(qw_grid* g);

/* Theorem checks; text receives the human-readable rendering (may be NULL). */
QW_API qw_status qw_check_support(const qw_matrix* t, const char* support_json, double tol, char** report_json,
                                  char** text);
QW_API qw_status qw_detect(const qw_matrix* t, const qw_measure* mu, double tol, double threshold,
                           char** report_json, char** text);
QW_API qw_status qw_counterexample(double a, double c, int m_max, char** report_json, char** profile_csv);
/* tests_json: {"phi1":[factor..],"phi2":[..],"sign":"derived"|"as_printed"}; factor = {"center","width","freq"}. */
QW_API qw_status qw_pair(const qw_measure* mu, const char* tests_json, char** out);
QW_API qw_status qw_duality_check(const qw_matrix* t, const qw_grid* f, double half_width, size_t count,
                                  double pad_half, char** out);

#ifdef __cplusplus
}
#endif

#endif
