/*
 * C interface to the qdf library.
 *
 * Every fallible call returns a qdf_status; on failure a description is
 * available from qdf_last_error() on the calling thread until the next call.
 * Strings handed out by the library are released with qdf_string_free().
 * Handles are immutable once created and may be shared between threads.
 */
#ifndef QDF_QDF_H
#define QDF_QDF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(QDF_BUILDING_LIBRARY)
#    define QDF_API __declspec(dllexport)
#  else
#    define QDF_API __declspec(dllimport)
#  endif
#else
#  define QDF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qdf_status {
  QDF_OK = 0,
  QDF_ERR_INVALID_ARGUMENT = 1, /* shapes, ranges, violated preconditions */
  QDF_ERR_PARSE = 2,            /* malformed JSON or unexpected layout */
  QDF_ERR_DOMAIN = 3,           /* well-formed input outside a query's domain */
  QDF_ERR_NUMERICAL = 4,        /* eigensolver non-convergence, singular systems */
  QDF_ERR_INTERNAL = 5
} qdf_status;

typedef struct qdf_operator qdf_operator;
typedef struct qdf_functional qdf_functional;

QDF_API const char* qdf_version(void);
QDF_API const char* qdf_last_error(void);
QDF_API void qdf_string_free(char* s);

/* Operators: dense complex matrices carrying tensor-leg dimensions. */
QDF_API qdf_status qdf_operator_from_json(const char* json, qdf_operator** out);
QDF_API qdf_status qdf_operator_load(const char* path, qdf_operator** out);
/* re, im: side*side values, row-major; im may be NULL. */
QDF_API qdf_status qdf_operator_create(const int* legs, size_t num_legs, const double* re,
                                       const double* im, qdf_operator** out);
QDF_API void qdf_operator_free(qdf_operator* op);
QDF_API qdf_status qdf_operator_to_json(const qdf_operator* op, char** out);
/* Writes up to capacity leg dimensions; *num_legs receives the true count. */
QDF_API qdf_status qdf_operator_legs(const qdf_operator* op, int* legs, size_t capacity,
                                     size_t* num_legs);
QDF_API qdf_status qdf_operator_tensor(const qdf_operator* x, const qdf_operator* y,
                                       qdf_operator** out);
QDF_API qdf_status qdf_operator_partial_transpose(const qdf_operator* x, int leg,
                                                  qdf_operator** out);
QDF_API qdf_status qdf_operator_min_eig(const qdf_operator* x, double* out);
QDF_API qdf_status qdf_operator_is_psd(const qdf_operator* x, double tol, int* out);

/* Faithful positive functionals rho(x) = trace(D x) on M_n. */
/* name: "trace", "normalized-trace" or "random" (seeded). */
QDF_API qdf_status qdf_functional_preset(const char* name, int n, uint64_t seed,
                                         qdf_functional** out);
QDF_API qdf_status qdf_functional_from_operator(const qdf_operator* density, qdf_functional** out);
QDF_API void qdf_functional_free(qdf_functional* rho);

typedef enum qdf_relation {
  QDF_RELATION_EXACT = 0, /* contraction of the extension equals a */
  QDF_RELATION_SUB = 1    /* contraction of the extension is below a */
} qdf_relation;

typedef struct qdf_solver_options {
  double tol;
  int max_iterations;
  int plateau_window;
  double plateau_threshold;
  qdf_relation relation;
} qdf_solver_options;

QDF_API void qdf_solver_options_default(qdf_solver_options* opts);

typedef enum qdf_verdict {
  QDF_SEPARABLE_EVIDENCE = 0,
  QDF_ENTANGLED_EVIDENCE = 1,
  QDF_UNDETERMINED = 2
} qdf_verdict;

/* Extension hierarchy on a (legs [m, n]) for levels 2..max_l. opts may be
 * NULL for defaults. report_json may be NULL. */
QDF_API qdf_status qdf_extend_check(const qdf_operator* a, const qdf_functional* rho, int max_l,
                                    const qdf_solver_options* opts, int with_witness,
                                    qdf_verdict* verdict, char** report_json);
/* One level of the hierarchy. */
QDF_API qdf_status qdf_extension_feasibility(const qdf_operator* a, const qdf_functional* rho,
                                             int l, const qdf_solver_options* opts,
                                             char** report_json);
QDF_API qdf_status qdf_ppt_min_eig(const qdf_operator* a, double* out);
/* p |psi-><psi-| + (1 - p) I/4 on 2 (x) 2. */
QDF_API qdf_status qdf_werner_state(double p, qdf_operator** out);

/* Boundary report for the group-like element e_t (t with legs [n]) with a = 1. */
QDF_API qdf_status qdf_boundary_grouplike(const qdf_operator* t, const qdf_functional* rho, int L,
                                          const qdf_solver_options* opts, int verify_bridge,
                                          char** report_json);
/* Boundary report for a sequence bundle. rho may be NULL to use the bundle's. */
QDF_API qdf_status qdf_boundary_sequence(const char* bundle_json, const qdf_functional* rho,
                                         const qdf_solver_options* opts, int verify_bridge,
                                         char** report_json);
QDF_API qdf_status qdf_schur_table(int n, int l, char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* QDF_QDF_H */
