#ifndef QDOMAIN_H
#define QDOMAIN_H

/* C interface to the qdomain library. Strings returned through char** are
 * owned by the caller and released with qd_free_string. Configuration and
 * documents are exchanged as JSON text. */

#include <stddef.h>

#if defined(_WIN32)
#define QD_API __declspec(dllexport)
#else
#define QD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qd_status {
  QD_OK = 0,
  QD_ERR_INVALID_ARGUMENT = 1,
  QD_ERR_ALIASING = 2,
  QD_ERR_TRUNCATION = 3,
  QD_ERR_POSITIVITY_LOST = 4,
  QD_ERR_OVERFLOW_GUARD = 5,
  QD_ERR_UNDER_RESOLVED = 6,
  QD_ERR_NOT_IN_HARDY_CLASS = 7,
  QD_ERR_SCHEMA = 8,
  QD_ERR_IO = 9,
  QD_ERR_TOO_EXPENSIVE = 10,
  QD_ERR_INTERNAL = 99
} qd_status;

typedef struct qd_branch qd_branch;
typedef struct qd_map qd_map;

QD_API const char* qd_version(void);
/* Message of the last failure on the calling thread ("" if none). */
QD_API const char* qd_last_error(void);
QD_API void qd_free_string(char* s);

/* Runs the operator identities; *passed is 1 when all hold. The table lists
 * each check with its error. */
QD_API qd_status qd_selftest(const char* config_json, int* passed, char** table);

QD_API qd_status qd_solve(const char* config_json, qd_branch** out);
QD_API void qd_branch_destroy(qd_branch* branch);
QD_API size_t qd_branch_size(const qd_branch* branch);
QD_API qd_status qd_branch_to_json(const qd_branch* branch, char** out);
QD_API qd_status qd_branch_summary(const qd_branch* branch, char** out);
/* CSV of the geometry report of every accepted point. */
QD_API qd_status qd_branch_geometry_csv(const qd_branch* branch, char** out);
QD_API qd_status qd_branch_build_map(const qd_branch* branch, size_t index, qd_map** out);

QD_API qd_status qd_map_from_json(const char* map_json, qd_map** out);
/* f(z) = z with the given cutoff and series degree. */
QD_API qd_status qd_map_disk(int cutoff, int series_degree, qd_map** out);
QD_API void qd_map_destroy(qd_map* map);
QD_API qd_status qd_map_to_json(const qd_map* map, char** out);
QD_API qd_status qd_map_boundary_csv(const qd_map* map, int samples, char** out);

/* options_json may be NULL or hold "c_override", "n_max", "k_max",
 * "serrin_degree", "radial_nodes", "angles", "boundary_samples",
 * "hardy_tol". */
QD_API qd_status qd_audit(const qd_map* map, const char* options_json, char** report_json, char** table);

/* M_n(a) on the config's disk grid for every n in n_list and a in a_list. */
QD_API qd_status qd_moments_csv(const char* config_json, const int* n_list, size_t n_count, const double* a_list,
                                size_t a_count, char** out);

#ifdef __cplusplus
}
#endif

#endif /* QDOMAIN_H */
