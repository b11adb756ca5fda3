/* C interface to the cksvar library.
 *
 * Objects are opaque handles created by the library and released with the
 * matching *_free call. Every fallible call returns a cksvar_status; on
 * failure cksvar_last_error() describes the problem (per thread, valid until
 * the next call on that thread). Strings returned through char** must be
 * released with cksvar_string_free.
 */
#ifndef CKSVAR_CKSVAR_H
#define CKSVAR_CKSVAR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef CKSVAR_BUILDING
#    define CKSVAR_API __declspec(dllexport)
#  else
#    define CKSVAR_API __declspec(dllimport)
#  endif
#else
#  define CKSVAR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cksvar_status {
  CKSVAR_OK = 0,
  CKSVAR_E_ARGUMENT = 1,   /* null pointer or bad scalar argument */
  CKSVAR_E_DIMENSION = 2,  /* shapes, ranges, non-PD covariance */
  CKSVAR_E_DGP = 3,        /* incoherent model */
  CKSVAR_E_CASE = 4,       /* operation not defined for this configuration */
  CKSVAR_E_ASSUMPTION = 5, /* a required assumption fails */
  CKSVAR_E_NUMERIC = 6,
  CKSVAR_E_PARSE = 7,
  CKSVAR_E_IO = 8,
  CKSVAR_E_INTERNAL = 9
} cksvar_status;

typedef struct cksvar_model cksvar_model;
typedef struct cksvar_path cksvar_path;

CKSVAR_API const char* cksvar_version(void);
CKSVAR_API const char* cksvar_last_error(void);
CKSVAR_API const char* cksvar_status_name(cksvar_status s);
/* Output pointers are set to NULL on entry and only filled on success; strings are freed with cksvar_string_free. */
CKSVAR_API void cksvar_string_free(char* s);

/* Models. params_json may be NULL or a JSON object of parameter overrides. */
CKSVAR_API cksvar_status cksvar_model_from_json(const char* json, cksvar_model** out);
CKSVAR_API cksvar_status cksvar_model_load(const char* path, cksvar_model** out);
CKSVAR_API cksvar_status cksvar_model_example(const char* name, const char* params_json, cksvar_model** out);
CKSVAR_API cksvar_status cksvar_model_to_json(const cksvar_model* m, char** out);
CKSVAR_API cksvar_status cksvar_model_dims(const cksvar_model* m, int* p, int* k);
CKSVAR_API void cksvar_model_free(cksvar_model* m);

/* Canonical form as a model document plus P^{-1}, Q and the scale factors. */
CKSVAR_API cksvar_status cksvar_canonical(const cksvar_model* m, char** json_out);

/* tol <= 0 selects the default rank tolerance. */
CKSVAR_API cksvar_status cksvar_classify(const cksvar_model* m, double tol, char** json_out);
/* Case objects (factors, projections, kappa or kink geometry). */
CKSVAR_API cksvar_status cksvar_objects(const cksvar_model* m, double tol, char** json_out);
/* depth <= 0 and budget <= 0 select defaults. all_ok may be NULL. */
CKSVAR_API cksvar_status cksvar_verify(const cksvar_model* m, double tol, int depth, long long budget, int* all_ok,
                                       char** json_out);

/* Paths. init is p x k column-major (column k-1 is z_0) or NULL for zeros. */
CKSVAR_API cksvar_status cksvar_simulate(const cksvar_model* m, int n, uint64_t seed, const double* init,
                                         cksvar_path** out);
CKSVAR_API cksvar_status cksvar_path_length(const cksvar_path* path, int* n, int* p);
/* Copies n values of y, or (p-1) x n column-major values of x. */
CKSVAR_API cksvar_status cksvar_path_y(const cksvar_path* path, double* out, size_t len);
CKSVAR_API cksvar_status cksvar_path_x(const cksvar_path* path, double* out, size_t len);
CKSVAR_API cksvar_status cksvar_path_csv(const cksvar_path* path, char** csv_out);
CKSVAR_API void cksvar_path_free(cksvar_path* path);

/* Limit process on an m-point grid. which_case: 0 from the classification,
 * 1 or 2 to force. z0 has p entries or is NULL. */
CKSVAR_API cksvar_status cksvar_limit_csv(const cksvar_model* m, int which_case, int grid, uint64_t seed,
                                          const double* z0, char** csv_out);

/* Monte Carlo run driven by a JSON spec; pass may be NULL. samples_csv may be NULL. */
CKSVAR_API cksvar_status cksvar_mc(const cksvar_model* m, const char* spec_json, int* pass, char** json_out,
                                   char** samples_csv);

/* JSR bounds of a matrix set given as {"matrices": [...]} or a bare array. */
CKSVAR_API cksvar_status cksvar_jsr(const char* matrices_json, int depth, long long budget, int* certified,
                                    char** json_out);

CKSVAR_API cksvar_status cksvar_examples(char** json_out);

#ifdef __cplusplus
}
#endif

#endif
