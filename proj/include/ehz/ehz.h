#ifndef EHZ_EHZ_H
#define EHZ_EHZ_H

/*
 * C interface to the EHZ capacity library.
 *
 * Every function returns an ehz_status. On failure the message of the most
 * recent error on the calling thread is available from ehz_last_error().
 * Strings returned through char** must be released with ehz_string_free().
 * Handles are released with their matching *_free function; passing NULL to
 * a *_free function is a no-op.
 */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(EHZ_BUILDING_LIBRARY)
#    define EHZ_API __declspec(dllexport)
#  else
#    define EHZ_API __declspec(dllimport)
#  endif
#else
#  define EHZ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ehz_status {
  EHZ_OK = 0,
  EHZ_ERR_INVALID_ARGUMENT = 1,
  EHZ_ERR_DIMENSION = 2,
  EHZ_ERR_DEGENERATE = 3,
  EHZ_ERR_UNBOUNDED = 4,
  EHZ_ERR_BUDGET = 5,
  EHZ_ERR_INFEASIBLE = 6,
  EHZ_ERR_PARSE = 7,
  EHZ_ERR_INTERNAL = 8,
  EHZ_ERR_NULL = 9
} ehz_status;

typedef struct ehz_body ehz_body;
typedef struct ehz_result ehz_result;
typedef struct ehz_orbit ehz_orbit;

typedef enum ehz_engine { EHZ_ENGINE_BNB = 0, EHZ_ENGINE_BRUTE = 1 } ehz_engine;

typedef struct ehz_search_options {
  ehz_engine engine;
  long long budget;    /* orders (brute) or nodes (bnb) */
  double target_gap;   /* relative, in [0, 1) */
  int max_subset;      /* 0: no limit */
  int threads;         /* 0: hardware concurrency */
} ehz_search_options;

typedef struct ehz_defect {
  double capacity;
  double c1;
  double c2;
  double raw_defect;
  double defect;
  int certified;
} ehz_defect;

EHZ_API const char* ehz_version(void);
EHZ_API const char* ehz_last_error(void);
EHZ_API const char* ehz_status_string(ehz_status status);
EHZ_API void ehz_string_free(char* s);
EHZ_API void ehz_search_options_default(ehz_search_options* options);

/* Bodies. Normals and vertices are row-major arrays. */
EHZ_API ehz_status ehz_body_from_halfspaces(int dim, int count, const double* normals,
                                            const double* heights, ehz_body** out);
EHZ_API ehz_status ehz_body_from_vertices(int dim, int count, const double* vertices,
                                          ehz_body** out);
EHZ_API ehz_status ehz_body_from_json(const char* json, ehz_body** out);
/* Library bodies by name; dim applies to simplex, cube and cross-polytope,
 * sides to regular-polygon. */
EHZ_API ehz_status ehz_body_named(const char* name, int dim, int sides, ehz_body** out);
EHZ_API ehz_status ehz_body_list_names(char** out); /* newline separated */
EHZ_API ehz_status ehz_body_copy(const ehz_body* body, ehz_body** out);
EHZ_API void ehz_body_free(ehz_body* body);

EHZ_API ehz_status ehz_body_dim(const ehz_body* body, int* out);
EHZ_API ehz_status ehz_body_num_facets(const ehz_body* body, int* out);
EHZ_API ehz_status ehz_body_facet(const ehz_body* body, int index, double* normal, double* height);
EHZ_API ehz_status ehz_body_to_json(const ehz_body* body, char** out);

EHZ_API ehz_status ehz_body_scaled(const ehz_body* body, double factor, ehz_body** out);
EHZ_API ehz_status ehz_body_translated(const ehz_body* body, const double* offset, ehz_body** out);
/* Image under the dim x dim row-major matrix. */
EHZ_API ehz_status ehz_body_linear_image(const ehz_body* body, const double* matrix, ehz_body** out);
EHZ_API ehz_status ehz_body_lagrangian_product(const ehz_body* q_factor, const ehz_body* p_factor,
                                               ehz_body** out);

EHZ_API ehz_status ehz_volume(const ehz_body* body, double* out);
EHZ_API ehz_status ehz_systolic_ratio(double capacity, double volume, int half_dim, double* out);
EHZ_API ehz_status ehz_faces_json(const ehz_body* body, int lagrangian_only, char** out);

/* Capacity search. */
EHZ_API ehz_status ehz_capacity(const ehz_body* body, const ehz_search_options* options,
                                ehz_result** out);
EHZ_API void ehz_result_free(ehz_result* result);
EHZ_API ehz_status ehz_result_capacity(const ehz_result* result, double* out);
EHZ_API ehz_status ehz_result_optimal_value(const ehz_result* result, double* out);
EHZ_API ehz_status ehz_result_gap(const ehz_result* result, double* out);
EHZ_API ehz_status ehz_result_certified(const ehz_result* result, int* out);
/* 0 when a subset cap below the facet count restricted the search. */
EHZ_API ehz_status ehz_result_complete(const ehz_result* result, int* out);
EHZ_API ehz_status ehz_result_num_maximizers(const ehz_result* result, int* out);
EHZ_API ehz_status ehz_result_num_families(const ehz_result* result, int* out);
/* Length of maximizer `index`; facets and betas may be NULL to query it. */
EHZ_API ehz_status ehz_result_maximizer(const ehz_result* result, int index, int* length,
                                        int* facets, double* betas);
/* volume < 0 omits the volume and systolic ratio fields. */
EHZ_API ehz_status ehz_result_to_json(const ehz_result* result, double volume, char** out);

/* Sequences. */
EHZ_API ehz_status ehz_sequence_action(const ehz_body* body, int count, const int* facets,
                                       const double* betas, double* out);
EHZ_API ehz_status ehz_sequence_feasible(const ehz_body* body, int count, const int* facets,
                                         const double* betas, int* out);
/* JSON certificate: upper bound 1/(2Q), exact fractions when rational != 0. */
EHZ_API ehz_status ehz_certify_json(const ehz_body* body, int count, const int* facets,
                                    const double* betas, int rational, char** out);

/* Cuts along {<x, v> = level}; v is normalized. */
EHZ_API ehz_status ehz_cut_level(const ehz_body* body, const double* normal, double depth,
                                 double* level);
EHZ_API ehz_status ehz_cut(const ehz_body* body, const double* normal, double level,
                           ehz_body** upper, ehz_body** lower);
EHZ_API ehz_status ehz_cut_defect(const ehz_body* body, const double* normal, double level,
                                  const ehz_search_options* options, ehz_defect* out);
/* CSV with header t,c1,c2,sum,cK,defect over the given depths. */
EHZ_API ehz_status ehz_sweep_csv(const ehz_body* body, const double* normal, const double* depths,
                                 int count, const ehz_search_options* options, char** out);
/* Pieces, defect and combinatorial cuts at depth t as JSON. */
EHZ_API ehz_status ehz_cut_json(const ehz_body* body, const double* normal, double depth,
                                const ehz_search_options* options, int all, char** out);

/* Orbits. A failed lift returns EHZ_ERR_INFEASIBLE with the reason. */
EHZ_API ehz_status ehz_orbit_from_sequence(const ehz_body* body, int count, const int* facets,
                                           const double* betas, ehz_orbit** out);
EHZ_API ehz_status ehz_orbit_from_json(const char* json, ehz_orbit** out);
EHZ_API ehz_status ehz_orbit_to_json(const ehz_orbit* orbit, char** out);
EHZ_API void ehz_orbit_free(ehz_orbit* orbit);
/* Orbit JSON with verification status and per-edge dynamics labels on body. */
EHZ_API ehz_status ehz_orbit_report_json(const ehz_body* body, const ehz_orbit* orbit, char** out);
EHZ_API ehz_status ehz_orbit_num_vertices(const ehz_orbit* orbit, int* out);
EHZ_API ehz_status ehz_orbit_vertex(const ehz_orbit* orbit, int index, double* out);
EHZ_API ehz_status ehz_orbit_action(const ehz_orbit* orbit, double* out);
EHZ_API ehz_status ehz_orbit_verify(const ehz_body* body, const ehz_orbit* orbit, int* ok);
EHZ_API ehz_status ehz_orbit_classify_json(const ehz_body* body, const ehz_orbit* orbit, char** out);
/* A refused split returns EHZ_ERR_INFEASIBLE with the reason. */
EHZ_API ehz_status ehz_orbit_split(const ehz_body* body, const ehz_orbit* orbit,
                                   const double* normal, double level, ehz_orbit** upper,
                                   ehz_orbit** lower);
/* body may be NULL; it only supplies facet labels. */
EHZ_API ehz_status ehz_orbit_glue(const ehz_orbit* upper, const ehz_orbit* lower,
                                  const double* normal, const ehz_body* body, ehz_orbit** out);
EHZ_API ehz_status ehz_orbit_same_cycle(const ehz_orbit* a, const ehz_orbit* b, double tol,
                                        int* out);

#ifdef __cplusplus
}
#endif

#endif
