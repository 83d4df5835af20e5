#ifndef PDCT_PDCT_H
#define PDCT_PDCT_H

/*
 * C interface to the pdct reconstruction toolkit.
 *
 * Objects are opaque handles created by pdct_*_create / pdct_*_read and
 * released by the matching *_destroy. Every fallible call returns a
 * pdct_status; on failure pdct_last_error() describes the problem. The
 * message is per thread and stays valid until the next failing call on
 * that thread.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PDCT_BUILDING_LIBRARY)
#    define PDCT_API __declspec(dllexport)
#  else
#    define PDCT_API __declspec(dllimport)
#  endif
#else
#  define PDCT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pdct_status {
    PDCT_OK = 0,
    PDCT_ERR_SHAPE = 1,
    PDCT_ERR_PARAMETER = 2,
    PDCT_ERR_DIVERGENCE = 3,
    PDCT_ERR_DEGENERATE = 4,
    PDCT_ERR_IO = 5,
    PDCT_ERR_CONFIG = 6,
    PDCT_ERR_NULL_ARGUMENT = 7,
    PDCT_ERR_INTERNAL = 8
} pdct_status;

PDCT_API const char* pdct_version(void);
PDCT_API const char* pdct_last_error(void);
PDCT_API const char* pdct_status_name(pdct_status s);

/* ---- fields ------------------------------------------------------------ */

typedef enum pdct_field_kind {
    PDCT_IMAGE = 1,
    PDCT_SINOGRAM = 2,
    PDCT_VECTOR_FIELD = 3
} pdct_field_kind;

typedef struct pdct_field pdct_field;

/* dim0 is the slow axis (image height, sinogram views), dim1 the fast axis
 * (image width, sinogram bins). A vector field stores 2 * dim0 * dim1
 * values: the s component, then the t component. Operators need square
 * images. */
PDCT_API pdct_status pdct_field_create(pdct_field_kind kind, uint32_t dim0, uint32_t dim1, pdct_field** out);
PDCT_API pdct_status pdct_field_from_data(pdct_field_kind kind, uint32_t dim0, uint32_t dim1, const double* data,
                                          size_t len, pdct_field** out);
PDCT_API void pdct_field_destroy(pdct_field* f);

PDCT_API pdct_status pdct_field_info(const pdct_field* f, pdct_field_kind* kind, uint32_t* dim0, uint32_t* dim1,
                                     size_t* len);
/* Pointer to the values, valid until the field is destroyed. */
PDCT_API pdct_status pdct_field_data(pdct_field* f, double** data);

PDCT_API pdct_status pdct_field_read(const char* path, pdct_field** out);
PDCT_API pdct_status pdct_field_write(const pdct_field* f, const char* path);

PDCT_API pdct_status pdct_field_norms(const pdct_field* f, double* l1, double* l2, double* linf);
PDCT_API pdct_status pdct_field_inner_product(const pdct_field* a, const pdct_field* b, double* out);

/* ---- operators --------------------------------------------------------- */

typedef struct pdct_geometry_desc {
    uint32_t image_size;             /* M */
    double image_side;               /* cm; <= 0 selects the fan-inscribed side */
    double source_radius;            /* cm */
    double source_detector_distance; /* cm */
    uint32_t n_views;                /* equally spaced over a full turn */
    uint32_t n_bins;
    double bin_size;                 /* cm */
} pdct_geometry_desc;

/* Paper geometry: 256 x 256 image, 60 views, 512 bins of 0.02 cm, 40 / 80 cm. */
PDCT_API void pdct_geometry_desc_init(pdct_geometry_desc* desc);

typedef struct pdct_projector pdct_projector;

PDCT_API pdct_status pdct_projector_create(const pdct_geometry_desc* desc, pdct_projector** out);
PDCT_API void pdct_projector_destroy(pdct_projector* p);
PDCT_API pdct_status pdct_projector_shape(const pdct_projector* p, uint32_t* image_size, uint32_t* n_views,
                                          uint32_t* n_bins);

PDCT_API pdct_status pdct_project(const pdct_projector* p, const pdct_field* image, pdct_field** sinogram);
PDCT_API pdct_status pdct_backproject(const pdct_projector* p, const pdct_field* sinogram, pdct_field** image);

/* Forward-difference gradient scaled by `scale` and its negative adjoint. */
PDCT_API pdct_status pdct_gradient(const pdct_field* image, double scale, pdct_field** out);
PDCT_API pdct_status pdct_divergence(const pdct_field* vector_field, double scale, pdct_field** out);

typedef enum pdct_operator {
    PDCT_OP_STACKED = 0,   /* (A; grad) */
    PDCT_OP_PROJECTOR = 1,
    PDCT_OP_GRADIENT = 2,
    PDCT_OP_IDENTITY = 3
} pdct_operator;

/* Power-method estimate of the largest singular value. `trace` receives up
 * to trace_capacity values of s_n and may be NULL. */
PDCT_API pdct_status pdct_operator_norm(const pdct_projector* p, pdct_operator op, uint32_t max_iters,
                                        double* norm, uint32_t* iterations, double* trace, size_t trace_capacity);

/* ---- simulation -------------------------------------------------------- */

typedef struct pdct_phantom_desc {
    uint32_t size;
    uint64_t seed;
    uint32_t n_calcifications;
    uint32_t n_blobs;
    double fat_value;
    double fibroglandular_value;
    double skin_value;
    double calc_min;
    double calc_max;
} pdct_phantom_desc;

PDCT_API void pdct_phantom_desc_init(pdct_phantom_desc* desc);
PDCT_API pdct_status pdct_make_phantom(const pdct_phantom_desc* desc, pdct_field** out);

/* Transmission Poisson noise with `incident_counts` photons per ray. */
PDCT_API pdct_status pdct_add_poisson_noise(const pdct_field* sinogram, double incident_counts, uint64_t seed,
                                            pdct_field** out);

/* ---- solvers ----------------------------------------------------------- */

typedef enum pdct_instance {
    PDCT_LS = 0,
    PDCT_LS_NONNEG = 1,
    PDCT_L2TV = 2,
    PDCT_KLTV = 3,
    PDCT_L1TV = 4,
    PDCT_CONSTRAINED_TV = 5,
    PDCT_PRECOND_KLTV = 6
} pdct_instance;

typedef struct pdct_solver_desc {
    pdct_instance instance;
    double lambda;
    double epsilon;
    int32_t max_iters;
    double gap_tol;
    double theta;
    double step_safety;
    int32_t power_iters;
    int32_t nonneg_images;
    int32_t report_interval;
    int32_t lambda_in_operator;
} pdct_solver_desc;

PDCT_API void pdct_solver_desc_init(pdct_solver_desc* desc);

typedef struct pdct_report {
    int32_t n;
    double primal;
    double dual;
    double gap;
    double resid_dualfeas;
    double resid_extra1;
    double resid_extra2;
} pdct_report;

typedef void (*pdct_report_fn)(const pdct_report* report, void* user);

typedef struct pdct_solve_summary {
    int32_t iterations;
    int32_t converged;
    double operator_norm;
    double sigma;
    double tau;
    pdct_report final_report;
} pdct_solve_summary;

/* Runs one instance on `sinogram`. `on_report` may be NULL. `recon`
 * receives a new image; `summary` may be NULL. */
PDCT_API pdct_status pdct_solve(const pdct_projector* p, const pdct_field* sinogram, const pdct_solver_desc* desc,
                                pdct_report_fn on_report, void* user, pdct_field** recon,
                                pdct_solve_summary* summary);

/* ---- config-driven commands -------------------------------------------- */

typedef struct pdct_config pdct_config;
typedef void (*pdct_log_fn)(const char* line, void* user);

PDCT_API pdct_status pdct_config_load(const char* path, pdct_config** out);
PDCT_API pdct_status pdct_config_parse(const char* text, const char* base_dir, pdct_config** out);
PDCT_API void pdct_config_destroy(pdct_config* c);
/* Overrides the configured display window. */
PDCT_API pdct_status pdct_config_set_window(pdct_config* c, double lo, double hi);

PDCT_API pdct_status pdct_cmd_simulate(const pdct_config* c, pdct_log_fn log, void* user);
/* exit_code: 0 converged, 2 iteration budget exhausted (outputs written). */
PDCT_API pdct_status pdct_cmd_reconstruct(const pdct_config* c, pdct_log_fn log, void* user, int* exit_code);
/* Emits the report text through `log`, one line per call. */
PDCT_API pdct_status pdct_cmd_opnorm(const pdct_config* c, pdct_log_fn log, void* user);
/* input/output may be NULL to use the config's export paths; roi is
 * {x, y, width, height} or NULL. */
PDCT_API pdct_status pdct_cmd_export_pgm(const pdct_config* c, const char* input, const char* output,
                                         const uint32_t* roi);

/* Direct export without a config. */
PDCT_API pdct_status pdct_export_pgm(const pdct_field* image, double lo, double hi, const uint32_t* roi,
                                     const char* path);

#ifdef __cplusplus
}
#endif

#endif
