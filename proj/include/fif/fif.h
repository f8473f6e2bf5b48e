/*
 * C interface to the fractal interpolation library.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a fif_status; on
 * failure fif_last_error() describes the problem (per thread, valid until the
 * next failing call on that thread). Strings returned through char** are
 * released with fif_string_free.
 */
#ifndef FIF_FIF_H
#define FIF_FIF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FIF_BUILDING_LIBRARY)
#    define FIF_API __declspec(dllexport)
#  else
#    define FIF_API __declspec(dllimport)
#  endif
#else
#  define FIF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fif_status {
  FIF_OK = 0,
  FIF_ERR_INVALID_ARGUMENT = 1,
  FIF_ERR_DATA = 2,
  FIF_ERR_NUMERIC = 3,
  FIF_ERR_IO = 4,
  FIF_ERR_SCHEMA = 5,
  FIF_ERR_INTERNAL = 6
} fif_status;

typedef enum fif_model_kind {
  FIF_MODEL_FRACTAL = 0,
  FIF_MODEL_QUADRATIC = 1
} fif_model_kind;

/* Per-segment flags. */
#define FIF_FLAG_CLAMPED 1    /* |d_i| hit d_max */
#define FIF_FLAG_DEGENERATE 2 /* flat collage functional, d_i = 0 */
#define FIF_FLAG_CHORD 4      /* quadratic segment without interior samples */

typedef struct fif_series fif_series;
typedef struct fif_knots fif_knots;
typedef struct fif_model fif_model;

typedef struct fif_comparison {
  double fractal_rms;
  double quadratic_rms;
  double collage_bound;
  double contraction_factor;
  int eval_depth;
  int clamped;
} fif_comparison;

FIF_API const char* fif_last_error(void);
FIF_API const char* fif_version(void);
FIF_API void fif_string_free(char* str);

/* ---- series ---------------------------------------------------------- */

/* z may be NULL, giving z_m = 1..n. */
FIF_API fif_status fif_series_from_arrays(const double* z, const double* w, size_t n,
                                          fif_series** out);
FIF_API fif_status fif_series_load_csv(const char* path, fif_series** out);
FIF_API fif_status fif_series_write_csv(const fif_series* series, const char* path,
                                        const char* value_column);
FIF_API fif_status fif_series_gen_polynomial(size_t m, fif_series** out);
FIF_API fif_status fif_series_gen_dna(const char* text, size_t len, fif_series** out);
FIF_API fif_status fif_series_gen_random_walk(size_t m, uint64_t seed, fif_series** out);
/* s1, s2 (mean, population deviation) may be NULL. */
FIF_API fif_status fif_series_normalize(const fif_series* raw, fif_series** out, double* s1,
                                        double* s2);
FIF_API size_t fif_series_size(const fif_series* series);
/* Borrowed pointers, valid for the lifetime of the handle. */
FIF_API const double* fif_series_z(const fif_series* series);
FIF_API const double* fif_series_w(const fif_series* series);
FIF_API void fif_series_free(fif_series* series);

/* ---- knots ----------------------------------------------------------- */

/* interior: 1-based sample indices strictly between the end samples. */
FIF_API fif_status fif_knots_manual(const fif_series* series, const size_t* interior, size_t n,
                                    fif_knots** out);
/* window 0 and prominence < 0 select the defaults (101, 0.05). */
FIF_API fif_status fif_knots_extrema(const fif_series* series, size_t segments, size_t window,
                                     double prominence, fif_knots** out);
FIF_API fif_status fif_knots_from_arrays(const double* x, const double* y, size_t n,
                                         fif_knots** out);
FIF_API size_t fif_knots_size(const fif_knots* knots);
FIF_API fif_status fif_knots_get(const fif_knots* knots, size_t i, double* x, double* y);
FIF_API void fif_knots_free(fif_knots* knots);

/* ---- models ---------------------------------------------------------- */

/* d_max <= 0 selects the default 0.99. */
FIF_API fif_status fif_fit_fractal(const fif_series* series, const fif_knots* knots,
                                   double d_max, fif_model** out);
FIF_API fif_status fif_fit_quadratic(const fif_series* series, const fif_knots* knots,
                                     fif_model** out);
FIF_API fif_status fif_model_build_fractal(const fif_knots* knots, const double* d, size_t n,
                                           fif_model** out);

FIF_API fif_model_kind fif_model_kind_of(const fif_model* model);
FIF_API size_t fif_model_segments(const fif_model* model);
FIF_API fif_status fif_model_domain(const fif_model* model, double* a, double* b);
/* Any per-segment flag set. */
FIF_API int fif_model_flagged(const fif_model* model);
FIF_API fif_status fif_model_scaling(const fif_model* model, size_t i, double* d, int* flags);
FIF_API fif_status fif_model_quadratic(const fif_model* model, size_t i, double* k, double* r,
                                       double* l, int* flags);
/* 0 for quadratic models. */
FIF_API int fif_model_default_depth(const fif_model* model);
/* depth < 0 selects the default depth; ignored for quadratic models. */
FIF_API fif_status fif_model_eval(const fif_model* model, const double* x, size_t n, int depth,
                                  double* out);
FIF_API fif_status fif_model_set_provenance(fif_model* model, const char* input_sha256,
                                            int has_seed, uint64_t seed, double s1, double s2);
FIF_API fif_status fif_model_to_json(const fif_model* model, char** out);
FIF_API fif_status fif_model_from_json(const char* text, size_t len, fif_model** out);
/* Only for models produced by fif_fit_*; FIF_ERR_INVALID_ARGUMENT otherwise. */
FIF_API fif_status fif_model_report_json(const fif_model* model, char** out);
FIF_API void fif_model_free(fif_model* model);

/* ---- analysis -------------------------------------------------------- */

FIF_API fif_status fif_rms_error(const fif_model* model, const fif_series* series, int depth,
                                 double* out);
FIF_API fif_status fif_compare(const fif_series* series, const fif_knots* knots, double d_max,
                               int depth, fif_comparison* out);
/* out receives 64 hex digits and a terminating NUL. */
FIF_API fif_status fif_sha256_file(const char* path, char out[65]);

#ifdef __cplusplus
}
#endif

#endif /* FIF_FIF_H */
