/*
 * C interface to the boltzsyn library: RBM/DBN synthesis for prescribed
 * distributions on {0,1}^n, exact inference, and size formulas.
 *
 * Objects are opaque handles released with the matching *_free call.
 * Every fallible call returns a bsyn_status; on failure the thread-local
 * message from bsyn_last_error() describes the cause. Strings returned
 * through char** are heap-allocated and released with bsyn_string_free.
 *
 * States are unsigned integers: unit i (1-based) is bit i-1.
 */
#ifndef BOLTZSYN_H
#define BOLTZSYN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BOLTZSYN_BUILDING)
#    define BSYN_API __declspec(dllexport)
#  else
#    define BSYN_API __declspec(dllimport)
#  endif
#else
#  define BSYN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bsyn_status {
  BSYN_OK = 0,
  BSYN_ERR_ARGUMENT = 1,
  BSYN_ERR_DIMENSION = 2,
  BSYN_ERR_SIZE = 3,
  BSYN_ERR_DEGENERATE = 4,
  BSYN_ERR_CALIBRATION = 5,
  BSYN_ERR_SCHEMA = 6,
  BSYN_ERR_DOMAIN = 7,
  BSYN_ERR_IO = 8,
  BSYN_ERR_INTERNAL = 9
} bsyn_status;

typedef enum bsyn_model_kind {
  BSYN_MODEL_RBM = 1,
  BSYN_MODEL_DBN = 2
} bsyn_model_kind;

typedef struct bsyn_dist bsyn_dist;
typedef struct bsyn_cover bsyn_cover;
typedef struct bsyn_model bsyn_model;
typedef struct bsyn_family bsyn_family;

typedef struct bsyn_rbm_options {
  double sharpness;  /* base sharpness a */
  int calibrate;     /* nonzero: refine pair masses on the exact marginal */
  int max_sweeps;
  double tolerance;  /* max residual of the mass conditioned on covered states */
} bsyn_rbm_options;

BSYN_API const char* bsyn_version(void);
BSYN_API const char* bsyn_last_error(void);
BSYN_API void bsyn_string_free(char* s);

/* Distributions (dist/1 and support/1 files). */
BSYN_API bsyn_status bsyn_dist_create(int n, const double* probs, size_t count,
                                      bsyn_dist** out);
BSYN_API bsyn_status bsyn_dist_parse(const char* json, bsyn_dist** out);
BSYN_API bsyn_status bsyn_dist_load(const char* path, bsyn_dist** out);
/* Uniform distribution over the states listed in a support/1 file. */
BSYN_API bsyn_status bsyn_support_load(const char* path, bsyn_dist** out);
BSYN_API bsyn_status bsyn_dist_normalize(const bsyn_dist* d, bsyn_dist** out);
BSYN_API int bsyn_dist_width(const bsyn_dist* d);
BSYN_API bsyn_status bsyn_dist_probs(const bsyn_dist* d, const double** probs,
                                     size_t* count);
BSYN_API bsyn_status bsyn_dist_to_json(const bsyn_dist* d, char** out);
BSYN_API bsyn_status bsyn_kl_divergence(const bsyn_dist* p, const bsyn_dist* q,
                                        double* out);
BSYN_API bsyn_status bsyn_total_variation(const bsyn_dist* p, const bsyn_dist* q,
                                          double* out);
BSYN_API void bsyn_dist_free(bsyn_dist* d);

/* Minimal Hamming-1 pair cover of a distribution's support. */
BSYN_API bsyn_status bsyn_pair_cover(const bsyn_dist* d, bsyn_cover** out);
BSYN_API int bsyn_cover_k(const bsyn_cover* c);
BSYN_API bsyn_status bsyn_cover_pair(const bsyn_cover* c, int i, uint32_t* x,
                                     uint32_t* y);
BSYN_API bsyn_status bsyn_cover_to_json(const bsyn_cover* c, char** out);
BSYN_API void bsyn_cover_free(bsyn_cover* c);

/* Models (rbm/1 and dbn/1 files). */
BSYN_API bsyn_status bsyn_model_parse(const char* json, bsyn_model** out);
BSYN_API bsyn_status bsyn_model_load(const char* path, bsyn_model** out);
BSYN_API bsyn_model_kind bsyn_model_get_kind(const bsyn_model* m);
BSYN_API int bsyn_model_width(const bsyn_model* m);
/* RBM hidden units, or the top RBM's hidden units for a DBN. */
BSYN_API int bsyn_model_hidden_units(const bsyn_model* m);
/* DBN hidden layers; 1 for an RBM. */
BSYN_API int bsyn_model_hidden_layers(const bsyn_model* m);
BSYN_API bsyn_status bsyn_model_to_json(const bsyn_model* m, char** out);
BSYN_API bsyn_status bsyn_model_save(const bsyn_model* m, const char* path);
/* Exact visible marginal. */
BSYN_API bsyn_status bsyn_model_marginal(const bsyn_model* m, bsyn_dist** out);
/* Ancestral samples of the visible layer; `states` holds `count` entries. */
BSYN_API bsyn_status bsyn_model_sample(const bsyn_model* m, uint64_t count,
                                       uint64_t seed, uint32_t* states);
/* Same draws as CSV with header "sample,state,state_bits". */
BSYN_API bsyn_status bsyn_model_samples_csv(const bsyn_model* m, uint64_t count,
                                            uint64_t seed, char** out);
BSYN_API const char* bsyn_sampler_name(void);
BSYN_API void bsyn_model_free(bsyn_model* m);

/* Synthesis. */
BSYN_API void bsyn_rbm_options_default(bsyn_rbm_options* opts);
/* cover may be NULL (the minimal cover of the target is used). On a
 * calibration failure *report receives {"error":...,"residuals":[...]}. */
BSYN_API bsyn_status bsyn_synth_rbm(const bsyn_dist* target, const bsyn_cover* cover,
                                    const bsyn_rbm_options* opts, bsyn_model** model,
                                    char** report);
/* trace may be NULL; otherwise it receives the schedule trace CSV. */
BSYN_API bsyn_status bsyn_synth_dbn(const bsyn_dist* target, int b,
                                    double copy_sharpness, double top_sharpness,
                                    bsyn_model** model, char** report, char** trace);

/* Sequence families. */
BSYN_API bsyn_status bsyn_family_build(int b, bsyn_family** out);
BSYN_API int bsyn_family_width(const bsyn_family* f);
BSYN_API int bsyn_family_sequences(const bsyn_family* f);
BSYN_API int bsyn_family_length(const bsyn_family* f);
BSYN_API bsyn_status bsyn_family_entry(const bsyn_family* f, int seq, int row,
                                       uint32_t* state);
BSYN_API bsyn_status bsyn_family_to_csv(const bsyn_family* f, char** out);
BSYN_API bsyn_status bsyn_family_verify(const bsyn_family* f, int* passed,
                                        char** report);
BSYN_API void bsyn_family_free(bsyn_family* f);
/* Widths n = 2^(b-1) + b usable for DBN synthesis. */
BSYN_API size_t bsyn_admissible_widths(int* out, size_t capacity);

/* Size formulas for n in [lo, hi]. b = 0 infers b from n; support_size < 0
 * means 2^n. */
BSYN_API bsyn_status bsyn_bounds_table(int lo, int hi, int b, int64_t support_size,
                                       int csv, char** out);

#ifdef __cplusplus
}
#endif

#endif /* BOLTZSYN_H */
