#ifndef ZMD_H
#define ZMD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum ZmdStatus {
  ZMD_STATUS_OK = 0,
  ZMD_STATUS_NULL_POINTER = 1,
  ZMD_STATUS_INVALID_ARGUMENT = 2,
  ZMD_STATUS_INVALID_PROBABILITY = 3,
  ZMD_STATUS_NON_INTEGRAL_DEGREE = 4,
  ZMD_STATUS_INFEASIBLE_GRAPH = 5,
  ZMD_STATUS_UNREALIZABLE_DISTRIBUTION = 6,
  ZMD_STATUS_DIMENSION_MISMATCH = 7,
  ZMD_STATUS_DEGENERATE_CHANNEL = 8,
  ZMD_STATUS_INDETERMINATE_RATIO = 9,
  ZMD_STATUS_UNREACHABLE_TARGET = 10,
  ZMD_STATUS_UNKNOWN_PRESET = 11,
  ZMD_STATUS_PARSE_ERROR = 12,
  ZMD_STATUS_IO_ERROR = 13,
  ZMD_STATUS_BUFFER_TOO_SMALL = 14,
  ZMD_STATUS_PANIC = 15,
} ZmdStatus;

// Experiment handle: a validated configuration plus an optional sweep.
typedef struct ZmdExperiment ZmdExperiment;

// Sensing graph handle.
typedef struct ZmdGraph ZmdGraph;

// Closed-form probabilities at one operating point.
typedef struct ZmdPrediction {
  double p_zd;
  double p_wzd;
  double p_d;
  double p_fa;
} ZmdPrediction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread ("" after a success).
// Valid until the next call into the library on this thread.
const char *zmd_last_error(void);

// Library version as a static NUL-terminated string.
const char *zmd_version(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must be NULL or a pointer obtained from this library and not yet freed.
void zmd_string_free(char *s);

// Random graph with every measurement of degree `dm`.
//
// # Safety
// `out` must be a valid pointer.
enum ZmdStatus zmd_graph_regular(size_t l,
                                 size_t m,
                                 size_t dm,
                                 uint64_t seed,
                                 struct ZmdGraph **out);

// Random graph from node-perspective degree fractions.
//
// # Safety
// Each degree/fraction array must hold its stated number of elements.
enum ZmdStatus zmd_graph_irregular(size_t l,
                                   size_t m,
                                   const size_t *variable_degrees,
                                   const double *variable_fractions,
                                   size_t num_variable_degrees,
                                   const size_t *measurement_degrees,
                                   const double *measurement_fractions,
                                   size_t num_measurement_degrees,
                                   uint64_t seed,
                                   struct ZmdGraph **out);

// Random matching of `m` measurements to distinct variables.
//
// # Safety
// `out` must be a valid pointer.
enum ZmdStatus zmd_graph_one_to_one(size_t l, size_t m, uint64_t seed, struct ZmdGraph **out);

// Parses the text format produced by [`zmd_graph_to_text`].
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum ZmdStatus zmd_graph_from_text(const char *text, struct ZmdGraph **out);

// Serializes a graph; free the result with [`zmd_string_free`].
//
// # Safety
// `g` must be a live graph handle and `out` a valid pointer.
enum ZmdStatus zmd_graph_to_text(const struct ZmdGraph *g, char **out);

// # Safety
// `g` must be NULL or a handle not yet freed.
void zmd_graph_free(struct ZmdGraph *g);

// Number of variable nodes (0 for NULL).
//
// # Safety
// `g` must be NULL or a live handle.
size_t zmd_graph_num_variables(const struct ZmdGraph *g);

// Number of measurement nodes (0 for NULL).
//
// # Safety
// `g` must be NULL or a live handle.
size_t zmd_graph_num_measurements(const struct ZmdGraph *g);

// Number of edges (0 for NULL).
//
// # Safety
// `g` must be NULL or a live handle.
size_t zmd_graph_num_edges(const struct ZmdGraph *g);

// Copies the variables adjacent to measurement `m` into `buf`. `len`
// receives the degree; if it exceeds `cap`, nothing is copied and
// `BufferTooSmall` is returned.
//
// # Safety
// `buf` must hold `cap` elements; `len` must be valid.
enum ZmdStatus zmd_graph_neighbors(const struct ZmdGraph *g,
                                   size_t m,
                                   size_t *buf,
                                   size_t cap,
                                   size_t *len);

// Draws a spectrum for `occupancy` (`L` bytes, nonzero = occupied), a sensing
// matrix with block length `block_len`, and writes the `M` measurements.
//
// # Safety
// `occupancy` must hold `L` bytes and `y_out` `M` doubles.
enum ZmdStatus zmd_measure(const struct ZmdGraph *g,
                           size_t block_len,
                           const uint8_t *occupancy,
                           double sigma_s,
                           double sigma_n,
                           uint64_t seed,
                           double *y_out);

// Exact-zero rule: flags the neighbors of every `|y_m| <= eps`.
// `vacant_out` receives `L` bytes (1 = flagged vacant).
//
// # Safety
// `y` must hold `len` doubles and `vacant_out` `L` bytes.
enum ZmdStatus zmd_detect_noiseless(const struct ZmdGraph *g,
                                    const double *y,
                                    size_t len,
                                    double eps,
                                    uint8_t *vacant_out);

// Threshold rule: flags the neighbors of every `|y_m| < c_prime`.
//
// # Safety
// `y` must hold `len` doubles and `vacant_out` `L` bytes.
enum ZmdStatus zmd_detect_threshold(const struct ZmdGraph *g,
                                    const double *y,
                                    size_t len,
                                    double c_prime,
                                    uint8_t *vacant_out);

// Likelihood-ratio rule with cut `c`.
//
// # Safety
// `y` must hold `len` doubles and `vacant_out` `L` bytes.
enum ZmdStatus zmd_detect_lrt(const struct ZmdGraph *g,
                              const double *y,
                              size_t len,
                              double c,
                              double alpha,
                              double sigma_s,
                              double sigma_n,
                              uint8_t *vacant_out);

// Likelihood ratio of a single measurement of degree `d`.
//
// # Safety
// `out` must be a valid pointer.
enum ZmdStatus zmd_likelihood_ratio(double y,
                                    size_t d,
                                    double alpha,
                                    double sigma_s,
                                    double sigma_n,
                                    double *out);

// Largest threshold whose closed-form P_WZD on a `(dv, dm)`-regular graph
// does not exceed `target`. `c_prime_out` is +infinity when every threshold
// qualifies; `UnreachableTarget` when none does.
//
// # Safety
// Output pointers must be valid.
enum ZmdStatus zmd_calibrate_regular(size_t dm,
                                     size_t dv,
                                     double alpha,
                                     double sigma_s,
                                     double sigma_n,
                                     double target,
                                     double *c_prime_out,
                                     double *p_wzd_out);

// Error function.
double zmd_erf(double x);

// Closed-form probabilities on a `(dv, dm)`-regular graph. Pass NaN for
// `c_prime` to evaluate exact-zero (noiseless) detection.
//
// # Safety
// `out` must be a valid pointer.
enum ZmdStatus zmd_predict_regular(double alpha,
                                   size_t dm,
                                   size_t dv,
                                   double sigma_s,
                                   double sigma_n,
                                   double c_prime,
                                   struct ZmdPrediction *out);

// Parses a TOML experiment description (same keys as the `--config` file).
//
// # Safety
// `toml` must be NUL-terminated and `out` valid.
enum ZmdStatus zmd_experiment_from_toml(const char *toml, struct ZmdExperiment **out);

// # Safety
// `e` must be NULL or a handle not yet freed.
void zmd_experiment_free(struct ZmdExperiment *e);

// Runs the experiment on `jobs` threads (0 = all cores) and returns the CSV
// table; free it with [`zmd_string_free`].
//
// # Safety
// `e` must be a live handle and `csv_out` valid.
enum ZmdStatus zmd_experiment_run(const struct ZmdExperiment *e, size_t jobs, char **csv_out);

// Runs a named figure preset (`fig2`, `fig3-zmd`, `fig4`, `fig5`) and
// returns its CSV table; free it with [`zmd_string_free`].
//
// # Safety
// `name` must be NUL-terminated and `csv_out` valid.
enum ZmdStatus zmd_figure(const char *name,
                          uint64_t seed,
                          size_t trials,
                          size_t jobs,
                          char **csv_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZMD_H */
