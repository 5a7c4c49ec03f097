/* sqprobe: Gaussian binary discrimination of thermal-loss channels probed by
 * displaced-squeezed light.
 *
 * C API over the computational core. Every fallible call returns sqp_status
 * and writes results through out pointers; on failure the out values are
 * untouched and sqp_last_error() carries a message for the calling thread.
 * Handles are opaque and must be released with their matching free call.
 */

#ifndef SQPROBE_H
#define SQPROBE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SQP_API __declspec(dllexport)
#elif defined(__GNUC__)
#define SQP_API __attribute__((visibility("default")))
#else
#define SQP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sqp_status {
    SQP_OK = 0,
    SQP_ERR_INVALID_ARGUMENT = 1, /* null pointer, bad enum, bad buffer */
    SQP_ERR_DOMAIN = 2,           /* parameter outside its mathematical domain */
    SQP_ERR_BUDGET = 3,           /* squeezing cost exceeds the photon budget */
    SQP_ERR_PARSE = 4,            /* malformed scenario text or file */
    SQP_ERR_INTERNAL = 5
} sqp_status;

/* Message for the most recent failure on the calling thread; empty string if
 * none. The pointer stays valid until the next failing call on this thread. */
SQP_API const char* sqp_last_error(void);

/* Library version, "major.minor.patch". */
SQP_API const char* sqp_version(void);

/* ---- probe states and channel statistics ---------------------------- */

typedef struct sqp_probe {
    double n_S; /* mean signal photons per mode, >= 0 */
    double r;   /* squeezing parameter in (0, 1]; 1 = coherent */
} sqp_probe;

typedef struct sqp_statistic {
    double mean;
    double variance;
} sqp_statistic;

/* Photons spent on squeezing: (r + 1/r - 2) / 4. */
SQP_API sqp_status sqp_squeezing_photons(double r, double* out);

/* Smallest r whose squeezing cost fits the budget n_S. */
SQP_API sqp_status sqp_min_squeezing(double n_S, double* out);

/* Displacement photons n_A = n_S - squeezing cost. */
SQP_API sqp_status sqp_displacement_photons(const sqp_probe* probe, double* out);

/* Homodyne outcome of one mode before the channel. */
SQP_API sqp_status sqp_pre_channel_statistic(const sqp_probe* probe,
                                             sqp_statistic* out);

/* Summed outcome of M modes after a transmissivity-eta channel with n_B mean
 * thermal photons per mode. M is real-valued >= 1. */
SQP_API sqp_status sqp_summed_statistic(const sqp_probe* probe, double eta,
                                        double n_B, double M,
                                        sqp_statistic* out);

/* ---- receiver model -------------------------------------------------- */

typedef struct sqp_receiver_config {
    double wavelength_nm;     /* center wavelength, nm */
    double sky_brightness;    /* spectral radiance, W m^-2 sr^-1 nm^-1 */
    double aperture_radius_m; /* collection aperture radius, m */
    double fov_sr;            /* field of view, sr */
    double bandwidth_hz;      /* detection bandwidth, Hz */
    double filter_nm;         /* optical filter width, nm */
} sqp_receiver_config;

/* Collection parameter: filter width x inverse bandwidth x field of view x
 * aperture radius squared. */
SQP_API sqp_status sqp_collection_parameter(const sqp_receiver_config* config,
                                            double* out);

/* Mean background photons per mode implied by the receiver. */
SQP_API sqp_status sqp_background_photons(const sqp_receiver_config* config,
                                          double* out);

/* ---- threshold tests ------------------------------------------------- */

typedef struct sqp_scenario_params {
    double eta0;   /* transmissivity under H0, [0, 1] */
    double eta1;   /* transmissivity under H1, [eta0, 1] */
    double n_B;    /* mean background photons per mode, >= 0 */
    double M;      /* probe modes, real-valued >= 1 */
    double prior0; /* prior probability of H0 */
} sqp_scenario_params;

typedef struct sqp_test_outcome {
    double t;     /* decision threshold: decide H1 when the outcome exceeds t */
    double p_fa;  /* false-alarm probability */
    double p_md;  /* misdetection probability */
    double p_err; /* prior-weighted error probability */
    double log_p_fa; /* natural logs, exact where the linear values underflow */
    double log_p_md;
    double log_p_err;
    int degenerate; /* hypotheses coincide; error probability pins to 1/2 */
} sqp_test_outcome;

typedef enum sqp_threshold_method {
    SQP_THRESHOLD_AUTO = 0,
    SQP_THRESHOLD_CLOSED_FORM = 1,
    SQP_THRESHOLD_GOLDEN_SECTION = 2
} sqp_threshold_method;

/* Error probabilities of the test at threshold t. */
SQP_API sqp_status sqp_error_probabilities(const sqp_probe* probe,
                                           const sqp_scenario_params* params,
                                           double t, sqp_test_outcome* out);

/* Threshold minimizing the prior-weighted error probability
 * (SQP_THRESHOLD_AUTO). */
SQP_API sqp_status sqp_optimal_threshold(const sqp_probe* probe,
                                         const sqp_scenario_params* params,
                                         sqp_test_outcome* out);

/* As sqp_optimal_threshold with an explicit method from
 * sqp_threshold_method. */
SQP_API sqp_status sqp_optimal_threshold_method(const sqp_probe* probe,
                                                const sqp_scenario_params* params,
                                                int method,
                                                sqp_test_outcome* out);

typedef struct sqp_optimization_result {
    double r_star;             /* error-minimizing squeezing parameter */
    double t_star;             /* threshold at the optimum */
    sqp_test_outcome outcome;  /* test at (r_star, t_star) */
    sqp_test_outcome coherent; /* r = 1 baseline, threshold re-optimized */
    int flat;                  /* objective flat across the scan grid */
} sqp_optimization_result;

/* Minimizes the optimal-threshold error probability over the squeezing
 * parameter at fixed photon budget n_S. */
SQP_API sqp_status sqp_optimize_squeezing(double n_S,
                                          const sqp_scenario_params* params,
                                          sqp_optimization_result* out);

typedef struct sqp_roc_point {
    double p_fa_target;
    double p_md;
    double log_p_md;
    double t;
    double r;
    int reachable;
} sqp_roc_point;

/* One ROC point per false-alarm target (strictly increasing, each in (0,1)).
 * When optimize_r is nonzero the misdetection probability is minimized over
 * the squeezing parameter per point, otherwise fixed_r is used throughout.
 * out_points must hold n_targets entries. */
SQP_API sqp_status sqp_roc_curve(double n_S, const sqp_scenario_params* params,
                                 const double* p_fa_targets, size_t n_targets,
                                 int optimize_r, double fixed_r, int threads,
                                 sqp_roc_point* out_points);

/* sqp_optimize_squeezing for each mode count (strictly increasing, each
 * >= 1). out_results must hold n_values entries. */
SQP_API sqp_status sqp_sweep_modes(double n_S, const sqp_scenario_params* params,
                                   const double* m_values, size_t n_values,
                                   int threads,
                                   sqp_optimization_result* out_results);

/* ---- Monte Carlo validation ------------------------------------------ */

typedef struct sqp_mc_estimate {
    double p_hat;          /* observed fraction */
    double standard_error; /* sqrt(p_hat (1 - p_hat) / trials) */
    uint64_t trials;
    uint64_t seed;
} sqp_mc_estimate;

/* Counter-based simulation of the threshold test: bit-identical results for
 * a given seed regardless of threads. M must be an integer. */
SQP_API sqp_status sqp_simulate_error_probabilities(
    const sqp_probe* probe, const sqp_scenario_params* params, double t,
    uint64_t trials, uint64_t seed, int threads, sqp_mc_estimate* out_p_fa,
    sqp_mc_estimate* out_p_md);

/* ---- gaussian math ---------------------------------------------------- */

SQP_API sqp_status sqp_erf(double x, double* out);
SQP_API sqp_status sqp_erfc(double x, double* out);
SQP_API sqp_status sqp_erfcx(double x, double* out);

/* ln(erfc(x)), exact deep into the tail where erfc underflows. */
SQP_API sqp_status sqp_erfc_log(double x, double* out);

SQP_API sqp_status sqp_inverse_erf(double y, double* out);

/* Solves ln(erfc(x)) = log_target for x >= 0, log_target <= 0. */
SQP_API sqp_status sqp_inverse_erfc_log(double log_target, double* out);

/* CDF of a normal with the given mean and variance. */
SQP_API sqp_status sqp_gaussian_cdf(double x, double mean, double variance,
                                    double* out);

/* ---- scenario files --------------------------------------------------- */

typedef struct sqp_scenario sqp_scenario;

/* Parses a scenario from a file or from JSON text. On success *out owns the
 * parsed scenario and must be released with sqp_scenario_free. */
SQP_API sqp_status sqp_scenario_load(const char* path, sqp_scenario** out);
SQP_API sqp_status sqp_scenario_parse(const char* text, sqp_scenario** out);
SQP_API void sqp_scenario_free(sqp_scenario* scenario);

/* Probe section; *out_fixed_r reports whether the file pinned the squeezing
 * parameter (when zero, out_probe->r is a placeholder). */
SQP_API sqp_status sqp_scenario_get_probe(const sqp_scenario* scenario,
                                          sqp_probe* out_probe,
                                          int* out_fixed_r);

/* Channel, background, and test parameters; M is the first grid value. */
SQP_API sqp_status sqp_scenario_get_params(const sqp_scenario* scenario,
                                           sqp_scenario_params* out);

/* Receiver section when present; *out_has_receiver reports whether the
 * background was given as a receiver model. */
SQP_API sqp_status sqp_scenario_get_receiver(const sqp_scenario* scenario,
                                             sqp_receiver_config* out,
                                             int* out_has_receiver);

/* Mode-count grid: *out_values points at scenario-owned storage of
 * *out_count ascending values, valid until sqp_scenario_free. */
SQP_API sqp_status sqp_scenario_get_modes(const sqp_scenario* scenario,
                                          const double** out_values,
                                          size_t* out_count);

/* Output preferences; NULL only for a null scenario. The empty path selects
 * stdout. Pointers valid until sqp_scenario_free. */
SQP_API const char* sqp_scenario_output_format(const sqp_scenario* scenario);
SQP_API const char* sqp_scenario_output_path(const sqp_scenario* scenario);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SQPROBE_H */
