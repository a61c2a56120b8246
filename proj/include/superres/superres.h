/*
 * superres: Fisher information of two-point-source separation estimation
 * under coherence and entanglement of an auxiliary degree of freedom.
 *
 * Plain C interface over the C++ core. Every function returns an sr_status;
 * on failure sr_last_error_message() describes the problem for the calling
 * thread. Opaque handles (sr_sweep_spec, sr_sweep_result) are owned by the
 * caller and released with their *_destroy function.
 *
 * Conventions: lengths (s, sigma) share one unit; theta is in radians and
 * restricted to [0, pi/2]; |gamma| = cos(theta); C = sin(theta) sqrt(1 - d^2)
 * with d = exp(-s^2 / 8 sigma^2). Closed-form routines require phi = 0.
 * 4x4 matrices are written row-major in the basis {e1, e2, e3, e4}.
 */
#ifndef SUPERRES_SUPERRES_H
#define SUPERRES_SUPERRES_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(SUPERRES_BUILDING_LIBRARY)
#    define SR_API __declspec(dllexport)
#  else
#    define SR_API __declspec(dllimport)
#  endif
#else
#  define SR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sr_status {
  SR_OK = 0,
  SR_ERR_DOMAIN = 1,        /* argument outside the operation's domain */
  SR_ERR_DEGENERATE = 2,    /* s = 0 where the quantity is undefined */
  SR_ERR_OUT_OF_REACH = 3,  /* concurrence above C_max(s) */
  SR_ERR_CONTRACT = 4,      /* caller-supplied object breaks a precondition */
  SR_ERR_CONFIG = 5,        /* oracle grid / step configuration rejected */
  SR_ERR_USAGE = 6,         /* invalid sweep specification or preset name */
  SR_ERR_IO = 7,
  SR_ERR_NULL_ARGUMENT = 8,
  SR_ERR_INTERNAL = 9
} sr_status;

typedef enum sr_nuisance {
  SR_NUISANCE_THETA = 0,
  SR_NUISANCE_CONCURRENCE = 1,
  SR_NUISANCE_COHERENCE = 2
} sr_nuisance;

typedef enum sr_weighted_fi_variant {
  SR_WEIGHTED_FI_QUANTUM_ONLY = 0,
  SR_WEIGHTED_FI_QUANTUM_PLUS_WEIGHT = 1
} sr_weighted_fi_variant;

typedef enum sr_sweep_mode { SR_MODE_SINGLE = 0, SR_MODE_QFIM = 1, SR_MODE_VERIFY = 2 } sr_sweep_mode;

typedef enum sr_format { SR_FORMAT_CSV = 0, SR_FORMAT_JSON = 1 } sr_format;

typedef struct sr_params {
  double s;
  double sigma;
  double theta;
  double phi;
} sr_params;

typedef struct sr_overlap_triple {
  double d;
  double d1; /* dd/ds */
  double d2; /* d^2 d/ds^2 */
} sr_overlap_triple;

typedef struct sr_spectral_data {
  double lambda1;
  double lambda2;
  double a3;
  double a4;
} sr_spectral_data;

typedef struct sr_fi_record {
  double s;
  double sigma;
  double theta;
  double gamma;
  double concurrence;
  double f_tot;
} sr_fi_record;

typedef struct sr_qfim2 {
  double f_ss;
  double f_tt; /* may be +inf where the nuisance Jacobian diverges */
  double f_st;
  sr_nuisance tag;
} sr_qfim2;

typedef struct sr_precision_pair {
  double h_s;
  double h_nuisance;
} sr_precision_pair;

typedef struct sr_oracle_settings {
  int n_points;       /* power of two >= 1024; default 4096 */
  double halfwidth;   /* 0 = 8 sigma + s */
  double fd_step;     /* length units; 0 = 1e-5 sigma */
  double rank_cutoff; /* default 1e-12 */
} sr_oracle_settings;

typedef struct sr_numeric_qfim_report {
  sr_qfim2 qfim;
  double f_ts;         /* (theta, s) element, evaluated independently of f_st */
  int rank;            /* dimension of the projected representation */
  int n_diagnostics;   /* > 0 when the rank cutoff amplified round-off */
} sr_numeric_qfim_report;

/* One sweep row. Unpopulated fields are NaN. */
typedef struct sr_record {
  double s;
  double sigma;
  double theta;
  double gamma;
  double concurrence;
  double d;
  double f_tot;
  double f_ss;
  double f_tt;
  double f_st;
  double h_s;
  double h_nuisance;
  double oracle_delta;
  const char* status; /* valid while the owning result lives */
} sr_record;

typedef struct sr_sweep_spec sr_sweep_spec;
typedef struct sr_sweep_result sr_sweep_result;

SR_API const char* sr_version(void);
SR_API const char* sr_status_name(sr_status status);
/* Message of the last failing call on this thread; "" if none. */
SR_API const char* sr_last_error_message(void);
/* For SR_ERR_OUT_OF_REACH: the reachable maximum of the last failing call. */
SR_API double sr_last_error_c_max(void);

/* ---- state model ---- */
SR_API sr_status sr_overlap(double s, double sigma, sr_overlap_triple* out);
SR_API sr_status sr_coherence_of(double theta, double* out);
SR_API sr_status sr_concurrence_paper(const sr_params* p, double* out);
SR_API sr_status sr_concurrence_normalized(const sr_params* p, double* out);
SR_API sr_status sr_max_concurrence(double s, double sigma, double* out);
SR_API sr_status sr_theta_from_concurrence(double s, double sigma, double concurrence, double* out);
SR_API sr_status sr_spectral(const sr_params* p, sr_spectral_data* out);

/* ---- single-parameter Fisher information ---- */
SR_API sr_status sr_f_tot_coherence(double s, double sigma, double gamma, sr_fi_record* out);
SR_API sr_status sr_f_tot_concurrence(double s, double sigma, double concurrence, sr_fi_record* out);
SR_API sr_status sr_weighted_fi_reconstruct(const sr_params* p, sr_weighted_fi_variant variant, double* out);
/* Variant that reproduces sr_f_tot_coherence. */
SR_API sr_weighted_fi_variant sr_calibrated_weighted_fi_variant(void);

/* ---- two-parameter QFIM ---- */
SR_API sr_status sr_rho4(const sr_params* p, double out[16]);
SR_API sr_status sr_drho_ds(const sr_params* p, double out[16]);
SR_API sr_status sr_drho_dtheta(const sr_params* p, double out[16]);
SR_API sr_status sr_sld_pair(const sr_params* p, double l_s[16], double l_theta[16]);
SR_API sr_status sr_qfim(const sr_params* p, sr_qfim2* out);
SR_API sr_status sr_precision(const sr_params* p, sr_precision_pair* out);
SR_API sr_status sr_qfim_gamma(double s, double sigma, double gamma, sr_qfim2* out);
SR_API sr_status sr_precision_gamma(double s, double sigma, double gamma, sr_precision_pair* out);
SR_API sr_status sr_qfim_concurrence(double s, double sigma, double concurrence, sr_qfim2* out);
SR_API sr_status sr_precision_concurrence(double s, double sigma, double concurrence, sr_precision_pair* out);
SR_API sr_status sr_commutator_expectation(const sr_params* p, double* out);

/* ---- numeric oracle ---- */
SR_API void sr_oracle_settings_default(sr_oracle_settings* out);
/* settings may be NULL for defaults. */
SR_API sr_status sr_numeric_qfim(const sr_params* p, const sr_oracle_settings* settings, sr_numeric_qfim_report* out);
SR_API sr_status sr_numeric_concurrence(const sr_params* p, const sr_oracle_settings* settings, double* out);
SR_API sr_status sr_numeric_overlap(double s, double sigma, const sr_oracle_settings* settings, double* out);
SR_API sr_status sr_numeric_eigvec_derivative_norms(double s, double sigma, const sr_oracle_settings* settings,
                                                    double* a3, double* a4);
SR_API sr_status sr_numeric_weighted_fi(const sr_params* p, const sr_oracle_settings* settings, double* out);

/* ---- sweeps ---- */
/* A spec starts from the defaults of (mode, nuisance). */
SR_API sr_status sr_sweep_spec_create(sr_sweep_mode mode, sr_nuisance nuisance, sr_sweep_spec** out);
/* Figure presets: fig1a, fig1b, fig1c, fig2a, fig2b. */
SR_API sr_status sr_sweep_spec_from_preset(const char* name, sr_sweep_spec** out);
SR_API void sr_sweep_spec_destroy(sr_sweep_spec* spec);
SR_API sr_status sr_sweep_spec_set_sigma(sr_sweep_spec* spec, double sigma);
SR_API sr_status sr_sweep_spec_set_phi(sr_sweep_spec* spec, double phi);
/* NaN bounds and steps <= 0 keep the current value. */
SR_API sr_status sr_sweep_spec_set_s_range(sr_sweep_spec* spec, double min, double max, int steps);
SR_API sr_status sr_sweep_spec_set_nuisance_range(sr_sweep_spec* spec, double min, double max, int steps);
/* Changes only axes that have more than one point; steps <= 0 keeps. */
SR_API sr_status sr_sweep_spec_set_resolution(sr_sweep_spec* spec, int s_steps, int nuisance_steps);
SR_API sr_status sr_sweep_spec_set_oracle(sr_sweep_spec* spec, int enabled, const sr_oracle_settings* settings);
SR_API sr_status sr_sweep_spec_set_threads(sr_sweep_spec* spec, unsigned threads);

SR_API sr_status sr_sweep_run(const sr_sweep_spec* spec, sr_sweep_result** out);
SR_API void sr_sweep_result_destroy(sr_sweep_result* result);
SR_API size_t sr_sweep_result_size(const sr_sweep_result* result);
SR_API sr_status sr_sweep_result_record(const sr_sweep_result* result, size_t index, sr_record* out);
/* *has_value = 0 when no oracle comparison ran. */
SR_API sr_status sr_sweep_result_max_oracle_delta(const sr_sweep_result* result, double* out, int* has_value);
/* Returns 1 when any oracle delta exceeds the 1e-6 tolerance. */
SR_API int sr_sweep_result_verification_failed(const sr_sweep_result* result);
/* *out receives a NUL-terminated buffer to release with sr_string_free. */
SR_API sr_status sr_sweep_result_render(const sr_sweep_result* result, sr_format format, char** out, size_t* length);
SR_API sr_status sr_sweep_result_emit(const sr_sweep_result* result, sr_format format, const char* path);
SR_API void sr_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* SUPERRES_SUPERRES_H */
