/* C interface to the dirwave library.
 *
 * Opaque handles are created by *_create functions and released with the
 * matching *_free. Every fallible call returns a dw_status; on failure
 * dw_last_error() describes the problem (thread-local, valid until the next
 * failing call on the same thread). Strings returned through char** are
 * allocated by the library and released with dw_string_free.
 */
#ifndef DIRWAVE_H
#define DIRWAVE_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(DIRWAVE_BUILDING)
#    define DW_API __declspec(dllexport)
#  else
#    define DW_API __declspec(dllimport)
#  endif
#else
#  define DW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dw_status {
  DW_OK = 0,
  DW_ERR_INVALID_ARGUMENT = 1,
  DW_ERR_NON_LOCALIZABLE = 2,
  DW_ERR_NON_FINITE = 3,
  DW_ERR_NOT_CONVERGED = 4,
  DW_ERR_ENVELOPE_SINGULAR = 5,
  DW_ERR_NULL_SPINOR = 6,
  DW_ERR_OVERFLOW = 7,
  DW_ERR_NO_CONVENTION = 8,
  DW_ERR_OUT_OF_RANGE = 9,
  DW_ERR_NON_MONOTONE = 10,
  DW_ERR_IO = 11,
  DW_ERR_INTERNAL = 99
} dw_status;

typedef enum dw_branch {
  DW_BRANCH_UNCLASSIFIED = 0,
  DW_BRANCH_SINGULAR_PLUS = 1,
  DW_BRANCH_SINGULAR_MINUS = 2,
  DW_BRANCH_REGULAR = 3,
  DW_BRANCH_DEGENERATE = 4
} dw_branch;

typedef struct dw_units dw_units;
typedef struct dw_state dw_state;
typedef struct dw_sweep_config dw_sweep_config;

typedef struct dw_params {
  double omega;
  double h;
  double hz;
  double e0;
} dw_params;

typedef struct dw_units_info {
  double wavelength;         /* cm */
  double frequency;          /* Hz, c / wavelength */
  double compton_wavelength; /* cm */
  double bohr_magneton;      /* erg / G */
  double omega;              /* 2 pi lambdabar / lambda */
} dw_units_info;

typedef struct dw_resonance {
  double g;
  double e0;
  int has_fields;           /* set when a units handle was supplied */
  double angular_frequency; /* rad / s */
  double hz_gauss;          /* hbar Omega = g mu Hz */
} dw_resonance;

typedef struct dw_root {
  double energy;
  double offset; /* energy - E0 */
  double p;
  double lab_energy;
  double residual;
  int branch; /* dw_branch */
  int converged;
} dw_root;

typedef struct dw_state_info {
  double d;
  double d2;
  double log_norm;
  double energy;
  double lab_energy;
  double p;
  int branch;
} dw_state_info;

typedef struct dw_residual_result {
  double relative_residual;
  double convergence_ratio; /* finite-difference mode only, else 0 */
  size_t points;
} dw_residual_result;

typedef struct dw_observables {
  double norm;
  double center_x;
  double center_y;
  double diameter_wavelengths;
  double uncertainty_x;
  double uncertainty_y;
  double energy_time;
  double energy_hamiltonian;
  double momentum_canonical[3];
  double momentum_kinetic[3];
  double spin[3];
} dw_observables;

typedef struct dw_g_estimate {
  double g;
  double lower_g;
  double upper_g;
  size_t lower_row;
  size_t upper_row;
} dw_g_estimate;

DW_API const char *dw_version(void);
DW_API const char *dw_last_error(void);
DW_API void dw_string_free(char *s);
DW_API const char *dw_branch_name(int branch);

/* Units. constants_path may be NULL (pinned CODATA table). */
DW_API dw_status dw_units_create(double wavelength_cm, const char *constants_path,
                                 dw_units **out);
DW_API dw_status dw_units_create_from_frequency(double frequency_hz,
                                                const char *constants_path,
                                                dw_units **out);
DW_API void dw_units_free(dw_units *u);
DW_API dw_status dw_units_info_get(const dw_units *u, dw_units_info *out);
DW_API dw_status dw_normalize_fields(const dw_units *u, double hz_gauss,
                                     double amplitude_gauss, dw_params *out);
DW_API dw_status dw_denormalize_fields(const dw_units *u, const dw_params *p,
                                       double *hz_gauss, double *amplitude_gauss);
DW_API dw_status dw_params_from_e0(double e0, double h, double omega, dw_params *out);
/* input_is_g: 1 when value is a g-factor, 0 when it is E0. units may be NULL. */
DW_API dw_status dw_resonance_convert(double value, int input_is_g, const dw_units *u,
                                      dw_resonance *out);

/* Characteristic equation; roots ascending and classified. */
DW_API dw_status dw_solve(double h, double e0, double p, double omega, dw_root out[3]);
DW_API dw_status dw_singular_momentum(double e0, double omega, double *p);
/* Writes up to capacity coefficients per sign; *count receives the number produced. */
DW_API dw_status dw_singular_series(double e0, double h, int order, double *plus,
                                    double *minus, size_t capacity, size_t *count);

/* Wave states. */
DW_API dw_status dw_state_create(const dw_params *p, int branch, dw_state **out);
DW_API void dw_state_free(dw_state *s);
DW_API dw_status dw_state_info_get(const dw_state *s, dw_state_info *out);
/* out receives 8 doubles (re, im per component) or 40 when derivatives != 0
 * (value, then d/dt, d/dx, d/dy, d/dz). */
DW_API dw_status dw_state_evaluate(const dw_state *s, double t, double x, double y,
                                   double z, int derivatives, double *out, size_t capacity);
DW_API dw_status dw_state_to_json(const dw_state *s, char **json);

/* Residual of the Dirac operator. signs (time, space, coupling, mass) may be NULL
 * for the printed convention. mode: 0 analytic, 1 finite difference. */
DW_API dw_status dw_residual(const dw_state *s, const int signs[4], int mode, double fd_step,
                             dw_residual_result *out, char **json);
DW_API dw_status dw_convention_audit(const dw_state *s, int *unique, char **json, char **csv);

/* Quadrature averages at phase Omega (t - z). json may be NULL. */
DW_API dw_status dw_observe(const dw_state *s, double phase, int order, dw_observables *out,
                            char **json);
DW_API dw_status dw_suppression_exponent(const dw_state *s, const dw_units *u,
                                         double *direct, double *closed_form);

/* Sweeps. */
DW_API dw_status dw_sweep_config_create(dw_sweep_config **out);
DW_API void dw_sweep_config_free(dw_sweep_config *c);
DW_API dw_status dw_sweep_config_set(dw_sweep_config *c, const char *key, const char *value);
DW_API dw_status dw_sweep_config_load(dw_sweep_config *c, const char *path);
/* Reads back csv, json, constants (paths) or desk_scale, threads. */
DW_API dw_status dw_sweep_config_get(const dw_sweep_config *c, const char *key, char **value);
/* Resolved parameters of grid point `index` (first selected branch and phase),
 * used by single-point commands that share the sweep config format. */
DW_API dw_status dw_sweep_config_point(const dw_sweep_config *c, size_t index, dw_params *out,
                                       int *branch, double *phase, int *quad_order);
DW_API dw_status dw_sweep_run(const dw_sweep_config *c, char **csv, char **json,
                              int *failures);
DW_API dw_status dw_extract_g(const char *csv, const char *column, double observed,
                              const char *branch, dw_g_estimate *out);

#ifdef __cplusplus
}
#endif

#endif /* DIRWAVE_H */
