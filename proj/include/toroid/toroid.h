/* C interface to the toroid library. All lengths in nm, charges in e,
 * energies in eV, potentials in V. Every function returns a tor_status;
 * tor_last_error() gives the message of the most recent failure on the
 * calling thread. */
#ifndef TOROID_TOROID_H
#define TOROID_TOROID_H

#include <stddef.h>
#include <stdint.h>

#if defined(TOROID_BUILDING)
#define TOROID_API __attribute__((visibility("default")))
#else
#define TOROID_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tor_status {
  TOR_OK = 0,
  TOR_E_DOMAIN = 1,
  TOR_E_DEGENERATE_TOROID = 2,
  TOR_E_NEAR_SINGULAR = 3,
  TOR_E_OVERFLOW = 4,
  TOR_E_TRUNCATION = 5,
  TOR_E_OUT_OF_REGION = 6,
  TOR_E_COINCIDENT = 7,
  TOR_E_COORD_SINGULARITY = 8,
  TOR_E_NO_ROOT = 9,
  TOR_E_RANGE_EXCEEDED = 10,
  TOR_E_SOLVER = 11,
  TOR_E_MESH = 12,
  TOR_E_UNSUPPORTED = 13,
  TOR_E_INVALID_ARGUMENT = 14,
  TOR_E_INTERNAL = 99
} tor_status;

typedef enum tor_dipole_unit {
  TOR_UNIT_E2NM2 = 0, /* (e nm)^2 */
  TOR_UNIT_DEBYE2 = 1,
  TOR_UNIT_SI = 2 /* (C m)^2 */
} tor_dipole_unit;

typedef struct tor_greens tor_greens;
typedef struct tor_bem tor_bem;
typedef struct tor_bem_solution tor_bem_solution;
typedef struct tor_validation_report tor_validation_report;

typedef struct tor_geometry {
  double a, b, f, xi0, cosh_xi0;
} tor_geometry;

typedef struct tor_diagnostics {
  int terms;
  double tail_bound;
  int far_source;
} tor_diagnostics;

/* Squared dipole fluctuations; only axial particles (d2x = d2y = 0) are
 * supported. */
typedef struct tor_particle {
  double d2x, d2y, d2z;
  tor_dipole_unit unit;
} tor_particle;

typedef struct tor_mixed_estimate {
  double value;
  double half_step;
  double richardson;
  int accuracy_warning;
} tor_mixed_estimate;

typedef struct tor_check {
  const char* name;   /* owned by the report */
  const char* detail; /* owned by the report */
  int passed;
  double measured;
  double threshold;
} tor_check;

TOROID_API const char* tor_version(void);
TOROID_API const char* tor_last_error(void);
TOROID_API const char* tor_status_string(tor_status status);

/* geometry */
TOROID_API tor_status tor_geometry_from_radii(double a, double b, tor_geometry* out);
TOROID_API tor_status tor_toroidal_to_cartesian(double f, double xi, double eta, double phi,
                                                double out_xyz[3]);
TOROID_API tor_status tor_cartesian_to_toroidal(double f, double x, double y, double z,
                                                double out_xi_eta_phi[3]);

/* P_{n-1/2}(z), Q_{n-1/2}(z) for n = 0..n_max into arrays of n_max + 1. */
TOROID_API tor_status tor_harmonics(double z, int n_max, double* p, double* q);
TOROID_API tor_status tor_max_safe_degree(double z, int* out);

/* Green's function handle. rel_tol <= 0 or n_cap <= 0 select defaults. */
TOROID_API tor_status tor_greens_create(double a, double b, double rel_tol, int n_cap,
                                        tor_greens** out);
TOROID_API void tor_greens_destroy(tor_greens* g);
TOROID_API tor_status tor_greens_geometry(const tor_greens* g, tor_geometry* out);

TOROID_API tor_status tor_inverse_distance(const tor_greens* g, double xi, double eta,
                                           double source_z, double* out,
                                           tor_diagnostics* diag);
TOROID_API tor_status tor_vh_potential(const tor_greens* g, double xi, double eta,
                                       double source_z, double charge, double* out,
                                       tor_diagnostics* diag);
/* Same at cylindrical (r, z). */
TOROID_API tor_status tor_vh_potential_rz(const tor_greens* g, double r, double z,
                                          double source_z, double charge, double* out,
                                          tor_diagnostics* diag);
TOROID_API tor_status tor_charge_energy(const tor_greens* g, double source_z, double charge,
                                        double* out, tor_diagnostics* diag);
TOROID_API tor_status tor_surface_residual(const tor_greens* g, double source_z,
                                           int n_samples, double* out);

/* dispersion */
TOROID_API tor_status tor_gh_mixed_derivative(const tor_greens* g, double z, double z_prime,
                                              double* out, tor_diagnostics* diag);
TOROID_API tor_status tor_vdw_energy(const tor_greens* g, const tor_particle* p, double zp,
                                     double* out, tor_diagnostics* diag);
TOROID_API tor_status tor_vdw_force(const tor_greens* g, const tor_particle* p, double zp,
                                    double* out, tor_diagnostics* diag);
TOROID_API tor_status tor_find_force_zero(const tor_greens* g, const tor_particle* p,
                                          double lo, double hi, double* out);
/* On TOR_E_RANGE_EXCEEDED, *bound holds the offending end of the range. */
TOROID_API tor_status tor_critical_ratio(double zp, double b, const tor_particle* p,
                                         double ratio_lo, double ratio_hi, double rel_tol,
                                         double* out, double* bound);
/* force_out and status_out are row-major n_zp x n_ratios; threads = 0 uses
 * the hardware concurrency. Cell failures land in status_out. */
TOROID_API tor_status tor_sweep_contour(const double* ratios, size_t n_ratios,
                                        const double* zp_over_b, size_t n_zp, double b,
                                        const tor_particle* p, double rel_tol, int n_cap,
                                        unsigned threads, double* force_out,
                                        int* status_out);

/* boundary-element reference solver */
TOROID_API tor_status tor_bem_create(double a, double b, int n_panels, tor_bem** out);
TOROID_API void tor_bem_destroy(tor_bem* bem);
TOROID_API tor_status tor_bem_condition(const tor_bem* bem, double* out);
TOROID_API tor_status tor_bem_solve(const tor_bem* bem, double source_z, double charge,
                                    tor_bem_solution** out);
TOROID_API void tor_bem_solution_destroy(tor_bem_solution* sol);
TOROID_API tor_status tor_bem_solution_vh(const tor_bem_solution* sol, double r, double z,
                                          double* out);
TOROID_API tor_status tor_bem_solution_total_charge(const tor_bem_solution* sol, double* out);
TOROID_API tor_status tor_bem_solution_residual(const tor_bem_solution* sol, double* out);
TOROID_API tor_status tor_bem_mixed_derivative(const tor_bem* bem, double z, double z_prime,
                                               double step, tor_mixed_estimate* out);

/* validation battery */
TOROID_API tor_status tor_validate(double a, double b, double rel_tol, int n_cap,
                                   int n_panels, uint64_t seed, tor_validation_report** out);
TOROID_API void tor_validation_report_destroy(tor_validation_report* rep);
TOROID_API size_t tor_validation_report_count(const tor_validation_report* rep);
TOROID_API tor_status tor_validation_report_check(const tor_validation_report* rep, size_t i,
                                                  tor_check* out);
TOROID_API int tor_validation_report_passed(const tor_validation_report* rep);
TOROID_API double tor_validation_report_seconds(const tor_validation_report* rep);

#ifdef __cplusplus
}
#endif

#endif
