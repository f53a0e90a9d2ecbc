/*
 * mbdiff — one-dimensional moving-boundary diffusion solver.
 *
 * C interface to the fixed-domain Galerkin/backward-Euler scheme for
 * diffusant uptake with a kinetically driven moving interface. All handles
 * are opaque; every function that can fail returns an mbdiff_status, with a
 * human-readable detail available from mbdiff_last_error() on the calling
 * thread.
 *
 * Quantities flowing through this interface are dimensionless: time tau,
 * space y in [0, 1], interface position w (w(0) = 1), concentration u.
 * Parameter handles built from a physical spec remember the unit scales, so
 * results map back to bench units via mbdiff_params_scales().
 */

#ifndef MBDIFF_H
#define MBDIFF_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mbdiff_status {
  MBDIFF_OK = 0,
  MBDIFF_ERR_INVALID_ARGUMENT = 1,
  /* The step guards fired (nonpositive or runaway interface, singular
   * system, or non-finite nodal values). Simulation calls still hand out
   * the partial trajectory. */
  MBDIFF_ERR_STABILITY_BREAKDOWN = 2,
  MBDIFF_ERR_INTERNAL = 3
} mbdiff_status;

const char* mbdiff_version(void);

/* Detail message for the most recent failing call on this thread. */
const char* mbdiff_last_error(void);

/* ------------------------------------------------------------------ */
/* Coefficient functions                                               */

typedef enum mbdiff_coeff_kind {
  MBDIFF_COEFF_CONSTANT = 0,
  MBDIFF_COEFF_LINEAR = 1, /* value * x */
  MBDIFF_COEFF_TABLE = 2   /* piecewise linear, clamped outside the range */
} mbdiff_coeff_kind;

typedef struct mbdiff_coeff_spec {
  mbdiff_coeff_kind kind;
  double value;      /* constant value or linear slope */
  const double* xs;  /* table breakpoints, strictly increasing */
  const double* ys;
  size_t n_points;
} mbdiff_coeff_spec;

/* ------------------------------------------------------------------ */
/* Parameters                                                          */

/* Bench units: lengths mm, times min, concentrations gram/mm^3. */
typedef struct mbdiff_physical_spec {
  double diffusivity;          /* D */
  double surface_rate;         /* beta */
  double henry;                /* H */
  double kinetic_coefficient;  /* a0 */
  double initial_position;     /* s0 */
  double concentration_scale;  /* m0 */
  double max_position;         /* L */
  double final_time;           /* Tf */
  mbdiff_coeff_spec boundary_concentration; /* b(t) */
  mbdiff_coeff_spec interface_resistance;   /* sigma(s) */
  mbdiff_coeff_spec initial_concentration;  /* m(0, x) */
  int has_resistance_plateau;
  double resistance_plateau;
} mbdiff_physical_spec;

typedef struct mbdiff_dimensionless_spec {
  double biot;               /* Bi */
  double interface_kinetics; /* A0 */
  double henry;              /* H */
  double final_time;         /* T */
  double h_max;              /* guard on the interface excursion */
  mbdiff_coeff_spec boundary_value;       /* tau -> b/m0 */
  mbdiff_coeff_spec interface_resistance; /* h -> sigma/m0 */
  mbdiff_coeff_spec initial_profile;      /* u0(y) */
  int has_resistance_plateau;
  double resistance_plateau;
} mbdiff_dimensionless_spec;

typedef struct mbdiff_params mbdiff_params;

mbdiff_status mbdiff_params_from_physical(const mbdiff_physical_spec* spec,
                                          mbdiff_params** out);
mbdiff_status mbdiff_params_from_dimensionless(const mbdiff_dimensionless_spec* spec,
                                               mbdiff_params** out);
void mbdiff_params_destroy(mbdiff_params* params);

mbdiff_status mbdiff_params_groups(const mbdiff_params* params, double* biot,
                                   double* interface_kinetics, double* henry,
                                   double* final_time, double* h_max);

/* t = time_scale * tau, s = length_scale * w, m = concentration_scale * u.
 * All 1.0 for handles built from a dimensionless spec. */
mbdiff_status mbdiff_params_scales(const mbdiff_params* params, double* time_scale,
                                   double* length_scale, double* concentration_scale);

mbdiff_status mbdiff_params_eval_boundary(const mbdiff_params* params, double tau,
                                          double* out);
mbdiff_status mbdiff_params_eval_resistance(const mbdiff_params* params, double h,
                                            double* out);

/* Admissibility report: *passed is 1 when no assumption is violated;
 * *text (optional) receives a newline-separated report to release with
 * mbdiff_string_free. Warnings do not clear *passed. */
mbdiff_status mbdiff_params_validate(const mbdiff_params* params, int* passed,
                                     char** text);

void mbdiff_string_free(char* text);

/* ------------------------------------------------------------------ */
/* Simulation                                                          */

typedef struct mbdiff_trajectory mbdiff_trajectory;

/* Runs the scheme on a uniform mesh. dt is the dimensionless step and must
 * tile the final time T. Interface values are recorded at every step; nodal
 * profiles at multiples of record_every (>= 1) plus the final step. On
 * MBDIFF_ERR_STABILITY_BREAKDOWN, *out carries the partial trajectory. */
mbdiff_status mbdiff_simulate(const mbdiff_params* params, size_t n_nodes, double dt,
                              size_t record_every, mbdiff_trajectory** out);

size_t mbdiff_trajectory_step_count(const mbdiff_trajectory* traj); /* states 0..M */
size_t mbdiff_trajectory_node_count(const mbdiff_trajectory* traj);
size_t mbdiff_trajectory_record_stride(const mbdiff_trajectory* traj);
double mbdiff_trajectory_dt(const mbdiff_trajectory* traj);
double mbdiff_trajectory_time(const mbdiff_trajectory* traj, size_t step);
double mbdiff_trajectory_interface(const mbdiff_trajectory* traj, size_t step);
int mbdiff_trajectory_has_profile(const mbdiff_trajectory* traj, size_t step);
mbdiff_status mbdiff_trajectory_profile(const mbdiff_trajectory* traj, size_t step,
                                        double* buf, size_t len);
mbdiff_status mbdiff_trajectory_mesh_nodes(const mbdiff_trajectory* traj, double* buf,
                                           size_t len);
double mbdiff_trajectory_max_residual(const mbdiff_trajectory* traj);
int mbdiff_trajectory_interface_monotone(const mbdiff_trajectory* traj);

/* Discrete energy max_n ||U^n||^2 + dt * sum_j ||dU^j/dy||^2; needs a
 * record stride of 1. */
mbdiff_status mbdiff_trajectory_energy(const mbdiff_trajectory* traj, double* out);

void mbdiff_trajectory_destroy(mbdiff_trajectory* traj);

/* ------------------------------------------------------------------ */
/* Convergence studies                                                 */

typedef struct mbdiff_table mbdiff_table;

/* Fixed dt, meshes from node_counts (ascending) against a reference mesh
 * with reference_nodes nodes. On stability breakdown *out carries the rows
 * finished before the failure. */
mbdiff_status mbdiff_space_study(const mbdiff_params* params, double dt,
                                 const size_t* node_counts, size_t n_counts,
                                 size_t reference_nodes, mbdiff_table** out);

/* Fixed mesh; rows use dt / 2^j for j = 0..halvings against a reference at
 * dt / reference_divisor. */
mbdiff_status mbdiff_time_study(const mbdiff_params* params, size_t n_nodes, double dt,
                                size_t halvings, size_t reference_divisor,
                                mbdiff_table** out);

size_t mbdiff_table_rows(const mbdiff_table* table);

/* has_order_* is 0 on the last row (and wherever an order is undefined). */
mbdiff_status mbdiff_table_row(const mbdiff_table* table, size_t row, double* resolution,
                               double* err_u, int* has_order_u, double* order_u,
                               double* err_w, int* has_order_w, double* order_w);

void mbdiff_table_destroy(mbdiff_table* table);

/* log(err_coarse / err_fine) / log(ratio); errors must be positive. */
mbdiff_status mbdiff_observed_order(double err_coarse, double err_fine, double ratio,
                                    double* out);

/* ------------------------------------------------------------------ */
/* Invariant checks                                                    */

/* Runs the scheme's invariant suite (constant fixed point, interface
 * monotonicity, nodal bounds, energy stability across a mesh ladder,
 * bitwise determinism). *passed is 1 when every check holds; *text
 * (optional) receives the per-check report. */
mbdiff_status mbdiff_check_invariants(const mbdiff_params* params, size_t n_nodes,
                                      double dt, int* passed, char** text);

#ifdef __cplusplus
}
#endif

#endif /* MBDIFF_H */
