#ifndef MONEYGAS_H
#define MONEYGAS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  MG_STATUS_OK = 0,
  MG_STATUS_NULL_POINTER = 1,
  MG_STATUS_INVALID_UTF8 = 2,
  MG_STATUS_CONFIG = 3,
  MG_STATUS_LEDGER = 4,
  MG_STATUS_BANKING = 5,
  MG_STATUS_STATS = 6,
  MG_STATUS_ENERGY = 7,
  MG_STATUS_IO = 8,
  MG_STATUS_BUFFER_TOO_SMALL = 9,
  MG_STATUS_PANIC = 10,
} MgStatus;

typedef enum {
  MG_TEMPERATURE_KIND_EXPONENTIAL = 0,
  MG_TEMPERATURE_KIND_TWO_SIDED = 1,
  MG_TEMPERATURE_KIND_NON_STATIONARY = 2,
} MgTemperatureKind;

/**
 * Simulation handle.
 */
typedef struct MgSimulation MgSimulation;

/**
 * Snapshot statistics. Money values are in cents; fields that do not
 * apply are NaN.
 */
typedef struct {
  uint64_t n_agents;
  uint64_t transactions;
  uint64_t applied;
  uint64_t blocked;
  int64_t total_cents;
  int64_t min_cents;
  int64_t max_cents;
  double mean;
  double variance;
  double skewness;
  double entropy;
  double fit_temperature;
  double ks;
  double t_plus;
  double t_minus;
  double gini;
} MgSummary;

/**
 * Theoretical temperatures in cents. `Exponential` fills `t_plus` and
 * `floor_cents`; `TwoSided` fills `t_plus` and `t_minus`.
 */
typedef struct {
  MgTemperatureKind kind;
  double t_plus;
  double t_minus;
  int64_t floor_cents;
} MgTemperatures;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a simulation from scenario-file text.
 *
 * # Safety
 * `scenario` must be a NUL-terminated string and `out` a valid pointer.
 */
MgStatus mg_simulation_new_from_scenario(const char *scenario, MgSimulation **out);

/**
 * Runs `count` more transactions.
 *
 * # Safety
 * `sim` must come from [`mg_simulation_new_from_scenario`].
 */
MgStatus mg_simulation_step(MgSimulation *sim, uint64_t count);

/**
 * Number of agents, or 0 for a null handle.
 *
 * # Safety
 * `sim` must be null or come from [`mg_simulation_new_from_scenario`].
 */
uintptr_t mg_simulation_agent_count(const MgSimulation *sim);

/**
 * Copies every balance, in cents, into `out[0..len]`.
 *
 * # Safety
 * `out` must be valid for `len` writes.
 */
MgStatus mg_simulation_balances(const MgSimulation *sim, int64_t *out, uintptr_t len);

/**
 * Sum of all balances in cents.
 *
 * # Safety
 * `sim` and `out` must be valid pointers.
 */
MgStatus mg_simulation_total(const MgSimulation *sim, int64_t *out);

/**
 * Statistics of the current balances.
 *
 * # Safety
 * `sim` and `out` must be valid pointers.
 */
MgStatus mg_simulation_summary(const MgSimulation *sim, MgSummary *out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `sim` must be null or an unreleased handle.
 */
void mg_simulation_free(MgSimulation *sim);

/**
 * Gini coefficient of `values[0..len]`, which must be non-negative.
 *
 * # Safety
 * `values` must be valid for `len` reads and `out` for one write.
 */
MgStatus mg_gini(const double *values, uintptr_t len, double *out);

/**
 * Population-weighted Gini of per-capita values.
 *
 * # Safety
 * `kw_per_capita` and `population` must be valid for `len` reads.
 */
MgStatus mg_weighted_gini(const double *kw_per_capita,
                          const uint64_t *population,
                          uintptr_t len,
                          double *out);

/**
 * `x + (1 - x) ln(1 - x)` for `x` in `[0, 1]`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
MgStatus mg_exponential_lorenz(double x, double *out);

/**
 * Theoretical temperatures of a scenario given as text.
 *
 * # Safety
 * `scenario` must be NUL-terminated and `out` valid for one write.
 */
MgStatus mg_theoretical_temperatures(const char *scenario, MgTemperatures *out);

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *mg_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *mg_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MONEYGAS_H */
