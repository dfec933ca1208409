/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef SLOWLIGHT_H
#define SLOWLIGHT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum {
  SL_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SL_STATUS_NULL_POINTER = 1,
  /**
   * Argument out of range, bad config value, or model range exceeded.
   */
  SL_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A file could not be read.
   */
  SL_STATUS_IO = 3,
  /**
   * A catalog file could not be parsed.
   */
  SL_STATUS_PARSE = 4,
  /**
   * A numerical guard fired (validity limit, grid too small, no root).
   */
  SL_STATUS_NUMERICAL = 5,
  /**
   * Internal error; the library caught a panic.
   */
  SL_STATUS_INTERNAL = 6,
} SlStatus;

typedef enum {
  SL_PULSE_SHAPE_GAUSSIAN = 0,
  /**
   * Rectangular spectrum.
   */
  SL_PULSE_SHAPE_SINC = 1,
} SlPulseShape;

typedef enum {
  SL_REGIME_DISPERSION_DOMINATED = 0,
  SL_REGIME_ABSORPTION_DOMINATED = 1,
} SlRegime;

/**
 * Opaque vapor cell handle.
 */
typedef struct SlCell SlCell;

/**
 * Outcome of one propagation.
 */
typedef struct {
  /**
   * Peak delay, s.
   */
  double delay_s;
  double fractional_delay;
  double fractional_broadening;
  /**
   * Intensity FWHM, s.
   */
  double input_fwhm_s;
  double output_fwhm_s;
  double amplitude_distortion;
  double phase_distortion;
  double leakage;
  /**
   * Fraction of input energy absorbed.
   */
  double absorbed;
} SlReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *sl_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sl_version(void);

/**
 * Cell with the bundled two-line rubidium catalog. With `calibrate` the
 * density is rescaled to the 10 ps reference delay.
 *
 * # Safety
 * `out` must be a valid pointer to write the handle to.
 */
SlStatus sl_cell_new_rubidium(double temperature_c,
                              double length_m,
                              uint32_t passes,
                              bool calibrate,
                              SlCell **out);

/**
 * Cell from a catalog file (TOML lines plus density model).
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid for writes.
 */
SlStatus sl_cell_load(const char *path,
                      double temperature_c,
                      double length_m,
                      uint32_t passes,
                      bool calibrate,
                      SlCell **out);

/**
 * Releases a cell. Null is ignored.
 *
 * # Safety
 * `cell` must come from this library and not be used afterwards.
 */
void sl_cell_free(SlCell *cell);

/**
 * Moves the cell to a new temperature, keeping catalog and geometry.
 *
 * # Safety
 * `cell` must be a live handle.
 */
SlStatus sl_cell_set_temperature(SlCell *cell, double temperature_c);

/**
 * Atoms per m^3.
 *
 * # Safety
 * `cell` must be a live handle; `out` valid for writes.
 */
SlStatus sl_cell_number_density(const SlCell *cell, double *out);

/**
 * Susceptibility at `wavelength_nm`; Im > 0 is absorption.
 *
 * # Safety
 * `cell` must be a live handle; `re` and `im` valid for writes.
 */
SlStatus sl_cell_susceptibility(const SlCell *cell, double wavelength_nm, double *re, double *im);

/**
 * Group index at `wavelength_nm`.
 *
 * # Safety
 * `cell` must be a live handle; `out` valid for writes.
 */
SlStatus sl_cell_group_index(const SlCell *cell, double wavelength_nm, double *out);

/**
 * Group delay relative to vacuum over the full interaction length, s.
 *
 * # Safety
 * `cell` must be a live handle; `out` valid for writes.
 */
SlStatus sl_cell_group_delay(const SlCell *cell, double wavelength_nm, double *out);

/**
 * Group velocity dispersion, s^2/m.
 *
 * # Safety
 * `cell` must be a live handle; `out` valid for writes.
 */
SlStatus sl_cell_gvd(const SlCell *cell, double wavelength_nm, double *out);

/**
 * Intensity transmission over the full interaction length.
 *
 * # Safety
 * `cell` must be a live handle; `out` valid for writes.
 */
SlStatus sl_cell_transmission(const SlCell *cell, double wavelength_nm, double *out);

/**
 * Wavelength of zero GVD between the lines of the widest gap, nm.
 *
 * # Safety
 * `cell` must be a live handle; `out` valid for writes.
 */
SlStatus sl_cell_gvd_zero_nm(const SlCell *cell, double *out);

/**
 * Propagates one pulse of intensity FWHM `t0_s` through the cell. A
 * `center_nm` of zero or NaN centers the pulse at the GVD zero. The grid
 * is sized automatically.
 *
 * # Safety
 * `cell` must be a live handle; `out` valid for writes.
 */
SlStatus sl_propagate(const SlCell *cell,
                      SlPulseShape shape,
                      double t0_s,
                      double center_nm,
                      SlReport *out);

/**
 * Absorption-to-dispersion length ratio L_A/L_D for a symmetric pair of
 * lines. `regime` may be null.
 *
 * # Safety
 * `ratio` must be valid for writes; `regime` null or valid for writes.
 */
SlStatus sl_regime_ratio(double t0_s,
                         double linewidth,
                         double half_separation,
                         double *ratio,
                         SlRegime *regime);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SLOWLIGHT_H */
