/* muskat.h - C interface to the Muskat contour-dynamics laboratory.
 *
 * Opaque handles + status codes; every function is safe to call from C.
 * Error details for the calling thread are available via muskat_last_error().
 */
#ifndef MUSKAT_H
#define MUSKAT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct muskat_config muskat_config;
typedef struct muskat_curve muskat_curve;

typedef enum {
  MUSKAT_OK = 0,
  MUSKAT_ERR_INVALID = 1,   /* bad arguments or configuration */
  MUSKAT_ERR_NUMERICAL = 2, /* blow-up, arc-chord violation, degenerate data */
  MUSKAT_ERR_CHECKS = 3,    /* verification checks failed */
  MUSKAT_ERR_IO = 4
} muskat_status;

const char* muskat_version(void);
/* thread-local message for the most recent failure */
const char* muskat_last_error(void);

/* ---- configuration ---------------------------------------------------- */
muskat_config* muskat_config_create(void);
muskat_status muskat_config_load(muskat_config* cfg, const char* path);
muskat_status muskat_config_parse(muskat_config* cfg, const char* text);
muskat_status muskat_config_set(muskat_config* cfg, const char* key, const char* value);
/* canonical "key = value" echo of the full configuration */
muskat_status muskat_config_text(const muskat_config* cfg, char* buf, size_t bufsize);
void muskat_config_free(muskat_config* cfg);

/* ---- curves ------------------------------------------------------------ */
muskat_curve* muskat_curve_preset(const muskat_config* cfg);
muskat_curve* muskat_curve_load_csv(const char* path, double rho_bar);
muskat_status muskat_curve_save_csv(const muskat_curve* curve, const char* path);
muskat_status muskat_curve_save_json(const muskat_curve* curve, const char* path);
int muskat_curve_size(const muskat_curve* curve);
muskat_status muskat_curve_arc_chord(const muskat_curve* curve, double* out_sup);
muskat_status muskat_curve_rt_range(const muskat_curve* curve, double* out_min, double* out_max);
/* roots of d_alpha f1; returns the count, fills up to cap entries */
muskat_status muskat_curve_turnovers(const muskat_curve* curve, double* roots, int cap, int* out_count);
void muskat_curve_free(muskat_curve* curve);

/* ---- runs --------------------------------------------------------------- */
/* evolve the configured scenario; writes series.csv etc. under out_dir */
muskat_status muskat_run_scenario(const muskat_config* cfg, const char* out_dir);
/* full verification suite; JSON bundle to out_json (optional), failure count out */
muskat_status muskat_run_verify(const muskat_config* cfg, const char* out_json, int* out_failed);
/* complex extension of the configured curve + residual reports */
muskat_status muskat_run_extend(const muskat_config* cfg, const char* out_json, int* out_failed);
/* summary of a finished run directory, JSON text into buf */
muskat_status muskat_run_report(const char* run_dir, char* buf, size_t bufsize);

#ifdef __cplusplus
}
#endif

#endif /* MUSKAT_H */
