/* dlpkit — model-search toolkit: Hansel-chain monotone function restoration,
 * polynomial model orders, coarse-to-fine shape detection, interval
 * localization, a small fact reasoner, and trace visualization.
 *
 * C API conventions:
 *   - functions return dlpk_status; DLPK_OK is success
 *   - dlpk_last_error() returns a thread-local message for the last failure
 *   - text outputs are heap strings released with dlpk_text_free()
 *   - opaque handles are released with their matching *_free()
 *   - on failure, output parameters are left untouched, except where a
 *     function documents that it produces a report alongside a domain
 *     failure (DLPK_ERR_NOT_FOUND)
 */
#ifndef DLPKIT_H
#define DLPKIT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dlpk_status {
  DLPK_OK = 0,
  DLPK_ERR_INVALID_ARGUMENT = 1,
  DLPK_ERR_PARSE = 2,
  DLPK_ERR_IO = 3,
  DLPK_ERR_INCONSISTENT = 4, /* non-monotone oracle or trace */
  DLPK_ERR_ABORTED = 5,      /* interactive oracle gave up */
  DLPK_ERR_NOT_FOUND = 6     /* domain failure: nothing derivable/localizable */
} dlpk_status;

const char* dlpk_status_name(dlpk_status status);
const char* dlpk_last_error(void);
void dlpk_text_free(char* text);

/* ---- Hansel chain covers ------------------------------------------------ */

typedef struct dlpk_chains dlpk_chains;

dlpk_status dlpk_chains_build(int n, dlpk_chains** out);
void dlpk_chains_free(dlpk_chains* chains);
int dlpk_chains_count(const dlpk_chains* chains);
int dlpk_chains_length(const dlpk_chains* chains, int index);
/* one chain per line, elements joined by " < " */
dlpk_status dlpk_chains_text(const dlpk_chains* chains, char** out_text);

dlpk_status dlpk_shannon_bound(int n, long long* out);

/* ---- monotone Boolean function restoration ------------------------------ */

typedef struct dlpk_restore dlpk_restore;

/* Answers f(bits) with 0 or 1; a negative return aborts the restoration. */
typedef int (*dlpk_oracle_cb)(const char* bits, void* user);

/* oracle_spec: "expr:<formula>" (AND/OR/0/1 over x1..xn), "table:<path>"
 * (one "bits value" pair per line, total), or "callback" with cb set.
 * trace_path may be NULL; on abort the partial trace is still written. */
dlpk_status dlpk_restore_run(int n, const char* oracle_spec, dlpk_oracle_cb cb, void* user,
                             const char* trace_path, dlpk_restore** out);
void dlpk_restore_free(dlpk_restore* r);
long long dlpk_restore_queries(const dlpk_restore* r);
long long dlpk_restore_bound(const dlpk_restore* r);
/* query count, Shannon bound, per-chain counts and the lower units as DNF */
dlpk_status dlpk_restore_summary(const dlpk_restore* r, char** out_text);

/* ---- polynomial model orders -------------------------------------------- */

/* vars_csv: comma-separated variable names, e.g. "x,y". Prints NUC/HP/HPV/SP
 * for both polynomials and the three order verdicts. */
dlpk_status dlpk_models_order(const char* vars_csv, const char* poly_a, const char* poly_b,
                              char** out_text);

/* ---- noisy scenes and shape search --------------------------------------- */

typedef struct dlpk_config {
  double threshold;     /* engine acceptance level; < 0 = default */
  int max_depth;        /* refinement depth cap; < 0 = default */
  double refine_factor; /* stride shrink per level; <= 0 = default (2) */
  int window;           /* refinement window in parent strides; < 0 = default (1) */
  int orientation;      /* 0 = maximize, 1 = minimize */
  double kappa;         /* measure level per stride unit; <= 0 = default (1.5) */
  double shrink_rho;    /* interval sigma shrink; <= 0 = default (0.7) */
  uint64_t seed;
  double ddt_threshold; /* DDT density gap threshold t; < 0 = default */
  double min_radius;    /* detection size floor; < 0 = default */
} dlpk_config;

void dlpk_config_init(dlpk_config* cfg);

/* shapes_spec: ';'-separated list of "circle:cx,cy,r" / "lens:xa,xg,yb,h",
 * or "" for a uniform cloud. Writes one {"x":..,"y":..} JSON object per line. */
dlpk_status dlpk_scene_gen(int n, int m, const char* shapes_spec, double contrast,
                           uint64_t seed, const char* out_path, char** summary_out);

/* algo: "brute" | "dlp"; kind: "circle" | "lens". trace_path only for dlp. */
dlpk_status dlpk_shapes_detect(const char* algo, const char* kind, int n, const char* in_path,
                               const dlpk_config* cfg, const char* trace_path,
                               char** report_out);

/* sizes_spec: comma-separated "n:m" pairs, e.g. "10:1,100:10". */
dlpk_status dlpk_shapes_scaling(const char* kind, const char* sizes_spec, int allow_huge,
                                uint64_t seed, char** report_out);

/* ---- interval localization ----------------------------------------------- */

/* Localizes a hidden interval [a,b] in [0,10]. Returns DLPK_ERR_NOT_FOUND
 * (with the report still produced) when localization fails. */
dlpk_status dlpk_interval_demo(double a, double b, int m, double contrast, double resolution,
                               const dlpk_config* cfg, const char* trace_path,
                               char** report_out);

/* ---- reasoner ------------------------------------------------------------ */

/* rules_csv: subset of "ca,da,dca,ia,ta" or NULL for all. Returns
 * DLPK_ERR_NOT_FOUND with a "not derivable" report when the query is not in
 * the closure. */
dlpk_status dlpk_reason(const char* kb_path, const char* query, int depth,
                        const char* rules_csv, char** report_out);

/* ---- visualization -------------------------------------------------------- */

/* format: "svg" | "text"; arrange: "chronological" | "pareto";
 * highlight_weight < 0 disables highlighting. */
dlpk_status dlpk_viz_render(const char* trace_path, const char* format, const char* arrange,
                            int highlight_weight, char** doc_out);

#ifdef __cplusplus
}
#endif

#endif /* DLPKIT_H */
