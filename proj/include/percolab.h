/* C interface to the percolab core. Handles are opaque; every entry point
 * returns a status code and leaves a human-readable message retrievable with
 * plab_last_error() on failure. */
#ifndef PERCOLAB_H
#define PERCOLAB_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum plab_status {
    PLAB_OK = 0,
    PLAB_ERR_INVALID_ARGUMENT = 1,
    PLAB_ERR_OUT_OF_REGIME = 2,
    PLAB_ERR_SAMPLING_FAILURE = 3,
    PLAB_ERR_NO_ROOT = 4,
    PLAB_ERR_RESOURCE_LIMIT = 5,
    PLAB_ERR_IO = 6,
    PLAB_ERR_INTERNAL = 7
} plab_status;

typedef struct plab_experiment plab_experiment;
typedef struct plab_report plab_report;

const char* plab_version(void);
const char* plab_status_name(plab_status status);

/* Message describing the most recent failure on the calling thread. */
const char* plab_last_error(void);

/* Build an experiment from a JSON configuration (the schema the CLI uses:
 * mode, n, d, lambda|epsilon, p, trials, seed, graph, top_m, ds, smax, out,
 * workers, diameter, stride, explore_cap, delta, s_points, ...). */
plab_status plab_experiment_from_json(const char* config_json, plab_experiment** out);
void plab_experiment_free(plab_experiment* experiment);

/* Run the trials (records are persisted incrementally when the config names
 * an output directory) and produce a report. */
plab_status plab_experiment_run(plab_experiment* experiment, plab_report** out);

/* Summary JSON; the string is owned by the report handle. */
const char* plab_report_summary_json(const plab_report* report);
void plab_report_free(plab_report* report);

/* Prediction table as CSV. rows_json is a JSON array of objects with n, d
 * and either epsilon or lambda. Free the result with plab_string_free. */
plab_status plab_prediction_table_csv(const char* rows_json, char** out_csv);

/* Kolmogorov-Smirnov comparison of critical-mode records against excursion
 * oracle records (both records.jsonl paths). When out_dir is non-NULL, CDF
 * tables are written there. Free the JSON result with plab_string_free. */
plab_status plab_compare_window(const char* records_path, const char* oracle_path,
                                const char* out_dir, char** out_json);

void plab_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* PERCOLAB_H */
