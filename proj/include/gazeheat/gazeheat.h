/* C interface to the gazeheat library.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every call returns a gh_status; on failure the
 * message for the calling thread is available from gh_last_error() until the
 * next failing call on that thread. String results are written into
 * caller-provided buffers: the call stores the full length (excluding the
 * terminating NUL) in *len and copies as much as fits.
 */
#ifndef GAZEHEAT_H
#define GAZEHEAT_H

#include <stddef.h>
#include <stdint.h>

#if defined(GAZEHEAT_BUILDING)
#define GH_API __attribute__((visibility("default")))
#else
#define GH_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gh_status {
    GH_OK = 0,
    GH_ERR_USAGE = 1,    /* bad arguments or configuration */
    GH_ERR_DATA = 2,     /* unreadable or malformed input */
    GH_ERR_INTERNAL = 3  /* anything else */
} gh_status;

typedef struct gh_config gh_config;
typedef struct gh_corpus gh_corpus;
typedef struct gh_model gh_model;

GH_API const char* gh_version(void);
/* Message of the last failed call on this thread; empty after a successful call. */
GH_API const char* gh_last_error(void);

/* Configuration */
GH_API gh_status gh_config_new(gh_config** out);
GH_API gh_status gh_config_load(const char* path, gh_config** out);
GH_API gh_status gh_config_parse(const char* json_text, const char* base_dir, gh_config** out);
/* Overrides a dotted key; the value is JSON or a bare string. */
GH_API gh_status gh_config_set(gh_config* cfg, const char* key, const char* value);
GH_API gh_status gh_config_get(const gh_config* cfg, const char* key, char* buf, size_t cap, size_t* len);
GH_API gh_status gh_config_validate(const gh_config* cfg);
GH_API gh_status gh_config_dump(const gh_config* cfg, char* buf, size_t cap, size_t* len);
GH_API void gh_config_free(gh_config* cfg);

/* Recordings */
typedef struct gh_recording_info {
    size_t samples;
    size_t annotations;
    size_t dropped_rows;      /* gaze rows removed while parsing */
    size_t clamped_rows;      /* gaze rows with a coordinate clamped into bounds */
    size_t degenerate_boxes;  /* annotations with nonpositive size */
    size_t duplicate_timestamps;
    double rx, ry, rz;
    int64_t t_first_us, t_last_us;
} gh_recording_info;

/* Loads the recordings listed in the config, or generates the synthetic
 * corpus when the config selects it. */
GH_API gh_status gh_corpus_load(const gh_config* cfg, gh_corpus** out);
GH_API gh_status gh_corpus_size(const gh_corpus* corpus, size_t* n);
GH_API gh_status gh_corpus_id(const gh_corpus* corpus, size_t index, char* buf, size_t cap, size_t* len);
GH_API gh_status gh_corpus_info(const gh_corpus* corpus, size_t index, gh_recording_info* info);
/* Writes <dir>/<id>_gaze.csv and <dir>/<id>_annotations.csv per recording. */
GH_API gh_status gh_corpus_write_csv(const gh_corpus* corpus, const char* dir);
/* Writes the labeled windows of all recordings (window settings from cfg). */
GH_API gh_status gh_corpus_write_windows(const gh_corpus* corpus, const gh_config* cfg, const char* path);
/* Writes a binary feature file for the configured window and grid. */
GH_API gh_status gh_corpus_featurize(const gh_corpus* corpus, const gh_config* cfg, const char* path,
                                     size_t* n_rows);
/* Dumps a binary feature file as CSV (label, target, then every cell). */
GH_API gh_status gh_features_to_csv(const char* feature_path, const char* csv_path);
GH_API void gh_corpus_free(gh_corpus* corpus);

/* Models */
typedef struct gh_model_info {
    int learner;  /* 0 knn, 1 bagged_trees, 2 svm, 3 gp */
    int task;     /* 0 classification, 1 regression */
    size_t dim;
    size_t train_rows;
    size_t used_rows;
    int svm_converged; /* 1 when not an SVM */
} gh_model_info;

/* Trains the configured learner and task on a feature file. */
GH_API gh_status gh_model_train(const gh_config* cfg, const char* feature_path, gh_model** out);
GH_API gh_status gh_model_load(const char* path, gh_model** out);
GH_API gh_status gh_model_save(const gh_model* model, const char* path);
GH_API gh_status gh_model_info_get(const gh_model* model, gh_model_info* info);
/* Classification: out[0] = label. Regression: out[0..3] = x, y, w, h. */
GH_API gh_status gh_model_predict(const gh_model* model, const double* features, size_t dim, double* out);
/* Predicts every record of a feature file and writes a CSV. */
GH_API gh_status gh_model_predict_file(const gh_model* model, const char* feature_path, const char* csv_path);
GH_API void gh_model_free(gh_model* model);

/* Runs the configured sweep and writes results.csv, summary.csv,
 * pivot_classification.csv and pivot_regression.csv into out_dir. */
GH_API gh_status gh_eval_run(const gh_config* cfg, const gh_corpus* corpus, const char* out_dir, size_t* n_cells);
/* As gh_eval_run, calling progress(done, total, user) after each
 * (window, dims, grid) job. Calls never overlap. */
typedef void (*gh_progress_fn)(size_t done, size_t total, void* user);
GH_API gh_status gh_eval_run_progress(const gh_config* cfg, const gh_corpus* corpus, const char* out_dir,
                                      size_t* n_cells, gh_progress_fn progress, void* user);
/* Runs the configured benchmark and writes bench.csv and bench.txt into out_dir. */
GH_API gh_status gh_bench_run(const gh_config* cfg, const gh_corpus* corpus, const char* out_dir);

/* Writes manifest.json: the resolved config, command, seed and versions. */
GH_API gh_status gh_write_manifest(const gh_config* cfg, const char* command, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif
