#include "gazeheat/gazeheat.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <new>
#include <string>
#include <vector>

#include "gazeheat/bench.hpp"
#include "gazeheat/config.hpp"
#include "gazeheat/error.hpp"
#include "gazeheat/eval.hpp"
#include "gazeheat/features.hpp"
#include "gazeheat/gp.hpp"
#include "gazeheat/model.hpp"
#include "gazeheat/synth.hpp"
#include "gazeheat/text.hpp"
#include "gazeheat/windowing.hpp"

struct gh_config {
    gazeheat::RunConfig cfg;
};

struct gh_corpus {
    std::vector<gazeheat::Recording> recordings;
    std::vector<gh_recording_info> info;
};

struct gh_model {
    gazeheat::Model model;
    std::size_t train_rows = 0;
    std::size_t used_rows = 0;
};

namespace {

namespace fs = std::filesystem;
using namespace gazeheat;

thread_local std::string last_error;

gh_status fail(gh_status status, std::string msg) {
    last_error = std::move(msg);
    return status;
}

template <typename F>
gh_status guarded(F&& body) {
    try {
        last_error.clear();
        body();
        return GH_OK;
    } catch (const Error& e) {
        return fail(static_cast<gh_status>(e.kind()), e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(GH_ERR_USAGE, std::string("config: ") + e.what());
    } catch (const std::bad_alloc&) {
        return fail(GH_ERR_INTERNAL, "out of memory");
    } catch (const fs::filesystem_error& e) {
        return fail(GH_ERR_DATA, e.what());
    } catch (const std::exception& e) {
        return fail(GH_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(GH_ERR_INTERNAL, "unknown error");
    }
}

void need(const void* p, const char* what) {
    if (p == nullptr) fail_usage(std::string(what) + " must not be null");
}

void copy_out(const std::string& s, char* buf, std::size_t cap, std::size_t* len) {
    if (len) *len = s.size();
    if (buf && cap > 0) {
        const std::size_t n = std::min(cap - 1, s.size());
        std::memcpy(buf, s.data(), n);
        buf[n] = '\0';
    }
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail_data("cannot create directory " + dir + ": " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

gh_recording_info info_of(const Recording& r) {
    gh_recording_info i{};
    i.samples = r.samples.size();
    i.annotations = r.annotations.size();
    i.rx = r.bounds.rx;
    i.ry = r.bounds.ry;
    i.rz = r.bounds.rz;
    i.t_first_us = r.samples.front().t_us;
    i.t_last_us = r.samples.back().t_us;
    return i;
}

Dataset training_rows(const Dataset& all, Task task) {
    Dataset d = task == Task::Classification ? all : all.positives();
    if (d.size() == 0) fail_data("feature file has no rows usable for " + std::string(task_name(task)));
    return d;
}

}  // namespace

extern "C" {

const char* gh_version(void) { return GAZEHEAT_VERSION; }

const char* gh_last_error(void) { return last_error.c_str(); }

gh_status gh_config_new(gh_config** out) {
    return guarded([&] {
        need(out, "out");
        *out = new gh_config{};
    });
}

gh_status gh_config_load(const char* path, gh_config** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new gh_config{RunConfig::from_file(path)};
    });
}

gh_status gh_config_parse(const char* json_text, const char* base_dir, gh_config** out) {
    return guarded([&] {
        need(json_text, "json_text");
        need(out, "out");
        *out = new gh_config{RunConfig::from_text(json_text, base_dir ? base_dir : ".")};
    });
}

gh_status gh_config_set(gh_config* cfg, const char* key, const char* value) {
    return guarded([&] {
        need(cfg, "config");
        need(key, "key");
        need(value, "value");
        cfg->cfg.set(key, value);
    });
}

gh_status gh_config_get(const gh_config* cfg, const char* key, char* buf, size_t cap, size_t* len) {
    return guarded([&] {
        need(cfg, "config");
        need(key, "key");
        copy_out(cfg->cfg.get(key), buf, cap, len);
    });
}

gh_status gh_config_validate(const gh_config* cfg) {
    return guarded([&] {
        need(cfg, "config");
        cfg->cfg.validate();
    });
}

gh_status gh_config_dump(const gh_config* cfg, char* buf, size_t cap, size_t* len) {
    return guarded([&] {
        need(cfg, "config");
        copy_out(cfg->cfg.dump(), buf, cap, len);
    });
}

void gh_config_free(gh_config* cfg) { delete cfg; }

gh_status gh_corpus_load(const gh_config* cfg, gh_corpus** out) {
    return guarded([&] {
        need(cfg, "config");
        need(out, "out");
        const auto& c = cfg->cfg;
        c.validate();
        auto corpus = std::make_unique<gh_corpus>();
        if (c.use_synth()) {
            corpus->recordings = generate_corpus(c.corpus());
            for (const auto& r : corpus->recordings) corpus->info.push_back(info_of(r));
        } else {
            const auto sources = c.recordings();
            if (sources.empty()) fail_usage("config lists no recordings (data.recordings) and data.source is not synth");
            const auto columns = c.columns();
            for (const auto& src : sources) {
                auto gaze = parse_gaze(src.gaze, columns.gaze, c.bounds());
                AnnotationParseResult ann;
                if (!src.annotations.empty()) ann = parse_annotations(src.annotations, columns.annotations);
                JoinStats stats;
                auto rec = join_recording(std::move(gaze.samples), std::move(ann.boxes), gaze.bounds, src.id, &stats);
                auto i = info_of(rec);
                i.dropped_rows = gaze.dropped;
                i.clamped_rows = gaze.clamped;
                i.degenerate_boxes = ann.degenerate;
                i.duplicate_timestamps = stats.duplicate_timestamps;
                corpus->recordings.push_back(std::move(rec));
                corpus->info.push_back(i);
            }
        }
        *out = corpus.release();
    });
}

gh_status gh_corpus_size(const gh_corpus* corpus, size_t* n) {
    return guarded([&] {
        need(corpus, "corpus");
        need(n, "n");
        *n = corpus->recordings.size();
    });
}

gh_status gh_corpus_id(const gh_corpus* corpus, size_t index, char* buf, size_t cap, size_t* len) {
    return guarded([&] {
        need(corpus, "corpus");
        if (index >= corpus->recordings.size()) fail_usage("recording index out of range");
        copy_out(corpus->recordings[index].id, buf, cap, len);
    });
}

gh_status gh_corpus_info(const gh_corpus* corpus, size_t index, gh_recording_info* info) {
    return guarded([&] {
        need(corpus, "corpus");
        need(info, "info");
        if (index >= corpus->recordings.size()) fail_usage("recording index out of range");
        *info = corpus->info[index];
    });
}

gh_status gh_corpus_write_csv(const gh_corpus* corpus, const char* dir) {
    return guarded([&] {
        need(corpus, "corpus");
        need(dir, "dir");
        ensure_dir(dir);
        for (const auto& r : corpus->recordings) {
            text::write_file(join(dir, r.id + "_gaze.csv"), format_gaze_csv(r.samples));
            text::write_file(join(dir, r.id + "_annotations.csv"), format_annotations_csv(r.annotations));
        }
    });
}

gh_status gh_corpus_write_windows(const gh_corpus* corpus, const gh_config* cfg, const char* path) {
    return guarded([&] {
        need(corpus, "corpus");
        need(cfg, "config");
        need(path, "path");
        const auto spec = cfg->cfg.window();
        const auto rates = cfg->cfg.rates();
        std::string out = "recording_id,t_start,t_end,n_samples,label,x,y,w,h\n";
        for (const auto& r : corpus->recordings) {
            for (const auto& w : make_labeled_windows(r, spec, rates).windows) {
                out += r.id + "," + std::to_string(w.t_start) + "," + std::to_string(w.t_end) + "," +
                       std::to_string(w.samples.size()) + "," + std::to_string(w.label);
                if (w.target) {
                    for (double v : {w.target->x, w.target->y, w.target->w, w.target->h}) out += "," + text::format_double(v);
                } else {
                    out += ",,,,";
                }
                out += "\n";
            }
        }
        text::write_file(path, out);
    });
}

gh_status gh_corpus_featurize(const gh_corpus* corpus, const gh_config* cfg, const char* path, size_t* n_rows) {
    return guarded([&] {
        need(corpus, "corpus");
        need(cfg, "config");
        need(path, "path");
        const int g = cfg->cfg.grid_size();
        const bool three_d = cfg->cfg.three_d();
        FeatureTable table;
        table.grid = GridShape{g, g, three_d ? g : 1};
        table.data = build_dataset(corpus->recordings, cfg->cfg.window(), g, three_d, cfg->cfg.rates());
        write_feature_file(path, table);
        if (n_rows) *n_rows = table.data.size();
    });
}

gh_status gh_features_to_csv(const char* feature_path, const char* csv_path) {
    return guarded([&] {
        need(feature_path, "feature_path");
        need(csv_path, "csv_path");
        text::write_file(csv_path, format_feature_csv(read_feature_file(feature_path)));
    });
}

void gh_corpus_free(gh_corpus* corpus) { delete corpus; }

gh_status gh_model_train(const gh_config* cfg, const char* feature_path, gh_model** out) {
    return guarded([&] {
        need(cfg, "config");
        need(feature_path, "feature_path");
        need(out, "out");
        const auto table = read_feature_file(feature_path);
        const Task task = cfg->cfg.task();
        const Dataset data = training_rows(table.data, task);
        FitReport report;
        auto model = Model::fit(cfg->cfg.learner(), task, data, cfg->cfg.learner_params(), &report);
        *out = new gh_model{std::move(model), report.train_rows, report.used_rows};
    });
}

gh_status gh_model_load(const char* path, gh_model** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new gh_model{Model::load(path)};
    });
}

gh_status gh_model_save(const gh_model* model, const char* path) {
    return guarded([&] {
        need(model, "model");
        need(path, "path");
        model->model.save(path);
    });
}

gh_status gh_model_info_get(const gh_model* model, gh_model_info* info) {
    return guarded([&] {
        need(model, "model");
        need(info, "info");
        const auto& m = model->model;
        info->learner = static_cast<int>(m.learner());
        info->task = m.task() == Task::Classification ? 0 : 1;
        info->dim = m.dim();
        info->train_rows = model->train_rows;
        info->used_rows = model->used_rows;
        info->svm_converged = 1;
        if (const auto* svm = std::get_if<SvmModel>(&m.impl())) info->svm_converged = svm->info().converged ? 1 : 0;
    });
}

gh_status gh_model_predict(const gh_model* model, const double* features, size_t dim, double* out) {
    return guarded([&] {
        need(model, "model");
        need(features, "features");
        need(out, "out");
        if (dim != model->model.dim()) {
            fail_usage("feature dimension " + std::to_string(dim) + " does not match model dimension " +
                       std::to_string(model->model.dim()));
        }
        const std::span<const double> x(features, dim);
        if (model->model.task() == Task::Classification) {
            out[0] = model->model.classify(x);
        } else {
            const auto t = model->model.regress(x);
            std::copy(t.begin(), t.end(), out);
        }
    });
}

gh_status gh_model_predict_file(const gh_model* model, const char* feature_path, const char* csv_path) {
    return guarded([&] {
        need(model, "model");
        need(feature_path, "feature_path");
        need(csv_path, "csv_path");
        const auto table = read_feature_file(feature_path);
        const auto& m = model->model;
        if (table.data.dim != m.dim()) {
            fail_usage("feature file dimension " + std::to_string(table.data.dim) + " does not match model dimension " +
                       std::to_string(m.dim()));
        }
        std::string out;
        if (m.task() == Task::Classification) {
            out = "row,label,predicted\n";
            for (std::size_t i = 0; i < table.data.size(); ++i) {
                out += std::to_string(i) + "," + std::to_string(table.data.labels[i]) + "," +
                       std::to_string(m.classify(table.data.rows[i])) + "\n";
            }
        } else {
            out = "row,label,x,y,w,h,pred_x,pred_y,pred_w,pred_h\n";
            for (std::size_t i = 0; i < table.data.size(); ++i) {
                out += std::to_string(i) + "," + std::to_string(table.data.labels[i]);
                for (double v : table.data.targets[i]) out += "," + (std::isnan(v) ? std::string() : text::format_double(v));
                for (double v : m.regress(table.data.rows[i])) out += "," + text::format_double(v);
                out += "\n";
            }
        }
        text::write_file(csv_path, out);
    });
}

void gh_model_free(gh_model* model) { delete model; }

gh_status gh_eval_run(const gh_config* cfg, const gh_corpus* corpus, const char* out_dir, size_t* n_cells) {
    return gh_eval_run_progress(cfg, corpus, out_dir, n_cells, nullptr, nullptr);
}

gh_status gh_eval_run_progress(const gh_config* cfg, const gh_corpus* corpus, const char* out_dir, size_t* n_cells,
                               gh_progress_fn progress, void* user) {
    return guarded([&] {
        need(cfg, "config");
        need(corpus, "corpus");
        need(out_dir, "out_dir");
        auto sweep = cfg->cfg.sweep();
        if (progress) sweep.progress = [&](std::size_t done, std::size_t total) { progress(done, total, user); };
        const auto result = run_sweep(corpus->recordings, sweep);
        ensure_dir(out_dir);
        text::write_file(join(out_dir, "results.csv"), format_results_csv(result));
        text::write_file(join(out_dir, "summary.csv"), format_summary_csv(result));
        text::write_file(join(out_dir, "pivot_classification.csv"), format_pivot_csv(result, Task::Classification));
        text::write_file(join(out_dir, "pivot_regression.csv"), format_pivot_csv(result, Task::Regression));
        if (n_cells) *n_cells = result.cells.size();
    });
}

gh_status gh_bench_run(const gh_config* cfg, const gh_corpus* corpus, const char* out_dir) {
    return guarded([&] {
        need(cfg, "config");
        need(corpus, "corpus");
        need(out_dir, "out_dir");
        const auto reports = run_bench(corpus->recordings, cfg->cfg.bench());
        ensure_dir(out_dir);
        text::write_file(join(out_dir, "bench.csv"), format_bench_csv(reports));
        text::write_file(join(out_dir, "bench.txt"), format_bench_table(reports));
    });
}

gh_status gh_write_manifest(const gh_config* cfg, const char* command, const char* out_dir) {
    return guarded([&] {
        need(cfg, "config");
        need(command, "command");
        need(out_dir, "out_dir");
        nlohmann::json m;
        m["command"] = command;
        m["seed"] = cfg->cfg.seed();
        m["versions"] = {{"gazeheat", GAZEHEAT_VERSION},
                         {"compiler", __VERSION__},
                         {"linear_algebra", linear_algebra_version()},
                         {"json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
        m["config"] = cfg->cfg.document();
        ensure_dir(out_dir);
        text::write_file(join(out_dir, "manifest.json"), m.dump(2) + "\n");
    });
}

}  // extern "C"
