#include "gazeheat/config.hpp"

#include <filesystem>

#include "gazeheat/error.hpp"
#include "gazeheat/text.hpp"

namespace gazeheat {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json default_document() {
    return json::parse(R"({
  "seed": 0,
  "threads": 1,
  "output_dir": "out",
  "bounds": {"rx": 1088, "ry": 1080, "rz": null},
  "rates": {"scene_fps": 30, "eye_hz": 200},
  "columns": {
    "gaze": {"t": "t_us", "x": "x_px", "y": "y_px", "z": "z_m", "source": "method"},
    "annotations": {"frame": "frame", "x": "x", "y": "y", "w": "w", "h": "h"}
  },
  "data": {
    "source": "files",
    "recordings": [],
    "synth": {
      "recordings": 20, "duration_s": 60, "episode_min_s": 3, "episode_max_s": 8,
      "gap_min_s": 2, "gap_max_s": 6, "box_min_px": 60, "box_max_px": 300,
      "fixation_jitter_px": 8, "scan_jitter_px": 150, "walk_drift_px_per_s": 10,
      "approach_m_per_s": 0.05, "depth_start_min_m": 1.5, "depth_start_max_m": 4.5,
      "depth_jitter_m": 0.03, "sample_rate_hz": 200, "rz": 5
    }
  },
  "window": {"length_ms": 500, "stride_ms": 0},
  "grid": {"size": 25, "three_d": false},
  "train": {"learner": "knn", "task": "classification"},
  "learners": {
    "knn": {"k": 1},
    "bagged_trees": {"n_trees": 30, "min_leaf_classification": 1, "min_leaf_regression": 5},
    "svm": {"c": 1, "gamma": 1, "tol": 0.001, "max_iter": 100000},
    "gp": {"length_scale": 0, "signal_sd": 1, "noise_sd": 0.1},
    "kernel_cap": 3000
  },
  "sweep": {
    "window_lengths_ms": [100, 200, 300, 400, 500],
    "stride_ms": 0,
    "grid_sizes": [5, 10, 15, 20, 25, 30, 35, 40, 45, 50],
    "dims": ["2d", "3d"],
    "classifiers": ["knn", "bagged_trees", "svm"],
    "regressors": ["gp", "bagged_trees"],
    "folds": 5,
    "fold_mode": "window"
  },
  "bench": {
    "grid_sizes": [10, 20, 30, 40, 50],
    "dims": ["2d", "3d"],
    "learners": ["knn", "bagged_trees", "svm"],
    "window_ms": 250,
    "n_predictions": 1000,
    "repetitions": 3
  }
})");
}

const char* kind_of(const json& v) {
    if (v.is_null()) return "null";
    if (v.is_boolean()) return "boolean";
    if (v.is_number()) return "number";
    if (v.is_string()) return "string";
    if (v.is_array()) return "array";
    return "object";
}

bool compatible(const json& def, const json& v) {
    if (def.is_null()) return v.is_null() || v.is_number();
    if (def.is_number()) return v.is_number();
    return std::string_view(kind_of(def)) == kind_of(v);
}

// Copies `src` onto `dst`, refusing keys and value types the defaults lack.
void merge(json& dst, const json& src, const std::string& path) {
    if (!src.is_object()) fail_usage("config: '" + (path.empty() ? std::string("<root>") : path) + "' must be an object");
    for (auto it = src.begin(); it != src.end(); ++it) {
        const std::string key = path.empty() ? it.key() : path + "." + it.key();
        if (!dst.contains(it.key())) fail_usage("config: unknown key '" + key + "'");
        json& slot = dst[it.key()];
        if (slot.is_object()) {
            merge(slot, it.value(), key);
        } else {
            if (!compatible(slot, it.value())) {
                fail_usage("config: '" + key + "' must be " + kind_of(slot) + ", got " + kind_of(it.value()));
            }
            slot = it.value();
        }
    }
}

const json& at(const json& doc, const std::string& dotted) {
    const json* cur = &doc;
    std::size_t pos = 0;
    while (true) {
        const auto dot = dotted.find('.', pos);
        const auto part = dotted.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
        if (!cur->is_object() || !cur->contains(part)) fail_usage("config: unknown key '" + dotted + "'");
        cur = &(*cur)[part];
        if (dot == std::string::npos) return *cur;
        pos = dot + 1;
    }
}

double num(const json& doc, const std::string& key) { return at(doc, key).get<double>(); }

int integer(const json& doc, const std::string& key) {
    const auto& v = at(doc, key);
    if (!v.is_number_integer()) {
        const double d = v.get<double>();
        if (d != static_cast<double>(static_cast<long long>(d))) fail_usage("config: '" + key + "' must be an integer");
        return static_cast<int>(d);
    }
    return v.get<int>();
}

std::string str(const json& doc, const std::string& key) { return at(doc, key).get<std::string>(); }

template <typename T, typename F>
std::vector<T> list(const json& doc, const std::string& key, F convert) {
    std::vector<T> out;
    for (const auto& v : at(doc, key)) out.push_back(convert(v, key));
    return out;
}

bool parse_dim(const json& v, const std::string& key) {
    if (!v.is_string()) fail_usage("config: '" + key + "' entries must be \"2d\" or \"3d\"");
    const auto s = v.get<std::string>();
    if (s == "2d") return false;
    if (s == "3d") return true;
    fail_usage("config: '" + key + "' entry '" + s + "' is not 2d or 3d");
}

Learner parse_learner_entry(const json& v, const std::string& key) {
    if (!v.is_string()) fail_usage("config: '" + key + "' entries must be learner names");
    return parse_learner(v.get<std::string>());
}

double parse_number_entry(const json& v, const std::string& key) {
    if (!v.is_number()) fail_usage("config: '" + key + "' entries must be numbers");
    return v.get<double>();
}

int parse_int_entry(const json& v, const std::string& key) {
    if (!v.is_number_integer()) fail_usage("config: '" + key + "' entries must be integers");
    return v.get<int>();
}

std::string resolve(const std::string& p, const std::string& base) {
    if (p.empty() || fs::path(p).is_absolute()) return p;
    return (fs::path(base) / p).lexically_normal().string();
}

}  // namespace

RunConfig::RunConfig() : doc_(default_document()) {}

RunConfig RunConfig::from_file(const std::string& path) {
    const auto text = text::read_file(path);
    auto base = fs::path(path).parent_path().string();
    if (base.empty()) base = ".";
    return from_text(text, base, path);
}

RunConfig RunConfig::from_text(const std::string& text, const std::string& base_dir, const std::string& origin) {
    json user;
    try {
        user = json::parse(text);
    } catch (const json::parse_error& e) {
        fail_usage(origin + ": invalid JSON: " + e.what());
    }
    RunConfig cfg;
    merge(cfg.doc_, user, "");
    if (user.contains("output_dir")) cfg.doc_["output_dir"] = resolve(cfg.doc_["output_dir"].get<std::string>(), base_dir);
    for (auto& r : cfg.doc_["data"]["recordings"]) {
        if (!r.is_object()) fail_usage(origin + ": data.recordings entries must be objects");
        for (const char* k : {"gaze", "annotations"}) {
            if (r.contains(k) && r[k].is_string()) r[k] = resolve(r[k].get<std::string>(), base_dir);
        }
    }
    cfg.validate();
    return cfg;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    json v;
    try {
        v = json::parse(value);
    } catch (const json::parse_error&) {
        v = value;
    }
    // Nest the value under the dotted path and merge, which reuses the key
    // and type checks.
    json patch = v;
    std::size_t end = key.size();
    while (true) {
        const auto dot = key.rfind('.', end - 1);
        const auto start = dot == std::string::npos ? 0 : dot + 1;
        if (start == end) fail_usage("config: malformed key '" + key + "'");
        patch = json{{key.substr(start, end - start), patch}};
        if (dot == std::string::npos) break;
        end = dot;
    }
    json next = doc_;
    merge(next, patch, "");
    doc_ = std::move(next);
}

std::string RunConfig::get(const std::string& key) const {
    const auto& v = at(doc_, key);
    return v.is_string() ? v.get<std::string>() : v.dump();
}

std::string RunConfig::dump() const { return doc_.dump(2); }

void RunConfig::validate() const {
    try {
        StimulusBounds{bounds().rx, bounds().ry, bounds().rz.value_or(1.0)}.validate();
        rates().validate();
        columns();
        if (use_synth()) {
            corpus().validate();
        } else {
            recordings();
        }
        window().validate();
        if (grid_size() < 1) fail_usage("config: grid.size must be at least 1");
        three_d();
        const Learner l = learner();
        const Task t = task();
        if (!supports(l, t)) fail_usage(std::string("config: ") + learner_name(l) + " does not support " + task_name(t));
        learner_params();
        sweep().validate();
        bench().validate();
        seed();
        if (threads() < 1) fail_usage("config: threads must be at least 1");
        output_dir();
    } catch (const json::exception& e) {
        fail_usage(std::string("config: ") + e.what());
    }
}

BoundsConfig RunConfig::bounds() const {
    BoundsConfig b;
    b.rx = num(doc_, "bounds.rx");
    b.ry = num(doc_, "bounds.ry");
    if (!at(doc_, "bounds.rz").is_null()) b.rz = num(doc_, "bounds.rz");
    return b;
}

CameraRates RunConfig::rates() const { return CameraRates{integer(doc_, "rates.scene_fps"), integer(doc_, "rates.eye_hz")}; }

ColumnMap RunConfig::columns() const {
    ColumnMap m;
    m.gaze = GazeColumns{str(doc_, "columns.gaze.t"), str(doc_, "columns.gaze.x"), str(doc_, "columns.gaze.y"),
                         str(doc_, "columns.gaze.z"), str(doc_, "columns.gaze.source")};
    m.annotations = AnnotationColumns{str(doc_, "columns.annotations.frame"), str(doc_, "columns.annotations.x"),
                                      str(doc_, "columns.annotations.y"), str(doc_, "columns.annotations.w"),
                                      str(doc_, "columns.annotations.h")};
    return m;
}

bool RunConfig::use_synth() const {
    const auto s = str(doc_, "data.source");
    if (s == "synth") return true;
    if (s == "files") return false;
    fail_usage("config: data.source must be \"files\" or \"synth\", got '" + s + "'");
}

std::vector<RecordingSource> RunConfig::recordings() const {
    std::vector<RecordingSource> out;
    for (const auto& r : at(doc_, "data.recordings")) {
        if (!r.is_object()) fail_usage("config: data.recordings entries must be objects");
        for (auto it = r.begin(); it != r.end(); ++it) {
            if (it.key() != "id" && it.key() != "gaze" && it.key() != "annotations") {
                fail_usage("config: unknown key 'data.recordings[]." + it.key() + "'");
            }
            if (!it.value().is_string()) fail_usage("config: data.recordings[]." + it.key() + " must be a string");
        }
        if (!r.contains("gaze")) fail_usage("config: data.recordings entry lacks 'gaze'");
        RecordingSource src;
        src.gaze = r["gaze"].get<std::string>();
        src.annotations = r.value("annotations", std::string{});
        if (r.contains("id")) {
            src.id = r["id"].get<std::string>();
        } else {
            // "p01_gaze.csv" -> "p01"
            src.id = fs::path(src.gaze).stem().string();
            if (src.id.size() > 5 && src.id.ends_with("_gaze")) src.id.resize(src.id.size() - 5);
        }
        out.push_back(std::move(src));
    }
    return out;
}

CorpusSpec RunConfig::corpus() const {
    CorpusSpec c;
    const std::string p = "data.synth.";
    c.recordings = integer(doc_, p + "recordings");
    c.duration_s = num(doc_, p + "duration_s");
    c.episode_min_s = num(doc_, p + "episode_min_s");
    c.episode_max_s = num(doc_, p + "episode_max_s");
    c.gap_min_s = num(doc_, p + "gap_min_s");
    c.gap_max_s = num(doc_, p + "gap_max_s");
    c.box_min_px = num(doc_, p + "box_min_px");
    c.box_max_px = num(doc_, p + "box_max_px");
    c.fixation_jitter_px = num(doc_, p + "fixation_jitter_px");
    c.scan_jitter_px = num(doc_, p + "scan_jitter_px");
    c.walk_drift_px_per_s = num(doc_, p + "walk_drift_px_per_s");
    c.approach_m_per_s = num(doc_, p + "approach_m_per_s");
    c.depth_start_min_m = num(doc_, p + "depth_start_min_m");
    c.depth_start_max_m = num(doc_, p + "depth_start_max_m");
    c.depth_jitter_m = num(doc_, p + "depth_jitter_m");
    c.sample_rate_hz = num(doc_, p + "sample_rate_hz");
    c.bounds = StimulusBounds{num(doc_, "bounds.rx"), num(doc_, "bounds.ry"), num(doc_, p + "rz")};
    c.seed = seed();
    return c;
}

WindowSpec RunConfig::window() const { return WindowSpec{num(doc_, "window.length_ms"), num(doc_, "window.stride_ms")}; }

int RunConfig::grid_size() const { return integer(doc_, "grid.size"); }
bool RunConfig::three_d() const { return at(doc_, "grid.three_d").get<bool>(); }
Learner RunConfig::learner() const { return parse_learner(str(doc_, "train.learner")); }
Task RunConfig::task() const { return parse_task(str(doc_, "train.task")); }

LearnerParams RunConfig::learner_params() const {
    LearnerParams p;
    p.knn.k = integer(doc_, "learners.knn.k");
    p.trees_n = integer(doc_, "learners.bagged_trees.n_trees");
    p.trees_min_leaf_classification = integer(doc_, "learners.bagged_trees.min_leaf_classification");
    p.trees_min_leaf_regression = integer(doc_, "learners.bagged_trees.min_leaf_regression");
    p.svm.c = num(doc_, "learners.svm.c");
    p.svm.gamma = num(doc_, "learners.svm.gamma");
    p.svm.tol = num(doc_, "learners.svm.tol");
    p.svm.max_iter = static_cast<std::int64_t>(num(doc_, "learners.svm.max_iter"));
    p.gp.length_scale = num(doc_, "learners.gp.length_scale");
    p.gp.signal_sd = num(doc_, "learners.gp.signal_sd");
    p.gp.noise_sd = num(doc_, "learners.gp.noise_sd");
    const double cap = num(doc_, "learners.kernel_cap");
    if (cap < 1) fail_usage("config: learners.kernel_cap must be at least 1");
    p.kernel_cap = static_cast<std::size_t>(cap);
    p.seed = seed();
    if (p.knn.k < 1) fail_usage("config: learners.knn.k must be at least 1");
    if (p.trees_n < 1) fail_usage("config: learners.bagged_trees.n_trees must be at least 1");
    if (p.trees_min_leaf_classification < 1 || p.trees_min_leaf_regression < 1) {
        fail_usage("config: bagged_trees min_leaf values must be at least 1");
    }
    if (!(p.svm.c > 0) || p.svm.gamma < 0 || !(p.svm.tol > 0) || p.svm.max_iter < 1) {
        fail_usage("config: svm needs c > 0, gamma >= 0, tol > 0, max_iter >= 1");
    }
    if (p.gp.length_scale < 0 || !(p.gp.signal_sd > 0) || !(p.gp.noise_sd > 0)) {
        fail_usage("config: gp needs length_scale >= 0, signal_sd > 0, noise_sd > 0");
    }
    return p;
}

SweepConfig RunConfig::sweep() const {
    SweepConfig s;
    s.window_lengths_ms = list<double>(doc_, "sweep.window_lengths_ms", parse_number_entry);
    s.stride_ms = num(doc_, "sweep.stride_ms");
    s.grid_sizes = list<int>(doc_, "sweep.grid_sizes", parse_int_entry);
    s.dims = list<bool>(doc_, "sweep.dims", parse_dim);
    s.classifiers = list<Learner>(doc_, "sweep.classifiers", parse_learner_entry);
    s.regressors = list<Learner>(doc_, "sweep.regressors", parse_learner_entry);
    s.folds = integer(doc_, "sweep.folds");
    s.fold_mode = parse_fold_mode(str(doc_, "sweep.fold_mode"));
    s.seed = seed();
    s.threads = threads();
    s.params = learner_params();
    s.rates = rates();
    return s;
}

BenchConfig RunConfig::bench() const {
    BenchConfig b;
    b.grid_sizes = list<int>(doc_, "bench.grid_sizes", parse_int_entry);
    b.dims = list<bool>(doc_, "bench.dims", parse_dim);
    b.learners = list<Learner>(doc_, "bench.learners", parse_learner_entry);
    b.window_ms = num(doc_, "bench.window_ms");
    const int n = integer(doc_, "bench.n_predictions");
    if (n < 0) fail_usage("config: bench.n_predictions must be nonnegative");
    b.n_predictions = static_cast<std::size_t>(n);
    b.repetitions = integer(doc_, "bench.repetitions");
    b.params = learner_params();
    b.rates = rates();
    return b;
}

std::uint64_t RunConfig::seed() const {
    const auto& v = at(doc_, "seed");
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        fail_usage("config: seed must be a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

int RunConfig::threads() const { return integer(doc_, "threads"); }
std::string RunConfig::output_dir() const { return str(doc_, "output_dir"); }

}  // namespace gazeheat
