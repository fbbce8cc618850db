#include "gazeheat/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <tuple>
#include <thread>

#include "gazeheat/error.hpp"
#include "gazeheat/features.hpp"
#include "gazeheat/random.hpp"
#include "gazeheat/run_guard.hpp"
#include "gazeheat/text.hpp"

namespace gazeheat {

std::vector<std::size_t> FoldPlan::test_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] == fold) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> FoldPlan::train_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] != fold) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> FoldPlan::sizes() const {
    std::vector<std::size_t> out(static_cast<std::size_t>(k), 0);
    for (int a : assignment) ++out[static_cast<std::size_t>(a)];
    return out;
}

namespace {

void check_k(std::size_t n, int k) {
    if (k < 2) fail_usage("fold count must be at least 2");
    if (n < static_cast<std::size_t>(k)) fail_usage("fewer samples than folds");
}

// Deals the given order round-robin onto folds.
FoldPlan deal(const std::vector<std::size_t>& order, std::size_t n, int k, std::uint64_t seed) {
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignment.assign(n, 0);
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        plan.assignment[order[pos]] = static_cast<int>(pos % static_cast<std::size_t>(k));
    }
    return plan;
}

}  // namespace

FoldPlan kfold_split(std::size_t n, int k, std::uint64_t seed) {
    check_k(n, k);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(order));
    return deal(order, n, k, seed);
}

FoldPlan stratified_kfold(std::span<const int> labels, int k, std::uint64_t seed) {
    check_k(labels.size(), k);
    std::vector<std::size_t> zeros, ones;
    for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == 1 ? ones : zeros).push_back(i);
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(zeros));
    rng.shuffle(std::span<std::size_t>(ones));
    std::vector<std::size_t> order = zeros;
    order.insert(order.end(), ones.begin(), ones.end());
    return deal(order, labels.size(), k, seed);
}

FoldPlan group_kfold(std::span<const int> groups, int k, std::uint64_t seed) {
    check_k(groups.size(), k);
    std::vector<int> ids(groups.begin(), groups.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.size() < static_cast<std::size_t>(k)) fail_usage("fewer recordings than folds for by-recording mode");
    Rng rng(seed);
    rng.shuffle(std::span<int>(ids));
    std::map<int, int> fold_of;
    for (std::size_t i = 0; i < ids.size(); ++i) fold_of[ids[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignment.reserve(groups.size());
    for (int g : groups) plan.assignment.push_back(fold_of[g]);
    return plan;
}

double accuracy(std::span<const int> predictions, std::span<const int> labels) {
    if (predictions.size() != labels.size()) fail_usage("accuracy: length mismatch");
    if (predictions.empty()) fail_usage("accuracy: empty input");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) hits += predictions[i] == labels[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(labels.size());
}

std::array<double, 4> mae_normalized(std::span<const Target4> predictions, std::span<const Target4> truth) {
    if (predictions.size() != truth.size()) fail_usage("mae: length mismatch");
    if (predictions.empty()) fail_usage("mae: empty input");
    std::array<double, 4> sum{};
    for (std::size_t i = 0; i < truth.size(); ++i) {
        for (int c = 0; c < 4; ++c) sum[c] += std::abs(predictions[i][c] - truth[i][c]);
    }
    for (auto& v : sum) v = v / static_cast<double>(truth.size()) * 100.0;
    return sum;
}

const char* fold_mode_name(FoldMode mode) noexcept { return mode == FoldMode::Window ? "window" : "recording"; }

FoldMode parse_fold_mode(const std::string& name) {
    if (name == "window") return FoldMode::Window;
    if (name == "recording") return FoldMode::Recording;
    fail_usage("unknown fold mode '" + name + "' (expected window or recording)");
}

CvResult cross_validate(const Dataset& data, Task task, Learner learner, const LearnerParams& params,
                        const FoldPlan& plan) {
    if (plan.assignment.size() != data.size()) fail_usage("fold plan does not match dataset");
    CvResult out;
    if (task == Task::Classification) {
        out.metrics = {"accuracy"};
    } else {
        out.metrics = {"mae_x", "mae_y", "mae_w", "mae_h"};
    }
    out.values.assign(out.metrics.size(), {});

    for (int f = 0; f < plan.k; ++f) {
        const auto train_idx = plan.train_indices(f);
        const auto test_idx = plan.test_indices(f);
        if (test_idx.empty() || train_idx.empty()) fail_usage("empty fold");
        const Dataset train = data.subset(train_idx);
        LearnerParams p = params;
        p.seed = derive_seed(params.seed, static_cast<std::uint64_t>(f));
        FitReport report;
        const Model model = Model::fit(learner, task, train, p, &report);
        out.max_used_rows = std::max(out.max_used_rows, report.used_rows);
        if (report.svm && !report.svm->converged) ++out.svm_unconverged_folds;

        if (task == Task::Classification) {
            std::vector<int> pred, truth;
            for (auto i : test_idx) {
                pred.push_back(model.classify(data.rows[i]));
                truth.push_back(data.labels[i]);
            }
            out.values[0].push_back(accuracy(pred, truth));
        } else {
            std::vector<Target4> pred, truth;
            for (auto i : test_idx) {
                pred.push_back(model.regress(data.rows[i]));
                truth.push_back(data.targets[i]);
            }
            const auto err = mae_normalized(pred, truth);
            for (int c = 0; c < 4; ++c) out.values[static_cast<std::size_t>(c)].push_back(err[c]);
        }
    }

    for (const auto& v : out.values) {
        const double n = static_cast<double>(v.size());
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        out.mean.push_back(mean);
        out.stddev.push_back(v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0);
    }
    return out;
}

void SweepConfig::validate() const {
    if (window_lengths_ms.empty() || grid_sizes.empty() || dims.empty()) fail_usage("sweep lists must be nonempty");
    if (classifiers.empty() && regressors.empty()) fail_usage("sweep needs at least one learner");
    for (double w : window_lengths_ms) WindowSpec{w, stride_ms}.validate();
    for (int g : grid_sizes) {
        if (g < 1) fail_usage("grid sizes must be at least 1");
    }
    for (auto l : classifiers) {
        if (!supports(l, Task::Classification)) fail_usage(std::string(learner_name(l)) + " cannot classify");
    }
    for (auto l : regressors) {
        if (!supports(l, Task::Regression)) fail_usage(std::string(learner_name(l)) + " cannot regress");
    }
    if (folds < 2) fail_usage("sweep needs at least 2 folds");
    if (threads < 1) fail_usage("threads must be at least 1");
    rates.validate();
}

Dataset build_dataset(std::span<const Recording> recordings, const WindowSpec& window, int grid, bool three_d,
                      const CameraRates& rates) {
    Dataset d;
    for (std::size_t r = 0; r < recordings.size(); ++r) {
        const auto windows = make_labeled_windows(recordings[r], window, rates);
        append_window_features(d, windows.windows, GridSpec::square(grid, three_d, recordings[r].bounds),
                               static_cast<int>(r));
    }
    if (d.dim == 0) d.dim = GridSpec::square(grid, three_d, {}).cell_count();
    return d;
}

namespace {

struct Job {
    std::size_t window_idx;
    bool three_d;
    int grid;
};

std::vector<CellResult> run_job(const Job& job, std::span<const std::vector<TimeWindow>> windows_per_rec,
                                std::span<const Recording> recordings, const SweepConfig& cfg) {
    const double window_ms = cfg.window_lengths_ms[job.window_idx];
    Dataset all;
    for (std::size_t r = 0; r < recordings.size(); ++r) {
        append_window_features(all, windows_per_rec[r], GridSpec::square(job.grid, job.three_d, recordings[r].bounds),
                               static_cast<int>(r));
    }
    all.dim = GridSpec::square(job.grid, job.three_d, {}).cell_count();

    std::vector<CellResult> cells;
    auto run_task = [&](Task task, const std::vector<Learner>& learners, const Dataset& data) {
        const auto plan_seed = derive_seed(cfg.seed, job.window_idx * 2 + (task == Task::Regression ? 1 : 0));
        std::optional<FoldPlan> plan;
        std::string reason;
        try {
            if (data.size() < static_cast<std::size_t>(cfg.folds)) {
                reason = "too_few_windows";
            } else if (cfg.fold_mode == FoldMode::Recording) {
                plan = group_kfold(data.groups, cfg.folds, plan_seed);
            } else if (task == Task::Classification) {
                plan = stratified_kfold(data.labels, cfg.folds, plan_seed);
            } else {
                plan = kfold_split(data.size(), cfg.folds, plan_seed);
            }
        } catch (const Error&) {
            reason = "too_few_groups";
        }
        if (task == Task::Classification && plan) {
            const auto ones = std::count(data.labels.begin(), data.labels.end(), 1);
            if (ones == 0 || static_cast<std::size_t>(ones) == data.size()) reason = "single_class";
        }
        for (auto learner : learners) {
            CellResult cell;
            cell.task = task;
            cell.three_d = job.three_d;
            cell.learner = learner;
            cell.window_ms = window_ms;
            cell.grid = job.grid;
            cell.n_windows = data.size();
            if (!reason.empty()) {
                cell.skipped = true;
                cell.reason = reason;
            } else {
                try {
                    LearnerParams params = cfg.params;
                    params.seed = derive_seed(cfg.seed, 0x5EED);
                    cell.cv = cross_validate(data, task, learner, params, *plan);
                } catch (const Error&) {
                    cell.skipped = true;
                    cell.reason = "fit_error";
                }
            }
            cells.push_back(std::move(cell));
        }
    };
    if (!cfg.classifiers.empty()) run_task(Task::Classification, cfg.classifiers, all);
    if (!cfg.regressors.empty()) run_task(Task::Regression, cfg.regressors, all.positives());
    return cells;
}

int learner_rank(const SweepConfig& cfg, Task task, Learner l) {
    const auto& list = task == Task::Classification ? cfg.classifiers : cfg.regressors;
    return static_cast<int>(std::find(list.begin(), list.end(), l) - list.begin());
}

}  // namespace

SweepResult run_sweep(std::span<const Recording> recordings, const SweepConfig& cfg) {
    cfg.validate();
    if (recordings.empty()) fail_usage("sweep needs at least one recording");
    RunGuard guard(RunGuard::Kind::Sweep);

    // windows[w][r]: labeled windows of recording r at window length w
    std::vector<std::vector<std::vector<TimeWindow>>> windows(cfg.window_lengths_ms.size());
    for (std::size_t w = 0; w < cfg.window_lengths_ms.size(); ++w) {
        for (const auto& rec : recordings) {
            windows[w].push_back(make_labeled_windows(rec, WindowSpec{cfg.window_lengths_ms[w], cfg.stride_ms}, cfg.rates).windows);
        }
    }

    std::vector<Job> jobs;
    for (std::size_t w = 0; w < cfg.window_lengths_ms.size(); ++w) {
        for (bool d : cfg.dims) {
            for (int g : cfg.grid_sizes) jobs.push_back({w, d, g});
        }
    }

    std::vector<std::vector<CellResult>> results(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    std::mutex progress_mutex;
    std::size_t done = 0;
    auto worker = [&] {
        for (std::size_t j = next++; j < jobs.size(); j = next++) {
            try {
                results[j] = run_job(jobs[j], windows[jobs[j].window_idx], recordings, cfg);
            } catch (...) {
                errors[j] = std::current_exception();
            }
            if (cfg.progress) {
                std::lock_guard lock(progress_mutex);
                cfg.progress(++done, jobs.size());
            }
        }
    };
    const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), jobs.size());
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    SweepResult out;
    out.kernel_cap = cfg.params.kernel_cap;
    for (auto& r : results) {
        for (auto& c : r) out.cells.push_back(std::move(c));
    }
    std::stable_sort(out.cells.begin(), out.cells.end(), [&](const CellResult& a, const CellResult& b) {
        auto key = [&](const CellResult& c) {
            return std::tuple(c.task == Task::Regression, c.three_d, learner_rank(cfg, c.task, c.learner));
        };
        return key(a) < key(b);
    });
    return out;
}

namespace {

std::string dims_name(bool three_d) { return three_d ? "3d" : "2d"; }

}  // namespace

std::string format_results_csv(const SweepResult& result) {
    std::string out = "dims,learner,window_ms,grid,fold,metric,value\n";
    for (const auto& c : result.cells) {
        if (c.skipped) continue;
        for (std::size_t m = 0; m < c.cv.metrics.size(); ++m) {
            for (std::size_t f = 0; f < c.cv.values[m].size(); ++f) {
                out += dims_name(c.three_d) + "," + learner_name(c.learner) + "," + text::format_double(c.window_ms) +
                       "," + std::to_string(c.grid) + "," + std::to_string(f) + "," + c.cv.metrics[m] + "," +
                       text::format_double(c.cv.values[m][f]) + "\n";
            }
        }
    }
    return out;
}

std::string format_summary_csv(const SweepResult& result) {
    std::string out = "task,dims,learner,window_ms,grid,metric,mean,std,n_windows,train_rows_used,status\n";
    for (const auto& c : result.cells) {
        const std::string prefix = std::string(task_name(c.task)) + "," + dims_name(c.three_d) + "," +
                                   learner_name(c.learner) + "," + text::format_double(c.window_ms) + "," +
                                   std::to_string(c.grid) + ",";
        if (c.skipped) {
            const char* metric = c.task == Task::Classification ? "accuracy" : "all";
            out += prefix + metric + ",,," + std::to_string(c.n_windows) + ",,skipped:" + c.reason + "\n";
            continue;
        }
        std::string status = "ok";
        if (c.cv.svm_unconverged_folds > 0) status = "ok:svm_max_iter_" + std::to_string(c.cv.svm_unconverged_folds);
        for (std::size_t m = 0; m < c.cv.metrics.size(); ++m) {
            out += prefix + c.cv.metrics[m] + "," + text::format_double(c.cv.mean[m]) + "," +
                   text::format_double(c.cv.stddev[m]) + "," + std::to_string(c.n_windows) + "," +
                   std::to_string(c.cv.max_used_rows) + "," + status + "\n";
        }
    }
    return out;
}

std::string format_pivot_csv(const SweepResult& result, Task task) {
    std::vector<double> windows;
    for (const auto& c : result.cells) {
        if (c.task == task && std::find(windows.begin(), windows.end(), c.window_ms) == windows.end()) {
            windows.push_back(c.window_ms);
        }
    }
    std::sort(windows.begin(), windows.end());
    const std::vector<std::string> metrics =
        task == Task::Classification ? std::vector<std::string>{"acc"} : std::vector<std::string>{"X", "Y", "W", "H"};

    std::string out = "dims,learner,grid";
    for (double w : windows) {
        for (const auto& m : metrics) out += "," + m + "@" + text::format_double(w);
    }
    out += '\n';

    // Row key: (dims, learner, grid) in first-seen order.
    std::vector<std::tuple<bool, Learner, int>> keys;
    std::map<std::tuple<bool, Learner, int, double>, const CellResult*> lookup;
    for (const auto& c : result.cells) {
        if (c.task != task) continue;
        const auto key = std::tuple(c.three_d, c.learner, c.grid);
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
        lookup[std::tuple(c.three_d, c.learner, c.grid, c.window_ms)] = &c;
    }
    for (const auto& [d, l, g] : keys) {
        out += dims_name(d) + "," + learner_name(l) + "," + std::to_string(g);
        for (double w : windows) {
            const auto it = lookup.find(std::tuple(d, l, g, w));
            for (std::size_t m = 0; m < metrics.size(); ++m) {
                out += ',';
                if (it != lookup.end() && !it->second->skipped) out += text::format_double(it->second->cv.mean[m]);
            }
        }
        out += '\n';
    }
    return out;
}

}  // namespace gazeheat
