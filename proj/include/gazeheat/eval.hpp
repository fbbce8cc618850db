#pragma once

// Cross-validation, metrics, and the window x grid x learner sweep.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gazeheat/dataset.hpp"
#include "gazeheat/gaze_data.hpp"
#include "gazeheat/model.hpp"
#include "gazeheat/windowing.hpp"

namespace gazeheat {

struct FoldPlan {
    int k = 5;
    std::vector<int> assignment;  // fold per sample
    std::uint64_t seed = 0;

    std::vector<std::size_t> test_indices(int fold) const;
    std::vector<std::size_t> train_indices(int fold) const;
    std::vector<std::size_t> sizes() const;
};

// Shuffled balanced partition; fold sizes differ by at most one.
FoldPlan kfold_split(std::size_t n, int k, std::uint64_t seed);
// As kfold_split, additionally balancing each class across folds.
FoldPlan stratified_kfold(std::span<const int> labels, int k, std::uint64_t seed);
// Whole groups (recordings) per fold; sizes follow the groups.
FoldPlan group_kfold(std::span<const int> groups, int k, std::uint64_t seed);

double accuracy(std::span<const int> predictions, std::span<const int> labels);
// Per-parameter mean absolute error, times 100.
std::array<double, 4> mae_normalized(std::span<const Target4> predictions, std::span<const Target4> truth);

enum class FoldMode { Window, Recording };
const char* fold_mode_name(FoldMode mode) noexcept;
FoldMode parse_fold_mode(const std::string& name);

struct CvResult {
    std::vector<std::string> metrics;           // "accuracy" or mae_x..mae_h
    std::vector<std::vector<double>> values;    // [metric][fold]
    std::vector<double> mean;                   // per metric
    std::vector<double> stddev;                 // sample standard deviation per metric
    std::size_t max_used_rows = 0;              // largest training set after the kernel cap
    int svm_unconverged_folds = 0;
};

CvResult cross_validate(const Dataset& data, Task task, Learner learner, const LearnerParams& params,
                        const FoldPlan& plan);

struct SweepConfig {
    std::vector<double> window_lengths_ms{100, 200, 300, 400, 500};
    double stride_ms = 0.0;  // 0: non-overlapping
    std::vector<int> grid_sizes{5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
    std::vector<bool> dims{false, true};  // false = 2D, true = 3D
    std::vector<Learner> classifiers{Learner::Knn, Learner::BaggedTrees, Learner::Svm};
    std::vector<Learner> regressors{Learner::Gp, Learner::BaggedTrees};
    int folds = 5;
    FoldMode fold_mode = FoldMode::Window;
    std::uint64_t seed = 0;
    int threads = 1;
    LearnerParams params;
    CameraRates rates;
    // Called after each (window, dims, grid) job with the finished and total
    // job counts. Calls are serialized; the order of jobs is not fixed.
    std::function<void(std::size_t, std::size_t)> progress;

    void validate() const;
};

struct CellResult {
    Task task = Task::Classification;
    bool three_d = false;
    Learner learner = Learner::Knn;
    double window_ms = 0.0;
    int grid = 0;
    std::size_t n_windows = 0;
    bool skipped = false;
    std::string reason;  // machine-readable skip code, empty when run
    CvResult cv;
};

struct SweepResult {
    std::vector<CellResult> cells;
    std::size_t kernel_cap = 0;
};

SweepResult run_sweep(std::span<const Recording> recordings, const SweepConfig& cfg);

// Featurizes all labeled windows of the recordings for one grid.
Dataset build_dataset(std::span<const Recording> recordings, const WindowSpec& window, int grid, bool three_d,
                      const CameraRates& rates = {});

// Long format: dims,learner,window_ms,grid,fold,metric,value
std::string format_results_csv(const SweepResult& result);
// One row per cell and metric with mean, std, and status.
std::string format_summary_csv(const SweepResult& result);
// Grid-by-window tables for each task.
std::string format_pivot_csv(const SweepResult& result, Task task);

}  // namespace gazeheat
