#pragma once

// Single-input prediction timing and memory measurement.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gazeheat/gaze_data.hpp"
#include "gazeheat/model.hpp"
#include "gazeheat/windowing.hpp"

namespace gazeheat {

// Heap accounting on the calling thread. While tracking is active, every
// global operator new/delete on that thread updates a running balance; the
// high-water mark of the balance is reported.
namespace alloc {
void begin_tracking() noexcept;
struct Usage {
    std::int64_t peak_bytes = 0;
    std::int64_t allocations = 0;
};
Usage end_tracking() noexcept;
}  // namespace alloc

struct TimingResult {
    std::vector<double> repetitions_s;  // total seconds per repetition
    double median_s = 0.0;
    std::size_t n_predictions = 0;
    bool empty = false;
};

// Runs one untimed warm-up pass, then `repetitions` timed passes of
// sequential single-input predictions over the given sparse inputs. Each
// input is expanded to a dense buffer outside the timed region.
TimingResult time_predictions(const Model& model, std::span<const SparseVector> inputs, int repetitions = 3);

struct MemoryResult {
    std::size_t input_bytes = 0;      // one serialized feature record
    std::size_t transient_bytes = 0;  // heap high-water mark of one prediction
    std::size_t total_bytes() const noexcept { return input_bytes + transient_bytes; }
};

MemoryResult measure_memory(const Model& model, std::span<const double> input);

std::string memory_methodology();
std::string environment_descriptor();

struct BenchConfig {
    std::vector<int> grid_sizes{10, 20, 30, 40, 50};
    std::vector<bool> dims{false, true};
    std::vector<Learner> learners{Learner::Knn, Learner::BaggedTrees, Learner::Svm};
    double window_ms = 250.0;
    std::size_t n_predictions = 1000;
    int repetitions = 3;
    LearnerParams params;
    CameraRates rates;

    void validate() const;
};

struct BenchReport {
    Learner learner = Learner::Knn;
    Task task = Task::Classification;
    bool three_d = false;
    int grid = 0;
    std::size_t train_rows = 0;
    TimingResult timing;
    MemoryResult memory;
};

// Trains each learner on all windows of the corpus, then times predictions
// of the first n distinct feature vectors.
std::vector<BenchReport> run_bench(std::span<const Recording> recordings, const BenchConfig& cfg);

std::string format_bench_csv(std::span<const BenchReport> reports);
std::string format_bench_table(std::span<const BenchReport> reports);

}  // namespace gazeheat
