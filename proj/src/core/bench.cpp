#include "gazeheat/bench.hpp"

#include <malloc.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <new>
#include <sstream>
#include <thread>

#include "gazeheat/error.hpp"
#include "gazeheat/eval.hpp"
#include "gazeheat/features.hpp"
#include "gazeheat/run_guard.hpp"
#include "gazeheat/text.hpp"

namespace gazeheat::alloc {
namespace {

struct Tracker {
    bool active = false;
    std::int64_t balance = 0;
    std::int64_t peak = 0;
    std::int64_t count = 0;
};

thread_local Tracker tracker;

}  // namespace

void begin_tracking() noexcept { tracker = Tracker{true, 0, 0, 0}; }

Usage end_tracking() noexcept {
    tracker.active = false;
    return Usage{tracker.peak, tracker.count};
}

void note_alloc(void* p) noexcept {
    if (!tracker.active || p == nullptr) return;
    tracker.balance += static_cast<std::int64_t>(malloc_usable_size(p));
    tracker.peak = std::max(tracker.peak, tracker.balance);
    ++tracker.count;
}

void note_free(void* p) noexcept {
    if (!tracker.active || p == nullptr) return;
    tracker.balance -= static_cast<std::int64_t>(malloc_usable_size(p));
}

}  // namespace gazeheat::alloc

// Replacement global allocation functions. Aligned variants are left to the
// runtime; nothing in the prediction paths over-aligns.
__attribute__((visibility("default"))) void* operator new(std::size_t n) {
    void* p = std::malloc(n == 0 ? 1 : n);
    if (!p) throw std::bad_alloc();
    gazeheat::alloc::note_alloc(p);
    return p;
}

__attribute__((visibility("default"))) void* operator new[](std::size_t n) { return ::operator new(n); }

__attribute__((visibility("default"))) void operator delete(void* p) noexcept {
    gazeheat::alloc::note_free(p);
    std::free(p);
}

__attribute__((visibility("default"))) void operator delete[](void* p) noexcept { ::operator delete(p); }
__attribute__((visibility("default"))) void operator delete(void* p, std::size_t) noexcept { ::operator delete(p); }
__attribute__((visibility("default"))) void operator delete[](void* p, std::size_t) noexcept { ::operator delete(p); }

namespace gazeheat {

namespace {

using Clock = std::chrono::steady_clock;

// Keeps predictions observable so they are not optimized away.
volatile double g_sink = 0.0;

void predict_once(const Model& model, std::span<const double> dense) {
    if (model.task() == Task::Classification) {
        g_sink = g_sink + model.classify(dense);
    } else {
        g_sink = g_sink + model.regress(dense)[0];
    }
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

TimingResult time_predictions(const Model& model, std::span<const SparseVector> inputs, int repetitions) {
    if (repetitions < 1) fail_usage("bench: repetitions must be at least 1");
    TimingResult out;
    out.n_predictions = inputs.size();
    if (inputs.empty()) {
        out.empty = true;
        out.repetitions_s.assign(static_cast<std::size_t>(repetitions), 0.0);
        return out;
    }
    for (const auto& x : inputs) {
        if (!x.index.empty() && x.index.back() >= model.dim()) fail_usage("bench: input dimension mismatch");
    }
    std::vector<double> dense(model.dim(), 0.0);
    auto load = [&](const SparseVector& x) {
        std::fill(dense.begin(), dense.end(), 0.0);
        for (std::size_t k = 0; k < x.nnz(); ++k) dense[x.index[k]] = x.value[k];
    };
    for (const auto& x : inputs) {
        load(x);
        predict_once(model, dense);
    }
    for (int r = 0; r < repetitions; ++r) {
        Clock::duration total{};
        for (const auto& x : inputs) {
            load(x);
            const auto t0 = Clock::now();
            predict_once(model, dense);
            total += Clock::now() - t0;
        }
        out.repetitions_s.push_back(std::chrono::duration<double>(total).count());
    }
    out.median_s = median(out.repetitions_s);
    return out;
}

MemoryResult measure_memory(const Model& model, std::span<const double> input) {
    if (input.size() != model.dim()) fail_usage("bench: input dimension mismatch");
    MemoryResult out;
    out.input_bytes = feature_record_bytes(input.size());
    alloc::begin_tracking();
    predict_once(model, input);
    const auto usage = alloc::end_tracking();
    out.transient_bytes = static_cast<std::size_t>(std::max<std::int64_t>(usage.peak_bytes, 0));
    return out;
}

std::string memory_methodology() {
    return "memory_bytes = feature-file record size of one input (1 label byte + 16 target bytes + 4 bytes per "
           "cell) + heap high-water mark (malloc_usable_size) of all global operator new calls on the "
           "predicting thread during one dense-input prediction; model storage excluded";
}

std::string environment_descriptor() {
    std::string cpu = "unknown";
    std::ifstream in("/proc/cpuinfo");
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("model name", 0) == 0) {
            const auto colon = line.find(':');
            if (colon != std::string::npos) cpu = line.substr(colon + 2);
            break;
        }
    }
    for (auto& ch : cpu) {
        if (ch == ',') ch = ' ';
    }
    return cpu + "; hardware_threads=" + std::to_string(std::thread::hardware_concurrency()) + "; single-threaded";
}

void BenchConfig::validate() const {
    if (grid_sizes.empty() || dims.empty() || learners.empty()) fail_usage("bench lists must be nonempty");
    for (int g : grid_sizes) {
        if (g < 1) fail_usage("bench grid sizes must be at least 1");
    }
    WindowSpec{window_ms, 0.0}.validate();
    if (repetitions < 1) fail_usage("bench repetitions must be at least 1");
    rates.validate();
}

std::vector<BenchReport> run_bench(std::span<const Recording> recordings, const BenchConfig& cfg) {
    cfg.validate();
    if (recordings.empty()) fail_usage("bench needs at least one recording");
    RunGuard guard(RunGuard::Kind::Bench);

    std::vector<BenchReport> reports;
    for (bool three_d : cfg.dims) {
        for (int grid : cfg.grid_sizes) {
            const Dataset all = build_dataset(recordings, WindowSpec{cfg.window_ms, 0.0}, grid, three_d, cfg.rates);
            if (all.size() == 0) fail_data("bench: corpus produced no windows");

            std::vector<SparseVector> inputs;
            for (const auto& row : all.rows) {
                if (inputs.size() >= cfg.n_predictions) break;
                if (std::find(inputs.begin(), inputs.end(), row) == inputs.end()) inputs.push_back(row);
            }
            if (inputs.size() < cfg.n_predictions) {
                fail_data("bench: corpus has only " + std::to_string(inputs.size()) + " distinct inputs, " +
                          std::to_string(cfg.n_predictions) + " requested");
            }

            for (auto learner : cfg.learners) {
                const Task task = supports(learner, Task::Classification) ? Task::Classification : Task::Regression;
                const Dataset train = task == Task::Classification ? all : all.positives();
                BenchReport rep;
                rep.learner = learner;
                rep.task = task;
                rep.three_d = three_d;
                rep.grid = grid;
                FitReport fit;
                const Model model = Model::fit(learner, task, train, cfg.params, &fit);
                rep.train_rows = fit.used_rows;
                rep.timing = time_predictions(model, inputs, cfg.repetitions);
                const auto probe = inputs.empty() ? std::vector<double>(all.dim, 0.0) : to_dense(inputs.front(), all.dim);
                rep.memory = measure_memory(model, probe);
                reports.push_back(std::move(rep));
            }
        }
    }
    return reports;
}

std::string format_bench_csv(std::span<const BenchReport> reports) {
    std::string out =
        "learner,task,dims,grid,train_rows,n_predictions,time_rep1_s,time_rep2_s,time_rep3_s,time_median_s,"
        "input_bytes,transient_peak_bytes,memory_bytes,empty,environment\n";
    const auto env = environment_descriptor();
    for (const auto& r : reports) {
        out += std::string(learner_name(r.learner)) + "," + task_name(r.task) + "," + (r.three_d ? "3d" : "2d") +
               "," + std::to_string(r.grid) + "," + std::to_string(r.train_rows) + "," +
               std::to_string(r.timing.n_predictions);
        for (std::size_t i = 0; i < 3; ++i) {
            out += ",";
            if (i < r.timing.repetitions_s.size()) out += text::format_double(r.timing.repetitions_s[i]);
        }
        out += "," + text::format_double(r.timing.median_s) + "," + std::to_string(r.memory.input_bytes) + "," +
               std::to_string(r.memory.transient_bytes) + "," + std::to_string(r.memory.total_bytes()) + "," +
               (r.timing.empty ? "1" : "0") + "," + env + "\n";
    }
    return out;
}

std::string format_bench_table(std::span<const BenchReport> reports) {
    std::ostringstream os;
    os << "environment: " << environment_descriptor() << "\n";
    os << "time: wall seconds for n sequential single-input predictions, median of repetitions after one warm-up pass\n";
    os << "memory: " << memory_methodology() << "\n\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-14s %-4s %5s %8s %12s %12s %12s\n", "learner", "dims", "grid", "n",
                  "time [s]", "memory [KB]", "spread [s]");
    os << line;
    for (const auto& r : reports) {
        double lo = 0.0, hi = 0.0;
        if (!r.timing.repetitions_s.empty()) {
            const auto [mn, mx] = std::minmax_element(r.timing.repetitions_s.begin(), r.timing.repetitions_s.end());
            lo = *mn;
            hi = *mx;
        }
        std::snprintf(line, sizeof line, "%-14s %-4s %5d %8zu %12.4f %12.1f %12.4f\n", learner_name(r.learner),
                      r.three_d ? "3d" : "2d", r.grid, r.timing.n_predictions, r.timing.median_s,
                      static_cast<double>(r.memory.total_bytes()) / 1024.0, hi - lo);
        os << line;
    }
    return os.str();
}

}  // namespace gazeheat
