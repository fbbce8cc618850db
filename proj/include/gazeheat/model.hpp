#pragma once

// Learner-agnostic model handle and the binary model file.
//
// Model file layout, little-endian:
//   char[4] "GZHM", u32 version (1), u8 learner, u8 task, u64 dim, then a
//   learner payload. Sparse rows are written as u32 nnz followed by nnz
//   pairs of (u32 index, f64 value).
//   knn:    i32 k, u64 n, n rows, then n labels (u8) or n x 4 f64 targets
//   trees:  u32 tree count; per tree u32 node count, per node
//           i32 feature, f64 threshold, i32 left, i32 right, u32 count, 4 x f64 value
//   svm:    f64 gamma, f64 c, f64 bias, i64 iterations, u8 converged,
//           f64 kkt_gap, u64 n, n x (row, f64 coefficient)
//   gp:     f64 length_scale, f64 signal_sd, f64 noise_sd, 4 x f64 mean,
//           u64 n, n x (row, 4 x f64 weight)

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "gazeheat/dataset.hpp"
#include "gazeheat/gp.hpp"
#include "gazeheat/knn.hpp"
#include "gazeheat/svm.hpp"
#include "gazeheat/trees.hpp"

namespace gazeheat {

enum class Learner : std::uint8_t { Knn = 0, BaggedTrees = 1, Svm = 2, Gp = 3 };

const char* learner_name(Learner learner) noexcept;
Learner parse_learner(const std::string& name);
bool supports(Learner learner, Task task) noexcept;

struct LearnerParams {
    KnnParams knn;
    int trees_n = 30;
    int trees_min_leaf_classification = 1;
    int trees_min_leaf_regression = 5;
    SvmParams svm;
    GpParams gp;
    // SVM and GP train on a uniform subsample when the set is larger.
    std::size_t kernel_cap = 3000;
    std::uint64_t seed = 0;
};

struct FitReport {
    std::size_t train_rows = 0;  // rows offered
    std::size_t used_rows = 0;   // rows after the kernel-method cap
    std::optional<SvmFitInfo> svm;
};

// Sorted uniform subsample of `cap` indices out of n, deterministic per seed.
std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t cap, std::uint64_t seed);

class Model {
public:
    using Variant = std::variant<KnnModel, BaggedTreesModel, SvmModel, GpModel>;

    static Model fit(Learner learner, Task task, const Dataset& data, const LearnerParams& params,
                     FitReport* report = nullptr);

    Learner learner() const noexcept { return static_cast<Learner>(impl_.index()); }
    Task task() const noexcept { return task_; }
    std::size_t dim() const noexcept { return dim_; }
    const Variant& impl() const noexcept { return impl_; }

    int classify(const SparseVector& x) const;
    Target4 regress(const SparseVector& x) const;

    // Dense entry point used for single-input prediction.
    int classify(std::span<const double> x) const;
    Target4 regress(std::span<const double> x) const;

    std::string serialize() const;
    static Model deserialize(std::string_view bytes, const std::string& origin = "<memory>");
    void save(const std::string& path) const;
    static Model load(const std::string& path);

private:
    Model(Variant impl, Task task, std::size_t dim) : impl_(std::move(impl)), task_(task), dim_(dim) {}

    Variant impl_;
    Task task_;
    std::size_t dim_;
};

}  // namespace gazeheat
