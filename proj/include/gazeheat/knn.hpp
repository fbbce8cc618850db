#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gazeheat/dataset.hpp"

namespace gazeheat {

struct KnnParams {
    int k = 1;
};

// Brute-force Euclidean k-nearest neighbours. Neighbours are ordered by
// (distance, training index), so equal distances resolve to the earlier row.
// Sparse queries scan the sparse training rows. For dense queries the rows are
// also kept as a row-major matrix when N x dim is at most dense_limit values.
// Both paths give bit-identical distances.
class KnnModel {
public:
    static constexpr std::size_t dense_limit = std::size_t{1} << 24;

    static KnnModel fit(const Dataset& data, Task task, const KnnParams& params = {});

    // Indices of the k nearest training rows, nearest first.
    std::vector<std::size_t> neighbors(const SparseVector& query) const;
    std::vector<std::size_t> neighbors(std::span<const double> query) const;

    // Majority vote; a tied vote takes the label of the single nearest row.
    int classify(const SparseVector& query) const;
    int classify(std::span<const double> query) const;
    // Mean of the k nearest targets.
    Target4 regress(const SparseVector& query) const;
    Target4 regress(std::span<const double> query) const;

    bool dense_storage() const noexcept { return !dense_.empty(); }

    Task task() const noexcept { return task_; }
    int k() const noexcept { return k_; }
    const Dataset& data() const noexcept { return data_; }

    static KnnModel from_parts(Dataset data, Task task, int k);

private:
    std::vector<std::size_t> nearest(std::vector<std::pair<double, std::size_t>>& dist) const;
    int vote(const std::vector<std::size_t>& nn) const;
    Target4 average(const std::vector<std::size_t>& nn) const;

    Dataset data_;
    std::vector<double> dense_;
    Task task_ = Task::Classification;
    int k_ = 1;
};

}  // namespace gazeheat
