#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace gazeheat {

// Compressed feature row: strictly increasing indices, nonzero values only.
// Heatmap features are mostly zero, so learners work on this form.
struct SparseVector {
    std::vector<std::uint32_t> index;
    std::vector<double> value;

    std::size_t nnz() const noexcept { return index.size(); }
    // Value at a dense position (binary search); zero when absent.
    double at(std::uint32_t i) const noexcept;

    friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

SparseVector to_sparse(std::span<const double> dense);
std::vector<double> to_dense(const SparseVector& v, std::size_t dim);

// Sum of (a_i - b_i)^2 accumulated in increasing index order. Positions where
// both are zero contribute exactly nothing, so the result is bit-identical to
// the plain dense loop.
double squared_distance(const SparseVector& a, const SparseVector& b) noexcept;

}  // namespace gazeheat
