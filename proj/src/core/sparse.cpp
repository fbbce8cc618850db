#include "gazeheat/sparse.hpp"

#include <algorithm>

namespace gazeheat {

double SparseVector::at(std::uint32_t i) const noexcept {
    auto it = std::lower_bound(index.begin(), index.end(), i);
    if (it == index.end() || *it != i) return 0.0;
    return value[static_cast<std::size_t>(it - index.begin())];
}

SparseVector to_sparse(std::span<const double> dense) {
    SparseVector v;
    for (std::size_t i = 0; i < dense.size(); ++i) {
        if (dense[i] != 0.0) {
            v.index.push_back(static_cast<std::uint32_t>(i));
            v.value.push_back(dense[i]);
        }
    }
    return v;
}

std::vector<double> to_dense(const SparseVector& v, std::size_t dim) {
    std::vector<double> out(dim, 0.0);
    for (std::size_t k = 0; k < v.nnz(); ++k) out[v.index[k]] = v.value[k];
    return out;
}

double squared_distance(const SparseVector& a, const SparseVector& b) noexcept {
    double sum = 0.0;
    std::size_t i = 0, j = 0;
    const std::size_t na = a.nnz(), nb = b.nnz();
    while (i < na && j < nb) {
        double d;
        if (a.index[i] == b.index[j]) {
            d = a.value[i++] - b.value[j++];
        } else if (a.index[i] < b.index[j]) {
            d = a.value[i++];
        } else {
            d = -b.value[j++];
        }
        sum += d * d;
    }
    for (; i < na; ++i) sum += a.value[i] * a.value[i];
    for (; j < nb; ++j) sum += b.value[j] * b.value[j];
    return sum;
}

}  // namespace gazeheat
