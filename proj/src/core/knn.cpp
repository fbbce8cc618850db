#include "gazeheat/knn.hpp"

#include <algorithm>
#include <utility>

#include "gazeheat/error.hpp"

namespace gazeheat {

KnnModel KnnModel::fit(const Dataset& data, Task task, const KnnParams& params) {
    data.validate(task);
    if (params.k < 1) fail_usage("knn: k must be at least 1");
    if (static_cast<std::size_t>(params.k) > data.size()) fail_usage("knn: k exceeds the training set size");
    Dataset stored;
    stored.dim = data.dim;
    stored.rows = data.rows;
    if (task == Task::Classification) {
        stored.labels = data.labels;
    } else {
        stored.targets = data.targets;
    }
    return from_parts(std::move(stored), task, params.k);
}

KnnModel KnnModel::from_parts(Dataset data, Task task, int k) {
    KnnModel m;
    m.data_ = std::move(data);
    m.task_ = task;
    m.k_ = k;
    const std::size_t dim = m.data_.dim;
    if (dim > 0 && m.data_.size() <= dense_limit / dim) {
        m.dense_.assign(m.data_.size() * dim, 0.0);
        for (std::size_t i = 0; i < m.data_.size(); ++i) {
            const auto& r = m.data_.rows[i];
            for (std::size_t j = 0; j < r.nnz(); ++j) m.dense_[i * dim + r.index[j]] = r.value[j];
        }
    }
    return m;
}

std::vector<std::size_t> KnnModel::nearest(std::vector<std::pair<double, std::size_t>>& dist) const {
    const auto k = static_cast<std::size_t>(k_);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::vector<std::size_t> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = dist[i].second;
    return out;
}

std::vector<std::size_t> KnnModel::neighbors(const SparseVector& query) const {
    if (!query.index.empty() && query.index.back() >= data_.dim) fail_usage("knn: query dimension mismatch");
    std::vector<std::pair<double, std::size_t>> dist(data_.size());
    for (std::size_t i = 0; i < data_.size(); ++i) dist[i] = {squared_distance(query, data_.rows[i]), i};
    return nearest(dist);
}

std::vector<std::size_t> KnnModel::neighbors(std::span<const double> query) const {
    const std::size_t dim = data_.dim;
    if (query.size() != dim) fail_usage("knn: query dimension mismatch");
    if (dense_.empty()) return neighbors(to_sparse(query));
    std::vector<std::pair<double, std::size_t>> dist(data_.size());
    for (std::size_t i = 0; i < data_.size(); ++i) {
        const double* row = dense_.data() + i * dim;
        double s = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = query[j] - row[j];
            s += d * d;
        }
        dist[i] = {s, i};
    }
    return nearest(dist);
}

int KnnModel::vote(const std::vector<std::size_t>& nn) const {
    int ones = 0;
    for (auto i : nn) ones += data_.labels[i];
    const int zeros = static_cast<int>(nn.size()) - ones;
    if (ones == zeros) return data_.labels[nn.front()];
    return ones > zeros ? 1 : 0;
}

Target4 KnnModel::average(const std::vector<std::size_t>& nn) const {
    Target4 sum{};
    for (auto i : nn) {
        for (int c = 0; c < 4; ++c) sum[c] += data_.targets[i][c];
    }
    for (auto& v : sum) v = std::clamp(v / static_cast<double>(nn.size()), 0.0, 1.0);
    return sum;
}

int KnnModel::classify(const SparseVector& query) const {
    if (task_ != Task::Classification) fail_usage("knn: model was trained for regression");
    return vote(neighbors(query));
}

int KnnModel::classify(std::span<const double> query) const {
    if (task_ != Task::Classification) fail_usage("knn: model was trained for regression");
    return vote(neighbors(query));
}

Target4 KnnModel::regress(const SparseVector& query) const {
    if (task_ != Task::Regression) fail_usage("knn: model was trained for classification");
    return average(neighbors(query));
}

Target4 KnnModel::regress(std::span<const double> query) const {
    if (task_ != Task::Regression) fail_usage("knn: model was trained for classification");
    return average(neighbors(query));
}

}  // namespace gazeheat
