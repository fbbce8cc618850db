#include "gazeheat/trees.hpp"

#include <algorithm>
#include <limits>

#include "gazeheat/error.hpp"
#include "gazeheat/random.hpp"

namespace gazeheat {

namespace {

// Running sufficient statistics of a set of training samples.
struct Stats {
    double n = 0.0;
    double ones = 0.0;
    Target4 sum{};
    Target4 sumsq{};

    void add(const Dataset& d, Task task, std::size_t row, double sign = 1.0) {
        n += sign;
        if (task == Task::Classification) {
            ones += sign * d.labels[row];
        } else {
            for (int c = 0; c < 4; ++c) {
                const double y = d.targets[row][c];
                sum[c] += sign * y;
                sumsq[c] += sign * y * y;
            }
        }
    }

    void add(const Stats& o, double sign = 1.0) {
        n += sign * o.n;
        ones += sign * o.ones;
        for (int c = 0; c < 4; ++c) {
            sum[c] += sign * o.sum[c];
            sumsq[c] += sign * o.sumsq[c];
        }
    }

    // n * Gini for classification, total SSE for regression.
    double impurity(Task task) const {
        if (n <= 0.0) return 0.0;
        if (task == Task::Classification) {
            const double p = ones / n;
            return n * 2.0 * p * (1.0 - p);
        }
        double sse = 0.0;
        for (int c = 0; c < 4; ++c) sse += std::max(0.0, sumsq[c] - sum[c] * sum[c] / n);
        return sse;
    }
};

struct Entry {
    std::uint32_t feature;
    double value;
    std::uint32_t pos;  // position within the node's sample list

    bool operator<(const Entry& o) const {
        if (feature != o.feature) return feature < o.feature;
        if (value != o.value) return value < o.value;
        return pos < o.pos;
    }
};

struct Split {
    std::int32_t feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

constexpr double kMinGain = 1e-12;

// Scans one feature's sorted nonzero entries with the implicit zero block
// inserted where it belongs in value order.
void scan_feature(const Dataset& d, Task task, std::span<const std::size_t> samples,
                  std::span<const Entry> entries, const Stats& node, double node_impurity, int min_leaf,
                  Split& best) {
    Stats nonzero;
    for (const auto& e : entries) nonzero.add(d, task, samples[e.pos]);
    Stats zeros = node;
    zeros.add(nonzero, -1.0);
    const double zero_count = node.n - nonzero.n;

    Stats left;
    bool zeros_done = zero_count <= 0.0;
    double prev_value = 0.0;
    bool have_prev = false;

    auto consider = [&](double next_value) {
        if (!have_prev) return;
        const double nl = left.n;
        const double nr = node.n - nl;
        if (nl < min_leaf || nr < min_leaf) return;
        Stats right = node;
        right.add(left, -1.0);
        const double gain = node_impurity - left.impurity(task) - right.impurity(task);
        if (gain > best.gain + kMinGain) {
            best.gain = gain;
            best.feature = static_cast<std::int32_t>(entries.front().feature);
            best.threshold = prev_value + (next_value - prev_value) / 2.0;
            // Midpoints of adjacent doubles can round onto the upper value.
            if (!(best.threshold < next_value)) best.threshold = prev_value;
        }
    };

    std::size_t i = 0;
    while (i < entries.size() || !zeros_done) {
        double value;
        bool take_zero = false;
        if (!zeros_done && (i >= entries.size() || entries[i].value > 0.0)) {
            value = 0.0;
            take_zero = true;
        } else {
            value = entries[i].value;
        }
        consider(value);
        if (take_zero) {
            left.add(zeros);
            zeros_done = true;
        } else {
            std::size_t j = i;
            while (j < entries.size() && entries[j].value == value) {
                left.add(d, task, samples[entries[j].pos]);
                ++j;
            }
            i = j;
        }
        prev_value = value;
        have_prev = true;
    }
}

Target4 leaf_value(const Stats& s, Task task) {
    Target4 v{};
    if (task == Task::Classification) {
        v[0] = s.n > 0.0 ? s.ones / s.n : 0.0;
    } else {
        for (int c = 0; c < 4; ++c) v[c] = s.n > 0.0 ? s.sum[c] / s.n : 0.0;
    }
    return v;
}

}  // namespace

DecisionTree DecisionTree::grow(const Dataset& d, Task task, std::span<const std::size_t> sample, int min_leaf) {
    if (sample.empty()) fail_usage("tree: empty training sample");
    if (min_leaf < 1) fail_usage("tree: min_leaf must be at least 1");
    DecisionTree tree;

    struct Pending {
        std::int32_t node;
        std::vector<std::size_t> samples;
    };
    std::vector<Pending> stack;
    tree.nodes_.emplace_back();
    stack.push_back({0, std::vector<std::size_t>(sample.begin(), sample.end())});

    std::vector<Entry> entries;
    while (!stack.empty()) {
        Pending job = std::move(stack.back());
        stack.pop_back();
        const auto& samples = job.samples;

        Stats node;
        for (auto r : samples) node.add(d, task, r);
        const double impurity = node.impurity(task);
        tree.nodes_[job.node].value = leaf_value(node, task);
        tree.nodes_[job.node].count = static_cast<std::uint32_t>(samples.size());
        if (impurity <= kMinGain || samples.size() < 2 * static_cast<std::size_t>(min_leaf)) continue;

        entries.clear();
        for (std::size_t p = 0; p < samples.size(); ++p) {
            const auto& row = d.rows[samples[p]];
            for (std::size_t k = 0; k < row.nnz(); ++k) {
                entries.push_back({row.index[k], row.value[k], static_cast<std::uint32_t>(p)});
            }
        }
        std::sort(entries.begin(), entries.end());

        Split best;
        for (std::size_t a = 0; a < entries.size();) {
            std::size_t b = a;
            while (b < entries.size() && entries[b].feature == entries[a].feature) ++b;
            scan_feature(d, task, samples, std::span<const Entry>(entries.data() + a, b - a), node, impurity,
                         min_leaf, best);
            a = b;
        }
        if (best.feature < 0) continue;

        std::vector<std::size_t> left, right;
        for (auto r : samples) {
            (d.rows[r].at(static_cast<std::uint32_t>(best.feature)) <= best.threshold ? left : right).push_back(r);
        }
        if (left.empty() || right.empty()) fail_internal("tree: degenerate split");

        const auto li = static_cast<std::int32_t>(tree.nodes_.size());
        tree.nodes_.emplace_back();
        const auto ri = static_cast<std::int32_t>(tree.nodes_.size());
        tree.nodes_.emplace_back();
        auto& n = tree.nodes_[job.node];
        n.feature = best.feature;
        n.threshold = best.threshold;
        n.left = li;
        n.right = ri;
        stack.push_back({ri, std::move(right)});
        stack.push_back({li, std::move(left)});
    }
    return tree;
}

DecisionTree DecisionTree::from_nodes(std::vector<TreeNode> nodes) {
    if (nodes.empty()) fail_data("tree: no nodes");
    const auto n = static_cast<std::int32_t>(nodes.size());
    for (const auto& node : nodes) {
        if (node.feature >= 0 && (node.left <= 0 || node.left >= n || node.right <= 0 || node.right >= n)) {
            fail_data("tree: child index out of range");
        }
    }
    DecisionTree t;
    t.nodes_ = std::move(nodes);
    return t;
}

const TreeNode& DecisionTree::leaf_for(const SparseVector& x) const {
    const TreeNode* n = &nodes_.front();
    while (n->feature >= 0) {
        n = &nodes_[x.at(static_cast<std::uint32_t>(n->feature)) <= n->threshold ? n->left : n->right];
    }
    return *n;
}

const TreeNode& DecisionTree::leaf_for(std::span<const double> x) const {
    const TreeNode* n = &nodes_.front();
    while (n->feature >= 0) {
        n = &nodes_[x[static_cast<std::size_t>(n->feature)] <= n->threshold ? n->left : n->right];
    }
    return *n;
}

BaggedTreesModel BaggedTreesModel::fit(const Dataset& data, Task task, const TreeParams& params) {
    data.validate(task);
    if (params.n_trees < 1) fail_usage("bagged trees: n_trees must be at least 1");
    const std::size_t n = data.size();
    std::vector<DecisionTree> trees;
    trees.reserve(static_cast<std::size_t>(params.n_trees));
    std::vector<std::size_t> sample(n);
    for (int t = 0; t < params.n_trees; ++t) {
        if (params.bootstrap) {
            Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(t)));
            for (auto& s : sample) s = static_cast<std::size_t>(rng.below(n));
            std::sort(sample.begin(), sample.end());
        } else {
            for (std::size_t i = 0; i < n; ++i) sample[i] = i;
        }
        trees.push_back(DecisionTree::grow(data, task, sample, params.min_leaf));
    }
    return from_parts(std::move(trees), task, data.dim);
}

BaggedTreesModel BaggedTreesModel::from_parts(std::vector<DecisionTree> trees, Task task, std::size_t dim) {
    if (trees.empty()) fail_data("bagged trees: no trees");
    BaggedTreesModel m;
    m.trees_ = std::move(trees);
    m.task_ = task;
    m.dim_ = dim;
    for (const auto& t : m.trees_) {
        for (const auto& node : t.nodes()) {
            if (node.feature >= 0 && static_cast<std::size_t>(node.feature) >= dim) {
                fail_data("bagged trees: split feature exceeds dimension");
            }
        }
    }
    return m;
}

template <typename Query>
int BaggedTreesModel::vote(const Query& x) const {
    if (task_ != Task::Classification) fail_usage("bagged trees: model was trained for regression");
    std::size_t ones = 0;
    for (const auto& t : trees_) {
        if (t.leaf_for(x).value[0] > 0.5) ++ones;
    }
    return 2 * ones > trees_.size() ? 1 : 0;
}

template <typename Query>
Target4 BaggedTreesModel::average(const Query& x) const {
    if (task_ != Task::Regression) fail_usage("bagged trees: model was trained for classification");
    Target4 sum{};
    for (const auto& t : trees_) {
        const auto& v = t.leaf_for(x).value;
        for (int c = 0; c < 4; ++c) sum[c] += v[c];
    }
    for (auto& v : sum) v = std::clamp(v / static_cast<double>(trees_.size()), 0.0, 1.0);
    return sum;
}

int BaggedTreesModel::classify(const SparseVector& x) const {
    if (!x.index.empty() && x.index.back() >= dim_) fail_usage("bagged trees: query dimension mismatch");
    return vote(x);
}

int BaggedTreesModel::classify(std::span<const double> x) const {
    if (x.size() != dim_) fail_usage("bagged trees: query dimension mismatch");
    return vote(x);
}

Target4 BaggedTreesModel::regress(const SparseVector& x) const {
    if (!x.index.empty() && x.index.back() >= dim_) fail_usage("bagged trees: query dimension mismatch");
    return average(x);
}

Target4 BaggedTreesModel::regress(std::span<const double> x) const {
    if (x.size() != dim_) fail_usage("bagged trees: query dimension mismatch");
    return average(x);
}

}  // namespace gazeheat
