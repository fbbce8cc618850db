#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gazeheat/dataset.hpp"

namespace gazeheat {

struct TreeParams {
    int n_trees = 30;
    int min_leaf = 1;  // 5 is the regression default
    std::uint64_t seed = 0;
    bool bootstrap = true;  // false trains every tree on the full set in order

    static TreeParams defaults_for(Task task) {
        TreeParams p;
        p.min_leaf = task == Task::Classification ? 1 : 5;
        return p;
    }
};

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;     // go left when x[feature] <= threshold
    std::int32_t left = -1;
    std::int32_t right = -1;
    // Leaf payload: class-1 fraction in slot 0 for classification, the mean
    // target for regression.
    Target4 value{};
    std::uint32_t count = 0;  // training samples that reached the node
};

// Axis-aligned CART tree grown without depth limit. Split candidates are the
// midpoints between consecutive distinct feature values; the split with the
// largest impurity decrease wins (Gini for classification, summed squared
// error over the four outputs for regression). Ties keep the lowest feature
// and threshold.
class DecisionTree {
public:
    static DecisionTree grow(const Dataset& data, Task task, std::span<const std::size_t> sample,
                             int min_leaf);

    const TreeNode& leaf_for(const SparseVector& x) const;
    const TreeNode& leaf_for(std::span<const double> dense) const;

    const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
    static DecisionTree from_nodes(std::vector<TreeNode> nodes);

private:
    std::vector<TreeNode> nodes_;
};

class BaggedTreesModel {
public:
    static BaggedTreesModel fit(const Dataset& data, Task task, const TreeParams& params);

    // Majority vote over trees; a tied vote predicts 0.
    int classify(const SparseVector& x) const;
    int classify(std::span<const double> dense) const;
    // Mean of the per-tree leaf means.
    Target4 regress(const SparseVector& x) const;
    Target4 regress(std::span<const double> dense) const;

    Task task() const noexcept { return task_; }
    std::size_t dim() const noexcept { return dim_; }
    const std::vector<DecisionTree>& trees() const noexcept { return trees_; }

    static BaggedTreesModel from_parts(std::vector<DecisionTree> trees, Task task, std::size_t dim);

private:
    template <typename Query>
    int vote(const Query& x) const;
    template <typename Query>
    Target4 average(const Query& x) const;

    std::vector<DecisionTree> trees_;
    Task task_ = Task::Classification;
    std::size_t dim_ = 0;
};

}  // namespace gazeheat
