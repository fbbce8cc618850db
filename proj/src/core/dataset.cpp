#include "gazeheat/dataset.hpp"

#include <cmath>

#include "gazeheat/error.hpp"

namespace gazeheat {

const char* task_name(Task task) noexcept {
    return task == Task::Classification ? "classification" : "regression";
}

Task parse_task(const std::string& name) {
    if (name == "classification" || name == "class") return Task::Classification;
    if (name == "regression" || name == "reg") return Task::Regression;
    fail_usage("unknown task '" + name + "' (expected classification or regression)");
}

void Dataset::validate(Task task) const {
    if (rows.empty()) fail_usage("dataset is empty");
    if (dim == 0) fail_usage("dataset dimension is zero");
    for (const auto& r : rows) {
        if (!r.index.empty() && r.index.back() >= dim) fail_usage("feature index exceeds dataset dimension");
    }
    if (task == Task::Classification) {
        if (labels.size() != rows.size()) fail_usage("label count does not match row count");
        for (int l : labels) {
            if (l != 0 && l != 1) fail_usage("classification labels must be 0 or 1");
        }
    } else {
        if (targets.size() != rows.size()) fail_usage("target count does not match row count");
        for (const auto& t : targets) {
            for (double v : t) {
                if (!std::isfinite(v)) fail_usage("regression targets must be finite");
            }
        }
    }
    if (!groups.empty() && groups.size() != rows.size()) fail_usage("group count does not match row count");
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    Dataset out;
    out.dim = dim;
    out.rows.reserve(indices.size());
    for (auto i : indices) {
        out.rows.push_back(rows[i]);
        if (!labels.empty()) out.labels.push_back(labels[i]);
        if (!targets.empty()) out.targets.push_back(targets[i]);
        if (!groups.empty()) out.groups.push_back(groups[i]);
    }
    return out;
}

Dataset Dataset::positives() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 1) idx.push_back(i);
    }
    return subset(idx);
}

}  // namespace gazeheat
