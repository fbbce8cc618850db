#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gazeheat/sparse.hpp"

namespace gazeheat {

enum class Task { Classification, Regression };

const char* task_name(Task task) noexcept;
Task parse_task(const std::string& name);

using Target4 = std::array<double, 4>;  // normalized x, y, w, h

// N feature rows of dimension `dim`. Classification reads `labels`,
// regression reads `targets`; rows with label 0 carry NaN targets.
struct Dataset {
    std::size_t dim = 0;
    std::vector<SparseVector> rows;
    std::vector<int> labels;
    std::vector<Target4> targets;
    std::vector<int> groups;  // source recording per row, may be empty

    std::size_t size() const noexcept { return rows.size(); }
    // Checks shape consistency for the given task; throws Usage errors.
    void validate(Task task) const;
    Dataset subset(std::span<const std::size_t> indices) const;
    // Rows with label 1 only, the regression population.
    Dataset positives() const;
};

}  // namespace gazeheat
