#pragma once

// Spatial gaze histograms. Each sample increments the cell selected by
// rounding its bound-normalized coordinate times the cell count; the grid is
// then divided by its total to form a distribution.

#include <cstddef>
#include <span>
#include <vector>

#include "gazeheat/gaze_data.hpp"
#include "gazeheat/sparse.hpp"

namespace gazeheat {

struct GridSpec {
    int gx = 10;
    int gy = 10;
    int gz = 1;  // 1 selects the 2D heatmap
    StimulusBounds bounds;

    void validate() const;
    std::size_t cell_count() const noexcept {
        return static_cast<std::size_t>(gx) * static_cast<std::size_t>(gy) * static_cast<std::size_t>(gz);
    }
    bool is_3d() const noexcept { return gz > 1; }

    static GridSpec square(int cells, bool three_d, const StimulusBounds& bounds) {
        return GridSpec{cells, cells, three_d ? cells : 1, bounds};
    }
};

// clamp(round(p / r * g), 0, g - 1), rounding half away from zero.
int bin_index(double p, double r, int g);

// Linear layout: x-major, then y, then z; offset = (x * gy + y) * gz + z.
class Heatmap {
public:
    explicit Heatmap(const GridSpec& spec);

    const GridSpec& spec() const noexcept { return spec_; }
    bool normalized() const noexcept { return normalized_; }
    std::span<const double> cells() const noexcept { return cells_; }

    double at(int x, int y, int z = 0) const { return cells_[offset(x, y, z)]; }
    std::size_t offset(int x, int y, int z) const;
    double total() const noexcept;

    void increment(int x, int y, int z) { cells_[offset(x, y, z)] += 1.0; }

private:
    friend Heatmap normalize(Heatmap h);
    friend Heatmap unflatten(std::span<const double> values, const GridSpec& spec);

    GridSpec spec_;
    std::vector<double> cells_;
    bool normalized_ = false;
};

struct FeatureVector {
    std::vector<double> values;
};

// Raw counts; every sample lands in exactly one cell. The depth index is
// pinned to 0 for 2D grids.
Heatmap build_heatmap(std::span<const GazeSample> samples, const GridSpec& spec);

// Throws a Data error on an all-zero heatmap.
Heatmap normalize(Heatmap h);

// Throws a Usage error if the heatmap is not normalized.
FeatureVector flatten(const Heatmap& h);

// Inverse of flatten; the result is marked normalized.
Heatmap unflatten(std::span<const double> values, const GridSpec& spec);

// build + normalize + flatten.
FeatureVector heatmap_feature(std::span<const GazeSample> samples, const GridSpec& spec);

// Same values as to_sparse(heatmap_feature(...)) without materializing the
// dense grid, which matters for large 3D grids.
SparseVector sparse_heatmap_feature(std::span<const GazeSample> samples, const GridSpec& spec);

}  // namespace gazeheat
