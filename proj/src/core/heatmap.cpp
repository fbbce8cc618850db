#include "gazeheat/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gazeheat/error.hpp"

namespace gazeheat {

void GridSpec::validate() const {
    if (gx < 1 || gy < 1 || gz < 1) fail_usage("grid cell counts must be at least 1");
    bounds.validate();
}

int bin_index(double p, double r, int g) {
    if (!(r > 0.0)) fail_usage("bin_index: axis extent must be positive");
    if (g < 1) fail_usage("bin_index: cell count must be at least 1");
    const double raw = std::round(p / r * static_cast<double>(g));
    if (!(raw > 0.0)) return 0;  // also catches NaN
    if (raw >= static_cast<double>(g - 1)) return g - 1;
    return static_cast<int>(raw);
}

Heatmap::Heatmap(const GridSpec& spec) : spec_(spec) {
    spec_.validate();
    cells_.assign(spec_.cell_count(), 0.0);
}

std::size_t Heatmap::offset(int x, int y, int z) const {
    return (static_cast<std::size_t>(x) * static_cast<std::size_t>(spec_.gy) + static_cast<std::size_t>(y)) *
               static_cast<std::size_t>(spec_.gz) +
           static_cast<std::size_t>(z);
}

double Heatmap::total() const noexcept { return std::accumulate(cells_.begin(), cells_.end(), 0.0); }

Heatmap build_heatmap(std::span<const GazeSample> samples, const GridSpec& spec) {
    if (samples.empty()) fail_data("build_heatmap: empty sample list");
    Heatmap h(spec);
    const auto& b = spec.bounds;
    for (const auto& s : samples) {
        const int ix = bin_index(s.x, b.rx, spec.gx);
        const int iy = bin_index(s.y, b.ry, spec.gy);
        const int iz = spec.gz == 1 ? 0 : bin_index(s.z, b.rz, spec.gz);
        h.increment(ix, iy, iz);
    }
    return h;
}

Heatmap normalize(Heatmap h) {
    const double total = h.total();
    if (!(total > 0.0)) fail_data("normalize: heatmap is all zero");
    for (auto& c : h.cells_) c /= total;
    h.normalized_ = true;
    return h;
}

FeatureVector flatten(const Heatmap& h) {
    if (!h.normalized()) fail_usage("flatten: heatmap must be normalized first");
    const auto cells = h.cells();
    return FeatureVector{std::vector<double>(cells.begin(), cells.end())};
}

Heatmap unflatten(std::span<const double> values, const GridSpec& spec) {
    Heatmap h(spec);
    if (values.size() != h.cells_.size()) fail_usage("unflatten: length does not match grid");
    std::copy(values.begin(), values.end(), h.cells_.begin());
    h.normalized_ = true;
    return h;
}

FeatureVector heatmap_feature(std::span<const GazeSample> samples, const GridSpec& spec) {
    return flatten(normalize(build_heatmap(samples, spec)));
}

SparseVector sparse_heatmap_feature(std::span<const GazeSample> samples, const GridSpec& spec) {
    if (samples.empty()) fail_data("build_heatmap: empty sample list");
    spec.validate();
    const auto& b = spec.bounds;
    const auto gy = static_cast<std::uint32_t>(spec.gy);
    const auto gz = static_cast<std::uint32_t>(spec.gz);
    std::vector<std::uint32_t> offsets;
    offsets.reserve(samples.size());
    for (const auto& s : samples) {
        const auto ix = static_cast<std::uint32_t>(bin_index(s.x, b.rx, spec.gx));
        const auto iy = static_cast<std::uint32_t>(bin_index(s.y, b.ry, spec.gy));
        const auto iz = spec.gz == 1 ? 0u : static_cast<std::uint32_t>(bin_index(s.z, b.rz, spec.gz));
        offsets.push_back((ix * gy + iy) * gz + iz);
    }
    std::sort(offsets.begin(), offsets.end());
    // Integer-valued sums are exact, so dividing by the sample count matches
    // the dense normalization bit for bit.
    const auto total = static_cast<double>(samples.size());
    SparseVector v;
    for (std::size_t i = 0; i < offsets.size();) {
        std::size_t j = i;
        while (j < offsets.size() && offsets[j] == offsets[i]) ++j;
        v.index.push_back(offsets[i]);
        v.value.push_back(static_cast<double>(j - i) / total);
        i = j;
    }
    return v;
}

}  // namespace gazeheat
