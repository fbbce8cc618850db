#include "gazeheat/features.hpp"

#include <cmath>
#include <limits>

#include "gazeheat/binary_io.hpp"
#include "gazeheat/error.hpp"
#include "gazeheat/text.hpp"

namespace gazeheat {

namespace {
constexpr std::string_view kMagic = "GZHF";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

void append_window_features(Dataset& out, std::span<const TimeWindow> windows, const GridSpec& grid,
                            int group) {
    const std::size_t dim = grid.cell_count();
    if (out.dim == 0) out.dim = dim;
    if (out.dim != dim) fail_usage("feature dimension mismatch while appending windows");
    for (const auto& w : windows) {
        if (!w.labeled) fail_usage("windows must be labeled before featurization");
        out.rows.push_back(sparse_heatmap_feature(w.samples, grid));
        out.labels.push_back(w.label);
        if (w.target) {
            out.targets.push_back({w.target->x, w.target->y, w.target->w, w.target->h});
        } else {
            out.targets.push_back({kNaN, kNaN, kNaN, kNaN});
        }
        out.groups.push_back(group);
    }
}

std::size_t feature_record_bytes(std::size_t cell_count) noexcept { return 1 + 4 * 4 + 4 * cell_count; }

std::string encode_feature_file(const FeatureTable& table) {
    const auto& d = table.data;
    const std::size_t dim = table.grid.cell_count();
    if (dim == 0) fail_usage("feature file grid must be nonempty");
    if (d.dim != dim) fail_usage("dataset dimension does not match grid");
    if (d.labels.size() != d.size() || d.targets.size() != d.size()) {
        fail_usage("feature table needs a label and target per row");
    }
    ByteWriter w;
    w.put_bytes(kMagic);
    w.put(static_cast<std::uint32_t>(table.grid.gx));
    w.put(static_cast<std::uint32_t>(table.grid.gy));
    w.put(static_cast<std::uint32_t>(table.grid.gz));
    w.put(static_cast<std::uint64_t>(d.size()));
    for (std::size_t r = 0; r < d.size(); ++r) {
        w.put(static_cast<std::uint8_t>(d.labels[r]));
        for (double v : d.targets[r]) w.put(d.labels[r] == 1 ? static_cast<float>(v) : std::numeric_limits<float>::quiet_NaN());
        const auto& row = d.rows[r];
        std::size_t k = 0;
        for (std::size_t i = 0; i < dim; ++i) {
            float v = 0.0f;
            if (k < row.nnz() && row.index[k] == i) v = static_cast<float>(row.value[k++]);
            w.put(v);
        }
    }
    return w.take();
}

FeatureTable decode_feature_file(std::string_view bytes, const std::string& origin) {
    ByteReader r(bytes, origin);
    if (r.get_bytes(kMagic.size()) != kMagic) fail_data(origin + ": not a feature file (bad magic)");
    FeatureTable t;
    t.grid.gx = static_cast<int>(r.get<std::uint32_t>());
    t.grid.gy = static_cast<int>(r.get<std::uint32_t>());
    t.grid.gz = static_cast<int>(r.get<std::uint32_t>());
    const auto count = r.get<std::uint64_t>();
    const std::size_t dim = t.grid.cell_count();
    if (dim == 0) fail_data(origin + ": feature file has an empty grid");
    if (r.remaining() != count * feature_record_bytes(dim)) fail_data(origin + ": record count does not match file size");
    t.data.dim = dim;
    t.data.rows.reserve(count);
    for (std::uint64_t n = 0; n < count; ++n) {
        const int label = r.get<std::uint8_t>();
        if (label != 0 && label != 1) fail_data(origin + ": invalid label byte");
        Target4 target;
        for (auto& v : target) v = static_cast<double>(r.get<float>());
        if (label == 0) target = {kNaN, kNaN, kNaN, kNaN};
        SparseVector row;
        for (std::size_t i = 0; i < dim; ++i) {
            const float v = r.get<float>();
            if (v != 0.0f) {
                row.index.push_back(static_cast<std::uint32_t>(i));
                row.value.push_back(static_cast<double>(v));
            }
        }
        t.data.labels.push_back(label);
        t.data.targets.push_back(target);
        t.data.rows.push_back(std::move(row));
    }
    return t;
}

void write_feature_file(const std::string& path, const FeatureTable& table) {
    text::write_file(path, encode_feature_file(table));
}

FeatureTable read_feature_file(const std::string& path) {
    return decode_feature_file(text::read_file(path), path);
}

std::string format_feature_csv(const FeatureTable& table) {
    const std::size_t dim = table.grid.cell_count();
    std::string out = "label,x,y,w,h";
    for (std::size_t i = 0; i < dim; ++i) out += ",f" + std::to_string(i);
    out += '\n';
    const auto& d = table.data;
    for (std::size_t r = 0; r < d.size(); ++r) {
        out += std::to_string(d.labels[r]);
        for (double v : d.targets[r]) {
            out += ',';
            if (d.labels[r] == 1) out += text::format_double(v);
        }
        const auto dense = to_dense(d.rows[r], dim);
        for (double v : dense) {
            out += ',';
            out += text::format_double(static_cast<double>(static_cast<float>(v)));
        }
        out += '\n';
    }
    return out;
}

}  // namespace gazeheat
