#include "gazeheat/gaze_data.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gazeheat/error.hpp"
#include "gazeheat/text.hpp"

namespace gazeheat {

void StimulusBounds::validate() const {
    if (!(rx > 0.0) || !(ry > 0.0) || !(rz > 0.0) || !std::isfinite(rx) || !std::isfinite(ry) ||
        !std::isfinite(rz)) {
        fail_usage("stimulus bounds must be finite and strictly positive");
    }
}

namespace {

std::size_t find_column(const std::vector<std::string_view>& header, const std::string& name,
                        const std::string& origin) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) fail_data(origin + ": column '" + name + "' not found in header");
    return static_cast<std::size_t>(it - header.begin());
}

std::optional<std::size_t> find_optional_column(const std::vector<std::string_view>& header,
                                                const std::string& name) {
    if (name.empty()) return std::nullopt;
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
}

double clamp_counted(double v, double hi, bool& clamped) {
    if (v < 0.0) {
        clamped = true;
        return 0.0;
    }
    if (v > hi) {
        clamped = true;
        return hi;
    }
    return v;
}

struct RawGaze {
    double t, x, y, z;
    int source;
};

}  // namespace

GazeParseResult parse_gaze_text(std::string_view contents, const GazeColumns& columns,
                                const BoundsConfig& bounds, const std::string& origin) {
    auto lines = text::split_lines(contents);
    if (lines.empty()) fail_data(origin + ": empty gaze file");
    const auto header = text::split_fields(lines.front());
    const std::size_t ct = find_column(header, columns.t, origin);
    const std::size_t cx = find_column(header, columns.x, origin);
    const std::size_t cy = find_column(header, columns.y, origin);
    const std::size_t cz = find_column(header, columns.z, origin);
    const auto cs = find_optional_column(header, columns.source);

    GazeParseResult result;
    std::vector<RawGaze> raw;
    raw.reserve(lines.size());
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        ++result.rows;
        const auto fields = text::split_fields(lines[i]);
        auto get = [&](std::size_t col) -> double {
            if (col >= fields.size()) return std::numeric_limits<double>::quiet_NaN();
            return text::parse_double(fields[col]).value_or(std::numeric_limits<double>::quiet_NaN());
        };
        RawGaze g{get(ct), get(cx), get(cy), get(cz), 0};
        if (cs) {
            const double s = get(*cs);
            g.source = std::isfinite(s) ? static_cast<int>(s) : 0;
        }
        if (!std::isfinite(g.t) || g.t < 0.0 || !std::isfinite(g.x) || !std::isfinite(g.y) ||
            !std::isfinite(g.z)) {
            ++result.dropped;
            continue;
        }
        raw.push_back(g);
    }
    if (raw.empty()) fail_data(origin + ": no valid gaze rows");

    result.bounds.rx = bounds.rx;
    result.bounds.ry = bounds.ry;
    if (bounds.rz) {
        result.bounds.rz = *bounds.rz;
    } else {
        double max_z = 0.0;
        for (const auto& g : raw) max_z = std::max(max_z, g.z);
        // Depth-free data (all zero) still needs a positive extent.
        result.bounds.rz = max_z > 0.0 ? max_z : 1.0;
    }
    result.bounds.validate();

    result.samples.reserve(raw.size());
    for (const auto& g : raw) {
        bool clamped = false;
        GazeSample s;
        s.t_us = std::llround(g.t);
        s.x = clamp_counted(g.x, result.bounds.rx, clamped);
        s.y = clamp_counted(g.y, result.bounds.ry, clamped);
        s.z = clamp_counted(g.z, result.bounds.rz, clamped);
        s.source = g.source;
        if (clamped) ++result.clamped;
        result.samples.push_back(s);
    }
    std::stable_sort(result.samples.begin(), result.samples.end(),
                     [](const GazeSample& a, const GazeSample& b) { return a.t_us < b.t_us; });
    return result;
}

GazeParseResult parse_gaze(const std::string& path, const GazeColumns& columns,
                           const BoundsConfig& bounds) {
    return parse_gaze_text(text::read_file(path), columns, bounds, path);
}

AnnotationParseResult parse_annotations_text(std::string_view contents,
                                             const AnnotationColumns& columns,
                                             const std::string& origin) {
    auto lines = text::split_lines(contents);
    if (lines.empty()) fail_data(origin + ": empty annotation file");
    const auto header = text::split_fields(lines.front());
    const std::size_t cols[5] = {
        find_column(header, columns.frame, origin), find_column(header, columns.x, origin),
        find_column(header, columns.y, origin), find_column(header, columns.w, origin),
        find_column(header, columns.h, origin)};

    AnnotationParseResult result;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        ++result.rows;
        const auto fields = text::split_fields(lines[i]);
        double v[5];
        for (int c = 0; c < 5; ++c) {
            std::optional<double> parsed;
            if (cols[c] < fields.size()) parsed = text::parse_double(fields[cols[c]]);
            if (!parsed || !std::isfinite(*parsed)) {
                fail_data(origin + ": malformed annotation row at line " + std::to_string(i + 1));
            }
            v[c] = *parsed;
        }
        if (v[0] < 0.0 || v[0] != std::floor(v[0])) {
            fail_data(origin + ": frame index must be a nonnegative integer at line " +
                      std::to_string(i + 1));
        }
        if (v[3] <= 0.0 || v[4] <= 0.0) {
            ++result.degenerate;
            continue;
        }
        result.boxes.push_back({static_cast<std::int64_t>(v[0]), v[1], v[2], v[3], v[4]});
    }
    std::stable_sort(result.boxes.begin(), result.boxes.end(),
                     [](const BoxAnnotation& a, const BoxAnnotation& b) { return a.frame < b.frame; });
    return result;
}

AnnotationParseResult parse_annotations(const std::string& path, const AnnotationColumns& columns) {
    return parse_annotations_text(text::read_file(path), columns, path);
}

std::string format_gaze_csv(std::span<const GazeSample> samples, const GazeColumns& columns) {
    std::string out = columns.t + "," + columns.x + "," + columns.y + "," + columns.z;
    if (!columns.source.empty()) out += "," + columns.source;
    out += '\n';
    for (const auto& s : samples) {
        out += std::to_string(s.t_us);
        out += ',';
        out += text::format_double(s.x);
        out += ',';
        out += text::format_double(s.y);
        out += ',';
        out += text::format_double(s.z);
        if (!columns.source.empty()) {
            out += ',';
            out += std::to_string(s.source);
        }
        out += '\n';
    }
    return out;
}

std::string format_annotations_csv(std::span<const BoxAnnotation> boxes,
                                   const AnnotationColumns& columns) {
    std::string out = columns.frame + "," + columns.x + "," + columns.y + "," + columns.w + "," +
                      columns.h + "\n";
    for (const auto& b : boxes) {
        out += std::to_string(b.frame);
        for (double v : {b.x, b.y, b.w, b.h}) {
            out += ',';
            out += text::format_double(v);
        }
        out += '\n';
    }
    return out;
}

Recording join_recording(std::vector<GazeSample> samples, std::vector<BoxAnnotation> annotations,
                         const StimulusBounds& bounds, std::string id, JoinStats* stats) {
    bounds.validate();
    if (samples.empty()) fail_data("recording '" + id + "' has no gaze samples");

    std::stable_sort(samples.begin(), samples.end(),
                     [](const GazeSample& a, const GazeSample& b) { return a.t_us < b.t_us; });
    const auto last = std::unique(samples.begin(), samples.end(),
                                  [](const GazeSample& a, const GazeSample& b) { return a.t_us == b.t_us; });
    const auto duplicates = static_cast<std::size_t>(samples.end() - last);
    samples.erase(last, samples.end());
    if (stats) stats->duplicate_timestamps = duplicates;

    for (auto& s : samples) {
        s.x = std::clamp(s.x, 0.0, bounds.rx);
        s.y = std::clamp(s.y, 0.0, bounds.ry);
        s.z = std::clamp(s.z, 0.0, bounds.rz);
    }

    std::stable_sort(annotations.begin(), annotations.end(),
                     [](const BoxAnnotation& a, const BoxAnnotation& b) { return a.frame < b.frame; });
    for (auto& b : annotations) {
        if (!(b.w > 0.0) || !(b.h > 0.0)) fail_data("recording '" + id + "' contains a degenerate box");
        b.w = std::min(b.w, bounds.rx);
        b.h = std::min(b.h, bounds.ry);
        b.x = std::clamp(b.x, 0.0, bounds.rx - b.w);
        b.y = std::clamp(b.y, 0.0, bounds.ry - b.h);
    }

    Recording rec;
    rec.id = std::move(id);
    rec.samples = std::move(samples);
    rec.annotations = std::move(annotations);
    rec.bounds = bounds;
    return rec;
}

}  // namespace gazeheat
