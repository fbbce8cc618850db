#include "gazeheat/windowing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gazeheat/error.hpp"

namespace gazeheat {

namespace {
constexpr std::int64_t kMicrosPerSecond = 1'000'000;
}

void CameraRates::validate() const {
    if (scene_fps <= 0 || eye_hz <= 0) fail_usage("camera rates must be positive");
}

void WindowSpec::validate() const {
    if (!(length_ms > 0.0) || !std::isfinite(length_ms)) fail_usage("window length must be positive");
    if (!(stride_ms >= 0.0) || !std::isfinite(stride_ms)) fail_usage("window stride must be positive");
    if (length_us() <= 0 || stride_us() <= 0) fail_usage("window length/stride below one microsecond");
}

std::int64_t WindowSpec::length_us() const { return std::llround(length_ms * 1000.0); }

std::int64_t WindowSpec::stride_us() const {
    return stride_ms > 0.0 ? std::llround(stride_ms * 1000.0) : length_us();
}

double window_frames_to_seconds(double frames, int eye_hz) {
    if (!(frames > 0.0)) fail_usage("window size in frames must be positive");
    if (eye_hz <= 0) fail_usage("eye camera rate must be positive");
    return frames / static_cast<double>(eye_hz);
}

SliceResult slice_windows(const Recording& rec, const WindowSpec& spec, const CameraRates& rates) {
    spec.validate();
    rates.validate();
    SliceResult result;
    if (rec.samples.empty()) return result;

    const std::int64_t length = spec.length_us();
    const std::int64_t stride = spec.stride_us();
    const std::int64_t period = std::llround(static_cast<double>(kMicrosPerSecond) / rates.eye_hz);
    const std::int64_t t0 = rec.samples.front().t_us;
    const std::int64_t span_end = rec.samples.back().t_us + period;

    const std::span<const GazeSample> all(rec.samples);
    auto first = all.begin();
    for (std::int64_t start = t0; start + length <= span_end; start += stride) {
        const std::int64_t end = start + length;
        first = std::lower_bound(first, all.end(), start,
                                 [](const GazeSample& s, std::int64_t t) { return s.t_us < t; });
        auto last = std::lower_bound(first, all.end(), end,
                                     [](const GazeSample& s, std::int64_t t) { return s.t_us < t; });
        if (first == last) {
            ++result.skipped_empty;
            continue;
        }
        TimeWindow w;
        w.t_start = start;
        w.t_end = end;
        w.samples = std::span<const GazeSample>(first, last);
        result.windows.push_back(w);
    }
    return result;
}

BoxTarget normalize_box(const BoxAnnotation& box, const StimulusBounds& bounds) {
    BoxTarget t{box.x / bounds.rx, box.y / bounds.ry, box.w / bounds.rx, box.h / bounds.ry};
    t.x = std::clamp(t.x, 0.0, 1.0);
    t.y = std::clamp(t.y, 0.0, 1.0);
    t.w = std::clamp(t.w, 0.0, 1.0 - t.x);
    t.h = std::clamp(t.h, 0.0, 1.0 - t.y);
    return t;
}

TimeWindow label_window(TimeWindow win, const Recording& rec, const CameraRates& rates) {
    rates.validate();
    // Everything is scaled by 2 * fps so frame midpoints are integers:
    // midpoint(f) * 2 * fps = (2f + 1) * 1e6.
    const std::int64_t fps = rates.scene_fps;
    const std::int64_t lo = 2 * fps * win.t_start;
    const std::int64_t hi = 2 * fps * win.t_end;
    const std::int64_t centre2 = fps * (win.t_start + win.t_end);
    auto scaled_mid = [](std::int64_t frame) { return (2 * frame + 1) * kMicrosPerSecond; };

    const auto& boxes = rec.annotations;
    auto it = std::partition_point(boxes.begin(), boxes.end(),
                                   [&](const BoxAnnotation& b) { return scaled_mid(b.frame) < lo; });
    const BoxAnnotation* best = nullptr;
    std::int64_t best_dist = std::numeric_limits<std::int64_t>::max();
    for (; it != boxes.end() && scaled_mid(it->frame) < hi; ++it) {
        const std::int64_t d = std::abs(scaled_mid(it->frame) - centre2);
        if (d < best_dist) {
            best_dist = d;
            best = &*it;
        }
    }

    win.labeled = true;
    if (best) {
        win.label = 1;
        win.target = normalize_box(*best, rec.bounds);
        win.target_frame = best->frame;
    } else {
        win.label = 0;
        win.target.reset();
        win.target_frame = -1;
    }
    return win;
}

SliceResult make_labeled_windows(const Recording& rec, const WindowSpec& spec, const CameraRates& rates) {
    auto result = slice_windows(rec, spec, rates);
    for (auto& w : result.windows) w = label_window(w, rec, rates);
    return result;
}

}  // namespace gazeheat
