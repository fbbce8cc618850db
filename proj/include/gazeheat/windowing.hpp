#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gazeheat/gaze_data.hpp"

namespace gazeheat {

// Scene camera and eye camera rates of the head-mounted tracker.
struct CameraRates {
    int scene_fps = 30;
    int eye_hz = 200;

    void validate() const;
};

struct WindowSpec {
    double length_ms = 500.0;
    double stride_ms = 0.0;  // 0 selects stride = length (non-overlapping)

    void validate() const;
    std::int64_t length_us() const;
    std::int64_t stride_us() const;
};

// Bounding box as fractions of the stimulus resolution.
struct BoxTarget {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;

    friend bool operator==(const BoxTarget&, const BoxTarget&) = default;
};

struct TimeWindow {
    std::int64_t t_start = 0;  // inclusive, us
    std::int64_t t_end = 0;    // exclusive, us
    std::span<const GazeSample> samples;
    bool labeled = false;
    int label = 0;
    std::optional<BoxTarget> target;  // present iff label == 1
    std::int64_t target_frame = -1;   // frame the target came from, -1 when none
};

struct SliceResult {
    std::vector<TimeWindow> windows;
    std::size_t skipped_empty = 0;
};

// Eye-camera frame count to seconds (T / eye rate).
double window_frames_to_seconds(double frames, int eye_hz = 200);

// Cuts the recording into windows starting at the first sample time. The
// recording spans [t_first, t_last + one eye-frame period); only windows
// that fit completely inside that span are produced. Windows containing no
// samples are skipped and counted. The returned windows view rec.samples.
SliceResult slice_windows(const Recording& rec, const WindowSpec& spec, const CameraRates& rates = {});

// A scene frame f belongs to a window when its midpoint (f + 0.5) / fps lies
// in [t_start, t_end). Label 1 iff any annotation frame belongs; the target
// is the annotation whose frame midpoint is nearest the window centre, with
// the earlier frame winning ties.
TimeWindow label_window(TimeWindow win, const Recording& rec, const CameraRates& rates = {});

// slice_windows followed by label_window on each result.
SliceResult make_labeled_windows(const Recording& rec, const WindowSpec& spec,
                                 const CameraRates& rates = {});

BoxTarget normalize_box(const BoxAnnotation& box, const StimulusBounds& bounds);

}  // namespace gazeheat
