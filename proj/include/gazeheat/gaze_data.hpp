#pragma once

// Core data model: gaze samples, box annotations, and recordings, plus the
// CSV readers and writers for the dataset's file layout.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gazeheat {

// One gaze point. t is microseconds since recording start; x/y are scene
// pixels and z is depth in meters.
struct GazeSample {
    std::int64_t t_us = 0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    int source = 0;  // estimation method tag, informational only

    friend bool operator==(const GazeSample&, const GazeSample&) = default;
};

// Maximum stimulus extent per axis. All three strictly positive.
struct StimulusBounds {
    double rx = 1088.0;
    double ry = 1080.0;
    double rz = 1.0;

    void validate() const;
    friend bool operator==(const StimulusBounds&, const StimulusBounds&) = default;
};

// Bounds as configured; rz left empty means "max finite depth observed".
struct BoundsConfig {
    double rx = 1088.0;
    double ry = 1080.0;
    std::optional<double> rz;
};

struct BoxAnnotation {
    std::int64_t frame = 0;  // scene-camera frame index
    double x = 0.0;          // left edge, px
    double y = 0.0;          // top edge, px
    double w = 0.0;
    double h = 0.0;

    friend bool operator==(const BoxAnnotation&, const BoxAnnotation&) = default;
};

struct Recording {
    std::string id;
    std::vector<GazeSample> samples;         // strictly increasing t
    std::vector<BoxAnnotation> annotations;  // nondecreasing frame
    StimulusBounds bounds;
};

struct GazeColumns {
    std::string t = "t_us";
    std::string x = "x_px";
    std::string y = "y_px";
    std::string z = "z_m";
    std::string source = "method";  // optional; missing column means tag 0
};

struct AnnotationColumns {
    std::string frame = "frame";
    std::string x = "x";
    std::string y = "y";
    std::string w = "w";
    std::string h = "h";
};

struct ColumnMap {
    GazeColumns gaze;
    AnnotationColumns annotations;
};

struct GazeParseResult {
    std::vector<GazeSample> samples;  // sorted by t
    StimulusBounds bounds;            // bounds used for clamping, rz resolved
    std::size_t rows = 0;
    std::size_t dropped = 0;  // rows with a non-finite coordinate or bad timestamp
    std::size_t clamped = 0;  // kept rows that had at least one coordinate clamped
};

struct AnnotationParseResult {
    std::vector<BoxAnnotation> boxes;  // sorted by frame
    std::size_t rows = 0;
    std::size_t degenerate = 0;  // w <= 0 or h <= 0, rejected
};

GazeParseResult parse_gaze_text(std::string_view contents, const GazeColumns& columns,
                                const BoundsConfig& bounds, const std::string& origin = "<memory>");
GazeParseResult parse_gaze(const std::string& path, const GazeColumns& columns,
                           const BoundsConfig& bounds);

AnnotationParseResult parse_annotations_text(std::string_view contents,
                                             const AnnotationColumns& columns,
                                             const std::string& origin = "<memory>");
AnnotationParseResult parse_annotations(const std::string& path,
                                        const AnnotationColumns& columns = {});

std::string format_gaze_csv(std::span<const GazeSample> samples, const GazeColumns& columns = {});
std::string format_annotations_csv(std::span<const BoxAnnotation> boxes,
                                   const AnnotationColumns& columns = {});

struct JoinStats {
    std::size_t duplicate_timestamps = 0;  // later samples sharing a timestamp, removed
};

// Sorts, deduplicates timestamps (first occurrence wins), and clamps boxes
// into the bounds. Throws a Data error for an empty sample list.
Recording join_recording(std::vector<GazeSample> samples, std::vector<BoxAnnotation> annotations,
                         const StimulusBounds& bounds, std::string id, JoinStats* stats = nullptr);

}  // namespace gazeheat
