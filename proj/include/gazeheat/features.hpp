#pragma once

// Window featurization and the binary feature file.
//
// Feature file layout, all little-endian:
//   char[4]  magic "GZHF"
//   u32      G_x, G_y, G_z
//   u64      record count
//   records: u8 label, f32[4] target (NaN x4 when label is 0),
//            f32[G_x * G_y * G_z] normalized heatmap in flatten order

#include <span>
#include <string>
#include <string_view>

#include "gazeheat/dataset.hpp"
#include "gazeheat/gaze_data.hpp"
#include "gazeheat/heatmap.hpp"
#include "gazeheat/windowing.hpp"

namespace gazeheat {

struct GridShape {
    int gx = 0;
    int gy = 0;
    int gz = 0;

    std::size_t cell_count() const noexcept {
        return static_cast<std::size_t>(gx) * static_cast<std::size_t>(gy) * static_cast<std::size_t>(gz);
    }
    friend bool operator==(const GridShape&, const GridShape&) = default;
};

struct FeatureTable {
    GridShape grid;
    Dataset data;
};

// Labeled windows of one recording to dataset rows. Rows carry `group`.
void append_window_features(Dataset& out, std::span<const TimeWindow> windows, const GridSpec& grid,
                            int group);

std::string encode_feature_file(const FeatureTable& table);
FeatureTable decode_feature_file(std::string_view bytes, const std::string& origin = "<memory>");
void write_feature_file(const std::string& path, const FeatureTable& table);
FeatureTable read_feature_file(const std::string& path);

// Debug dump: label, target, then every cell.
std::string format_feature_csv(const FeatureTable& table);

// Bytes one record occupies in the feature file.
std::size_t feature_record_bytes(std::size_t cell_count) noexcept;

}  // namespace gazeheat
