#pragma once

// Synthetic recordings with known ground truth.

#include <cstdint>
#include <string>
#include <vector>

#include "gazeheat/gaze_data.hpp"

namespace gazeheat {

// One period of looking at an object. The box is given at episode start;
// it drifts with the walker's motion during the episode.
struct Episode {
    double start_s = 0.0;
    double end_s = 0.0;
    double x = 0.0;  // box left edge, px
    double y = 0.0;  // box top edge, px
    double w = 100.0;
    double h = 100.0;
    double fixation_jitter_px = 8.0;
    double depth_start_m = 4.0;  // gaze depth when the episode begins
};

struct SynthSpec {
    std::string id = "synth";
    double duration_s = 60.0;
    double sample_rate_hz = 200.0;
    std::vector<Episode> episodes;  // non-overlapping, inside [0, duration)
    double scan_jitter_px = 150.0;
    double walk_drift_px_per_s = 10.0;
    double approach_m_per_s = 0.05;  // depth decrease during an episode
    double depth_jitter_m = 0.03;
    StimulusBounds bounds{1088.0, 1080.0, 5.0};
    int scene_fps = 30;
    std::uint64_t seed = 0;

    void validate() const;
};

// Gaze during an episode is the drifting box centre plus Gaussian jitter,
// with depth falling linearly from depth_start_m at approach_m_per_s
// (walking towards the object), floored at zero. Outside episodes gaze scatters around the frame
// centre with scan_jitter_px and uniform depth. Annotations are emitted for
// every scene frame whose midpoint falls inside an episode.
Recording generate(const SynthSpec& spec);

// Where the (drifted, clamped) box of episode `e` sits `elapsed_s` seconds
// into it, as generated for recording spec `spec`.
BoxAnnotation episode_box(const SynthSpec& spec, std::size_t e, double elapsed_s);

// Random corpus layout: alternating scan gaps and object episodes.
struct CorpusSpec {
    int recordings = 20;
    double duration_s = 60.0;
    double episode_min_s = 3.0;
    double episode_max_s = 8.0;
    double gap_min_s = 2.0;
    double gap_max_s = 6.0;
    double box_min_px = 60.0;
    double box_max_px = 300.0;
    double fixation_jitter_px = 8.0;
    double scan_jitter_px = 150.0;
    double walk_drift_px_per_s = 10.0;
    double approach_m_per_s = 0.05;
    double depth_start_min_m = 1.5;
    double depth_start_max_m = 4.5;
    double depth_jitter_m = 0.03;
    double sample_rate_hz = 200.0;
    StimulusBounds bounds{1088.0, 1080.0, 5.0};
    std::uint64_t seed = 0;

    void validate() const;
};

std::vector<SynthSpec> plan_corpus(const CorpusSpec& spec);
std::vector<Recording> generate_corpus(const CorpusSpec& spec);

}  // namespace gazeheat
