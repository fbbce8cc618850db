#include "gazeheat/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gazeheat/error.hpp"
#include "gazeheat/random.hpp"

namespace gazeheat {

void SynthSpec::validate() const {
    if (!(duration_s > 0.0)) fail_usage("synth: duration must be positive");
    if (!(sample_rate_hz > 0.0)) fail_usage("synth: sample rate must be positive");
    if (!(scan_jitter_px > 0.0)) fail_usage("synth: scan jitter must be positive");
    if (!(walk_drift_px_per_s >= 0.0)) fail_usage("synth: drift must be nonnegative");
    if (!(depth_jitter_m >= 0.0)) fail_usage("synth: depth jitter must be nonnegative");
    if (!(approach_m_per_s >= 0.0)) fail_usage("synth: approach speed must be nonnegative");
    if (scene_fps <= 0) fail_usage("synth: scene rate must be positive");
    bounds.validate();
    double prev_end = 0.0;
    for (const auto& e : episodes) {
        if (!(e.start_s >= prev_end) || !(e.end_s > e.start_s) || e.end_s > duration_s) {
            fail_usage("synth: episodes must be ordered, non-overlapping, and inside the duration");
        }
        if (!(e.fixation_jitter_px > 0.0)) fail_usage("synth: fixation jitter must be positive");
        if (!(e.w > 0.0) || !(e.h > 0.0) || e.w > bounds.rx || e.h > bounds.ry) {
            fail_usage("synth: episode box must be positive and fit the stimulus");
        }
        if (!(e.depth_start_m >= 0.0) || e.depth_start_m > bounds.rz) fail_usage("synth: episode depth outside bounds");
        prev_end = e.end_s;
    }
}

namespace {

double drift_angle(const SynthSpec& spec, std::size_t e) {
    Rng rng(derive_seed(spec.seed, 0xD1F7 + e));
    return rng.uniform(0.0, 2.0 * std::numbers::pi);
}

}  // namespace

BoxAnnotation episode_box(const SynthSpec& spec, std::size_t e, double elapsed_s) {
    const auto& ep = spec.episodes.at(e);
    const double angle = drift_angle(spec, e);
    const double dist = spec.walk_drift_px_per_s * elapsed_s;
    BoxAnnotation b;
    b.w = ep.w;
    b.h = ep.h;
    b.x = std::clamp(ep.x + dist * std::cos(angle), 0.0, spec.bounds.rx - ep.w);
    b.y = std::clamp(ep.y + dist * std::sin(angle), 0.0, spec.bounds.ry - ep.h);
    return b;
}

Recording generate(const SynthSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    const auto& b = spec.bounds;
    const auto n = static_cast<std::int64_t>(std::floor(spec.duration_s * spec.sample_rate_hz));

    std::vector<GazeSample> samples;
    samples.reserve(static_cast<std::size_t>(n));
    std::size_t ep = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / spec.sample_rate_hz;
        while (ep < spec.episodes.size() && t >= spec.episodes[ep].end_s) ++ep;
        GazeSample s;
        s.t_us = std::llround(t * 1e6);
        if (ep < spec.episodes.size() && t >= spec.episodes[ep].start_s) {
            const auto& e = spec.episodes[ep];
            const double elapsed = t - e.start_s;
            const auto box = episode_box(spec, ep, elapsed);
            s.x = rng.normal(box.x + box.w / 2.0, e.fixation_jitter_px);
            s.y = rng.normal(box.y + box.h / 2.0, e.fixation_jitter_px);
            const double depth = std::max(e.depth_start_m - spec.approach_m_per_s * elapsed, 0.0);
            s.z = rng.normal(depth, spec.depth_jitter_m);
            s.source = 1;
        } else {
            s.x = rng.normal(b.rx / 2.0, spec.scan_jitter_px);
            s.y = rng.normal(b.ry / 2.0, spec.scan_jitter_px);
            s.z = rng.uniform(0.0, b.rz);
            s.source = 0;
        }
        s.x = std::clamp(s.x, 0.0, b.rx);
        s.y = std::clamp(s.y, 0.0, b.ry);
        s.z = std::clamp(s.z, 0.0, b.rz);
        samples.push_back(s);
    }

    std::vector<BoxAnnotation> boxes;
    for (std::size_t e = 0; e < spec.episodes.size(); ++e) {
        const auto& ep_spec = spec.episodes[e];
        // frames whose midpoint (f + 0.5) / fps lies in [start, end)
        auto first = static_cast<std::int64_t>(std::ceil(ep_spec.start_s * spec.scene_fps - 0.5));
        first = std::max<std::int64_t>(first, 0);
        for (std::int64_t f = first;; ++f) {
            const double mid = (static_cast<double>(f) + 0.5) / spec.scene_fps;
            if (mid >= ep_spec.end_s) break;
            if (mid < ep_spec.start_s) continue;
            auto box = episode_box(spec, e, mid - ep_spec.start_s);
            box.frame = f;
            boxes.push_back(box);
        }
    }
    return join_recording(std::move(samples), std::move(boxes), b, spec.id);
}

void CorpusSpec::validate() const {
    if (recordings < 1) fail_usage("corpus: need at least one recording");
    if (!(duration_s > 0.0)) fail_usage("corpus: duration must be positive");
    if (!(episode_min_s > 0.0) || episode_max_s < episode_min_s) fail_usage("corpus: bad episode length range");
    if (!(gap_min_s >= 0.0) || gap_max_s < gap_min_s) fail_usage("corpus: bad gap length range");
    if (!(box_min_px > 0.0) || box_max_px < box_min_px || box_max_px > std::min(bounds.rx, bounds.ry)) {
        fail_usage("corpus: bad box size range");
    }
    if (!(fixation_jitter_px > 0.0)) fail_usage("corpus: fixation jitter must be positive");
    bounds.validate();
    if (!(depth_start_min_m >= 0.0) || depth_start_max_m < depth_start_min_m || depth_start_max_m > bounds.rz) {
        fail_usage("corpus: bad episode depth range");
    }
}

std::vector<SynthSpec> plan_corpus(const CorpusSpec& spec) {
    spec.validate();
    std::vector<SynthSpec> out;
    for (int r = 0; r < spec.recordings; ++r) {
        SynthSpec s;
        s.id = "synth_" + std::string(r < 10 ? "0" : "") + std::to_string(r);
        s.duration_s = spec.duration_s;
        s.sample_rate_hz = spec.sample_rate_hz;
        s.scan_jitter_px = spec.scan_jitter_px;
        s.walk_drift_px_per_s = spec.walk_drift_px_per_s;
        s.approach_m_per_s = spec.approach_m_per_s;
        s.depth_jitter_m = spec.depth_jitter_m;
        s.bounds = spec.bounds;
        s.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(r));

        Rng rng(derive_seed(s.seed, 0xE915));
        double t = rng.uniform(spec.gap_min_s, spec.gap_max_s);
        while (true) {
            const double len = rng.uniform(spec.episode_min_s, spec.episode_max_s);
            if (t + len > spec.duration_s) break;
            Episode e;
            e.start_s = t;
            e.end_s = t + len;
            e.w = rng.uniform(spec.box_min_px, spec.box_max_px);
            e.h = rng.uniform(spec.box_min_px, spec.box_max_px);
            e.x = rng.uniform(0.0, spec.bounds.rx - e.w);
            e.y = rng.uniform(0.0, spec.bounds.ry - e.h);
            e.fixation_jitter_px = spec.fixation_jitter_px;
            e.depth_start_m = rng.uniform(spec.depth_start_min_m, spec.depth_start_max_m);
            s.episodes.push_back(e);
            t = e.end_s + rng.uniform(spec.gap_min_s, spec.gap_max_s);
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<Recording> generate_corpus(const CorpusSpec& spec) {
    std::vector<Recording> out;
    for (const auto& s : plan_corpus(spec)) out.push_back(generate(s));
    return out;
}

}  // namespace gazeheat
