#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "gazeheat/error.hpp"
#include "gazeheat/heatmap.hpp"
#include "gazeheat/synth.hpp"
#include "gazeheat/windowing.hpp"

using namespace gazeheat;

namespace {

SynthSpec one_episode() {
    SynthSpec s;
    s.duration_s = 3.0;
    s.seed = 4;
    s.walk_drift_px_per_s = 0.0;
    Episode e;
    e.start_s = 1.0;
    e.end_s = 2.0;
    e.x = 400;
    e.y = 400;
    e.w = 100;
    e.h = 100;
    e.fixation_jitter_px = 5.0;
    s.episodes.push_back(e);
    return s;
}

bool inside_episode(const SynthSpec& s, std::int64_t t0, std::int64_t t1) {
    for (const auto& e : s.episodes) {
        if (t0 >= std::llround(e.start_s * 1e6) && t1 <= std::llround(e.end_s * 1e6)) return true;
    }
    return false;
}

bool outside_episodes(const SynthSpec& s, std::int64_t t0, std::int64_t t1) {
    for (const auto& e : s.episodes) {
        if (t1 > std::llround(e.start_s * 1e6) && t0 < std::llround(e.end_s * 1e6)) return false;
    }
    return true;
}

double max_cell(const TimeWindow& w, const GridSpec& g) {
    const auto f = heatmap_feature(w.samples, g);
    return *std::max_element(f.values.begin(), f.values.end());
}

}  // namespace

TEST_CASE("fixation samples stay inside the box") {
    const auto spec = one_episode();
    const auto rec = generate(spec);
    std::size_t in = 0, total = 0;
    for (const auto& s : rec.samples) {
        if (s.t_us < 1'000'000 || s.t_us >= 2'000'000) continue;
        ++total;
        if (s.x >= 400 && s.x <= 500 && s.y >= 400 && s.y <= 500) ++in;
    }
    CHECK(total == 200);
    CHECK(static_cast<double>(in) >= 0.99 * static_cast<double>(total));
    // one annotation per scene frame whose midpoint is in [1 s, 2 s)
    CHECK(rec.annotations.size() == 30);
    for (const auto& a : rec.annotations) {
        CHECK(a.x == 400);
        CHECK(a.w == 100);
    }
}

TEST_CASE("samples are regular and within bounds") {
    CorpusSpec cs;
    cs.recordings = 2;
    cs.duration_s = 30;
    cs.seed = 3;
    for (const auto& rec : generate_corpus(cs)) {
        CHECK(rec.samples.size() == 6000);
        for (std::size_t i = 0; i < rec.samples.size(); ++i) {
            const auto& s = rec.samples[i];
            CHECK(s.t_us == static_cast<std::int64_t>(i) * 5000);
            CHECK(s.x >= 0.0);
            CHECK(s.x <= rec.bounds.rx);
            CHECK(s.y >= 0.0);
            CHECK(s.y <= rec.bounds.ry);
            CHECK(s.z >= 0.0);
            CHECK(s.z <= rec.bounds.rz);
        }
    }
}

TEST_CASE("no episodes means no positive windows") {
    SynthSpec s;
    s.duration_s = 10.0;
    const auto rec = generate(s);
    CHECK(rec.annotations.empty());
    for (const auto& w : make_labeled_windows(rec, WindowSpec{250, 0}).windows) CHECK(w.label == 0);
}

TEST_CASE("windows inside episodes are positive, outside negative") {
    CorpusSpec cs;
    cs.recordings = 4;
    cs.duration_s = 60;
    cs.seed = 8;
    const auto plans = plan_corpus(cs);
    const auto recs = generate_corpus(cs);
    for (std::size_t r = 0; r < recs.size(); ++r) {
        std::size_t in = 0, out = 0;
        for (double len : {100.0, 300.0, 500.0}) {
            for (const auto& w : make_labeled_windows(recs[r], WindowSpec{len, 0}).windows) {
                if (inside_episode(plans[r], w.t_start, w.t_end)) {
                    CHECK(w.label == 1);
                    ++in;
                } else if (outside_episodes(plans[r], w.t_start, w.t_end)) {
                    CHECK(w.label == 0);
                    ++out;
                }
            }
        }
        CHECK(in > 0);
        CHECK(out > 0);
    }
}

TEST_CASE("episode heatmaps are more concentrated than scan heatmaps") {
    CorpusSpec cs;
    cs.recordings = 4;
    cs.seed = 12;
    const auto plans = plan_corpus(cs);
    const auto recs = generate_corpus(cs);
    for (int grid : {10, 25}) {
        for (bool three_d : {false, true}) {
            double min_episode = 1.0, max_scan = 0.0;
            for (std::size_t r = 0; r < recs.size(); ++r) {
                const auto g = GridSpec::square(grid, three_d, recs[r].bounds);
                for (const auto& w : make_labeled_windows(recs[r], WindowSpec{500, 0}).windows) {
                    if (inside_episode(plans[r], w.t_start, w.t_end)) {
                        min_episode = std::min(min_episode, max_cell(w, g));
                    } else if (outside_episodes(plans[r], w.t_start, w.t_end)) {
                        max_scan = std::max(max_scan, max_cell(w, g));
                    }
                }
            }
            CAPTURE(grid);
            CAPTURE(three_d);
            CHECK(min_episode > max_scan);
        }
    }
}

TEST_CASE("generation is deterministic per seed") {
    CorpusSpec cs;
    cs.recordings = 3;
    cs.duration_s = 20;
    cs.seed = 5;
    const auto a = generate_corpus(cs);
    const auto b = generate_corpus(cs);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == b[i].id);
        CHECK(a[i].samples == b[i].samples);
        CHECK(a[i].annotations == b[i].annotations);
    }
    cs.seed = 6;
    CHECK(generate_corpus(cs)[0].samples != a[0].samples);
}

TEST_CASE("corpus plans alternate gaps and episodes") {
    CorpusSpec cs;
    cs.seed = 9;
    for (const auto& p : plan_corpus(cs)) {
        double prev_end = 0.0;
        for (const auto& e : p.episodes) {
            CHECK(e.start_s - prev_end >= cs.gap_min_s - 1e-9);
            CHECK(e.end_s - e.start_s >= cs.episode_min_s - 1e-9);
            CHECK(e.end_s - e.start_s <= cs.episode_max_s + 1e-9);
            CHECK(e.end_s <= p.duration_s);
            CHECK(e.depth_start_m >= cs.depth_start_min_m);
            CHECK(e.depth_start_m <= cs.depth_start_max_m);
            prev_end = e.end_s;
        }
    }
}

TEST_CASE("invalid specs") {
    auto s = one_episode();
    s.episodes.push_back(s.episodes[0]);
    CHECK_THROWS_AS(generate(s), Error);
    s = one_episode();
    s.episodes[0].end_s = 5.0;
    CHECK_THROWS_AS(generate(s), Error);
    s = one_episode();
    s.episodes[0].fixation_jitter_px = 0.0;
    CHECK_THROWS_AS(generate(s), Error);
    s = one_episode();
    s.scan_jitter_px = -1.0;
    CHECK_THROWS_AS(generate(s), Error);
    CorpusSpec cs;
    cs.episode_min_s = 9.0;
    CHECK_THROWS_AS(plan_corpus(cs), Error);
}
