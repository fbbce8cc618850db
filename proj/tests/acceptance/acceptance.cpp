// End-to-end acceptance checks. Prints one line per criterion and exits
// nonzero when any criterion fails.
//
//   acceptance --cli <gazeheat executable> --work <scratch dir> [--real-config <run.json>]

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gazeheat/bench.hpp"
#include "gazeheat/eval.hpp"
#include "gazeheat/gp.hpp"
#include "gazeheat/heatmap.hpp"
#include "gazeheat/knn.hpp"
#include "gazeheat/random.hpp"
#include "gazeheat/svm.hpp"
#include "gazeheat/synth.hpp"
#include "gazeheat/text.hpp"
#include "gazeheat/windowing.hpp"

namespace fs = std::filesystem;
using namespace gazeheat;

namespace {

struct Outcome {
    enum Kind { Pass, Fail, Skip } kind = Fail;
    std::string detail;
};

Outcome pass(std::string d) { return {Outcome::Pass, std::move(d)}; }
Outcome fail(std::string d) { return {Outcome::Fail, std::move(d)}; }

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// ---- 1: heatmap against a recount oracle ----

int oracle_bin(double p, double r, int g) {
    const double x = p / r * static_cast<double>(g);
    if (x <= 0.0) return 0;
    auto v = static_cast<long long>(x);  // truncation, x > 0
    if (x - static_cast<double>(v) >= 0.5) ++v;
    return static_cast<int>(std::min<long long>(v, g - 1));
}

Outcome heatmap_criterion() {
    Rng rng(1001);
    const StimulusBounds b{1088, 1080, 5};
    std::size_t count_mismatch = 0, norm_mismatch = 0, invariance_fail = 0;
    auto random_samples = [&](std::size_t n) {
        std::vector<GazeSample> s(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = rng.uniform();
            // mix interior points, exact edges, and cell boundaries
            double x = u < 0.1 ? 0.0 : (u < 0.2 ? b.rx : rng.uniform(0, b.rx));
            if (rng.uniform() < 0.1) x = std::floor(rng.uniform(0, 20)) / 20.0 * b.rx;
            s[i] = {static_cast<std::int64_t>(i) * 5000, x, rng.uniform(0, b.ry), rng.uniform(0, b.rz), 0};
        }
        return s;
    };
    for (int trial = 0; trial < 1000; ++trial) {
        const int g = 1 + static_cast<int>(rng.below(50));
        const bool three_d = rng.uniform() < 0.5;
        const auto spec = GridSpec::square(g, three_d, b);
        const auto samples = random_samples(1 + rng.below(300));
        const auto h = build_heatmap(samples, spec);
        const auto f = heatmap_feature(samples, spec);

        const int gz = three_d ? g : 1;
        std::vector<double> counts(static_cast<std::size_t>(g) * static_cast<std::size_t>(g) * static_cast<std::size_t>(gz), 0.0);
        for (const auto& s : samples) {
            const int ix = oracle_bin(s.x, b.rx, g), iy = oracle_bin(s.y, b.ry, g);
            const int iz = three_d ? oracle_bin(s.z, b.rz, g) : 0;
            counts[(static_cast<std::size_t>(ix) * static_cast<std::size_t>(g) + static_cast<std::size_t>(iy)) *
                       static_cast<std::size_t>(gz) +
                   static_cast<std::size_t>(iz)] += 1.0;
        }
        if (!std::equal(counts.begin(), counts.end(), h.cells().begin(), h.cells().end())) ++count_mismatch;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            if (std::abs(f.values[i] - counts[i] / static_cast<double>(samples.size())) > 1e-12) {
                ++norm_mismatch;
                break;
            }
        }
    }
    // Arbitrary factors on continuous positions; power-of-two factors (exact
    // in floating point) on positions that include exact cell boundaries.
    auto continuous = [&](std::size_t n) {
        std::vector<GazeSample> s(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = {static_cast<std::int64_t>(i) * 5000, rng.uniform(0, b.rx), rng.uniform(0, b.ry), rng.uniform(0, b.rz), 0};
        }
        return s;
    };
    for (int trial = 0; trial < 200; ++trial) {
        const bool boundaries = trial >= 100;
        const auto spec = GridSpec::square(1 + static_cast<int>(rng.below(50)), trial % 2 == 0, b);
        auto samples = boundaries ? random_samples(1 + rng.below(200)) : continuous(1 + rng.below(200));
        const auto base = heatmap_feature(samples, spec).values;
        rng.shuffle(std::span<GazeSample>(samples));
        const bool perm_ok = heatmap_feature(samples, spec).values == base;
        const double k = boundaries ? std::ldexp(1.0, static_cast<int>(rng.below(21)) - 10) : rng.uniform(0.01, 100.0);
        auto scaled_spec = spec;
        scaled_spec.bounds = {b.rx * k, b.ry * k, b.rz * k};
        for (auto& s : samples) {
            s.x *= k;
            s.y *= k;
            s.z *= k;
        }
        const bool scale_ok = heatmap_feature(samples, scaled_spec).values == base;
        if (!perm_ok || !scale_ok) ++invariance_fail;
    }
    const std::string d = "1000 windows: " + std::to_string(count_mismatch) + " count mismatches, " +
                          std::to_string(norm_mismatch) + " normalized mismatches > 1e-12; 100 shuffles/rescalings plus 100 on cell boundaries: " +
                          std::to_string(invariance_fail) + " failures";
    return count_mismatch == 0 && norm_mismatch == 0 && invariance_fail == 0 ? pass(d) : fail(d);
}

// ---- 2: windowing against brute-force enumeration ----

struct Expected {
    int label = 0;
    std::int64_t frame = -1;
};

// Exact rationals: frame midpoint (f + 1/2) / fps seconds, scaled by 2 fps 1e6.
Expected window_oracle(std::int64_t t0, std::int64_t t1, const std::vector<BoxAnnotation>& boxes, int fps) {
    __extension__ using i128 = __int128;
    Expected e;
    std::optional<i128> best;
    for (const auto& b : boxes) {
        const i128 mid = (2 * static_cast<i128>(b.frame) + 1) * 1'000'000;
        if (mid < 2 * static_cast<i128>(fps) * t0 || mid >= 2 * static_cast<i128>(fps) * t1) continue;
        const i128 centre = static_cast<i128>(fps) * (t0 + t1);
        const i128 d = mid > centre ? mid - centre : centre - mid;
        if (!best || d < *best || (d == *best && b.frame < e.frame)) {
            best = d;
            e = {1, b.frame};
        }
    }
    return e;
}

Recording regular_recording(std::int64_t n, std::vector<BoxAnnotation> boxes) {
    std::vector<GazeSample> s;
    for (std::int64_t i = 0; i < n; ++i) s.push_back({i * 5000, 100, 100, 1, 0});
    return join_recording(std::move(s), std::move(boxes), {1088, 1080, 5}, "constructed");
}

Outcome windowing_criterion() {
    Rng rng(2002);
    std::size_t windows = 0, wrong = 0, ties = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int fps = trial % 3 == 0 ? 25 : 30;
        std::vector<BoxAnnotation> boxes;
        const int n_boxes = static_cast<int>(rng.below(40));
        for (int i = 0; i < n_boxes; ++i) {
            boxes.push_back({static_cast<std::int64_t>(rng.below(300)), rng.uniform(0, 900), rng.uniform(0, 900),
                             rng.uniform(16, 180), rng.uniform(18, 180)});
        }
        const auto rec = regular_recording(2000, boxes);
        const double length = 5.0 * static_cast<double>(1 + rng.below(150));
        const double stride = 5.0 * static_cast<double>(1 + rng.below(150));
        for (const auto& w : make_labeled_windows(rec, {length, stride}, {fps, 200}).windows) {
            const auto e = window_oracle(w.t_start, w.t_end, rec.annotations, fps);
            ++windows;
            if (w.label != e.label || w.target_frame != e.frame || w.target.has_value() != (e.label == 1)) ++wrong;
            if (e.label == 1) {
                const auto& box = *std::find_if(rec.annotations.begin(), rec.annotations.end(),
                                                [&](const BoxAnnotation& b) { return b.frame == e.frame; });
                if (w.target->x != box.x / 1088.0 || w.target->h != box.h / 1080.0) ++wrong;
            }
        }
    }
    // Constructed ties: two annotations equally far from the window centre.
    struct Tie {
        int fps;
        std::int64_t t0, t1, a, b;
    };
    for (const auto& t : {Tie{25, 450000, 950000, 11, 23}, Tie{30, 350000, 850000, 11, 24}}) {
        const auto rec = regular_recording(400, {{t.a, 1, 1, 20, 20}, {t.b, 2, 2, 20, 20}});
        TimeWindow w;
        w.t_start = t.t0;
        w.t_end = t.t1;
        const auto got = label_window(w, rec, {t.fps, 200});
        const auto e = window_oracle(t.t0, t.t1, rec.annotations, t.fps);
        ++ties;
        if (got.target_frame != t.a || e.frame != t.a) ++wrong;
    }
    const std::string d = std::to_string(windows) + " random windows and " + std::to_string(ties) +
                          " constructed ties; " + std::to_string(wrong) + " disagreements";
    return wrong == 0 ? pass(d) : fail(d);
}

// ---- 3: learner oracles ----

std::vector<double> gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        }
        std::swap(a[c], a[p]);
        std::swap(b[c], b[p]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
        x[i] = s / a[i][i];
    }
    return x;
}

Dataset labelled(const std::vector<std::vector<double>>& xs, const std::vector<int>& labels) {
    Dataset d;
    d.dim = xs.front().size();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        d.rows.push_back(to_sparse(xs[i]));
        d.labels.push_back(labels[i]);
        d.targets.push_back({0.5, 0.5, 0.1, 0.1});
    }
    return d;
}

Outcome learner_criterion() {
    Rng rng(3003);
    // GP against a dense solve
    double gp_err = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 5 + rng.below(16), dim = 1 + rng.below(6);
        Dataset d;
        d.dim = dim;
        std::vector<std::vector<double>> xs;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> x(dim);
            for (auto& v : x) v = rng.uniform();
            xs.push_back(x);
            d.rows.push_back(to_sparse(x));
            d.labels.push_back(1);
            d.targets.push_back({rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()});
        }
        const GpParams p{rng.uniform(0.2, 2.0), rng.uniform(0.5, 2.0), rng.uniform(0.05, 0.5)};
        const auto model = GpModel::fit(d, p);
        auto k = [&](const std::vector<double>& a, const std::vector<double>& b) {
            double s = 0.0;
            for (std::size_t j = 0; j < dim; ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
            return p.signal_sd * p.signal_sd * std::exp(-s / (2 * p.length_scale * p.length_scale));
        };
        std::vector<std::vector<double>> kmat(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) kmat[i][j] = k(xs[i], xs[j]) + (i == j ? p.noise_sd * p.noise_sd : 0.0);
        }
        std::vector<double> q(dim);
        for (auto& v : q) v = rng.uniform();
        const auto got = model.predict_raw(to_sparse(q));
        for (int c = 0; c < 4; ++c) {
            double mean = 0.0;
            for (const auto& t : d.targets) mean += t[c] / static_cast<double>(n);
            std::vector<double> y(n);
            for (std::size_t i = 0; i < n; ++i) y[i] = d.targets[i][c] - mean;
            const auto alpha = gauss_solve(kmat, y);
            double want = mean;
            for (std::size_t i = 0; i < n; ++i) want += k(q, xs[i]) * alpha[i];
            gp_err = std::max(gp_err, std::abs(got[c] - want));
        }
    }

    // SVM training accuracy on separable constructions
    auto train_acc = [](const Dataset& d, const SvmParams& p) {
        const auto m = SvmModel::fit(d, p);
        int ok = 0;
        for (std::size_t i = 0; i < d.size(); ++i) ok += m.classify(d.rows[i]) == d.labels[i];
        return static_cast<double>(ok) / static_cast<double>(d.size());
    };
    const double two_point = train_acc(labelled({{0.0, 0.0}, {1.0, 1.0}}, {1, 0}), {100.0, 0.5, 1e-6, 100000});
    const double xor_acc = train_acc(labelled({{0, 0}, {1, 1}, {0, 1}, {1, 0}}, {0, 0, 1, 1}), {10.0, 1.0, 1e-3, 100000});

    // KNN against an exhaustive sort
    int knn_wrong = 0;
    for (int q = 0; q < 100; ++q) {
        const std::size_t dim = 1 + rng.below(12), n = 10 + rng.below(60);
        Dataset d;
        d.dim = dim;
        auto row = [&] {
            std::vector<double> x(dim, 0.0);
            for (auto& v : x) v = rng.uniform() < 0.4 ? std::round(rng.uniform() * 4) / 4 : 0.0;
            return x;
        };
        std::vector<std::vector<double>> xs;
        for (std::size_t i = 0; i < n; ++i) {
            xs.push_back(row());
            d.rows.push_back(to_sparse(xs.back()));
            d.labels.push_back(static_cast<int>(rng.below(2)));
        }
        const int k = 1 + static_cast<int>(rng.below(9));
        const auto model = KnnModel::fit(d, Task::Classification, {k});
        const auto query = row();
        std::vector<std::pair<double, std::size_t>> all;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < dim; ++j) s += (query[j] - xs[i][j]) * (query[j] - xs[i][j]);
            all.emplace_back(s, i);
        }
        std::sort(all.begin(), all.end());
        std::vector<std::size_t> want;
        for (int i = 0; i < k; ++i) want.push_back(all[static_cast<std::size_t>(i)].second);
        if (model.neighbors(to_sparse(query)) != want) ++knn_wrong;
        if (model.neighbors(std::span<const double>(query)) != want) ++knn_wrong;
    }

    const bool ok = gp_err <= 1e-8 && two_point == 1.0 && xor_acc == 1.0 && knn_wrong == 0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "GP max |error| %.2e over 20 problems; SVM training accuracy 2-point %.2f, XOR %.2f; KNN %d of 100 "
                  "queries differ from exhaustive sort",
                  gp_err, two_point, xor_acc, knn_wrong);
    return ok ? pass(buf) : fail(buf);
}

// ---- 4: synthetic reproduction ----

Outcome synthetic_criterion() {
    const auto t0 = std::chrono::steady_clock::now();
    CorpusSpec spec;  // 20 recordings x 60 s
    const auto corpus = generate_corpus(spec);
    SweepConfig cfg;
    cfg.window_lengths_ms = {500};
    cfg.grid_sizes = {25};
    cfg.dims = {false, true};
    cfg.classifiers = {Learner::Knn, Learner::BaggedTrees};
    cfg.regressors = {};
    cfg.threads = 1;
    const auto result = run_sweep(corpus, cfg);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::map<std::pair<Learner, bool>, double> acc;
    for (const auto& c : result.cells) {
        if (!c.skipped) acc[{c.learner, c.three_d}] = c.cv.mean[0];
    }
    bool ok = elapsed < 300.0 && acc.size() == 4;
    std::string d;
    for (auto l : {Learner::Knn, Learner::BaggedTrees}) {
        const double a2 = acc.count({l, false}) ? acc[{l, false}] : 0.0;
        const double a3 = acc.count({l, true}) ? acc[{l, true}] : 0.0;
        ok = ok && a2 >= 0.90 && a3 >= a2 - 0.02;
        d += std::string(learner_name(l)) + " 2D " + fmt(a2) + " 3D " + fmt(a3) + "; ";
    }
    d += "corpus + CV " + fmt(elapsed, 1) + " s single-threaded";
    return ok ? pass(d) : fail(d);
}

// ---- 5: real dataset (optional) ----

int run(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    return rc == -1 ? -1 : WEXITSTATUS(rc);
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome real_data_criterion(const std::string& cli, const fs::path& work, const std::string& real_config) {
    if (real_config.empty()) {
        return {Outcome::Skip,
                "optional; needs the published dataset, pass --real-config <run.json> listing its recordings"};
    }
    const auto out = work / "real";
    const std::string cmd = quote(cli) + " eval -c " + quote(real_config) +
                            " --set 'sweep.dims=[\"3d\"]' --set 'sweep.classifiers=[\"knn\"]'"
                            " --set 'sweep.regressors=[\"gp\"]' -o " + quote(out) + " > " + quote(work / "real.log") + " 2>&1";
    if (run(cmd) != 0) return fail("eval on the real dataset failed, see " + (work / "real.log").string());
    double best_knn = 0.0, gp_x = NAN, gp_y = NAN;
    std::istringstream in(slurp(out / "summary.csv"));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        const auto f = text::split_fields(line);
        if (f.size() < 11 || f[10] != "ok") continue;
        const double v = std::stod(std::string(f[6]));
        if (f[0] == "classification" && f[2] == "knn") best_knn = std::max(best_knn, v);
        if (f[0] == "regression" && f[2] == "gp" && f[3] == "100" && f[4] == "10") {
            if (f[5] == "mae_x") gp_x = v;
            if (f[5] == "mae_y") gp_y = v;
        }
    }
    const bool ok = std::abs(best_knn * 100 - 92.0) <= 5.0 && std::abs(gp_x - 5.8) <= 3.0 && std::abs(gp_y - 6.2) <= 3.0;
    return {ok ? Outcome::Pass : Outcome::Fail, "best 3D KNN " + fmt(best_knn * 100, 1) + "% (92 +- 5); GP 100 ms grid 10 X " +
                                                    fmt(gp_x, 1) + " (5.8 +- 3), Y " + fmt(gp_y, 1) + " (6.2 +- 3)"};
}

// ---- 6: benchmark trends ----

Outcome bench_criterion() {
    CorpusSpec spec;
    const auto corpus = generate_corpus(spec);
    BenchConfig cfg;
    cfg.grid_sizes = {10, 20, 30, 40, 50};
    cfg.dims = {false};
    cfg.learners = {Learner::Knn, Learner::BaggedTrees, Learner::Svm};
    cfg.n_predictions = 300;
    const auto reports = run_bench(corpus, cfg);
    std::map<Learner, std::vector<double>> times;
    std::size_t max_memory = 0;
    for (const auto& r : reports) {
        times[r.learner].push_back(r.timing.median_s);
        max_memory = std::max(max_memory, r.memory.total_bytes());
    }
    const auto& knn = times[Learner::Knn];
    const auto& trees = times[Learner::BaggedTrees];
    bool increasing = knn.size() == 5;
    for (std::size_t i = 1; i < knn.size(); ++i) increasing = increasing && knn[i] > knn[i - 1];
    const double knn_ratio = knn.back() / knn.front();
    const double trees_ratio = trees.back() / trees.front();
    std::string d = "KNN median s over grids 10..50:";
    for (double t : knn) d += " " + fmt(t);
    d += "; ratio 50/10 KNN " + fmt(knn_ratio, 2) + ", trees " + fmt(trees_ratio, 2) + "; max memory " +
         fmt(static_cast<double>(max_memory) / 1024.0, 1) + " KB";
    const bool ok = increasing && trees_ratio < knn_ratio && max_memory < 1'000'000;
    return ok ? pass(d) : fail(d);
}

// ---- 7: CLI determinism ----

Outcome determinism_criterion(const std::string& cli, const fs::path& work) {
    const std::string small = " --set data.source=synth --set data.synth.recordings=3 --set data.synth.duration_s=20"
                              " --set 'sweep.window_lengths_ms=[200,500]' --set 'sweep.grid_sizes=[5,20]' --seed 7";
    auto pipeline = [&](const fs::path& out) {
        const std::string log = " >> " + quote(work / "determinism.log") + " 2>&1";
        std::vector<std::string> cmds = {
            quote(cli) + " synth" + small + " -o " + quote(out / "synth"),
            quote(cli) + " windows" + small + " -o " + quote(out / "windows"),
            quote(cli) + " featurize" + small + " --csv -o " + quote(out / "feat"),
            quote(cli) + " train" + small + " --set train.learner=bagged_trees -f " + quote(out / "feat/features.ghf") +
                " -o " + quote(out / "train"),
            quote(cli) + " predict" + small + " -m " + quote(out / "train/model.ghm") + " -f " +
                quote(out / "feat/features.ghf") + " -o " + quote(out / "predict"),
            quote(cli) + " train" + small + " --set train.learner=gp --set train.task=regression -f " +
                quote(out / "feat/features.ghf") + " -o " + quote(out / "train_gp"),
            quote(cli) + " predict" + small + " -m " + quote(out / "train_gp/model.ghm") + " -f " +
                quote(out / "feat/features.ghf") + " -o " + quote(out / "predict_gp"),
            quote(cli) + " eval" + small + " --threads 2 -o " + quote(out / "eval"),
        };
        for (const auto& c : cmds) {
            if (run(c + log) != 0) return false;
        }
        return true;
    };
    const auto a = work / "run_a", b = work / "run_b";
    fs::remove_all(a);
    fs::remove_all(b);
    if (!pipeline(a) || !pipeline(b)) return fail("a CLI run failed, see " + (work / "determinism.log").string());
    std::size_t compared = 0, differing = 0;
    for (const auto& e : fs::recursive_directory_iterator(a)) {
        if (!e.is_regular_file()) continue;
        const auto ext = e.path().extension();
        if (ext != ".csv" && ext != ".ghf" && ext != ".ghm") continue;
        const auto other = b / fs::relative(e.path(), a);
        ++compared;
        if (!fs::exists(other) || slurp(e.path()) != slurp(other)) ++differing;
    }
    const std::string d = std::to_string(compared) + " CSV/feature/model files from synth, windows, featurize, train, "
                          "predict, eval; " + std::to_string(differing) + " differ (bench timings excluded)";
    return compared >= 10 && differing == 0 ? pass(d) : fail(d);
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli, real_config;
    fs::path work = fs::temp_directory_path() / "gazeheat_acceptance";
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string key = argv[i];
        if (key == "--cli") {
            cli = argv[i + 1];
        } else if (key == "--work") {
            work = argv[i + 1];
        } else if (key == "--real-config") {
            real_config = argv[i + 1];
        } else {
            std::fprintf(stderr, "unknown option %s\n", argv[i]);
            return 2;
        }
    }
    if (cli.empty()) {
        std::fprintf(stderr, "usage: acceptance --cli <gazeheat> [--work <dir>] [--real-config <run.json>]\n");
        return 2;
    }
    fs::create_directories(work);

    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria = {
        {1, "heatmap correctness", heatmap_criterion},
        {2, "windowing rules", windowing_criterion},
        {3, "learner oracles", learner_criterion},
        {4, "synthetic reproduction", synthetic_criterion},
        {5, "real-dataset reproduction", [&] { return real_data_criterion(cli, work, real_config); }},
        {6, "benchmark trends", bench_criterion},
        {7, "CLI determinism", [&] { return determinism_criterion(cli, work); }},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = fail(std::string("error: ") + e.what());
        }
        const char* tag = o.kind == Outcome::Pass ? "PASS" : (o.kind == Outcome::Skip ? "SKIP" : "FAIL");
        if (o.kind == Outcome::Fail) ++failures;
        std::printf("criterion %d %s: %s: %s\n", c.id, c.name, tag, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
