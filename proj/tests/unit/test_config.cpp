#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "gazeheat/config.hpp"
#include "gazeheat/error.hpp"

using namespace gazeheat;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Internal;
}

}  // namespace

TEST_CASE("defaults") {
    const RunConfig c;
    c.validate();
    CHECK(c.seed() == 0);
    CHECK(c.threads() == 1);
    CHECK(c.window().length_ms == 500.0);
    CHECK(c.grid_size() == 25);
    CHECK_FALSE(c.three_d());
    CHECK(c.learner() == Learner::Knn);
    CHECK(c.task() == Task::Classification);
    CHECK(c.rates().scene_fps == 30);
    CHECK(c.rates().eye_hz == 200);
    CHECK(c.bounds().rx == 1088.0);
    CHECK_FALSE(c.bounds().rz.has_value());
    const auto sw = c.sweep();
    CHECK(sw.window_lengths_ms.size() * sw.grid_sizes.size() * sw.dims.size() * sw.classifiers.size() == 300);
    CHECK(sw.folds == 5);
    CHECK(c.bench().window_ms == 250.0);
    CHECK(c.learner_params().svm.gamma == 1.0);
    CHECK(c.corpus().recordings == 20);
}

TEST_CASE("set and get dotted keys") {
    RunConfig c;
    c.set("grid.size", "40");
    c.set("grid.three_d", "true");
    c.set("train.learner", "svm");
    c.set("sweep.grid_sizes", "[5, 10]");
    c.set("bounds.rz", "4.5");
    c.set("seed", "17");
    CHECK(c.grid_size() == 40);
    CHECK(c.three_d());
    CHECK(c.learner() == Learner::Svm);
    CHECK(c.sweep().grid_sizes == std::vector<int>{5, 10});
    CHECK(c.bounds().rz == 4.5);
    CHECK(c.get("train.learner") == "svm");
    CHECK(c.get("grid.size") == "40");
    CHECK(c.seed() == 17);
    CHECK(c.corpus().seed == 17);
    c.validate();
}

TEST_CASE("bad keys and values are usage errors") {
    RunConfig c;
    CHECK(kind_of([&] { c.set("grid.colour", "1"); }) == ErrorKind::Usage);
    CHECK(kind_of([&] { c.set("grid.size", "\"big\""); }) == ErrorKind::Usage);
    CHECK(kind_of([&] { (void)c.get("nope"); }) == ErrorKind::Usage);
    CHECK(kind_of([&] { RunConfig::from_text("{\"window\": {\"length\": 3}}"); }) == ErrorKind::Usage);
    CHECK(kind_of([&] { RunConfig::from_text("{ not json"); }) == ErrorKind::Usage);
    c.set("train.learner", "forest");
    CHECK(kind_of([&] { c.validate(); }) == ErrorKind::Usage);
    RunConfig d;
    d.set("grid.size", "0");
    CHECK(kind_of([&] { d.validate(); }) == ErrorKind::Usage);
    RunConfig e;
    e.set("train.learner", "gp");
    CHECK(kind_of([&] { e.validate(); }) == ErrorKind::Usage);  // gp with classification
}

TEST_CASE("file paths resolve against the config file") {
    const auto dir = std::filesystem::temp_directory_path() / "gazeheat_test_config";
    std::filesystem::create_directories(dir);
    const auto path = dir / "run.json";
    std::ofstream(path) << R"({
        "output_dir": "results",
        "data": {"recordings": [{"id": "r1", "gaze": "g.csv", "annotations": "/abs/a.csv"}]},
        "window": {"length_ms": 300}
    })";
    const auto c = RunConfig::from_file(path.string());
    CHECK(std::filesystem::path(c.output_dir()) == dir / "results");
    const auto recs = c.recordings();
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].id == "r1");
    CHECK(std::filesystem::path(recs[0].gaze) == dir / "g.csv");
    CHECK(recs[0].annotations == "/abs/a.csv");
    CHECK(c.window().length_ms == 300.0);
    CHECK(c.grid_size() == 25);  // untouched defaults survive the merge

    CHECK(kind_of([&] { RunConfig::from_file((dir / "missing.json").string()); }) == ErrorKind::Data);
    std::filesystem::remove_all(dir);
}

TEST_CASE("recording ids default to the gaze file name") {
    const auto c = RunConfig::from_text(
        R"({"data": {"recordings": [{"gaze": "d/p01_gaze.csv"}, {"gaze": "d/session.csv"}, {"gaze": "_gaze.csv"}]}})", "/base");
    const auto recs = c.recordings();
    CHECK(recs[0].id == "p01");
    CHECK(recs[1].id == "session");
    CHECK(recs[2].id == "_gaze");
}

TEST_CASE("dump round trips") {
    RunConfig c;
    c.set("sweep.folds", "3");
    const auto back = RunConfig::from_text(c.dump());
    CHECK(back.dump() == c.dump());
    CHECK(back.sweep().folds == 3);
}
