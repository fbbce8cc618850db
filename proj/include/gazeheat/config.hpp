#pragma once

// Run configuration: a JSON document layered over built-in defaults.
//
// Every key a run may use exists in the defaults; a config file or an
// override naming any other key is rejected. Relative data paths and the
// output directory in a config file resolve against the file's directory.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "gazeheat/bench.hpp"
#include "gazeheat/eval.hpp"
#include "gazeheat/gaze_data.hpp"
#include "gazeheat/heatmap.hpp"
#include "gazeheat/model.hpp"
#include "gazeheat/synth.hpp"
#include "gazeheat/windowing.hpp"

namespace gazeheat {

struct RecordingSource {
    std::string id;
    std::string gaze;
    std::string annotations;  // empty: no annotations
};

class RunConfig {
public:
    RunConfig();

    static RunConfig from_file(const std::string& path);
    static RunConfig from_text(const std::string& text, const std::string& base_dir = ".",
                               const std::string& origin = "<config>");

    // Overrides one dotted key, e.g. "sweep.folds". The value is parsed as
    // JSON when possible and taken as a plain string otherwise.
    void set(const std::string& key, const std::string& value);
    std::string get(const std::string& key) const;

    // Checks every section; throws a Usage error on the first problem.
    void validate() const;

    const nlohmann::json& document() const noexcept { return doc_; }
    std::string dump() const;

    BoundsConfig bounds() const;
    CameraRates rates() const;
    ColumnMap columns() const;
    bool use_synth() const;
    std::vector<RecordingSource> recordings() const;
    CorpusSpec corpus() const;
    WindowSpec window() const;
    int grid_size() const;
    bool three_d() const;
    Learner learner() const;
    Task task() const;
    LearnerParams learner_params() const;
    SweepConfig sweep() const;
    BenchConfig bench() const;
    std::uint64_t seed() const;
    int threads() const;
    std::string output_dir() const;

private:
    nlohmann::json doc_;
};

}  // namespace gazeheat
