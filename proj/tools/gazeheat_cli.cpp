// gazeheat command-line front end. Links only the C API.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gazeheat/gazeheat.h"

namespace {

// Exit status carrying a message, thrown out of a subcommand.
struct Failure {
    int code;
    std::string message;
};

void check(gh_status s) {
    if (s != GH_OK) throw Failure{static_cast<int>(s), gh_last_error()};
}

struct ConfigDeleter {
    void operator()(gh_config* c) const { gh_config_free(c); }
};
struct CorpusDeleter {
    void operator()(gh_corpus* c) const { gh_corpus_free(c); }
};
struct ModelDeleter {
    void operator()(gh_model* m) const { gh_model_free(m); }
};
using ConfigPtr = std::unique_ptr<gh_config, ConfigDeleter>;
using CorpusPtr = std::unique_ptr<gh_corpus, CorpusDeleter>;
using ModelPtr = std::unique_ptr<gh_model, ModelDeleter>;

struct Common {
    std::string config;
    std::vector<std::string> sets;
    std::string out;
    std::optional<unsigned long long> seed;
    std::optional<int> threads;
    std::vector<std::string> gaze;
    std::vector<std::string> annotations;
};

void add_common(CLI::App* cmd, Common& c, bool data_inputs) {
    cmd->add_option("-c,--config", c.config, "JSON run configuration")->check(CLI::ExistingFile);
    cmd->add_option("--set", c.sets, "Override a config key, e.g. --set sweep.folds=3")->type_name("KEY=VALUE");
    cmd->add_option("-o,--out", c.out, "Output directory (overrides output_dir)");
    cmd->add_option("--seed", c.seed, "Random seed (overrides seed)");
    cmd->add_option("--threads", c.threads, "Worker thread cap (overrides threads)")->check(CLI::PositiveNumber);
    if (data_inputs) {
        cmd->add_option("--gaze", c.gaze, "Gaze CSV; replaces the configured recordings");
        cmd->add_option("--annotations", c.annotations, "Annotation CSV, paired with --gaze in order");
    }
}

std::string get(const gh_config* cfg, const char* key) {
    std::size_t len = 0;
    check(gh_config_get(cfg, key, nullptr, 0, &len));
    std::string s(len, '\0');
    check(gh_config_get(cfg, key, s.data(), len + 1, &len));
    return s;
}

ConfigPtr make_config(const Common& c) {
    gh_config* raw = nullptr;
    check(c.config.empty() ? gh_config_new(&raw) : gh_config_load(c.config.c_str(), &raw));
    ConfigPtr cfg(raw);
    for (const auto& kv : c.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw Failure{1, "--set expects KEY=VALUE, got '" + kv + "'"};
        check(gh_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
    }
    if (!c.gaze.empty()) {
        if (c.annotations.size() > c.gaze.size()) throw Failure{1, "more --annotations than --gaze files"};
        nlohmann::json recs = nlohmann::json::array();
        for (std::size_t i = 0; i < c.gaze.size(); ++i) {
            nlohmann::json r{{"gaze", c.gaze[i]}};
            if (i < c.annotations.size()) r["annotations"] = c.annotations[i];
            recs.push_back(r);
        }
        check(gh_config_set(cfg.get(), "data.recordings", recs.dump().c_str()));
        check(gh_config_set(cfg.get(), "data.source", "files"));
    }
    if (!c.out.empty()) check(gh_config_set(cfg.get(), "output_dir", nlohmann::json(c.out).dump().c_str()));
    if (c.seed) check(gh_config_set(cfg.get(), "seed", std::to_string(*c.seed).c_str()));
    if (c.threads) check(gh_config_set(cfg.get(), "threads", std::to_string(*c.threads).c_str()));
    check(gh_config_validate(cfg.get()));
    return cfg;
}

CorpusPtr load_corpus(const gh_config* cfg) {
    gh_corpus* raw = nullptr;
    check(gh_corpus_load(cfg, &raw));
    return CorpusPtr(raw);
}

std::string out_path(const std::string& dir, const char* name) { return (std::filesystem::path(dir) / name).string(); }

std::string corpus_id(const gh_corpus* corpus, std::size_t i) {
    std::size_t len = 0;
    check(gh_corpus_id(corpus, i, nullptr, 0, &len));
    std::string s(len, '\0');
    check(gh_corpus_id(corpus, i, s.data(), len + 1, &len));
    return s;
}

void run_ingest(const gh_config* cfg, const std::string& dir) {
    auto corpus = load_corpus(cfg);
    std::size_t n = 0;
    check(gh_corpus_size(corpus.get(), &n));
    std::string report =
        "recording_id,samples,annotations,dropped_rows,clamped_rows,degenerate_boxes,duplicate_timestamps,rx,ry,rz,"
        "t_first_us,t_last_us\n";
    for (std::size_t i = 0; i < n; ++i) {
        gh_recording_info info{};
        check(gh_corpus_info(corpus.get(), i, &info));
        const auto id = corpus_id(corpus.get(), i);
        char line[512];
        std::snprintf(line, sizeof line, ",%zu,%zu,%zu,%zu,%zu,%zu,%.17g,%.17g,%.17g,%lld,%lld\n", info.samples,
                      info.annotations, info.dropped_rows, info.clamped_rows, info.degenerate_boxes,
                      info.duplicate_timestamps, info.rx, info.ry, info.rz, static_cast<long long>(info.t_first_us),
                      static_cast<long long>(info.t_last_us));
        report += id + line;
        std::fprintf(stderr, "%s: %zu samples (%zu dropped, %zu clamped), %zu boxes (%zu degenerate)\n", id.c_str(),
                     info.samples, info.dropped_rows, info.clamped_rows, info.annotations, info.degenerate_boxes);
    }
    check(gh_corpus_write_csv(corpus.get(), out_path(dir, "recordings").c_str()));
    std::FILE* f = std::fopen(out_path(dir, "ingest_report.csv").c_str(), "wb");
    if (!f) throw Failure{2, "cannot write " + out_path(dir, "ingest_report.csv")};
    std::fwrite(report.data(), 1, report.size(), f);
    std::fclose(f);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gazeheat: object detection and box regression from gaze heatmaps"};
    app.set_version_flag("--version", std::string(gh_version()));
    app.require_subcommand(1, 1);

    Common c;
    std::string features;
    std::string model_path;
    bool features_csv = false;

    auto* ingest = app.add_subcommand("ingest", "Parse gaze and annotation files, report counts, write cleaned CSVs");
    add_common(ingest, c, true);
    auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus as gaze and annotation CSVs");
    add_common(synth, c, false);
    auto* windows = app.add_subcommand("windows", "Write the labeled temporal windows as CSV");
    add_common(windows, c, true);
    auto* featurize = app.add_subcommand("featurize", "Write heatmap features for the configured window and grid");
    add_common(featurize, c, true);
    featurize->add_flag("--csv", features_csv, "Also write a CSV dump of the features");
    auto* train = app.add_subcommand("train", "Train the configured learner on a feature file");
    add_common(train, c, false);
    train->add_option("-f,--features", features, "Feature file from featurize")->required();
    auto* predict = app.add_subcommand("predict", "Predict every record of a feature file");
    add_common(predict, c, false);
    predict->add_option("-m,--model", model_path, "Model file from train")->required();
    predict->add_option("-f,--features", features, "Feature file from featurize")->required();
    auto* eval = app.add_subcommand("eval", "Cross-validate the window x grid x learner sweep");
    add_common(eval, c, true);
    auto* bench = app.add_subcommand("bench", "Time single-input predictions and measure memory");
    add_common(bench, c, true);

    if (argc > 1 && argv[1][0] != '-' && app.get_subcommand_no_throw(argv[1]) == nullptr) {
        std::cerr << "gazeheat: unknown subcommand '" << argv[1] << "'; run with --help for the list\n";
        return static_cast<int>(GH_ERR_USAGE);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(GH_ERR_USAGE);
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        if (command == "synth") c.sets.insert(c.sets.begin(), "data.source=synth");
        auto cfg = make_config(c);
        const std::string dir = get(cfg.get(), "output_dir");

        if (command == "ingest") {
            run_ingest(cfg.get(), dir);
        } else if (command == "synth") {
            auto corpus = load_corpus(cfg.get());
            check(gh_corpus_write_csv(corpus.get(), dir.c_str()));
        } else if (command == "windows") {
            auto corpus = load_corpus(cfg.get());
            std::filesystem::create_directories(dir);
            check(gh_corpus_write_windows(corpus.get(), cfg.get(), out_path(dir, "windows.csv").c_str()));
        } else if (command == "featurize") {
            auto corpus = load_corpus(cfg.get());
            std::filesystem::create_directories(dir);
            std::size_t rows = 0;
            const auto path = out_path(dir, "features.ghf");
            check(gh_corpus_featurize(corpus.get(), cfg.get(), path.c_str(), &rows));
            std::fprintf(stderr, "wrote %zu feature rows to %s\n", rows, path.c_str());
            if (features_csv) check(gh_features_to_csv(path.c_str(), out_path(dir, "features.csv").c_str()));
        } else if (command == "train") {
            gh_model* raw = nullptr;
            check(gh_model_train(cfg.get(), features.c_str(), &raw));
            ModelPtr model(raw);
            std::filesystem::create_directories(dir);
            check(gh_model_save(model.get(), out_path(dir, "model.ghm").c_str()));
            gh_model_info info{};
            check(gh_model_info_get(model.get(), &info));
            std::fprintf(stderr, "trained on %zu rows (%zu used), dimension %zu%s\n", info.train_rows, info.used_rows,
                         info.dim, info.svm_converged ? "" : ", SVM stopped at max_iter");
        } else if (command == "predict") {
            gh_model* raw = nullptr;
            check(gh_model_load(model_path.c_str(), &raw));
            ModelPtr model(raw);
            std::filesystem::create_directories(dir);
            check(gh_model_predict_file(model.get(), features.c_str(), out_path(dir, "predictions.csv").c_str()));
        } else if (command == "eval") {
            auto corpus = load_corpus(cfg.get());
            std::size_t cells = 0;
            auto report = [](size_t done, size_t total, void*) {
                std::fprintf(stderr, "eval: job %zu/%zu\n", done, total);
            };
            check(gh_eval_run_progress(cfg.get(), corpus.get(), dir.c_str(), &cells, report, nullptr));
            std::fprintf(stderr, "evaluated %zu cells into %s\n", cells, dir.c_str());
        } else if (command == "bench") {
            auto corpus = load_corpus(cfg.get());
            check(gh_bench_run(cfg.get(), corpus.get(), dir.c_str()));
        }
        check(gh_write_manifest(cfg.get(), command.c_str(), dir.c_str()));
    } catch (const Failure& f) {
        std::fprintf(stderr, "gazeheat %s: error: %s\n", command.c_str(), f.message.c_str());
        return f.code;
    } catch (const std::filesystem::filesystem_error& e) {
        std::fprintf(stderr, "gazeheat %s: error: %s\n", command.c_str(), e.what());
        return static_cast<int>(GH_ERR_DATA);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "gazeheat %s: error: %s\n", command.c_str(), e.what());
        return static_cast<int>(GH_ERR_INTERNAL);
    }
    return 0;
}
