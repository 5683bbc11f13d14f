// Command-line front end: extract / stats / train / report / synth.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smiledyn/pipeline.hpp"

namespace {

using smiledyn::RunConfig;

struct CliState {
    RunConfig cfg;
    std::string config_file;
    std::string synth_spec_file;
    std::string scales_csv;
    std::string windows_csv;
    std::string epochs_csv;
    std::string seeds_csv;
    bool seed_set = false;
    std::uint64_t seed = 1;
    std::string out_dir;
    double alpha = -1.0;
};

void add_common_flags(CLI::App* cmd, CliState& st) {
    cmd->add_option("--config", st.config_file, "flat key=value configuration file");
    cmd->add_option("--out", st.out_dir, "output directory");
    cmd->add_option("--seed", st.seed, "master seed")->each([&st](const std::string&) {
        st.seed_set = true;
    });
    cmd->add_option("--alpha", st.alpha, "significance threshold (default 0.05)");
}

std::vector<int> parse_csv_ints(const std::string& text, const std::string& flag) {
    std::vector<int> out;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw smiledyn::Error(smiledyn::ErrorKind::Schema,
                                  flag + ": expected comma-separated integers");
        }
    }
    if (out.empty())
        throw smiledyn::Error(smiledyn::ErrorKind::Schema, flag + ": empty list");
    return out;
}

void finalize(CliState& st) {
    if (!st.config_file.empty()) smiledyn::apply_config_file(st.cfg, st.config_file);
    if (!st.synth_spec_file.empty())
        st.cfg.synth = smiledyn::parse_synth_spec_file(st.synth_spec_file);
    if (!st.out_dir.empty()) st.cfg.out_dir = st.out_dir;
    if (st.seed_set) st.cfg.seed = st.seed;
    if (st.alpha >= 0.0) st.cfg.alpha = st.alpha;
    if (!st.scales_csv.empty()) {
        st.cfg.scales.clear();
        std::string item;
        std::istringstream ss(st.scales_csv);
        while (std::getline(ss, item, ',')) st.cfg.scales.push_back(smiledyn::scale_from_id(item));
    }
    if (!st.windows_csv.empty()) st.cfg.grid.windows = parse_csv_ints(st.windows_csv, "--windows");
    if (!st.epochs_csv.empty()) st.cfg.grid.epochs = parse_csv_ints(st.epochs_csv, "--epochs");
    if (!st.seeds_csv.empty()) {
        st.cfg.grid.seeds.clear();
        for (int v : parse_csv_ints(st.seeds_csv, "--seeds"))
            st.cfg.grid.seeds.push_back(static_cast<std::uint64_t>(v));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Smile dynamics toolkit: segmentation, features, statistics, regression"};
    app.require_subcommand(1);

    CliState st;

    auto* extract = app.add_subcommand("extract", "segment smiles and compute feature tables");
    add_common_flags(extract, st);
    extract->add_option("--frames", st.cfg.frames_dir, "directory of *.frames.csv sessions");

    auto* stats = app.add_subcommand("stats", "correlation and group-difference analyses");
    add_common_flags(stats, st);
    stats->add_option("--features", st.cfg.features_path, "features.csv from extract");
    stats->add_option("--scores", st.cfg.scores_path, "questionnaire score table");
    stats->add_flag("--by-visit", st.cfg.by_visit, "per-visit correlation series");

    auto* train = app.add_subcommand("train", "windowed MLP grid search per scale");
    add_common_flags(train, st);
    train->add_option("--features", st.cfg.features_path, "features.csv from extract");
    train->add_option("--scores", st.cfg.scores_path, "questionnaire score table");
    train->add_option("--scales", st.scales_csv, "comma list of scales (default: all)");
    train->add_option("--windows", st.windows_csv, "window size grid, e.g. 1,2,3,4,5");
    train->add_option("--epochs", st.epochs_csv, "epoch grid, e.g. 50,100,150,200");
    train->add_option("--seeds", st.seeds_csv, "training seeds, e.g. 1,2,3,4,5");
    train->add_flag("--with-position", st.cfg.mlp.with_position,
                    "include the window index as a model input");

    auto* report = app.add_subcommand("report", "stats + train in one run");
    add_common_flags(report, st);
    report->add_option("--features", st.cfg.features_path, "features.csv from extract");
    report->add_option("--scores", st.cfg.scores_path, "questionnaire score table");
    report->add_option("--scales", st.scales_csv, "comma list of scales (default: all)");
    report->add_option("--windows", st.windows_csv, "window size grid");
    report->add_option("--epochs", st.epochs_csv, "epoch grid");
    report->add_option("--seeds", st.seeds_csv, "training seeds");
    report->add_flag("--by-visit", st.cfg.by_visit, "per-visit correlation series");

    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus with ground truth");
    add_common_flags(synth, st);
    synth->add_option("--sessions", st.cfg.synth_sessions, "number of sessions to generate");
    synth->add_option("--spec", st.synth_spec_file, "synthetic generator spec file");

    CLI11_PARSE(app, argc, argv);

    try {
        finalize(st);
        if (extract->parsed()) smiledyn::cmd_extract(st.cfg);
        if (stats->parsed()) smiledyn::cmd_stats(st.cfg);
        if (train->parsed()) smiledyn::cmd_train(st.cfg);
        if (report->parsed()) smiledyn::cmd_report(st.cfg);
        if (synth->parsed()) smiledyn::cmd_synth(st.cfg);
    } catch (const smiledyn::Error& e) {
        std::fprintf(stderr, "error (%s): %s\n", smiledyn::error_kind_name(e.kind()), e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
