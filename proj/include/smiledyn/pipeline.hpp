#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "smiledyn/model.hpp"
#include "smiledyn/segmentation.hpp"
#include "smiledyn/stats.hpp"
#include "smiledyn/synthgen.hpp"

namespace smiledyn {

/// Everything a run needs; assembled from the config file plus CLI flags.
struct RunConfig {
    std::string frames_dir;     // *.frames.csv (+ optional *.speech.csv siblings)
    std::string scores_path;    // scores.csv
    std::string features_path;  // features.csv (stats/train input)
    std::string out_dir = "out";

    LandmarkConfig landmarks;
    SegmentationConfig segmentation;

    double alpha = 0.05;
    bool by_visit = false;
    std::vector<ScaleKind> scales{kAllScales.begin(), kAllScales.end()};

    GridSpec grid;
    MLPConfig mlp;
    std::uint64_t seed = 1;

    SynthSpec synth;
    int synth_sessions = 20;
};

/// Flat key/value config file (key = value, '#' comments). Unknown keys are
/// schema errors so typos surface instead of silently using defaults.
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// Same format, SynthSpec keys only (the `synth --spec` file).
SynthSpec parse_synth_spec_file(const std::filesystem::path& path);

/// Write-to-temp-then-rename so partial runs never leave corrupt outputs.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Session frame tables are named <mother>_v<month>.frames.csv.
SessionMeta session_meta_from_filename(const std::filesystem::path& frames_file, double fps);

/// Runs gating, segmentation, speech filtering and feature extraction over
/// every session in frames_dir; writes smiles.csv, features.csv and
/// segmentation_report.json.
void cmd_extract(const RunConfig& cfg);

/// Correlation, significance, Welch and ANOVA analyses over features.csv and
/// the score table; writes stats.json and per-figure plot data.
void cmd_stats(const RunConfig& cfg);

/// Grid-search training per scale; writes model_report.json.
void cmd_train(const RunConfig& cfg);

/// cmd_stats followed by cmd_train (the full analysis report).
void cmd_report(const RunConfig& cfg);

/// Generates a synthetic corpus in the exact ingest file formats.
void cmd_synth(const RunConfig& cfg);

}  // namespace smiledyn
