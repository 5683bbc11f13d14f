#include "smiledyn/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "smiledyn/csv.hpp"

namespace smiledyn {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw Error(ErrorKind::Schema, "config key '" + key + "': expected true/false");
}

double parse_num(const std::string& value, const std::string& key) {
    try {
        return parse_double_cell(value, 0, key);
    } catch (const Error&) {
        throw Error(ErrorKind::Schema, "config key '" + key + "': non-numeric value '" + value + "'");
    }
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(value);
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& value, const std::string& key) {
    std::vector<int> out;
    for (const auto& item : split_list(value))
        out.push_back(static_cast<int>(parse_num(item, key)));
    if (out.empty()) throw Error(ErrorKind::Schema, "config key '" + key + "': empty list");
    return out;
}

/// key = value lines; returns pairs in file order.
std::vector<std::pair<std::string, std::string>> read_kv_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config '" + path.string() + "'");
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto trim = [](const std::string& s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::Schema, path.string() + " line " + std::to_string(line_no) +
                                               ": expected 'key = value'");
        pairs.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return pairs;
}

bool apply_synth_key(SynthSpec& s, const std::string& key, const std::string& value) {
    if (key == "session_seconds") s.session_seconds = parse_num(value, key);
    else if (key == "fps") s.fps = parse_num(value, key);
    else if (key == "smile_count_mean") s.smile_count_mean = parse_num(value, key);
    else if (key == "smile_count_sd") s.smile_count_sd = parse_num(value, key);
    else if (key == "onset_duration_mean") s.onset_duration.mean = parse_num(value, key);
    else if (key == "onset_duration_jitter") s.onset_duration.jitter = parse_num(value, key);
    else if (key == "apex_duration_mean") s.apex_duration.mean = parse_num(value, key);
    else if (key == "apex_duration_jitter") s.apex_duration.jitter = parse_num(value, key);
    else if (key == "offset_duration_mean") s.offset_duration.mean = parse_num(value, key);
    else if (key == "offset_duration_jitter") s.offset_duration.jitter = parse_num(value, key);
    else if (key == "amplitude_mean") s.amplitude.mean = parse_num(value, key);
    else if (key == "amplitude_jitter") s.amplitude.jitter = parse_num(value, key);
    else if (key == "r_noise_sd") s.r_noise_sd = parse_num(value, key);
    else if (key == "confidence_dropout_prob") s.confidence_dropout_prob = parse_num(value, key);
    else if (key == "speech_confound_prob") s.speech_confound_prob = parse_num(value, key);
    else if (key == "speech_extra_per_min") s.speech_extra_per_min = parse_num(value, key);
    else if (key == "scale") s.scale = scale_from_id(value);
    else if (key == "score_mean") s.score_mean = parse_num(value, key);
    else if (key == "score_sd") s.score_sd = parse_num(value, key);
    else if (key == "linkage_amplitude") s.linkage[0] = parse_num(value, key);
    else if (key == "linkage_onset_duration") s.linkage[1] = parse_num(value, key);
    else if (key == "linkage_apex_duration") s.linkage[2] = parse_num(value, key);
    else if (key == "linkage_offset_duration") s.linkage[3] = parse_num(value, key);
    else if (key == "linkage_ramp") s.linkage_ramp = parse_bool(value, key);
    else return false;
    return true;
}

}  // namespace

void apply_config_file(RunConfig& cfg, const fs::path& path) {
    for (const auto& [key, value] : read_kv_file(path)) {
        if (key == "frames_dir") cfg.frames_dir = value;
        else if (key == "scores") cfg.scores_path = value;
        else if (key == "features") cfg.features_path = value;
        else if (key == "out") cfg.out_dir = value;
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_num(value, key));
        else if (key == "alpha") cfg.alpha = parse_num(value, key);
        else if (key == "by_visit") cfg.by_visit = parse_bool(value, key);
        else if (key == "confidence_min") cfg.segmentation.confidence_min = parse_num(value, key);
        else if (key == "au12_threshold") cfg.segmentation.au12_threshold = parse_num(value, key);
        else if (key == "au12_min_hits")
            cfg.segmentation.au12_min_hits = static_cast<int>(parse_num(value, key));
        else if (key == "au12_hit_window") cfg.segmentation.au12_hit_window = parse_num(value, key);
        else if (key == "monotone_epsilon")
            cfg.segmentation.monotone_epsilon = parse_num(value, key);
        else if (key == "episode_gap_max") cfg.segmentation.episode_gap_max = parse_num(value, key);
        else if (key == "landmark_left_lip")
            cfg.landmarks.left_lip = static_cast<int>(parse_num(value, key));
        else if (key == "landmark_right_lip")
            cfg.landmarks.right_lip = static_cast<int>(parse_num(value, key));
        else if (key == "landmark_nostril")
            cfg.landmarks.nostril = static_cast<int>(parse_num(value, key));
        else if (key == "windows") cfg.grid.windows = parse_int_list(value, key);
        else if (key == "epochs") cfg.grid.epochs = parse_int_list(value, key);
        else if (key == "seeds") {
            cfg.grid.seeds.clear();
            for (int v : parse_int_list(value, key))
                cfg.grid.seeds.push_back(static_cast<std::uint64_t>(v));
        } else if (key == "cv_folds") cfg.grid.cv_folds = static_cast<int>(parse_num(value, key));
        else if (key == "scales") {
            cfg.scales.clear();
            for (const auto& id : split_list(value)) cfg.scales.push_back(scale_from_id(id));
            if (cfg.scales.empty()) throw Error(ErrorKind::Schema, "config key 'scales': empty");
        } else if (key == "batch_size") cfg.mlp.batch_size = static_cast<int>(parse_num(value, key));
        else if (key == "learning_rate") cfg.mlp.learning_rate = parse_num(value, key);
        else if (key == "with_position") cfg.mlp.with_position = parse_bool(value, key);
        else if (key == "standardize_targets")
            cfg.mlp.standardize_targets = parse_bool(value, key);
        else if (key == "clamp_predictions") cfg.mlp.clamp_predictions = parse_bool(value, key);
        else if (key == "synth_sessions") cfg.synth_sessions = static_cast<int>(parse_num(value, key));
        else if (key.rfind("synth_", 0) == 0 && apply_synth_key(cfg.synth, key.substr(6), value)) {
            // handled by apply_synth_key
        } else {
            throw Error(ErrorKind::Schema, "unknown config key '" + key + "'");
        }
    }
}

SynthSpec parse_synth_spec_file(const fs::path& path) {
    SynthSpec spec;
    for (const auto& [key, value] : read_kv_file(path)) {
        if (!apply_synth_key(spec, key, value))
            throw Error(ErrorKind::Schema, "unknown synth spec key '" + key + "'");
    }
    return spec;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::Io, "cannot write '" + tmp.string() + "'");
        out << content;
        if (!out.good()) throw Error(ErrorKind::Io, "write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot rename '" + tmp.string() + "' to '" +
                                           path.string() + "': " + ec.message());
}

SessionMeta session_meta_from_filename(const fs::path& frames_file, double fps) {
    std::string stem = frames_file.filename().string();
    const std::string suffix = ".frames.csv";
    if (stem.size() <= suffix.size() || stem.substr(stem.size() - suffix.size()) != suffix)
        throw Error(ErrorKind::Schema,
                    "'" + frames_file.string() + "': expected <mother>_v<month>.frames.csv");
    stem = stem.substr(0, stem.size() - suffix.size());
    const auto sep = stem.rfind("_v");
    if (sep == std::string::npos || sep == 0 || sep + 2 >= stem.size())
        throw Error(ErrorKind::Schema,
                    "'" + frames_file.string() + "': expected <mother>_v<month>.frames.csv");
    SessionMeta meta;
    meta.session_id = stem;
    meta.mother_id = stem.substr(0, sep);
    const long visit = parse_int_cell(stem.substr(sep + 2), 0, "visit_month");
    if (visit != 6 && visit != 12)
        throw Error(ErrorKind::Validation,
                    "'" + frames_file.string() + "': visit month must be 6 or 12");
    meta.visit_month = static_cast<int>(visit);
    meta.fps_nominal = fps;
    return meta;
}

namespace {

struct SessionOutput {
    SessionMeta meta;
    double retention = 0.0;
    int smiles_before = 0;
    int removed_by_speech = 0;
    std::vector<Smile> smiles;
    FeatureTable features;
};

SessionOutput process_session(const fs::path& frames_file, const RunConfig& cfg) {
    SessionOutput out;
    out.meta = session_meta_from_filename(frames_file, 30.0);

    std::istringstream frames_in(read_file(frames_file));
    FrameSeries series;
    try {
        series = parse_frame_table(frames_in, cfg.landmarks, out.meta);
    } catch (const Error& e) {
        throw Error(e.kind(), "session '" + out.meta.session_id + "': " + e.what());
    }

    std::vector<SpeechInterval> speech;
    fs::path speech_file = frames_file;
    speech_file.replace_filename(out.meta.session_id + ".speech.csv");
    if (fs::exists(speech_file)) {
        std::istringstream speech_in(read_file(speech_file));
        try {
            speech = parse_speech_intervals(speech_in);
        } catch (const Error& e) {
            throw Error(e.kind(), "session '" + out.meta.session_id + "': " + e.what());
        }
    }

    out.retention = gate_confidence(series, cfg.segmentation).retention_fraction;
    std::vector<Smile> smiles = segment_smiles(series, cfg.landmarks, cfg.segmentation);
    out.smiles_before = static_cast<int>(smiles.size());
    SpeechFilterResult filtered = remove_speech_confounded(std::move(smiles), speech);
    out.removed_by_speech = filtered.removed_count;
    out.smiles = std::move(filtered.kept);
    out.features = session_features(out.meta, out.smiles);
    return out;
}

Corpus load_corpus(const RunConfig& cfg) {
    if (cfg.features_path.empty())
        throw Error(ErrorKind::Io, "no features file configured (set 'features' or --features)");
    if (cfg.scores_path.empty())
        throw Error(ErrorKind::Io, "no score table configured (set 'scores' or --scores)");
    Corpus corpus;
    std::istringstream features_in(read_file(cfg.features_path));
    corpus.sessions = parse_features_csv(features_in);
    std::istringstream scores_in(read_file(cfg.scores_path));
    corpus.scores = parse_score_table(scores_in);
    return corpus;
}

std::string smiles_csv(std::span<const SessionOutput> sessions) {
    std::ostringstream out;
    out << "session_id,ordinal,onset_start,onset_end,offset_start,offset_end,initial_radius\n";
    for (const SessionOutput& s : sessions) {
        for (const Smile& smile : s.smiles) {
            out << smile.session_id << ',' << smile.ordinal << ','
                << format_double(smile.onset_start) << ',' << format_double(smile.onset_end)
                << ',' << format_double(smile.offset_start) << ','
                << format_double(smile.offset_end) << ',' << format_double(smile.initial_radius)
                << "\n";
        }
    }
    return out.str();
}

json welch_entries(const Corpus& corpus) {
    json entries = json::array();
    for (FeatureId feature : kAllFeatures) {
        std::vector<double> six, twelve;
        for (const FeatureTable& t : corpus.sessions) {
            auto& dst = (t.visit_month == 6) ? six : twelve;
            for (const FeatureRow& row : t.rows)
                dst.push_back(feature_value(row.features, feature));
        }
        json entry;
        entry["feature"] = feature_id_name(feature);
        entry["n_6"] = six.size();
        entry["n_12"] = twelve.size();
        try {
            const WelchResult w = welch_t(six, twelve);
            entry["t"] = w.t;
            entry["df"] = w.df;
            entry["p"] = w.p;
            entry["cohen_d"] = w.d;
        } catch (const Error& e) {
            entry["skipped"] = e.what();
        }
        entries.push_back(entry);
    }
    return entries;
}

json anova_entries(const Corpus& corpus) {
    json entries = json::array();
    for (FeatureId feature : kAllFeatures) {
        for (int month : {6, 12}) {
            for (ScaleKind scale : kAllScales) {
                if (category_bands(scale).empty()) continue;
                // Per-smile feature values grouped by the mother's category.
                std::map<std::string_view, std::vector<double>> by_category;
                for (const FeatureTable& t : corpus.sessions) {
                    if (t.visit_month != month) continue;
                    const ScoreTableRow* score = corpus.score_for(t);
                    if (!score) continue;
                    const auto label = categorize({scale, score->value(scale)});
                    for (const FeatureRow& row : t.rows)
                        by_category[label].push_back(feature_value(row.features, feature));
                }
                std::vector<std::vector<double>> groups;
                json group_names = json::array();
                for (const CategoryBand& band : category_bands(scale)) {
                    const auto it = by_category.find(band.label);
                    if (it != by_category.end() && !it->second.empty()) {
                        groups.push_back(it->second);
                        group_names.push_back(std::string(band.label));
                    }
                }
                if (groups.size() < 2) continue;
                json entry;
                entry["feature"] = feature_id_name(feature);
                entry["visit_month"] = month;
                entry["scale"] = scale_id(scale);
                entry["groups"] = group_names;
                try {
                    const AnovaResult a = anova_oneway(groups);
                    entry["f"] = a.f;
                    entry["df_between"] = a.df_between;
                    entry["df_within"] = a.df_within;
                    entry["p"] = a.p;
                    entry["partial_eta2"] = a.partial_eta2;
                } catch (const Error& e) {
                    entry["skipped"] = e.what();
                }
                entries.push_back(entry);
            }
        }
    }
    return entries;
}

void run_stats(const RunConfig& cfg, const Corpus& corpus) {
    const std::optional<int> pooled_visit = std::nullopt;
    json doc;
    doc["alpha"] = cfg.alpha;
    doc["by_visit"] = cfg.by_visit;

    const auto significance = feature_significance(corpus, cfg.scales, pooled_visit);
    json sig = json::array();
    for (const auto& s : significance) {
        sig.push_back({{"feature", feature_id_name(s.feature)},
                       {"mean_p", s.mean_p},
                       {"n_tests", s.n_tests}});
    }
    doc["feature_significance"] = sig;

    json selected = json::array();
    for (FeatureId f : select_significant_features(corpus, cfg.scales, cfg.alpha, pooled_visit))
        selected.push_back(feature_id_name(f));
    doc["significant_features"] = selected;

    std::vector<std::optional<int>> visit_modes;
    if (cfg.by_visit) {
        visit_modes.push_back(6);
        visit_modes.push_back(12);
    } else {
        visit_modes.push_back(std::nullopt);
    }

    json correlations = json::array();
    for (FeatureId feature : kAllFeatures) {
        for (ScaleKind scale : cfg.scales) {
            for (const auto& visit : visit_modes) {
                const CorrelationSeries series =
                    smile_index_correlations(corpus, feature, scale, visit);
                json entry;
                entry["feature"] = feature_id_name(feature);
                entry["scale"] = scale_id(scale);
                if (visit) entry["visit_month"] = *visit;
                json points = json::array();
                std::ostringstream plot;
                plot << "ordinal,n,r\n";
                for (const CorrelationPoint& p : series.points) {
                    points.push_back({{"ordinal", p.ordinal}, {"n", p.sample_size}, {"r", p.r}});
                    plot << p.ordinal << ',' << p.sample_size << ',' << format_double(p.r) << "\n";
                }
                entry["points"] = points;
                correlations.push_back(entry);

                std::string name = "corr_" + std::string(feature_id_name(feature)) + "_" +
                                   std::string(scale_id(scale));
                if (visit) name += "_m" + std::to_string(*visit);
                write_file_atomic(fs::path(cfg.out_dir) / "plotdata" / (name + ".csv"),
                                  plot.str());
            }
        }
    }
    doc["correlations"] = correlations;
    doc["welch_6_vs_12"] = welch_entries(corpus);
    doc["anova"] = anova_entries(corpus);

    write_file_atomic(fs::path(cfg.out_dir) / "stats.json", doc.dump(2) + "\n");
}

void run_train(const RunConfig& cfg, const Corpus& corpus) {
    json doc;
    doc["seed"] = cfg.seed;
    json scales = json::array();
    for (ScaleKind s : cfg.scales) scales.push_back(scale_id(s));
    doc["scales"] = scales;
    doc["windows"] = cfg.grid.windows;
    doc["epochs"] = cfg.grid.epochs;
    doc["training_seeds"] = cfg.grid.seeds;
    doc["cv_folds"] = cfg.grid.cv_folds;

    json reports = json::array();
    for (ScaleKind scale : cfg.scales) {
        const TrainReport report = grid_search(corpus, scale, cfg.grid, cfg.mlp, cfg.seed);
        json r;
        r["scale"] = scale_id(scale);
        r["best_window"] = report.best_window;
        r["best_epochs"] = report.best_epochs;
        r["mae"] = report.mae;
        r["rmse"] = report.rmse;
        r["mae_mother"] = report.mae_mother;
        r["rmse_mother"] = report.rmse_mother;
        r["per_seed_test_mse"] = report.per_seed_mse;
        json cv = json::array();
        for (const CellScore& c : report.cv_scores) {
            json cell;
            cell["window"] = c.window;
            cell["epochs"] = c.epochs;
            if (std::isfinite(c.mean_cv_mse))
                cell["mean_cv_mse"] = c.mean_cv_mse;
            else
                cell["mean_cv_mse"] = nullptr;  // cell had no trainable folds
            cv.push_back(cell);
        }
        r["cv"] = cv;
        r["split"] = {{"train", report.split.train_mothers}, {"test", report.split.test_mothers}};
        reports.push_back(r);
    }
    doc["reports"] = reports;
    write_file_atomic(fs::path(cfg.out_dir) / "model_report.json", doc.dump(2) + "\n");
}

}  // namespace

void cmd_extract(const RunConfig& cfg) {
    if (cfg.frames_dir.empty())
        throw Error(ErrorKind::Io, "no frames directory configured (set 'frames_dir' or --frames)");
    if (!fs::is_directory(cfg.frames_dir))
        throw Error(ErrorKind::Io, "frames directory '" + cfg.frames_dir + "' does not exist");

    std::vector<fs::path> frame_files;
    for (const auto& entry : fs::directory_iterator(cfg.frames_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.size() > 11 && name.substr(name.size() - 11) == ".frames.csv")
            frame_files.push_back(entry.path());
    }
    if (frame_files.empty())
        throw Error(ErrorKind::Io, "no *.frames.csv files in '" + cfg.frames_dir + "'");
    std::sort(frame_files.begin(), frame_files.end());

    std::vector<SessionOutput> sessions;
    sessions.reserve(frame_files.size());
    for (const fs::path& file : frame_files) sessions.push_back(process_session(file, cfg));

    std::vector<FeatureTable> tables;
    json per_session = json::array();
    double retention_sum = 0.0;
    long total_before = 0, total_removed = 0, total_kept = 0;
    for (const SessionOutput& s : sessions) {
        tables.push_back(s.features);
        retention_sum += s.retention;
        total_before += s.smiles_before;
        total_removed += s.removed_by_speech;
        total_kept += static_cast<long>(s.smiles.size());
        per_session.push_back({{"session_id", s.meta.session_id},
                               {"mother_id", s.meta.mother_id},
                               {"visit_month", s.meta.visit_month},
                               {"retention_fraction", s.retention},
                               {"smiles_detected", s.smiles_before},
                               {"removed_by_speech", s.removed_by_speech},
                               {"smiles_kept", static_cast<long>(s.smiles.size())}});
    }

    json report;
    report["sessions"] = per_session;
    const double n = static_cast<double>(sessions.size());
    report["summary"] = {
        {"n_sessions", sessions.size()},
        {"mean_retention_fraction", retention_sum / n},
        {"mean_smiles_kept", static_cast<double>(total_kept) / n},
        {"total_smiles_detected", total_before},
        {"total_removed_by_speech", total_removed},
        {"total_smiles_kept", total_kept},
        {"kept_smile_fraction",
         total_before > 0 ? static_cast<double>(total_kept) / total_before : 1.0}};

    write_file_atomic(fs::path(cfg.out_dir) / "smiles.csv", smiles_csv(sessions));
    write_file_atomic(fs::path(cfg.out_dir) / "features.csv", write_features_csv(tables));
    write_file_atomic(fs::path(cfg.out_dir) / "segmentation_report.json", report.dump(2) + "\n");
}

void cmd_stats(const RunConfig& cfg) {
    const Corpus corpus = load_corpus(cfg);
    run_stats(cfg, corpus);
}

void cmd_train(const RunConfig& cfg) {
    const Corpus corpus = load_corpus(cfg);
    run_train(cfg, corpus);
}

void cmd_report(const RunConfig& cfg) {
    const Corpus corpus = load_corpus(cfg);
    run_stats(cfg, corpus);
    run_train(cfg, corpus);
}

void cmd_synth(const RunConfig& cfg) {
    const SynthCorpus corpus = generate_corpus(cfg.synth, cfg.synth_sessions, cfg.seed);
    const fs::path out(cfg.out_dir);

    json truth;
    truth["seed"] = cfg.seed;
    truth["scale"] = scale_id(cfg.synth.scale);
    json sessions = json::array();
    for (const SynthSession& s : corpus.sessions) {
        write_file_atomic(out / (s.series.session_id + ".frames.csv"),
                          write_frame_table(s.series, LandmarkConfig{}));
        if (!s.speech.empty())
            write_file_atomic(out / (s.series.session_id + ".speech.csv"),
                              write_speech_intervals(s.speech));
        json smiles = json::array();
        for (const TrueSmile& t : s.truth.smiles) {
            smiles.push_back({{"onset_start", t.onset_start},
                              {"onset_end", t.onset_end},
                              {"offset_start", t.offset_start},
                              {"offset_end", t.offset_end},
                              {"speech_confounded", t.speech_confounded},
                              {"onset_amplitude", t.features.onset_amplitude},
                              {"total_duration", t.features.total_duration}});
        }
        sessions.push_back({{"session_id", s.series.session_id},
                            {"score", s.truth.score},
                            {"smiles", smiles}});
    }
    truth["sessions"] = sessions;

    write_file_atomic(out / "scores.csv", write_score_table(corpus.scores));
    write_file_atomic(out / "ground_truth.json", truth.dump(2) + "\n");
}

}  // namespace smiledyn
