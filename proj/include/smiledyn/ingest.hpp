#pragma once

#include <istream>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smiledyn/scales.hpp"

namespace smiledyn {

/// Which landmark indices realize the anatomical reference points. The
/// defaults follow the common 68-point convention; upstream tools that use a
/// different numbering override these in the run configuration.
struct LandmarkConfig {
    int left_lip = 48;
    int right_lip = 54;
    int nostril = 32;

    std::vector<int> indices() const { return {left_lip, right_lip, nostril}; }
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct FrameRecord {
    long frame_index = 0;      // >= 1
    double timestamp = 0.0;    // seconds, strictly increasing within a session
    double confidence = 0.0;   // [0, 1]
    double au12 = 0.0;         // [0, 5]
    std::map<int, Point> points;
};

struct SessionMeta {
    std::string session_id;
    std::string mother_id;
    int visit_month = 6;  // 6 or 12
    double fps_nominal = 30.0;
};

struct FrameSeries {
    std::string session_id;
    std::string mother_id;
    int visit_month = 6;
    double fps_nominal = 30.0;  // metadata only; timestamps are authoritative
    std::vector<FrameRecord> frames;
};

struct SpeechInterval {
    double start = 0.0;
    double end = 0.0;
};

/// Vocalizations at or below this duration are dropped at parse time.
inline constexpr double kMinSpeechSeconds = 0.010;

struct ScoreTableRow {
    std::string mother_id;
    int visit_month = 6;
    int phq9 = 0;
    int aces = 0;
    int social_support = 0;
    int pss = 0;
    int pearls = 0;

    int value(ScaleKind kind) const;
};

using ScoreKey = std::pair<std::string, int>;
using ScoreTable = std::map<ScoreKey, ScoreTableRow>;

/// Parses the upstream facial-analysis export. Required columns: frame,
/// timestamp, confidence, AU12_r, and x_<i>/y_<i> for each configured
/// landmark index. Extra columns are ignored.
FrameSeries parse_frame_table(std::istream& in, const LandmarkConfig& cfg,
                              const SessionMeta& meta);

/// Inverse of parse_frame_table; emits values at full precision so a
/// serialize/parse round trip reproduces the series exactly.
std::string write_frame_table(const FrameSeries& series, const LandmarkConfig& cfg);

/// Parses start_s,end_s rows; drops sub-10 ms intervals, sorts, merges
/// overlaps. Output is sorted and non-overlapping.
std::vector<SpeechInterval> parse_speech_intervals(std::istream& in);

std::string write_speech_intervals(std::span<const SpeechInterval> intervals);

/// Parses mother_id,visit_month,phq9,aces,social_support,pss,pearls rows.
/// Every score is validated against its scale range; duplicate
/// (mother, visit) keys are rejected.
ScoreTable parse_score_table(std::istream& in);

std::string write_score_table(const ScoreTable& table);

}  // namespace smiledyn
