#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "smiledyn/ingest.hpp"

namespace smiledyn {

struct SegmentationConfig {
    double confidence_min = 0.80;   // frames below this are discarded
    double au12_threshold = 1.5;    // of 5; activation trigger level
    int au12_min_hits = 2;          // trigger needs this many hits...
    double au12_hit_window = 1.0;   // ...within this many seconds
    double monotone_epsilon = 1e-6; // tolerance for the run-based phase rules
    double episode_gap_max = 1.0;   // seconds below threshold that end an episode

    void validate() const;
};

/// Inclusive index range into FrameSeries::frames.
struct FrameSpan {
    std::size_t first = 0;
    std::size_t last = 0;

    std::size_t size() const { return last - first + 1; }
};

struct GateResult {
    std::vector<FrameSpan> runs;  // maximal contiguous high-confidence runs
    double retention_fraction = 0.0;
};

/// One AU12 activation episode inside a high-confidence run.
struct Episode {
    FrameSpan span;
};

struct TracePoint {
    double t = 0.0;
    double r = 0.0;
};

/// One segmented smile. The apex interval is [onset_end, offset_start] and
/// may be zero-length; r_trace covers [onset_start, offset_end].
struct Smile {
    std::string session_id;
    int ordinal = 0;  // 1-based position within the session
    double onset_start = 0.0;
    double onset_end = 0.0;
    double offset_start = 0.0;
    double offset_end = 0.0;
    std::vector<TracePoint> r_trace;
    double initial_radius = 0.0;
};

/// Drops frames below confidence_min and partitions the survivors into
/// maximal contiguous runs; a removed frame breaks contiguity.
GateResult gate_confidence(const FrameSeries& series, const SegmentationConfig& cfg);

/// Half the lip-corner distance; the per-smile normalization constant.
double initial_radius(Point right_corner, Point left_corner);

/// Nostril-normalized right-corner displacement over the initial radius.
double r_value(Point right_corner_normalized, double initial_radius);

/// Finds AU12 activation episodes within one high-confidence run. An episode
/// opens at the first hit whose trailing window holds at least au12_min_hits
/// hits, chains further hits separated by at most episode_gap_max, and keeps
/// trailing frames for up to episode_gap_max past the last hit.
std::vector<Episode> detect_activation_episodes(const FrameSeries& series, FrameSpan run,
                                                const SegmentationConfig& cfg);

/// Full segmentation: confidence gating, episode detection, and the
/// longest-run onset/offset rules, with the initial radius recomputed at
/// each episode so consecutive activations count as separate smiles.
std::vector<Smile> segment_smiles(const FrameSeries& series, const LandmarkConfig& landmarks,
                                  const SegmentationConfig& cfg);

struct SpeechFilterResult {
    std::vector<Smile> kept;
    int removed_count = 0;
};

/// Removes smiles whose [onset_start, offset_end] span overlaps speech with
/// positive measure; kept smiles are renumbered consecutively from 1.
SpeechFilterResult remove_speech_confounded(std::vector<Smile> smiles,
                                            std::span<const SpeechInterval> speech);

}  // namespace smiledyn
