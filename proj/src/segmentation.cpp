#include "smiledyn/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace smiledyn {

namespace {

Point landmark(const FrameRecord& frame, int index) {
    const auto it = frame.points.find(index);
    if (it == frame.points.end())
        throw Error(ErrorKind::Validation,
                    "frame " + std::to_string(frame.frame_index) + ": missing landmark " +
                        std::to_string(index));
    return it->second;
}

/// Right lip corner relative to the nostril reference point.
Point normalized_right_corner(const FrameRecord& frame, const LandmarkConfig& lm) {
    const Point rt = landmark(frame, lm.right_lip);
    const Point n = landmark(frame, lm.nostril);
    return {rt.x - n.x, rt.y - n.y};
}

struct Run {
    std::size_t first;  // index into the r/t arrays of one episode
    std::size_t last;
};

/// Maximal runs where consecutive steps satisfy `step_ok`; a run qualifies
/// as a phase candidate only if some step passes `strict_ok` (flat stretches
/// alone do not make a smile phase).
std::optional<Run> longest_qualifying_run(std::span<const double> values, std::size_t begin,
                                          auto step_ok, auto strict_ok) {
    std::optional<Run> best;
    std::size_t run_start = begin;
    bool has_strict = false;
    std::optional<Run> best_candidate;

    auto consider = [&](std::size_t start, std::size_t end, bool strict) {
        if (!strict || end == start) return;
        const std::size_t len = end - start + 1;
        if (!best_candidate || len > (best_candidate->last - best_candidate->first + 1))
            best_candidate = Run{start, end};
    };

    for (std::size_t i = begin + 1; i < values.size(); ++i) {
        const double step = values[i] - values[i - 1];
        if (step_ok(step)) {
            has_strict = has_strict || strict_ok(step);
        } else {
            consider(run_start, i - 1, has_strict);
            run_start = i - 1 + 1;
            has_strict = false;
        }
    }
    if (begin < values.size()) consider(run_start, values.size() - 1, has_strict);
    best = best_candidate;
    return best;
}

}  // namespace

void SegmentationConfig::validate() const {
    if (confidence_min < 0.0 || confidence_min > 1.0)
        throw Error(ErrorKind::Validation, "confidence_min must be in [0, 1]");
    if (!(au12_threshold > 0.0) || au12_threshold > 5.0)
        throw Error(ErrorKind::Validation, "au12_threshold must be in (0, 5]");
    if (au12_min_hits < 1)
        throw Error(ErrorKind::Validation, "au12_min_hits must be >= 1");
    if (!(au12_hit_window > 0.0) || !(episode_gap_max > 0.0))
        throw Error(ErrorKind::Validation, "au12_hit_window and episode_gap_max must be > 0");
    if (monotone_epsilon < 0.0)
        throw Error(ErrorKind::Validation, "monotone_epsilon must be >= 0");
}

GateResult gate_confidence(const FrameSeries& series, const SegmentationConfig& cfg) {
    cfg.validate();
    if (series.frames.empty())
        throw Error(ErrorKind::Validation, "gate_confidence: series has no frames");

    GateResult result;
    std::size_t kept = 0;
    std::optional<std::size_t> run_start;
    for (std::size_t i = 0; i < series.frames.size(); ++i) {
        if (series.frames[i].confidence >= cfg.confidence_min) {
            ++kept;
            if (!run_start) run_start = i;
        } else if (run_start) {
            result.runs.push_back({*run_start, i - 1});
            run_start.reset();
        }
    }
    if (run_start) result.runs.push_back({*run_start, series.frames.size() - 1});
    result.retention_fraction = static_cast<double>(kept) / static_cast<double>(series.frames.size());
    return result;
}

double initial_radius(Point right_corner, Point left_corner) {
    const double dx = right_corner.x - left_corner.x;
    const double dy = right_corner.y - left_corner.y;
    const double dist = std::sqrt(dx * dx + dy * dy);
    if (dist == 0.0)
        throw Error(ErrorKind::Analysis, "degenerate face: lip corners coincide");
    return dist / 2.0;
}

double r_value(Point right_corner_normalized, double ir) {
    if (!(ir > 0.0))
        throw Error(ErrorKind::Analysis, "r_value: initial radius must be > 0");
    return std::sqrt(right_corner_normalized.x * right_corner_normalized.x +
                     right_corner_normalized.y * right_corner_normalized.y) /
           ir;
}

std::vector<Episode> detect_activation_episodes(const FrameSeries& series, FrameSpan run,
                                                const SegmentationConfig& cfg) {
    cfg.validate();
    const auto& frames = series.frames;
    std::vector<std::size_t> hits;
    for (std::size_t i = run.first; i <= run.last; ++i)
        if (frames[i].au12 >= cfg.au12_threshold) hits.push_back(i);

    std::vector<Episode> episodes;
    std::size_t h = 0;
    while (h < hits.size()) {
        // Trigger: enough hits inside the window anchored at this hit.
        const double t0 = frames[hits[h]].timestamp;
        std::size_t in_window = 0;
        for (std::size_t j = h; j < hits.size(); ++j) {
            if (frames[hits[j]].timestamp - t0 <= cfg.au12_hit_window)
                ++in_window;
            else
                break;
        }
        if (in_window < static_cast<std::size_t>(cfg.au12_min_hits)) {
            ++h;
            continue;
        }

        // Chain hits while the sub-threshold gap stays within episode_gap_max.
        std::size_t chain_end = h;
        while (chain_end + 1 < hits.size() &&
               frames[hits[chain_end + 1]].timestamp - frames[hits[chain_end]].timestamp <=
                   cfg.episode_gap_max)
            ++chain_end;

        // Episode keeps trailing frames up to episode_gap_max past the last hit.
        const double tail_limit = frames[hits[chain_end]].timestamp + cfg.episode_gap_max;
        std::size_t last = hits[chain_end];
        while (last + 1 <= run.last && frames[last + 1].timestamp <= tail_limit) ++last;

        episodes.push_back({FrameSpan{hits[h], last}});
        h = chain_end + 1;
    }
    return episodes;
}

std::vector<Smile> segment_smiles(const FrameSeries& series, const LandmarkConfig& landmarks,
                                  const SegmentationConfig& cfg) {
    cfg.validate();
    std::vector<Smile> smiles;
    if (series.frames.empty()) return smiles;

    const GateResult gated = gate_confidence(series, cfg);
    const double eps = cfg.monotone_epsilon;

    for (const FrameSpan& run : gated.runs) {
        const auto episodes = detect_activation_episodes(series, run, cfg);
        std::optional<std::size_t> prev_offset_frame;  // absolute index of last offset end

        for (const Episode& ep : episodes) {
            // The initial radius comes from the first episode frame, or from
            // the frame following the previous smile's offset if that is
            // later (the recalculation rule for back-to-back activations).
            std::size_t ir_frame = ep.span.first;
            if (prev_offset_frame && *prev_offset_frame + 1 > ir_frame)
                ir_frame = *prev_offset_frame + 1;
            if (ir_frame > ep.span.last) continue;

            const FrameRecord& base = series.frames[ir_frame];
            const double ir = initial_radius(landmark(base, landmarks.right_lip),
                                             landmark(base, landmarks.left_lip));

            std::vector<double> rs;
            std::vector<double> ts;
            rs.reserve(ep.span.last - ir_frame + 1);
            for (std::size_t i = ir_frame; i <= ep.span.last; ++i) {
                rs.push_back(r_value(normalized_right_corner(series.frames[i], landmarks), ir));
                ts.push_back(series.frames[i].timestamp);
            }

            const auto onset = longest_qualifying_run(
                rs, 0, [eps](double s) { return s >= -eps; }, [eps](double s) { return s > eps; });
            if (!onset) continue;
            const auto offset = longest_qualifying_run(
                rs, onset->last, [eps](double s) { return s <= eps; },
                [eps](double s) { return s < -eps; });
            if (!offset) continue;

            Smile smile;
            smile.session_id = series.session_id;
            smile.ordinal = static_cast<int>(smiles.size()) + 1;
            smile.onset_start = ts[onset->first];
            smile.onset_end = ts[onset->last];
            smile.offset_start = ts[offset->first];
            smile.offset_end = ts[offset->last];
            smile.initial_radius = ir;
            for (std::size_t i = onset->first; i <= offset->last; ++i)
                smile.r_trace.push_back({ts[i], rs[i]});
            smiles.push_back(std::move(smile));
            prev_offset_frame = ir_frame + offset->last;
        }
    }
    return smiles;
}

SpeechFilterResult remove_speech_confounded(std::vector<Smile> smiles,
                                            std::span<const SpeechInterval> speech) {
    SpeechFilterResult result;
    for (Smile& smile : smiles) {
        const bool confounded =
            std::any_of(speech.begin(), speech.end(), [&](const SpeechInterval& iv) {
                return std::max(smile.onset_start, iv.start) < std::min(smile.offset_end, iv.end);
            });
        if (confounded) {
            ++result.removed_count;
        } else {
            smile.ordinal = static_cast<int>(result.kept.size()) + 1;
            result.kept.push_back(std::move(smile));
        }
    }
    return result;
}

}  // namespace smiledyn
