#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "smiledyn/features.hpp"
#include "smiledyn/ingest.hpp"
#include "smiledyn/stats.hpp"

namespace smiledyn {

/// A shape parameter drawn per smile: mean plus uniform jitter in +-jitter.
struct ShapeParam {
    double mean = 0.0;
    double jitter = 0.0;
};

/// Indices into SynthSpec::linkage: which shape parameter is modulated by
/// the session's score z-value.
enum class LinkTarget { Amplitude = 0, OnsetDuration = 1, ApexDuration = 2, OffsetDuration = 3 };

/// Generator configuration. Defaults are calibrated to the study's sample
/// statistics (smile counts, speech confound rate, questionnaire spreads).
struct SynthSpec {
    double session_seconds = 180.0;
    double fps = 30.0;

    double smile_count_mean = 5.30;
    double smile_count_sd = 4.73;

    ShapeParam onset_duration{0.55, 0.15};   // seconds
    ShapeParam apex_duration{0.35, 0.15};    // seconds; < 1.5 frames collapses to none
    ShapeParam offset_duration{0.65, 0.18};  // seconds
    ShapeParam amplitude{0.55, 0.15};        // dimensionless r

    double r_noise_sd = 0.0;                // additive Gaussian noise on r
    double confidence_dropout_prob = 0.0;   // per frame, outside smile spans
    double speech_confound_prob = 0.0;      // per smile: overlapping speech
    double speech_extra_per_min = 0.0;      // non-overlapping chatter rate

    ScaleKind scale = ScaleKind::Phq9;
    double score_mean = 3.19;
    double score_sd = 4.16;

    /// Multiplicative modulation of shape parameters by the score z-value:
    /// param *= 1 + coeff * weight(ordinal) * z. With linkage_ramp the
    /// weight grows linearly in the ordinal, strengthening the correlation
    /// over the course of the session.
    std::array<double, 4> linkage{0.0, 0.0, 0.0, 0.0};
    bool linkage_ramp = false;

    void validate() const;
};

/// Analytically known per-smile truth for one generated session.
struct TrueSmile {
    double onset_start = 0.0;
    double onset_end = 0.0;
    double offset_start = 0.0;
    double offset_end = 0.0;
    SmileFeatures features;
    bool speech_confounded = false;
};

struct GroundTruth {
    std::vector<TrueSmile> smiles;
    int score = 0;  // the linked scale's value for this session
};

struct SynthSession {
    FrameSeries series;
    std::vector<SpeechInterval> speech;
    GroundTruth truth;
};

/// Generates one session: landmark trajectories whose derived r trace follows
/// piecewise-monotone smile shapes, AU12 raised during smiles, confidence
/// dropouts and speech injected per spec. Deterministic per seed.
SynthSession generate_session(const SynthSpec& spec, const SessionMeta& meta,
                              std::uint64_t seed);

struct SynthCorpus {
    std::vector<SynthSession> sessions;
    ScoreTable scores;  // all five scales per (mother, visit)
};

/// n_sessions sessions over ceil(n/2) mothers, visits alternating 6/12.
SynthCorpus generate_corpus(const SynthSpec& spec, int n_sessions, std::uint64_t seed);

/// Landmark geometry used by the generator (matches the ingest defaults).
inline constexpr double kSynthInitialRadius = 30.0;  // pixels
inline constexpr double kSynthBaselineR = 1.0;

}  // namespace smiledyn
