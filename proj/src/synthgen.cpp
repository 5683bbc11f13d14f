#include "smiledyn/synthgen.hpp"

#include <algorithm>
#include <cmath>

#include "smiledyn/rng.hpp"

namespace smiledyn {

namespace {

constexpr double kNostrilX = 100.0;
constexpr double kNostrilY = 120.0;
constexpr double kConfidenceHigh = 0.95;
constexpr double kConfidenceDropped = 0.40;
constexpr double kAu12High = 2.5;
constexpr double kAu12Low = 0.3;
constexpr double kApexDipFraction = 0.15;
constexpr int kTailFrames = 2;       // rising frames after the offset, inside the run
constexpr int kSeparatorFrames = 2;  // low-confidence frames that end the run

double draw_shape(Rng& rng, const ShapeParam& p, double z_mod) {
    double v = p.mean + rng.uniform(-p.jitter, p.jitter);
    v *= std::max(0.1, z_mod);
    return v;
}

struct SmileShape {
    int n_on;   // onset steps
    int n_ap;   // apex steps (0 or >= 2; V-dip)
    int n_off;  // offset steps
    double amplitude;
};

}  // namespace

void SynthSpec::validate() const {
    if (!(session_seconds > 0.0)) throw Error(ErrorKind::Validation, "session_seconds must be > 0");
    if (!(fps > 0.0)) throw Error(ErrorKind::Validation, "fps must be > 0");
    if (smile_count_sd < 0.0) throw Error(ErrorKind::Validation, "smile_count_sd must be >= 0");
    if (!(onset_duration.mean > 0.0) || !(offset_duration.mean > 0.0))
        throw Error(ErrorKind::Validation, "onset/offset durations must be > 0");
    if (apex_duration.mean < 0.0) throw Error(ErrorKind::Validation, "apex duration must be >= 0");
    if (!(amplitude.mean > 0.0)) throw Error(ErrorKind::Validation, "amplitude must be > 0");
    if (r_noise_sd < 0.0) throw Error(ErrorKind::Validation, "r_noise_sd must be >= 0");
    for (double p : {confidence_dropout_prob, speech_confound_prob})
        if (p < 0.0 || p > 1.0)
            throw Error(ErrorKind::Validation, "probabilities must be in [0, 1]");
    if (speech_extra_per_min < 0.0)
        throw Error(ErrorKind::Validation, "speech_extra_per_min must be >= 0");
    const double min_footprint =
        1.0 + onset_duration.mean + apex_duration.mean + offset_duration.mean + 0.5;
    if (min_footprint > session_seconds)
        throw Error(ErrorKind::Validation,
                    "infeasible spec: a single smile does not fit in the session");
}

SynthSession generate_session(const SynthSpec& spec, const SessionMeta& meta,
                              std::uint64_t seed) {
    spec.validate();
    Rng rng(derive_seed(seed, hash_label("session")));

    const double dt = 1.0 / spec.fps;
    const long n_frames = std::lround(spec.session_seconds * spec.fps);

    SynthSession out;
    out.series.session_id = meta.session_id;
    out.series.mother_id = meta.mother_id;
    out.series.visit_month = meta.visit_month;
    out.series.fps_nominal = spec.fps;

    // Score first: the feature-score linkage modulates smile shapes.
    const ScoreRange range = score_range(spec.scale);
    const long drawn = std::lround(rng.gaussian(spec.score_mean, spec.score_sd));
    out.truth.score = static_cast<int>(std::clamp<long>(drawn, range.lo, range.hi));
    const double z = (spec.score_sd > 1e-12)
                         ? (out.truth.score - spec.score_mean) / spec.score_sd
                         : 0.0;

    const long want = std::max<long>(0, std::lround(rng.gaussian(spec.smile_count_mean,
                                                                 spec.smile_count_sd)));

    // r trace and per-frame channels, laid out smile by smile.
    std::vector<double> r(static_cast<std::size_t>(n_frames), kSynthBaselineR);
    std::vector<double> au12(static_cast<std::size_t>(n_frames), kAu12Low);
    std::vector<double> confidence(static_cast<std::size_t>(n_frames), kConfidenceHigh);
    std::vector<bool> protected_frame(static_cast<std::size_t>(n_frames), false);

    long cursor = std::lround(1.0 * spec.fps);  // lead-in
    for (long smile_i = 0; smile_i < want; ++smile_i) {
        const double weight =
            spec.linkage_ramp ? static_cast<double>(smile_i + 1) / std::max<long>(want, 1) : 1.0;
        const double mod_amp = 1.0 + spec.linkage[0] * weight * z;
        const double mod_on = 1.0 + spec.linkage[1] * weight * z;
        const double mod_ap = 1.0 + spec.linkage[2] * weight * z;
        const double mod_off = 1.0 + spec.linkage[3] * weight * z;

        SmileShape shape{};
        shape.amplitude = std::max(0.02, draw_shape(rng, spec.amplitude, mod_amp));
        shape.n_on = std::max<int>(3, static_cast<int>(std::lround(
                                          draw_shape(rng, spec.onset_duration, mod_on) * spec.fps)));
        shape.n_off = std::max<int>(3, static_cast<int>(std::lround(
                                           draw_shape(rng, spec.offset_duration, mod_off) * spec.fps)));
        const double apex_s = std::max(0.0, draw_shape(rng, spec.apex_duration, mod_ap));
        int n_ap = (apex_s < 1.5 * dt) ? 0 : std::max(2, static_cast<int>(std::lround(apex_s * spec.fps)));
        // Keep the V-dip legs strictly shorter than both ramps so the
        // longest-run rules land on the ramps.
        n_ap = std::min(n_ap, 2 * (shape.n_on - 1));
        n_ap = std::min(n_ap, 2 * (shape.n_off - 1));
        if (n_ap == 1) n_ap = 0;
        shape.n_ap = n_ap;

        const double gap_s = rng.uniform(0.7, 1.4);
        const double confound_u = rng.uniform();

        const long total_steps = shape.n_on + shape.n_ap + shape.n_off;
        const long end_frame = cursor + total_steps + kTailFrames + kSeparatorFrames;
        if (end_frame + std::lround(gap_s * spec.fps) >= n_frames) break;  // session full

        const long k0 = cursor;
        const long k_peak = k0 + shape.n_on;
        const long k_off_start = k_peak + shape.n_ap;
        const long k_off_end = k_off_start + shape.n_off;
        const double peak = kSynthBaselineR + shape.amplitude;

        for (int j = 0; j <= shape.n_on; ++j)
            r[static_cast<std::size_t>(k0 + j)] =
                kSynthBaselineR + shape.amplitude * (static_cast<double>(j) / shape.n_on);
        if (shape.n_ap > 0) {
            const int down = shape.n_ap / 2;
            const int up = shape.n_ap - down;
            const double dip = kApexDipFraction * shape.amplitude;
            for (int j = 1; j < shape.n_ap; ++j) {
                const double v = (j <= down)
                                     ? peak - dip * (static_cast<double>(j) / down)
                                     : peak - dip * (static_cast<double>(shape.n_ap - j) / up);
                r[static_cast<std::size_t>(k_peak + j)] = v;
            }
            r[static_cast<std::size_t>(k_off_start)] = peak;
        }
        for (int j = 0; j <= shape.n_off; ++j)
            r[static_cast<std::size_t>(k_off_start + j)] =
                peak - shape.amplitude * (static_cast<double>(j) / shape.n_off);

        // Rising tail keeps the offset run from bleeding past its true end;
        // the separator frames break the high-confidence run.
        const double tail_step = 0.05 * shape.amplitude;
        for (int j = 1; j <= kTailFrames; ++j)
            r[static_cast<std::size_t>(k_off_end + j)] = kSynthBaselineR + tail_step * j;
        for (int j = 1; j <= kSeparatorFrames; ++j)
            confidence[static_cast<std::size_t>(k_off_end + kTailFrames + j)] = kConfidenceDropped;

        for (long k = k0; k <= k_off_end; ++k) au12[static_cast<std::size_t>(k)] = kAu12High;
        for (long k = std::max<long>(0, k0 - 1);
             k <= std::min<long>(n_frames - 1, end_frame + 1); ++k)
            protected_frame[static_cast<std::size_t>(k)] = true;

        TrueSmile truth;
        truth.onset_start = k0 * dt;
        truth.onset_end = k_peak * dt;
        truth.offset_start = k_off_start * dt;
        truth.offset_end = k_off_end * dt;
        truth.features.onset_duration = truth.onset_end - truth.onset_start;
        truth.features.apex_duration = truth.offset_start - truth.onset_end;
        truth.features.offset_duration = truth.offset_end - truth.offset_start;
        truth.features.total_duration = truth.features.onset_duration +
                                        truth.features.apex_duration +
                                        truth.features.offset_duration;
        truth.features.onset_amplitude = shape.amplitude;
        truth.features.offset_amplitude = shape.amplitude;
        truth.features.max_onset_speed = shape.amplitude * spec.fps / shape.n_on;
        truth.features.max_offset_speed = shape.amplitude * spec.fps / shape.n_off;

        if (confound_u < spec.speech_confound_prob) {
            truth.speech_confounded = true;
            const double span = truth.offset_end - truth.onset_start;
            SpeechInterval iv;
            iv.start = truth.onset_start + 0.25 * span;
            iv.end = iv.start + std::max(0.06, 0.2 * span);
            iv.end = std::min(iv.end, truth.offset_end - 0.5 * dt);
            out.speech.push_back(iv);
        }
        out.truth.smiles.push_back(truth);

        cursor = end_frame + std::lround(gap_s * spec.fps);
    }

    // Non-overlapping chatter in the gaps between protected spans.
    if (spec.speech_extra_per_min > 0.0) {
        long gap_start = 0;
        for (long k = 0; k <= n_frames; ++k) {
            const bool boundary = (k == n_frames) || protected_frame[static_cast<std::size_t>(k)];
            if (!boundary) continue;
            const long gap_len = k - gap_start;
            if (gap_len * dt >= 1.0) {
                const double p =
                    std::min(1.0, spec.speech_extra_per_min * (gap_len * dt / 60.0));
                if (rng.uniform() < p) {
                    const double mid = (gap_start + k) / 2.0 * dt;
                    out.speech.push_back({mid - 0.125, mid + 0.125});
                }
            }
            while (k < n_frames && protected_frame[static_cast<std::size_t>(k)]) ++k;
            gap_start = k;
        }
    }
    std::sort(out.speech.begin(), out.speech.end(),
              [](const SpeechInterval& a, const SpeechInterval& b) { return a.start < b.start; });

    // Random confidence dropouts, away from the programmed smiles.
    if (spec.confidence_dropout_prob > 0.0) {
        for (long k = 0; k < n_frames; ++k) {
            if (protected_frame[static_cast<std::size_t>(k)]) continue;
            if (rng.uniform() < spec.confidence_dropout_prob)
                confidence[static_cast<std::size_t>(k)] = kConfidenceDropped;
        }
    }

    // Back-project r into landmark coordinates: the right lip corner moves
    // along a ray from the nostril, the left corner sits so the first
    // episode frame reproduces the planned initial radius exactly.
    const LandmarkConfig lm;
    const double left_x = kNostrilX + kSynthInitialRadius * (kSynthBaselineR - 2.0);
    out.series.frames.reserve(static_cast<std::size_t>(n_frames));
    for (long k = 0; k < n_frames; ++k) {
        double rk = r[static_cast<std::size_t>(k)];
        if (spec.r_noise_sd > 0.0) rk += rng.gaussian(0.0, spec.r_noise_sd);
        FrameRecord frame;
        frame.frame_index = k + 1;
        frame.timestamp = k * dt;
        frame.confidence = confidence[static_cast<std::size_t>(k)];
        frame.au12 = au12[static_cast<std::size_t>(k)];
        frame.points[lm.right_lip] = {kNostrilX + rk * kSynthInitialRadius, kNostrilY};
        frame.points[lm.left_lip] = {left_x, kNostrilY};
        frame.points[lm.nostril] = {kNostrilX, kNostrilY};
        out.series.frames.push_back(std::move(frame));
    }
    return out;
}

namespace {

int draw_score(Rng& rng, ScaleKind kind, double mean, double sd) {
    const ScoreRange range = score_range(kind);
    const long v = std::lround(rng.gaussian(mean, sd));
    return static_cast<int>(std::clamp<long>(v, range.lo, range.hi));
}

}  // namespace

SynthCorpus generate_corpus(const SynthSpec& spec, int n_sessions, std::uint64_t seed) {
    if (n_sessions < 1) throw Error(ErrorKind::Validation, "n_sessions must be >= 1");
    SynthCorpus corpus;
    for (int i = 0; i < n_sessions; ++i) {
        const int mother_index = i / 2;
        const int visit = (i % 2 == 0) ? 6 : 12;
        char mother[16];
        std::snprintf(mother, sizeof(mother), "m%03d", mother_index);
        char session[24];
        std::snprintf(session, sizeof(session), "m%03d_v%02d", mother_index, visit);
        SessionMeta meta{session, mother, visit, spec.fps};
        corpus.sessions.push_back(
            generate_session(spec, meta, derive_seed(seed, static_cast<std::uint64_t>(i))));

        // Full questionnaire row: the linked scale takes the session's score,
        // the rest follow the study's sample distributions.
        Rng rng(derive_seed(seed, hash_label("scores") ^ static_cast<std::uint64_t>(i)));
        ScoreTableRow row;
        row.mother_id = mother;
        row.visit_month = visit;
        row.phq9 = draw_score(rng, ScaleKind::Phq9, 3.19, 4.16);
        row.aces = draw_score(rng, ScaleKind::Aces, 2.07, 2.55);
        row.social_support = draw_score(rng, ScaleKind::SocialSupport, 82.80, 15.97);
        row.pss = draw_score(rng, ScaleKind::Pss, 12.52, 6.66);
        row.pearls = draw_score(rng, ScaleKind::Pearls, 0.47, 0.90);
        switch (spec.scale) {
        case ScaleKind::Phq9: row.phq9 = corpus.sessions.back().truth.score; break;
        case ScaleKind::Aces: row.aces = corpus.sessions.back().truth.score; break;
        case ScaleKind::SocialSupport:
            row.social_support = corpus.sessions.back().truth.score;
            break;
        case ScaleKind::Pss: row.pss = corpus.sessions.back().truth.score; break;
        case ScaleKind::Pearls: row.pearls = corpus.sessions.back().truth.score; break;
        }
        corpus.scores.emplace(ScoreKey{mother, visit}, row);
    }
    return corpus;
}

}  // namespace smiledyn
