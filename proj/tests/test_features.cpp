#include <doctest.h>

#include <cmath>

#include "smiledyn/features.hpp"
#include "smiledyn/rng.hpp"
#include "smiledyn/synthgen.hpp"

using namespace smiledyn;

namespace {

Smile smile_from_trace(const std::vector<double>& rs, double fps, std::size_t onset_end_i,
                       std::size_t offset_start_i) {
    Smile s;
    s.session_id = "s";
    s.ordinal = 1;
    for (std::size_t i = 0; i < rs.size(); ++i)
        s.r_trace.push_back({static_cast<double>(i) / fps, rs[i]});
    s.onset_start = s.r_trace.front().t;
    s.onset_end = s.r_trace[onset_end_i].t;
    s.offset_start = s.r_trace[offset_start_i].t;
    s.offset_end = s.r_trace.back().t;
    s.initial_radius = 30.0;
    return s;
}

}  // namespace

TEST_CASE("smile_features on a symmetric triangle") {
    // Up 0.5 over 1 s, down 0.5 over 1 s, no plateau, 10 fps.
    std::vector<double> rs;
    for (int j = 0; j <= 10; ++j) rs.push_back(1.0 + 0.05 * j);
    for (int j = 1; j <= 10; ++j) rs.push_back(1.5 - 0.05 * j);
    const Smile s = smile_from_trace(rs, 10.0, 10, 10);
    const SmileFeatures f = smile_features(s);
    CHECK(f.onset_amplitude == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(f.offset_amplitude == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(f.apex_duration == 0.0);
    CHECK(f.onset_duration == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.offset_duration == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.total_duration == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.total_duration == f.onset_duration + f.apex_duration + f.offset_duration);
    CHECK(f.max_onset_speed == doctest::Approx(0.5).epsilon(1e-9));   // 0.05 per 0.1 s
    CHECK(f.max_offset_speed == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("max onset speed from uneven steps") {
    // r = [1.0, 1.1, 1.3] at 30 fps: the largest step is 0.2 in 1/30 s.
    std::vector<double> rs{1.0, 1.1, 1.3, 1.2, 1.0};
    const Smile s = smile_from_trace(rs, 30.0, 2, 2);
    const SmileFeatures f = smile_features(s);
    CHECK(f.max_onset_speed == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("phases with fewer than 2 samples are malformed") {
    std::vector<double> rs{1.0, 1.2, 1.1, 1.0};
    Smile s = smile_from_trace(rs, 30.0, 1, 1);
    s.onset_start = s.onset_end - 1e-5;  // no sample inside the onset window
    CHECK_THROWS_AS((void)smile_features(s), Error);

    Smile bad = smile_from_trace(rs, 30.0, 1, 1);
    bad.onset_end = bad.onset_start;  // degenerate boundary ordering
    CHECK_THROWS_AS((void)smile_features(bad), Error);
}

TEST_CASE("feature invariances") {
    std::vector<double> rs{1.0, 1.15, 1.32, 1.40, 1.38, 1.41, 1.30, 1.12, 1.02};
    const Smile base_smile = smile_from_trace(rs, 25.0, 3, 5);
    const SmileFeatures base = smile_features(base_smile);

    SUBCASE("uniform time shift changes nothing") {
        Smile shifted = base_smile;
        shifted.onset_start += 100.0;
        shifted.onset_end += 100.0;
        shifted.offset_start += 100.0;
        shifted.offset_end += 100.0;
        for (auto& p : shifted.r_trace) p.t += 100.0;
        const SmileFeatures f = smile_features(shifted);
        CHECK(f.onset_amplitude == doctest::Approx(base.onset_amplitude).epsilon(1e-12));
        CHECK(f.max_onset_speed == doctest::Approx(base.max_onset_speed).epsilon(1e-9));
        CHECK(f.onset_duration == doctest::Approx(base.onset_duration).epsilon(1e-9));
        CHECK(f.total_duration == doctest::Approx(base.total_duration).epsilon(1e-9));
    }
    SUBCASE("amplitude scaling scales amplitudes and speeds only") {
        const double c = 3.25;
        Smile scaled = base_smile;
        for (auto& p : scaled.r_trace) p.r *= c;
        const SmileFeatures f = smile_features(scaled);
        CHECK(f.onset_amplitude == doctest::Approx(c * base.onset_amplitude).epsilon(1e-12));
        CHECK(f.offset_amplitude == doctest::Approx(c * base.offset_amplitude).epsilon(1e-12));
        CHECK(f.max_onset_speed == doctest::Approx(c * base.max_onset_speed).epsilon(1e-9));
        CHECK(f.max_offset_speed == doctest::Approx(c * base.max_offset_speed).epsilon(1e-9));
        CHECK(f.onset_duration == base.onset_duration);
        CHECK(f.apex_duration == base.apex_duration);
        CHECK(f.offset_duration == base.offset_duration);
        CHECK(f.total_duration == base.total_duration);
    }
    SUBCASE("recomputation is bit-identical") {
        const SmileFeatures again = smile_features(base_smile);
        CHECK(again.max_onset_speed == base.max_onset_speed);
        CHECK(again.max_offset_speed == base.max_offset_speed);
        CHECK(again.onset_amplitude == base.onset_amplitude);
        CHECK(again.total_duration == base.total_duration);
    }
}

TEST_CASE("session_features builds ordinal tables") {
    const SessionMeta meta{"s1", "m1", 6, 30.0};
    SUBCASE("three smiles give ordinals 1..3") {
        std::vector<double> rs{1.0, 1.2, 1.4, 1.2, 1.0};
        std::vector<Smile> smiles;
        for (int i = 0; i < 3; ++i) {
            Smile s = smile_from_trace(rs, 30.0, 2, 2);
            s.ordinal = i + 1;
            smiles.push_back(s);
        }
        const FeatureTable table = session_features(meta, smiles);
        REQUIRE(table.count() == 3);
        CHECK(table.rows[0].ordinal == 1);
        CHECK(table.rows[2].ordinal == 3);
        CHECK(table.mother_id == "m1");
    }
    SUBCASE("empty session gives an empty table") {
        const FeatureTable table = session_features(meta, {});
        CHECK(table.count() == 0);
    }
    SUBCASE("non-consecutive ordinals are rejected") {
        std::vector<double> rs{1.0, 1.2, 1.4, 1.2, 1.0};
        Smile s = smile_from_trace(rs, 30.0, 2, 2);
        s.ordinal = 2;
        CHECK_THROWS_AS((void)session_features(meta, std::vector<Smile>{s}), Error);
    }
}

TEST_CASE("corpus calibrated to a smile-count mean reproduces it") {
    SynthSpec spec;
    spec.session_seconds = 120.0;
    spec.smile_count_mean = 5.02;
    spec.smile_count_sd = 1.0;
    double total = 0.0;
    const int n_sessions = 200;
    for (int i = 0; i < n_sessions; ++i) {
        const SynthSession session =
            generate_session(spec, {"s", "m", 6, 30.0}, 9000 + static_cast<std::uint64_t>(i));
        const auto smiles =
            segment_smiles(session.series, LandmarkConfig{}, SegmentationConfig{});
        total += static_cast<double>(smiles.size());
    }
    const double mean = total / n_sessions;
    CHECK(std::fabs(mean - 5.02) < 0.3);  // SE ~ 0.07 at sd 1, n 200
}

TEST_CASE("features extracted from segmented synthetic smiles match ground truth") {
    SynthSpec spec;
    spec.session_seconds = 60.0;
    spec.smile_count_mean = 4.0;
    spec.smile_count_sd = 1.0;
    const SynthSession session = generate_session(spec, {"s", "m", 6, 30.0}, 4242);
    const auto smiles = segment_smiles(session.series, LandmarkConfig{}, SegmentationConfig{});
    REQUIRE(smiles.size() == session.truth.smiles.size());
    for (std::size_t i = 0; i < smiles.size(); ++i) {
        const SmileFeatures got = smile_features(smiles[i]);
        const SmileFeatures want = session.truth.smiles[i].features;
        CHECK(std::fabs(got.onset_duration - want.onset_duration) < 1e-9);
        CHECK(std::fabs(got.apex_duration - want.apex_duration) < 1e-9);
        CHECK(std::fabs(got.offset_duration - want.offset_duration) < 1e-9);
        CHECK(std::fabs(got.total_duration - want.total_duration) < 1e-9);
        CHECK(std::fabs(got.onset_amplitude - want.onset_amplitude) < 1e-9);
        CHECK(std::fabs(got.offset_amplitude - want.offset_amplitude) < 1e-9);
        CHECK(std::fabs(got.max_onset_speed - want.max_onset_speed) < 1e-9);
        CHECK(std::fabs(got.max_offset_speed - want.max_offset_speed) < 1e-9);
    }
}
