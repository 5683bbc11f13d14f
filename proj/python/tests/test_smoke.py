"""Smoke tests for the python module: a thin pass over each exposed surface."""

import math

import pytest

import smiledyn as sd


def test_geometry_values():
    assert sd.initial_radius((1, 0), (-1, 0)) == 1.0
    assert sd.initial_radius((3, 4), (0, 0)) == 2.5
    assert sd.r_value((3, 4), 2.5) == 2.0
    with pytest.raises(sd.ToolkitError):
        sd.initial_radius((2, 2), (2, 2))


def test_statistics_values():
    w = sd.welch_t([1, 2, 3], [4, 5, 6])
    assert round(w.t, 3) == -3.674
    assert w.df == pytest.approx(4.0)
    assert w.d == pytest.approx(-3.0)

    a = sd.anova_oneway([[1, 2], [3, 4]])
    assert a.f == pytest.approx(8.0)
    assert a.partial_eta2 == pytest.approx(0.8)

    slope, intercept, r, p = sd.linreg([0, 1, 2], [0, 1, 1])
    assert slope == pytest.approx(0.5)
    assert intercept == pytest.approx(1 / 6)

    assert sd.pearson_r([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)
    assert abs(sd.student_t_two_sided_p(1.96, 10000) - 0.05) < 5e-4
    assert sd.f_upper_tail_p(0.0, 1, 5) == 1.0


def test_categorize():
    assert sd.categorize("phq9", 3) == "Minimal"
    assert sd.categorize("aces", 0) == "Low Risk"
    assert sd.categorize("pss", 27) == "High"
    assert sd.categorize("pearls", 5) == "uncategorized"
    assert sd.score_range("phq9") == (0, 27)
    with pytest.raises(sd.ToolkitError):
        sd.categorize("phq9", 28)


def test_synth_segment_roundtrip():
    spec = sd.SynthSpec()
    spec.session_seconds = 30.0
    spec.smile_count_mean = 3.0
    spec.smile_count_sd = 1.0
    session = sd.generate_session(spec, seed=5)
    smiles = sd.segment_smiles(session.series)
    truths = session.true_smiles
    assert len(smiles) == len(truths) > 0
    for got, want in zip(smiles, truths):
        assert got.onset_start == want.onset_start
        assert got.offset_end == want.offset_end
        feats = sd.smile_features(got)
        assert feats.onset_amplitude == pytest.approx(want.features.onset_amplitude, abs=1e-9)
        assert feats.total_duration == pytest.approx(want.features.total_duration, abs=1e-9)


def test_parse_roundtrip():
    spec = sd.SynthSpec()
    spec.session_seconds = 15.0
    spec.smile_count_mean = 1.0
    spec.smile_count_sd = 0.0
    session = sd.generate_session(spec, seed=2)
    text = sd.write_frame_table(session.series)
    reparsed = sd.parse_frame_table(text)
    assert len(reparsed) == len(session.series)

    intervals = sd.parse_speech_intervals("start_s,end_s\n1.0,2.0\n1.5,3.0\n5.0,5.005\n")
    assert intervals == [(1.0, 3.0)]


def test_regressor_learns_and_is_deterministic():
    xs = [[float(i), float(i % 3)] for i in range(48)]
    ys = [2.0 * x[0] - 1.0 * x[1] + 0.5 for x in xs]
    model_a = sd.train_regressor(xs, ys, epochs=150, seed=3)
    model_b = sd.train_regressor(xs, ys, epochs=150, seed=3)
    errs = [abs(model_a.predict(x) - y) for x, y in zip(xs, ys)]
    assert sum(errs) / len(errs) < 0.05 * (max(ys) - min(ys))
    assert all(model_a.predict(x) == model_b.predict(x) for x in xs)


def test_speech_filter():
    spec = sd.SynthSpec()
    spec.session_seconds = 45.0
    spec.smile_count_mean = 4.0
    spec.smile_count_sd = 1.0
    spec.speech_confound_prob = 0.5
    session = sd.generate_session(spec, seed=11)
    smiles = sd.segment_smiles(session.series)
    kept, removed = sd.remove_speech_confounded(smiles, session.speech)
    confounded = sum(1 for t in session.true_smiles if t.speech_confounded)
    assert removed == confounded
    assert len(kept) == len(smiles) - removed
    assert [s.ordinal for s in kept] == list(range(1, len(kept) + 1))
