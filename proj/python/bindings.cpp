// Python bindings for the core operations: parsing, segmentation, features,
// the statistical suite, scale categorization, the windowed regressor, and
// the synthetic generator.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "smiledyn/features.hpp"
#include "smiledyn/ingest.hpp"
#include "smiledyn/model.hpp"
#include "smiledyn/scales.hpp"
#include "smiledyn/segmentation.hpp"
#include "smiledyn/stats.hpp"
#include "smiledyn/synthgen.hpp"

namespace py = pybind11;
using namespace smiledyn;

namespace {

Point to_point(std::pair<double, double> p) { return {p.first, p.second}; }

std::vector<std::pair<double, double>> trace_pairs(const Smile& s) {
    std::vector<std::pair<double, double>> out;
    out.reserve(s.r_trace.size());
    for (const TracePoint& p : s.r_trace) out.emplace_back(p.t, p.r);
    return out;
}

}  // namespace

PYBIND11_MODULE(_smiledyn, m) {
    m.doc() = "Smile dynamics toolkit: segmentation, features, statistics, regression";

    py::register_exception<Error>(m, "ToolkitError");

    // segmentation ---------------------------------------------------------
    py::class_<SegmentationConfig>(m, "SegmentationConfig")
        .def(py::init<>())
        .def_readwrite("confidence_min", &SegmentationConfig::confidence_min)
        .def_readwrite("au12_threshold", &SegmentationConfig::au12_threshold)
        .def_readwrite("au12_min_hits", &SegmentationConfig::au12_min_hits)
        .def_readwrite("au12_hit_window", &SegmentationConfig::au12_hit_window)
        .def_readwrite("monotone_epsilon", &SegmentationConfig::monotone_epsilon)
        .def_readwrite("episode_gap_max", &SegmentationConfig::episode_gap_max);

    py::class_<LandmarkConfig>(m, "LandmarkConfig")
        .def(py::init<>())
        .def_readwrite("left_lip", &LandmarkConfig::left_lip)
        .def_readwrite("right_lip", &LandmarkConfig::right_lip)
        .def_readwrite("nostril", &LandmarkConfig::nostril);

    py::class_<FrameSeries>(m, "FrameSeries")
        .def_readonly("session_id", &FrameSeries::session_id)
        .def_readonly("mother_id", &FrameSeries::mother_id)
        .def_readonly("visit_month", &FrameSeries::visit_month)
        .def("__len__", [](const FrameSeries& s) { return s.frames.size(); });

    py::class_<Smile>(m, "Smile")
        .def_readonly("session_id", &Smile::session_id)
        .def_readonly("ordinal", &Smile::ordinal)
        .def_readonly("onset_start", &Smile::onset_start)
        .def_readonly("onset_end", &Smile::onset_end)
        .def_readonly("offset_start", &Smile::offset_start)
        .def_readonly("offset_end", &Smile::offset_end)
        .def_readonly("initial_radius", &Smile::initial_radius)
        .def_property_readonly("r_trace", &trace_pairs);

    py::class_<SmileFeatures>(m, "SmileFeatures")
        .def_readonly("max_onset_speed", &SmileFeatures::max_onset_speed)
        .def_readonly("max_offset_speed", &SmileFeatures::max_offset_speed)
        .def_readonly("onset_amplitude", &SmileFeatures::onset_amplitude)
        .def_readonly("offset_amplitude", &SmileFeatures::offset_amplitude)
        .def_readonly("onset_duration", &SmileFeatures::onset_duration)
        .def_readonly("offset_duration", &SmileFeatures::offset_duration)
        .def_readonly("apex_duration", &SmileFeatures::apex_duration)
        .def_readonly("total_duration", &SmileFeatures::total_duration)
        .def("as_dict", [](const SmileFeatures& f) {
            py::dict d;
            for (FeatureId id : kAllFeatures)
                d[py::str(std::string(feature_id_name(id)))] = feature_value(f, id);
            return d;
        });

    m.def("initial_radius",
          [](std::pair<double, double> rt, std::pair<double, double> l) {
              return initial_radius(to_point(rt), to_point(l));
          },
          py::arg("right_corner"), py::arg("left_corner"));
    m.def("r_value",
          [](std::pair<double, double> rt_norm, double ir) {
              return r_value(to_point(rt_norm), ir);
          },
          py::arg("right_corner_normalized"), py::arg("initial_radius"));

    m.def("parse_frame_table",
          [](const std::string& text, const LandmarkConfig& lm, const std::string& session_id,
             const std::string& mother_id, int visit_month, double fps) {
              std::istringstream in(text);
              return parse_frame_table(in, lm, {session_id, mother_id, visit_month, fps});
          },
          py::arg("text"), py::arg("landmarks") = LandmarkConfig{},
          py::arg("session_id") = "session", py::arg("mother_id") = "mother",
          py::arg("visit_month") = 6, py::arg("fps") = 30.0);
    m.def("write_frame_table", [](const FrameSeries& s, const LandmarkConfig& lm) {
        return write_frame_table(s, lm);
    }, py::arg("series"), py::arg("landmarks") = LandmarkConfig{});
    m.def("parse_speech_intervals", [](const std::string& text) {
        std::istringstream in(text);
        std::vector<std::pair<double, double>> out;
        for (const SpeechInterval& iv : parse_speech_intervals(in))
            out.emplace_back(iv.start, iv.end);
        return out;
    });

    m.def("segment_smiles",
          [](const FrameSeries& series, const LandmarkConfig& lm, const SegmentationConfig& cfg) {
              return segment_smiles(series, lm, cfg);
          },
          py::arg("series"), py::arg("landmarks") = LandmarkConfig{},
          py::arg("config") = SegmentationConfig{});
    m.def("remove_speech_confounded",
          [](std::vector<Smile> smiles, const std::vector<std::pair<double, double>>& speech) {
              std::vector<SpeechInterval> intervals;
              for (const auto& [a, b] : speech) intervals.push_back({a, b});
              auto result = remove_speech_confounded(std::move(smiles), intervals);
              return py::make_tuple(result.kept, result.removed_count);
          });
    m.def("smile_features", &smile_features);

    // scales ----------------------------------------------------------------
    m.def("categorize", [](const std::string& scale, int value) {
        return std::string(categorize({scale_from_id(scale), value}));
    });
    m.def("score_range", [](const std::string& scale) {
        const ScoreRange r = score_range(scale_from_id(scale));
        return py::make_tuple(r.lo, r.hi);
    });

    // statistics -------------------------------------------------------------
    m.def("pearson_r", [](const std::vector<double>& xs, const std::vector<double>& ys) {
        return pearson_r(xs, ys);
    });
    m.def("linreg", [](const std::vector<double>& xs, const std::vector<double>& ys) {
        const LinRegResult r = linreg(xs, ys);
        return py::make_tuple(r.slope, r.intercept, r.r, r.p_slope);
    });
    py::class_<WelchResult>(m, "WelchResult")
        .def_readonly("t", &WelchResult::t)
        .def_readonly("df", &WelchResult::df)
        .def_readonly("p", &WelchResult::p)
        .def_readonly("d", &WelchResult::d);
    m.def("welch_t", [](const std::vector<double>& a, const std::vector<double>& b) {
        return welch_t(a, b);
    });
    py::class_<AnovaResult>(m, "AnovaResult")
        .def_readonly("f", &AnovaResult::f)
        .def_readonly("df_between", &AnovaResult::df_between)
        .def_readonly("df_within", &AnovaResult::df_within)
        .def_readonly("p", &AnovaResult::p)
        .def_readonly("partial_eta2", &AnovaResult::partial_eta2);
    m.def("anova_oneway", &anova_oneway);
    m.def("student_t_two_sided_p", &student_t_two_sided_p, py::arg("t"), py::arg("df"));
    m.def("f_upper_tail_p", &f_upper_tail_p, py::arg("f"), py::arg("df1"), py::arg("df2"));

    // model -------------------------------------------------------------------
    py::class_<Mlp>(m, "Mlp")
        .def("predict", [](const Mlp& model, const std::vector<double>& x) {
            return model.predict(x);
        });
    m.def("train_regressor",
          [](const std::vector<std::vector<double>>& x, const std::vector<double>& y, int epochs,
             std::uint64_t seed, int batch_size, double learning_rate) {
              if (x.size() != y.size())
                  throw Error(ErrorKind::Analysis, "train_regressor: length mismatch");
              std::vector<WindowedSample> samples(x.size());
              for (std::size_t i = 0; i < x.size(); ++i) {
                  samples[i].inputs = x[i];
                  samples[i].target = y[i];
              }
              MLPConfig cfg;
              cfg.epochs = epochs;
              cfg.seed = seed;
              cfg.batch_size = batch_size;
              cfg.learning_rate = learning_rate;
              return train_mlp(samples, cfg);
          },
          py::arg("inputs"), py::arg("targets"), py::arg("epochs") = 100, py::arg("seed") = 1,
          py::arg("batch_size") = 16, py::arg("learning_rate") = 1e-3);

    // synthetic generator ------------------------------------------------------
    py::class_<SynthSpec>(m, "SynthSpec")
        .def(py::init<>())
        .def_readwrite("session_seconds", &SynthSpec::session_seconds)
        .def_readwrite("fps", &SynthSpec::fps)
        .def_readwrite("smile_count_mean", &SynthSpec::smile_count_mean)
        .def_readwrite("smile_count_sd", &SynthSpec::smile_count_sd)
        .def_readwrite("r_noise_sd", &SynthSpec::r_noise_sd)
        .def_readwrite("confidence_dropout_prob", &SynthSpec::confidence_dropout_prob)
        .def_readwrite("speech_confound_prob", &SynthSpec::speech_confound_prob)
        .def_property(
            "apex_duration_mean",
            [](const SynthSpec& s) { return s.apex_duration.mean; },
            [](SynthSpec& s, double v) { s.apex_duration.mean = v; })
        .def_property(
            "amplitude_mean", [](const SynthSpec& s) { return s.amplitude.mean; },
            [](SynthSpec& s, double v) { s.amplitude.mean = v; });

    py::class_<TrueSmile>(m, "TrueSmile")
        .def_readonly("onset_start", &TrueSmile::onset_start)
        .def_readonly("onset_end", &TrueSmile::onset_end)
        .def_readonly("offset_start", &TrueSmile::offset_start)
        .def_readonly("offset_end", &TrueSmile::offset_end)
        .def_readonly("speech_confounded", &TrueSmile::speech_confounded)
        .def_readonly("features", &TrueSmile::features);

    py::class_<SynthSession>(m, "SynthSession")
        .def_readonly("series", &SynthSession::series)
        .def_property_readonly("speech",
                               [](const SynthSession& s) {
                                   std::vector<std::pair<double, double>> out;
                                   for (const SpeechInterval& iv : s.speech)
                                       out.emplace_back(iv.start, iv.end);
                                   return out;
                               })
        .def_property_readonly("true_smiles",
                               [](const SynthSession& s) { return s.truth.smiles; })
        .def_property_readonly("score", [](const SynthSession& s) { return s.truth.score; });

    m.def("generate_session",
          [](const SynthSpec& spec, const std::string& session_id, const std::string& mother_id,
             int visit_month, std::uint64_t seed) {
              return generate_session(spec, {session_id, mother_id, visit_month, spec.fps}, seed);
          },
          py::arg("spec"), py::arg("session_id") = "m000_v06", py::arg("mother_id") = "m000",
          py::arg("visit_month") = 6, py::arg("seed") = 1);
}
