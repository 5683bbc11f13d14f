#include "smiledyn/features.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "smiledyn/csv.hpp"

namespace smiledyn {

std::string_view feature_id_name(FeatureId id) {
    switch (id) {
    case FeatureId::MaxOnsetSpeed: return "max_onset_speed";
    case FeatureId::MaxOffsetSpeed: return "max_offset_speed";
    case FeatureId::OnsetAmplitude: return "onset_amplitude";
    case FeatureId::OffsetAmplitude: return "offset_amplitude";
    case FeatureId::OnsetDuration: return "onset_duration";
    case FeatureId::OffsetDuration: return "offset_duration";
    case FeatureId::ApexDuration: return "apex_duration";
    case FeatureId::TotalDuration: return "total_duration";
    }
    return "?";
}

std::string_view feature_display_name(FeatureId id) {
    switch (id) {
    case FeatureId::MaxOnsetSpeed: return "Maximum Onset Speed";
    case FeatureId::MaxOffsetSpeed: return "Maximum Offset Speed";
    case FeatureId::OnsetAmplitude: return "Onset Amplitude";
    case FeatureId::OffsetAmplitude: return "Offset Amplitude";
    case FeatureId::OnsetDuration: return "Onset Duration";
    case FeatureId::OffsetDuration: return "Offset Duration";
    case FeatureId::ApexDuration: return "Apex Duration";
    case FeatureId::TotalDuration: return "Total Duration";
    }
    return "?";
}

FeatureId feature_from_name(std::string_view name) {
    for (FeatureId id : kAllFeatures)
        if (feature_id_name(id) == name) return id;
    throw Error(ErrorKind::Validation, "unknown feature '" + std::string(name) + "'");
}

double feature_value(const SmileFeatures& f, FeatureId id) {
    switch (id) {
    case FeatureId::MaxOnsetSpeed: return f.max_onset_speed;
    case FeatureId::MaxOffsetSpeed: return f.max_offset_speed;
    case FeatureId::OnsetAmplitude: return f.onset_amplitude;
    case FeatureId::OffsetAmplitude: return f.offset_amplitude;
    case FeatureId::OnsetDuration: return f.onset_duration;
    case FeatureId::OffsetDuration: return f.offset_duration;
    case FeatureId::ApexDuration: return f.apex_duration;
    case FeatureId::TotalDuration: return f.total_duration;
    }
    throw Error(ErrorKind::Analysis, "unknown feature id");
}

std::array<double, 8> feature_vector(const SmileFeatures& f) {
    std::array<double, 8> v{};
    for (std::size_t i = 0; i < kAllFeatures.size(); ++i) v[i] = feature_value(f, kAllFeatures[i]);
    return v;
}

namespace {

struct PhaseSpan {
    std::size_t first;
    std::size_t last;
};

PhaseSpan phase_span(const Smile& s, double t_begin, double t_end, const char* phase) {
    const auto& trace = s.r_trace;
    std::size_t first = trace.size(), last = 0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (trace[i].t >= t_begin && trace[i].t <= t_end) {
            first = std::min(first, i);
            last = std::max(last, i);
        }
    }
    if (first >= trace.size() || last <= first)
        throw Error(ErrorKind::Analysis, "malformed smile: " + std::string(phase) +
                                             " phase has fewer than 2 samples");
    return {first, last};
}

double max_rate(std::span<const TracePoint> pts, double sign) {
    double best = -1e300;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double dt = pts[i].t - pts[i - 1].t;
        if (!(dt > 0.0)) throw Error(ErrorKind::Analysis, "malformed smile: non-increasing trace");
        best = std::max(best, sign * (pts[i].r - pts[i - 1].r) / dt);
    }
    return best;
}

}  // namespace

SmileFeatures smile_features(const Smile& s) {
    if (!(s.onset_start < s.onset_end) || !(s.onset_end <= s.offset_start) ||
        !(s.offset_start < s.offset_end))
        throw Error(ErrorKind::Analysis, "malformed smile: boundaries out of order");

    const PhaseSpan on = phase_span(s, s.onset_start, s.onset_end, "onset");
    const PhaseSpan off = phase_span(s, s.offset_start, s.offset_end, "offset");
    const auto& trace = s.r_trace;

    SmileFeatures f;
    f.onset_duration = s.onset_end - s.onset_start;
    f.offset_duration = s.offset_end - s.offset_start;
    f.apex_duration = s.offset_start - s.onset_end;
    f.total_duration = f.onset_duration + f.apex_duration + f.offset_duration;
    f.onset_amplitude = trace[on.last].r - trace[on.first].r;
    f.offset_amplitude = trace[off.first].r - trace[off.last].r;
    f.max_onset_speed =
        max_rate(std::span(trace).subspan(on.first, on.last - on.first + 1), +1.0);
    f.max_offset_speed =
        max_rate(std::span(trace).subspan(off.first, off.last - off.first + 1), -1.0);
    return f;
}

FeatureTable session_features(const SessionMeta& meta, std::span<const Smile> smiles) {
    FeatureTable table;
    table.session_id = meta.session_id;
    table.mother_id = meta.mother_id;
    table.visit_month = meta.visit_month;
    int expected = 1;
    for (const Smile& s : smiles) {
        if (s.ordinal != expected)
            throw Error(ErrorKind::Analysis,
                        "session '" + meta.session_id + "': smile ordinals not consecutive");
        table.rows.push_back({s.ordinal, smile_features(s)});
        ++expected;
    }
    return table;
}

std::string write_features_csv(std::span<const FeatureTable> tables) {
    std::ostringstream out;
    out << "mother_id,visit_month,ordinal";
    for (FeatureId id : kAllFeatures) out << ',' << feature_id_name(id);
    out << "\n";
    for (const FeatureTable& table : tables) {
        for (const FeatureRow& row : table.rows) {
            out << table.mother_id << ',' << table.visit_month << ',' << row.ordinal;
            for (double v : feature_vector(row.features)) out << ',' << format_double(v);
            out << "\n";
        }
    }
    return out.str();
}

std::vector<FeatureTable> parse_features_csv(std::istream& in) {
    const CsvTable csv = read_csv(in);
    const std::size_t col_mother = csv.require_column("mother_id");
    const std::size_t col_visit = csv.require_column("visit_month");
    const std::size_t col_ordinal = csv.require_column("ordinal");
    std::array<std::size_t, 8> feature_cols{};
    for (std::size_t i = 0; i < kAllFeatures.size(); ++i)
        feature_cols[i] = csv.require_column(std::string(feature_id_name(kAllFeatures[i])));

    std::map<std::pair<std::string, int>, FeatureTable> grouped;
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        const auto& row = csv.rows[i];
        const std::size_t line = csv.line_numbers[i];
        const std::string mother = row[col_mother];
        const long visit = parse_int_cell(row[col_visit], line, "visit_month");
        if (visit != 6 && visit != 12)
            throw Error(ErrorKind::Validation,
                        "line " + std::to_string(line) + ": visit_month must be 6 or 12");

        FeatureRow fr;
        fr.ordinal = static_cast<int>(parse_int_cell(row[col_ordinal], line, "ordinal"));
        double* slots[8] = {&fr.features.max_onset_speed, &fr.features.max_offset_speed,
                            &fr.features.onset_amplitude, &fr.features.offset_amplitude,
                            &fr.features.onset_duration,  &fr.features.offset_duration,
                            &fr.features.apex_duration,   &fr.features.total_duration};
        for (std::size_t c = 0; c < 8; ++c)
            *slots[c] = parse_double_cell(row[feature_cols[c]], line,
                                          std::string(feature_id_name(kAllFeatures[c])));

        auto& table = grouped[{mother, static_cast<int>(visit)}];
        table.mother_id = mother;
        table.visit_month = static_cast<int>(visit);
        table.session_id = mother + "_v" + std::to_string(visit);
        table.rows.push_back(fr);
    }

    std::vector<FeatureTable> tables;
    tables.reserve(grouped.size());
    for (auto& [key, table] : grouped) {
        std::sort(table.rows.begin(), table.rows.end(),
                  [](const FeatureRow& a, const FeatureRow& b) { return a.ordinal < b.ordinal; });
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            if (table.rows[i].ordinal != static_cast<int>(i) + 1)
                throw Error(ErrorKind::Validation, "mother '" + table.mother_id + "' visit " +
                                                       std::to_string(table.visit_month) +
                                                       ": smile ordinals not consecutive from 1");
        }
        tables.push_back(std::move(table));
    }
    return tables;
}

}  // namespace smiledyn
