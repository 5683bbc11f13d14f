#include "smiledyn/ingest.hpp"

#include <algorithm>
#include <sstream>

#include "smiledyn/csv.hpp"

namespace smiledyn {

int ScoreTableRow::value(ScaleKind kind) const {
    switch (kind) {
    case ScaleKind::Phq9: return phq9;
    case ScaleKind::Aces: return aces;
    case ScaleKind::SocialSupport: return social_support;
    case ScaleKind::Pss: return pss;
    case ScaleKind::Pearls: return pearls;
    }
    throw Error(ErrorKind::Analysis, "unknown scale kind");
}

FrameSeries parse_frame_table(std::istream& in, const LandmarkConfig& cfg,
                              const SessionMeta& meta) {
    if (meta.visit_month != 6 && meta.visit_month != 12)
        throw Error(ErrorKind::Validation,
                    "session '" + meta.session_id + "': visit_month must be 6 or 12");
    if (!(meta.fps_nominal > 0.0))
        throw Error(ErrorKind::Validation, "session '" + meta.session_id + "': fps must be > 0");

    const CsvTable table = read_csv(in);
    const std::size_t col_frame = table.require_column("frame");
    const std::size_t col_ts = table.require_column("timestamp");
    const std::size_t col_conf = table.require_column("confidence");
    const std::size_t col_au12 = table.require_column("AU12_r");

    struct LandmarkCols {
        int index;
        std::size_t x;
        std::size_t y;
    };
    std::vector<LandmarkCols> landmark_cols;
    for (int idx : cfg.indices()) {
        landmark_cols.push_back({idx, table.require_column("x_" + std::to_string(idx)),
                                 table.require_column("y_" + std::to_string(idx))});
    }

    FrameSeries series;
    series.session_id = meta.session_id;
    series.mother_id = meta.mother_id;
    series.visit_month = meta.visit_month;
    series.fps_nominal = meta.fps_nominal;
    series.frames.reserve(table.rows.size());

    double prev_ts = -1.0;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const std::size_t line = table.line_numbers[i];
        FrameRecord rec;
        rec.frame_index = parse_int_cell(row[col_frame], line, "frame");
        rec.timestamp = parse_double_cell(row[col_ts], line, "timestamp");
        rec.confidence = parse_double_cell(row[col_conf], line, "confidence");
        rec.au12 = parse_double_cell(row[col_au12], line, "AU12_r");

        if (rec.frame_index < 1)
            throw Error(ErrorKind::Validation,
                        "line " + std::to_string(line) + ": frame index must be >= 1");
        if (rec.timestamp < 0.0)
            throw Error(ErrorKind::Validation,
                        "line " + std::to_string(line) + ": timestamp must be >= 0");
        if (rec.confidence < 0.0 || rec.confidence > 1.0)
            throw Error(ErrorKind::Validation,
                        "line " + std::to_string(line) + ": confidence " +
                            format_double(rec.confidence) + " outside [0, 1]");
        if (rec.au12 < 0.0 || rec.au12 > 5.0)
            throw Error(ErrorKind::Validation, "line " + std::to_string(line) + ": AU12_r " +
                                                   format_double(rec.au12) + " outside [0, 5]");
        if (!series.frames.empty() && !(rec.timestamp > prev_ts))
            throw Error(ErrorKind::Validation,
                        "line " + std::to_string(line) +
                            ": timestamps must strictly increase within a session");
        prev_ts = rec.timestamp;

        for (const auto& lc : landmark_cols) {
            Point p;
            p.x = parse_double_cell(row[lc.x], line, "x_" + std::to_string(lc.index));
            p.y = parse_double_cell(row[lc.y], line, "y_" + std::to_string(lc.index));
            rec.points[lc.index] = p;
        }
        series.frames.push_back(std::move(rec));
    }

    if (series.frames.empty())
        throw Error(ErrorKind::Validation,
                    "session '" + meta.session_id + "': frame table has no data rows");
    return series;
}

std::string write_frame_table(const FrameSeries& series, const LandmarkConfig& cfg) {
    std::ostringstream out;
    out << "frame,timestamp,confidence,AU12_r";
    for (int idx : cfg.indices()) out << ",x_" << idx << ",y_" << idx;
    out << "\n";
    for (const FrameRecord& f : series.frames) {
        out << f.frame_index << ',' << format_double(f.timestamp) << ','
            << format_double(f.confidence) << ',' << format_double(f.au12);
        for (int idx : cfg.indices()) {
            const auto it = f.points.find(idx);
            if (it == f.points.end())
                throw Error(ErrorKind::Validation, "frame " + std::to_string(f.frame_index) +
                                                       ": missing landmark " +
                                                       std::to_string(idx));
            out << ',' << format_double(it->second.x) << ',' << format_double(it->second.y);
        }
        out << "\n";
    }
    return out.str();
}

std::vector<SpeechInterval> parse_speech_intervals(std::istream& in) {
    const CsvTable table = read_csv(in);
    const std::size_t col_start = table.require_column("start_s");
    const std::size_t col_end = table.require_column("end_s");

    std::vector<SpeechInterval> intervals;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const std::size_t line = table.line_numbers[i];
        SpeechInterval iv;
        iv.start = parse_double_cell(table.rows[i][col_start], line, "start_s");
        iv.end = parse_double_cell(table.rows[i][col_end], line, "end_s");
        if (iv.start < 0.0)
            throw Error(ErrorKind::Validation,
                        "line " + std::to_string(line) + ": speech start must be >= 0");
        if (!(iv.end > iv.start))
            throw Error(ErrorKind::Validation,
                        "line " + std::to_string(line) + ": speech interval end must exceed start");
        if (iv.end - iv.start <= kMinSpeechSeconds) continue;  // too short to involve lips
        intervals.push_back(iv);
    }

    std::sort(intervals.begin(), intervals.end(),
              [](const SpeechInterval& a, const SpeechInterval& b) { return a.start < b.start; });
    std::vector<SpeechInterval> merged;
    for (const SpeechInterval& iv : intervals) {
        if (!merged.empty() && iv.start <= merged.back().end)
            merged.back().end = std::max(merged.back().end, iv.end);
        else
            merged.push_back(iv);
    }
    return merged;
}

std::string write_speech_intervals(std::span<const SpeechInterval> intervals) {
    std::ostringstream out;
    out << "start_s,end_s\n";
    for (const SpeechInterval& iv : intervals)
        out << format_double(iv.start) << ',' << format_double(iv.end) << "\n";
    return out.str();
}

ScoreTable parse_score_table(std::istream& in) {
    const CsvTable table = read_csv(in);
    const std::size_t col_mother = table.require_column("mother_id");
    const std::size_t col_visit = table.require_column("visit_month");
    std::array<std::size_t, 5> score_cols{};
    for (std::size_t i = 0; i < kAllScales.size(); ++i)
        score_cols[i] = table.require_column(std::string(scale_id(kAllScales[i])));

    ScoreTable out;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const std::size_t line = table.line_numbers[i];
        ScoreTableRow rec;
        rec.mother_id = row[col_mother];
        if (rec.mother_id.empty())
            throw Error(ErrorKind::Validation, "line " + std::to_string(line) + ": empty mother_id");
        const long visit = parse_int_cell(row[col_visit], line, "visit_month");
        if (visit != 6 && visit != 12)
            throw Error(ErrorKind::Validation,
                        "line " + std::to_string(line) + ": visit_month must be 6 or 12");
        rec.visit_month = static_cast<int>(visit);

        int* fields[5] = {&rec.phq9, &rec.aces, &rec.social_support, &rec.pss, &rec.pearls};
        for (std::size_t s = 0; s < kAllScales.size(); ++s) {
            const std::string col(scale_id(kAllScales[s]));
            const long v = parse_int_cell(row[score_cols[s]], line, col);
            validate_score(kAllScales[s], v, "line " + std::to_string(line));
            *fields[s] = static_cast<int>(v);
        }

        const ScoreKey key{rec.mother_id, rec.visit_month};
        if (!out.emplace(key, rec).second)
            throw Error(ErrorKind::Validation,
                        "line " + std::to_string(line) + ": duplicate entry for mother '" +
                            rec.mother_id + "' visit " + std::to_string(rec.visit_month));
    }
    return out;
}

std::string write_score_table(const ScoreTable& table) {
    std::ostringstream out;
    out << "mother_id,visit_month";
    for (ScaleKind k : kAllScales) out << ',' << scale_id(k);
    out << "\n";
    for (const auto& [key, row] : table) {
        out << row.mother_id << ',' << row.visit_month << ',' << row.phq9 << ',' << row.aces
            << ',' << row.social_support << ',' << row.pss << ',' << row.pearls << "\n";
    }
    return out.str();
}

}  // namespace smiledyn
