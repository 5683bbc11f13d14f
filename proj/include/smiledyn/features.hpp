#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "smiledyn/segmentation.hpp"

namespace smiledyn {

/// The eight per-smile dynamics values, in report order.
struct SmileFeatures {
    double max_onset_speed = 0.0;   // r per second
    double max_offset_speed = 0.0;  // r per second
    double onset_amplitude = 0.0;   // dimensionless r
    double offset_amplitude = 0.0;  // dimensionless r
    double onset_duration = 0.0;    // seconds
    double offset_duration = 0.0;   // seconds
    double apex_duration = 0.0;     // seconds
    double total_duration = 0.0;    // onset + apex + offset, exact by construction
};

enum class FeatureId {
    MaxOnsetSpeed,
    MaxOffsetSpeed,
    OnsetAmplitude,
    OffsetAmplitude,
    OnsetDuration,
    OffsetDuration,
    ApexDuration,
    TotalDuration,
};

inline constexpr std::array<FeatureId, 8> kAllFeatures = {
    FeatureId::MaxOnsetSpeed,  FeatureId::MaxOffsetSpeed, FeatureId::OnsetAmplitude,
    FeatureId::OffsetAmplitude, FeatureId::OnsetDuration,  FeatureId::OffsetDuration,
    FeatureId::ApexDuration,    FeatureId::TotalDuration,
};

std::string_view feature_id_name(FeatureId id);    // max_onset_speed, ...
std::string_view feature_display_name(FeatureId id);  // Maximum Onset Speed, ...
FeatureId feature_from_name(std::string_view name);
double feature_value(const SmileFeatures& f, FeatureId id);
std::array<double, 8> feature_vector(const SmileFeatures& f);

struct FeatureRow {
    int ordinal = 0;
    SmileFeatures features;
};

/// Per-session feature table; ordinals run consecutively from 1.
struct FeatureTable {
    std::string session_id;
    std::string mother_id;
    int visit_month = 6;
    std::vector<FeatureRow> rows;

    int count() const { return static_cast<int>(rows.size()); }
};

/// Computes the eight features of one smile from its boundaries and r trace.
SmileFeatures smile_features(const Smile& smile);

/// Builds the per-session table; smiles must already carry consecutive
/// ordinals (the segmentation and speech filter guarantee that).
FeatureTable session_features(const SessionMeta& meta, std::span<const Smile> smiles);

std::string write_features_csv(std::span<const FeatureTable> tables);
std::vector<FeatureTable> parse_features_csv(std::istream& in);

}  // namespace smiledyn
