#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>

#include "smiledyn/error.hpp"

namespace smiledyn {

/// The five maternal questionnaire scales.
enum class ScaleKind { Phq9, Aces, SocialSupport, Pss, Pearls };

inline constexpr std::array<ScaleKind, 5> kAllScales = {
    ScaleKind::Phq9, ScaleKind::Aces, ScaleKind::SocialSupport, ScaleKind::Pss,
    ScaleKind::Pearls};

struct ScoreRange {
    int lo;
    int hi;
    bool contains(int v) const { return v >= lo && v <= hi; }
};

/// One severity band of a categorical scale; bounds are inclusive.
struct CategoryBand {
    std::string_view label;
    int lo;
    int hi;
};

struct ScaleScore {
    ScaleKind kind;
    int value;
};

ScoreRange score_range(ScaleKind kind);

/// Identifier used in file columns and CLI arguments (phq9, aces, ...).
std::string_view scale_id(ScaleKind kind);

/// Display name (PHQ-9, ACES, ...).
std::string_view scale_name(ScaleKind kind);

ScaleKind scale_from_id(std::string_view id);

/// Severity bands; empty for Social Support and PEARLS, which have none.
std::span<const CategoryBand> category_bands(ScaleKind kind);

inline constexpr std::string_view kUncategorized = "uncategorized";

/// Maps a valid score to its severity label, or "uncategorized" for the two
/// scales without published bands. Out-of-range scores are a range error.
std::string_view categorize(ScaleScore score);

/// Throws a validation error if the value is outside the scale's range.
void validate_score(ScaleKind kind, long value, const std::string& context);

}  // namespace smiledyn
