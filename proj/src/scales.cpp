#include "smiledyn/scales.hpp"

namespace smiledyn {

namespace {

constexpr std::array<CategoryBand, 5> kPhq9Bands = {{
    {"Minimal", 0, 4},
    {"Mild", 5, 9},
    {"Moderate", 10, 14},
    {"Moderately Severe", 15, 19},
    {"Severe", 20, 27},
}};

constexpr std::array<CategoryBand, 3> kAcesBands = {{
    {"Low Risk", 0, 0},
    {"Intermediate Risk", 1, 3},
    {"High Risk", 4, 10},
}};

constexpr std::array<CategoryBand, 3> kPssBands = {{
    {"Low", 0, 13},
    {"Moderate", 14, 26},
    {"High", 27, 40},
}};

}  // namespace

ScoreRange score_range(ScaleKind kind) {
    switch (kind) {
    case ScaleKind::Phq9: return {0, 27};
    case ScaleKind::Aces: return {0, 10};
    case ScaleKind::SocialSupport: return {0, 100};
    case ScaleKind::Pss: return {0, 40};
    case ScaleKind::Pearls: return {0, 10};
    }
    throw Error(ErrorKind::Analysis, "unknown scale kind");
}

std::string_view scale_id(ScaleKind kind) {
    switch (kind) {
    case ScaleKind::Phq9: return "phq9";
    case ScaleKind::Aces: return "aces";
    case ScaleKind::SocialSupport: return "social_support";
    case ScaleKind::Pss: return "pss";
    case ScaleKind::Pearls: return "pearls";
    }
    return "?";
}

std::string_view scale_name(ScaleKind kind) {
    switch (kind) {
    case ScaleKind::Phq9: return "PHQ-9";
    case ScaleKind::Aces: return "ACES";
    case ScaleKind::SocialSupport: return "Social Support";
    case ScaleKind::Pss: return "PSS";
    case ScaleKind::Pearls: return "PEARLS";
    }
    return "?";
}

ScaleKind scale_from_id(std::string_view id) {
    for (ScaleKind k : kAllScales)
        if (scale_id(k) == id) return k;
    throw Error(ErrorKind::Validation, "unknown scale '" + std::string(id) + "'");
}

std::span<const CategoryBand> category_bands(ScaleKind kind) {
    switch (kind) {
    case ScaleKind::Phq9: return kPhq9Bands;
    case ScaleKind::Aces: return kAcesBands;
    case ScaleKind::Pss: return kPssBands;
    case ScaleKind::SocialSupport:
    case ScaleKind::Pearls: return {};
    }
    return {};
}

std::string_view categorize(ScaleScore score) {
    const ScoreRange range = score_range(score.kind);
    if (!range.contains(score.value)) {
        throw Error(ErrorKind::Validation,
                    std::string(scale_name(score.kind)) + " score " +
                        std::to_string(score.value) + " outside range [" +
                        std::to_string(range.lo) + ", " + std::to_string(range.hi) + "]");
    }
    for (const CategoryBand& band : category_bands(score.kind)) {
        if (score.value >= band.lo && score.value <= band.hi) return band.label;
    }
    return kUncategorized;
}

void validate_score(ScaleKind kind, long value, const std::string& context) {
    const ScoreRange range = score_range(kind);
    if (value < range.lo || value > range.hi) {
        throw Error(ErrorKind::Validation,
                    context + ": " + std::string(scale_name(kind)) + " score " +
                        std::to_string(value) + " outside range [" + std::to_string(range.lo) +
                        ", " + std::to_string(range.hi) + "]");
    }
}

}  // namespace smiledyn
