#pragma once

#include <optional>
#include <span>
#include <vector>

#include "smiledyn/features.hpp"
#include "smiledyn/ingest.hpp"

namespace smiledyn {

/// Regularized incomplete beta function I_x(a, b), evaluated with the
/// Lentz continued fraction (tolerance 1e-13, comfortably under the 1e-12
/// accuracy budget the p-values are specified to).
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided Student-t tail probability for the given statistic.
double student_t_two_sided_p(double t, double df);

/// Upper-tail probability of the F distribution.
double f_upper_tail_p(double f, double df1, double df2);

/// Sample Pearson correlation; requires length >= 3 and non-constant inputs.
double pearson_r(std::span<const double> xs, std::span<const double> ys);

struct LinRegResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r = 0.0;
    double p_slope = 1.0;  // two-sided test of slope != 0, n-2 df
};

LinRegResult linreg(std::span<const double> xs, std::span<const double> ys);

struct WelchResult {
    double t = 0.0;
    double df = 0.0;  // Welch-Satterthwaite
    double p = 1.0;   // two-sided
    double d = 0.0;   // Cohen's d, pooled-SD form
};

WelchResult welch_t(std::span<const double> a, std::span<const double> b);

struct AnovaResult {
    double f = 0.0;
    int df_between = 0;
    int df_within = 0;
    double p = 1.0;
    double partial_eta2 = 0.0;  // SSB / (SSB + SSW)
};

AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups);

struct CorrelationPoint {
    int ordinal = 0;
    int sample_size = 0;
    double r = 0.0;
};

struct CorrelationSeries {
    FeatureId feature{};
    ScaleKind scale{};
    std::vector<CorrelationPoint> points;
};

/// A set of per-session feature tables plus the questionnaire score table.
struct Corpus {
    std::vector<FeatureTable> sessions;
    ScoreTable scores;

    const ScoreTableRow* score_for(const FeatureTable& table) const;
};

/// Per-smile-index correlation between one feature and one scale: for each
/// ordinal k with at least 3 mothers owning a k-th smile, the Pearson r of
/// (k-th smile feature, scale score) across mothers. Both visits pool by
/// default; pass a visit month to restrict.
CorrelationSeries smile_index_correlations(const Corpus& corpus, FeatureId feature,
                                           ScaleKind scale,
                                           std::optional<int> visit = std::nullopt);

struct FeatureSignificance {
    FeatureId feature{};
    double mean_p = 1.0;  // mean regression slope p over (ordinal, scale) pairs
    int n_tests = 0;
};

std::vector<FeatureSignificance> feature_significance(const Corpus& corpus,
                                                      std::span<const ScaleKind> scales,
                                                      std::optional<int> visit = std::nullopt);

/// Features whose mean per-(ordinal, scale) slope p-value is below alpha.
std::vector<FeatureId> select_significant_features(const Corpus& corpus,
                                                   std::span<const ScaleKind> scales,
                                                   double alpha,
                                                   std::optional<int> visit = std::nullopt);

}  // namespace smiledyn
