#include "smiledyn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace smiledyn {

namespace {

constexpr double kBetacfTol = 1e-13;
constexpr int kBetacfMaxIter = 500;

/// Continued fraction for the incomplete beta (Lentz's method).
double betacf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kBetacfMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kBetacfTol) return h;
    }
    throw Error(ErrorKind::Analysis, "incomplete beta continued fraction did not converge");
}

double mean_of(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

/// Sample variance (n-1 denominator), two-pass.
double variance_of(std::span<const double> xs, double mean) {
    double s = 0.0;
    for (double x : xs) s += (x - mean) * (x - mean);
    return s / static_cast<double>(xs.size() - 1);
}

bool is_constant(std::span<const double> xs) {
    for (double x : xs)
        if (x != xs.front()) return false;
    return true;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw Error(ErrorKind::Analysis, "incomplete beta: a and b must be > 0");
    if (x < 0.0 || x > 1.0)
        throw Error(ErrorKind::Analysis, "incomplete beta: x must be in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (!(df > 0.0))
        throw Error(ErrorKind::Analysis, "student_t_two_sided_p: df must be > 0");
    if (t == 0.0) return 1.0;
    if (std::isinf(t)) return 0.0;
    const double x = df / (df + t * t);
    const double p = regularized_incomplete_beta(df / 2.0, 0.5, x);
    return std::clamp(p, 0.0, 1.0);
}

double f_upper_tail_p(double f, double df1, double df2) {
    if (f < 0.0) throw Error(ErrorKind::Analysis, "f_upper_tail_p: f must be >= 0");
    if (!(df1 >= 1.0) || !(df2 >= 1.0))
        throw Error(ErrorKind::Analysis, "f_upper_tail_p: degrees of freedom must be >= 1");
    if (f == 0.0) return 1.0;
    if (std::isinf(f)) return 0.0;
    const double x = df2 / (df2 + df1 * f);
    const double p = regularized_incomplete_beta(df2 / 2.0, df1 / 2.0, x);
    return std::clamp(p, 0.0, 1.0);
}

double pearson_r(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size())
        throw Error(ErrorKind::Analysis, "pearson_r: length mismatch");
    if (xs.size() < 3)
        throw Error(ErrorKind::Analysis, "pearson_r: need at least 3 observations");
    if (is_constant(xs) || is_constant(ys))
        throw Error(ErrorKind::Analysis, "pearson_r: correlation undefined for constant input");

    const double mx = mean_of(xs);
    const double my = mean_of(ys);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw Error(ErrorKind::Analysis, "pearson_r: correlation undefined for constant input");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

LinRegResult linreg(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw Error(ErrorKind::Analysis, "linreg: length mismatch");
    const std::size_t n = xs.size();
    if (n < 3) throw Error(ErrorKind::Analysis, "linreg: need at least 3 observations");
    if (is_constant(xs))
        throw Error(ErrorKind::Analysis, "linreg: degenerate design (constant regressor)");

    const double mx = mean_of(xs);
    const double my = mean_of(ys);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }

    LinRegResult res;
    res.slope = sxy / sxx;
    res.intercept = my - res.slope * mx;
    res.r = (syy > 0.0) ? std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0) : 0.0;

    const double sse = std::max(0.0, syy - res.slope * sxy);
    const double df = static_cast<double>(n - 2);
    if (sse <= 0.0) {
        res.p_slope = (res.slope == 0.0) ? 1.0 : 0.0;  // exact fit
    } else {
        const double se = std::sqrt(sse / df / sxx);
        res.p_slope = student_t_two_sided_p(res.slope / se, df);
    }
    return res;
}

WelchResult welch_t(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw Error(ErrorKind::Analysis, "welch_t: both samples need at least 2 observations");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    const double va = variance_of(a, ma);
    const double vb = variance_of(b, mb);
    if (va == 0.0 && vb == 0.0)
        throw Error(ErrorKind::Analysis, "welch_t: zero variance in both samples");

    const double sa = va / na;
    const double sb = vb / nb;
    WelchResult res;
    res.t = (ma - mb) / std::sqrt(sa + sb);
    res.df = (sa + sb) * (sa + sb) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    res.p = student_t_two_sided_p(res.t, res.df);
    const double pooled_sd =
        std::sqrt(((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0));
    res.d = (ma - mb) / pooled_sd;
    return res;
}

AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups) {
    const std::size_t k = groups.size();
    if (k < 2) throw Error(ErrorKind::Analysis, "anova_oneway: need at least 2 groups");
    std::size_t n_total = 0;
    for (const auto& g : groups) {
        if (g.empty()) throw Error(ErrorKind::Analysis, "anova_oneway: empty group");
        n_total += g.size();
    }
    if (n_total < k + 1)
        throw Error(ErrorKind::Analysis, "anova_oneway: need total sample size >= groups + 1");

    double grand_sum = 0.0;
    for (const auto& g : groups)
        for (double v : g) grand_sum += v;
    const double grand_mean = grand_sum / static_cast<double>(n_total);

    double ssb = 0.0, ssw = 0.0;
    for (const auto& g : groups) {
        const double gm = mean_of(g);
        ssb += static_cast<double>(g.size()) * (gm - grand_mean) * (gm - grand_mean);
        for (double v : g) ssw += (v - gm) * (v - gm);
    }
    if (ssw <= 0.0)
        throw Error(ErrorKind::Analysis, "anova_oneway: zero within-group variance");

    AnovaResult res;
    res.df_between = static_cast<int>(k) - 1;
    res.df_within = static_cast<int>(n_total - k);
    res.f = (ssb / res.df_between) / (ssw / res.df_within);
    res.p = f_upper_tail_p(res.f, res.df_between, res.df_within);
    res.partial_eta2 = ssb / (ssb + ssw);
    return res;
}

const ScoreTableRow* Corpus::score_for(const FeatureTable& table) const {
    const auto it = scores.find({table.mother_id, table.visit_month});
    return it == scores.end() ? nullptr : &it->second;
}

namespace {

int max_ordinal(const Corpus& corpus, std::optional<int> visit) {
    int m = 0;
    for (const FeatureTable& t : corpus.sessions) {
        if (visit && t.visit_month != *visit) continue;
        m = std::max(m, t.count());
    }
    return m;
}

/// Pairs (k-th smile feature, scale score) across sessions for ordinal k.
void collect_pairs(const Corpus& corpus, FeatureId feature, ScaleKind scale, int ordinal,
                   std::optional<int> visit, std::vector<double>& xs, std::vector<double>& ys) {
    xs.clear();
    ys.clear();
    for (const FeatureTable& t : corpus.sessions) {
        if (visit && t.visit_month != *visit) continue;
        if (t.count() < ordinal) continue;
        const ScoreTableRow* score = corpus.score_for(t);
        if (!score) continue;
        xs.push_back(feature_value(t.rows[static_cast<std::size_t>(ordinal) - 1].features, feature));
        ys.push_back(static_cast<double>(score->value(scale)));
    }
}

}  // namespace

CorrelationSeries smile_index_correlations(const Corpus& corpus, FeatureId feature,
                                           ScaleKind scale, std::optional<int> visit) {
    if (corpus.sessions.empty())
        throw Error(ErrorKind::Analysis, "smile_index_correlations: empty corpus");
    CorrelationSeries series;
    series.feature = feature;
    series.scale = scale;
    std::vector<double> xs, ys;
    for (int k = 1; k <= max_ordinal(corpus, visit); ++k) {
        collect_pairs(corpus, feature, scale, k, visit, xs, ys);
        if (xs.size() < 3) continue;
        if (is_constant(xs) || is_constant(ys)) continue;  // correlation undefined; skip
        series.points.push_back({k, static_cast<int>(xs.size()), pearson_r(xs, ys)});
    }
    return series;
}

std::vector<FeatureSignificance> feature_significance(const Corpus& corpus,
                                                      std::span<const ScaleKind> scales,
                                                      std::optional<int> visit) {
    if (corpus.sessions.empty())
        throw Error(ErrorKind::Analysis, "feature_significance: empty corpus");
    std::vector<FeatureSignificance> out;
    std::vector<double> xs, ys;
    for (FeatureId feature : kAllFeatures) {
        FeatureSignificance sig;
        sig.feature = feature;
        double p_sum = 0.0;
        int n = 0;
        for (ScaleKind scale : scales) {
            for (int k = 1; k <= max_ordinal(corpus, visit); ++k) {
                collect_pairs(corpus, feature, scale, k, visit, xs, ys);
                if (xs.size() < 3 || is_constant(xs) || is_constant(ys)) continue;
                p_sum += linreg(xs, ys).p_slope;
                ++n;
            }
        }
        sig.n_tests = n;
        sig.mean_p = (n > 0) ? p_sum / n : 1.0;
        out.push_back(sig);
    }
    return out;
}

std::vector<FeatureId> select_significant_features(const Corpus& corpus,
                                                   std::span<const ScaleKind> scales,
                                                   double alpha, std::optional<int> visit) {
    std::vector<FeatureId> selected;
    for (const FeatureSignificance& sig : feature_significance(corpus, scales, visit)) {
        if (sig.n_tests > 0 && sig.mean_p < alpha) selected.push_back(sig.feature);
    }
    return selected;
}

}  // namespace smiledyn
