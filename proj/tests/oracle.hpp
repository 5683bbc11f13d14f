// Test-only brute-force reference implementations, independent of the
// library's code paths: long-double two-pass statistics and tail
// probabilities via adaptive Simpson quadrature of the densities (the
// library uses the incomplete-beta continued fraction instead).
#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace oracle {

using ld = long double;

inline ld simpson_rec(ld (*f)(ld, ld, ld), ld p1, ld p2, ld a, ld b, ld fa, ld fm, ld fb,
                      ld whole, ld tol, int depth) {
    const ld m = (a + b) / 2;
    const ld lm = (a + m) / 2, rm = (m + b) / 2;
    const ld flm = f(lm, p1, p2), frm = f(rm, p1, p2);
    const ld left = (m - a) / 6 * (fa + 4 * flm + fm);
    const ld right = (b - m) / 6 * (fm + 4 * frm + fb);
    const ld delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15 * tol) return left + right + delta / 15;
    return simpson_rec(f, p1, p2, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           simpson_rec(f, p1, p2, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

inline ld integrate(ld (*f)(ld, ld, ld), ld p1, ld p2, ld a, ld b) {
    const ld m = (a + b) / 2;
    const ld fa = f(a, p1, p2), fm = f(m, p1, p2), fb = f(b, p1, p2);
    const ld whole = (b - a) / 6 * (fa + 4 * fm + fb);
    // Tolerance is relative to the crude first estimate, so thin tails keep
    // full relative precision.
    const ld tol = std::max(std::fabs(whole), (ld)1e-300) * 1e-14L;
    return simpson_rec(f, p1, p2, a, b, fa, fm, fb, whole, tol, 30);
}

inline ld cos_pow(ld theta, ld nu, ld) { return std::pow(std::cos(theta), nu - 1); }
inline ld sincos_pow(ld theta, ld e1, ld e2) {
    return std::pow(std::sin(theta), e1) * std::pow(std::cos(theta), e2);
}

/// P(T > t) for t >= 0 via the substitution x = sqrt(nu) tan(theta):
/// C(nu) sqrt(nu) * integral of cos^(nu-1) over [atan(t/sqrt nu), pi/2].
inline ld t_upper_tail(ld t, ld nu) {
    const ld half_pi = 1.57079632679489661923L;
    const ld theta0 = std::atan(t / std::sqrt(nu));
    const ld prefactor =
        std::exp(std::lgamma((nu + 1) / 2) - std::lgamma(nu / 2)) / std::sqrt(3.14159265358979323846L);
    return prefactor * integrate(&cos_pow, nu, 0, theta0, half_pi);
}

inline double t_two_sided_p(double t, double df) {
    if (t == 0.0) return 1.0;
    return static_cast<double>(2.0L * t_upper_tail(std::fabs((ld)t), (ld)df));
}

/// P(F > f) via (d1/d2) x = tan^2(theta):
/// (2/B(a,b)) * integral of sin^(d1-1) cos^(d2-1) over [theta0, pi/2].
inline double f_upper_p(double f, double df1, double df2) {
    if (f <= 0.0) return 1.0;
    const ld a = (ld)df1 / 2, b = (ld)df2 / 2;
    const ld half_pi = 1.57079632679489661923L;
    const ld theta0 = std::atan(std::sqrt((ld)df1 * (ld)f / (ld)df2));
    const ld ln_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const ld integral = integrate(&sincos_pow, (ld)df1 - 1, (ld)df2 - 1, theta0, half_pi);
    return static_cast<double>(2.0L * std::exp(-ln_beta) * integral);
}

inline ld mean(std::span<const double> xs) {
    ld s = 0;
    for (double x : xs) s += x;
    return s / xs.size();
}

inline ld var(std::span<const double> xs) {
    const ld m = mean(xs);
    ld s = 0;
    for (double x : xs) s += ((ld)x - m) * ((ld)x - m);
    return s / (xs.size() - 1);
}

inline double pearson(std::span<const double> xs, std::span<const double> ys) {
    const ld mx = mean(xs), my = mean(ys);
    ld sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += ((ld)xs[i] - mx) * ((ld)ys[i] - my);
        sxx += ((ld)xs[i] - mx) * ((ld)xs[i] - mx);
        syy += ((ld)ys[i] - my) * ((ld)ys[i] - my);
    }
    return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

struct LinReg {
    double slope, intercept, r, p_slope;
};

inline LinReg linreg(std::span<const double> xs, std::span<const double> ys) {
    const ld mx = mean(xs), my = mean(ys);
    ld sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += ((ld)xs[i] - mx) * ((ld)ys[i] - my);
        sxx += ((ld)xs[i] - mx) * ((ld)xs[i] - mx);
        syy += ((ld)ys[i] - my) * ((ld)ys[i] - my);
    }
    LinReg out;
    const ld slope = sxy / sxx;
    out.slope = static_cast<double>(slope);
    out.intercept = static_cast<double>(my - slope * mx);
    out.r = static_cast<double>(sxy / std::sqrt(sxx * syy));
    const ld sse = syy - slope * sxy;
    const ld df = (ld)xs.size() - 2;
    if (sse <= 0) {
        out.p_slope = (slope == 0) ? 1.0 : 0.0;
    } else {
        const ld se = std::sqrt(sse / df / sxx);
        out.p_slope = t_two_sided_p(static_cast<double>(slope / se), static_cast<double>(df));
    }
    return out;
}

struct Welch {
    double t, df, p, d;
};

inline Welch welch(std::span<const double> a, std::span<const double> b) {
    const ld na = a.size(), nb = b.size();
    const ld ma = mean(a), mb = mean(b);
    const ld va = var(a), vb = var(b);
    const ld sa = va / na, sb = vb / nb;
    Welch out;
    out.t = static_cast<double>((ma - mb) / std::sqrt(sa + sb));
    out.df = static_cast<double>((sa + sb) * (sa + sb) /
                                 (sa * sa / (na - 1) + sb * sb / (nb - 1)));
    out.p = t_two_sided_p(out.t, out.df);
    out.d = static_cast<double>((ma - mb) /
                                std::sqrt(((na - 1) * va + (nb - 1) * vb) / (na + nb - 2)));
    return out;
}

struct Anova {
    double f;
    int df_between, df_within;
    double p, partial_eta2;
};

inline Anova anova(const std::vector<std::vector<double>>& groups) {
    ld grand = 0;
    std::size_t n = 0;
    for (const auto& g : groups) {
        for (double v : g) grand += v;
        n += g.size();
    }
    grand /= n;
    ld ssb = 0, ssw = 0;
    for (const auto& g : groups) {
        const ld gm = mean(g);
        ssb += (ld)g.size() * (gm - grand) * (gm - grand);
        for (double v : g) ssw += ((ld)v - gm) * ((ld)v - gm);
    }
    Anova out;
    out.df_between = static_cast<int>(groups.size()) - 1;
    out.df_within = static_cast<int>(n - groups.size());
    out.f = static_cast<double>((ssb / out.df_between) / (ssw / out.df_within));
    out.p = f_upper_p(out.f, out.df_between, out.df_within);
    out.partial_eta2 = static_cast<double>(ssb / (ssb + ssw));
    return out;
}

inline bool close_rel(double a, double b, double tol) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1e-30});
    return std::fabs(a - b) <= tol * scale;
}

}  // namespace oracle
