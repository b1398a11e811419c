#pragma once

#include "discrepancy.hpp"

#include <cmath>
#include <limits>
#include <optional>

namespace lrdp {

/// Risk curve over a threshold grid and its minimizer.
struct SureCurve {
    Vec lambdas;
    Vec values;
    double argmin_lambda = 0.0;
    int argmin_index = 0;
};

/// 101 logarithmically spaced candidates between 1e-1 and 1e7.
inline Vec sure_grid() {
    Vec g(101);
    for (int i = 0; i <= 100; ++i) g[i] = std::pow(10.0, -1.0 + 8.0 * i / 100.0);
    return g;
}

namespace detail {

/// Spreads clusters of near-equal positive singular values symmetrically so
/// the cross terms of the divergence stay finite. No-op on simple spectra.
inline Vec spread_ties(const Vec& s) {
    if (s.size() == 0 || s[0] <= 0.0) return s;
    const double gap_tol = 1e-12 * s[0];
    const double step = 1e-10 * s[0];
    Vec out = s;
    Index i = 0;
    while (i < out.size() && out[i] > 0.0) {
        Index j = i;
        while (j + 1 < out.size() && out[j + 1] > 0.0 && out[j] - out[j + 1] < gap_tol) ++j;
        if (j > i) {
            const Index count = j - i + 1;
            double mean = 0.0;
            for (Index q = i; q <= j; ++q) mean += out[q];
            mean /= static_cast<double>(count);
            for (Index q = i; q <= j; ++q)
                out[q] = mean + step * (static_cast<double>(j - q) - 0.5 * static_cast<double>(count - 1));
        }
        i = j + 1;
    }
    return out;
}

/// Unbiased risk of a spectral shrinker with output values t_i and slopes
/// d_i at the observed spectrum: -mn*tau^2 + sum (sigma_i - t_i)^2 +
/// 2*tau^2 * divergence. The divergence is the closed form for simple
/// spectra; terms with t_i = 0 vanish identically and are skipped.
inline double sure_core(const Vec& s, const Vec& t, const Vec& d, Index m, Index n, double tau) {
    const Index k = s.size();
    const double absdiff = static_cast<double>(m > n ? m - n : n - m);
    double resid = 0.0;
    double div = 0.0;
    for (Index i = 0; i < k; ++i) {
        const double gap = s[i] - t[i];
        resid += gap * gap;
        div += d[i];
        if (t[i] <= 0.0) continue;
        if (s[i] > 0.0) div += absdiff * t[i] / s[i];
        for (Index j = 0; j < k; ++j) {
            if (j == i) continue;
            div += 2.0 * s[i] * t[i] / (s[i] * s[i] - s[j] * s[j]);
        }
    }
    return -static_cast<double>(m) * static_cast<double>(n) * tau * tau + resid + 2.0 * tau * tau * div;
}

/// Fills t/d for the soft-threshold family generalized by per-index cuts.
inline void shrink_values(const Vec& s, const Vec& cuts, Index keep_prefix, Vec& t, Vec& d) {
    const Index k = s.size();
    t.resize(k);
    d.resize(k);
    for (Index i = 0; i < k; ++i) {
        if (i < keep_prefix) {
            t[i] = s[i];
            d[i] = 1.0;
        } else if (s[i] > cuts[i]) {
            t[i] = s[i] - cuts[i];
            d[i] = 1.0;
        } else {
            t[i] = 0.0;
            d[i] = 0.0;
        }
    }
}

inline double sure_value_generic(const Vec& s_raw, const Vec& cuts, Index keep_prefix,
                                 Index m, Index n, double tau) {
    const Vec s = spread_ties(s_raw);
    Vec t, d;
    shrink_values(s, cuts, keep_prefix, t, d);
    return sure_core(s, t, d, m, n, tau);
}

} // namespace detail

/// Risk of plain soft thresholding at lam on an m x n observation.
inline double sure_value(const Vec& s, double lam, double tau, Index m, Index n) {
    if (!(tau > 0.0)) throw std::invalid_argument("sure_value: tau must be positive");
    if (!(lam >= 0.0)) throw std::invalid_argument("sure_value: lam must be non-negative");
    return detail::sure_value_generic(s, Vec::Constant(s.size(), lam), 0, m, n, tau);
}

inline double sure_value(const SvdFactors& f, double lam, double tau) {
    return sure_value(f.s, lam, tau, f.rows, f.cols);
}

/// Evaluates the risk over the standard grid for the penalty's shrinker
/// (soft threshold, truncated variant, or weighted variant) and returns the
/// curve with its minimizer.
inline SureCurve sure_select(const SvdFactors& f, double tau, const Regularizer& reg = Regularizer::nn()) {
    if (!(tau > 0.0)) throw std::invalid_argument("sure_select: tau must be positive");
    reg.validate(f.s.size());
    if (reg.kind == Penalty::Rank)
        throw std::invalid_argument("sure_select: the rank penalty has no risk curve; use hardt_select");

    Vec w;
    Index keep_prefix = 0;
    if (reg.kind == Penalty::GWNN)
        w = weights_gwnn(f.s, reg.p, reg.eps);
    else
        w = Vec::Ones(f.s.size());
    if (reg.kind == Penalty::TNN) keep_prefix = reg.r;

    SureCurve curve;
    curve.lambdas = sure_grid();
    curve.values.resize(curve.lambdas.size());
    double best = std::numeric_limits<double>::infinity();
    for (Index g = 0; g < curve.lambdas.size(); ++g) {
        const double lam = curve.lambdas[g];
        const double v = detail::sure_value_generic(f.s, lam * w, keep_prefix, f.rows, f.cols, tau);
        curve.values[g] = v;
        if (v < best) {
            best = v;
            curve.argmin_index = static_cast<int>(g);
            curve.argmin_lambda = lam;
        }
    }
    return curve;
}

/// Applies the penalty's shrinker at the risk-minimizing threshold.
inline Mat sure_denoise(const SvdFactors& f, double tau, const Regularizer& reg = Regularizer::nn(),
                        SureCurve* curve_out = nullptr) {
    SureCurve curve = sure_select(f, tau, reg);
    if (curve_out) *curve_out = curve;
    switch (reg.kind) {
        case Penalty::NN: return svt(f, curve.argmin_lambda);
        case Penalty::TNN: return psvt(f, reg.r, curve.argmin_lambda);
        case Penalty::GWNN: return wsvt(f, weights_gwnn(f.s, reg.p, reg.eps), curve.argmin_lambda);
        case Penalty::Rank: break;
    }
    throw std::invalid_argument("sure_denoise: unsupported penalty");
}

/// Hard-threshold level: (4/sqrt(3))*sqrt(n)*tau for a known noise level,
/// otherwise 0.2858 times the median singular value.
inline double hardt_select(const SvdFactors& f, std::optional<double> tau, Index n) {
    if (n < 1) throw std::invalid_argument("hardt_select: n must be positive");
    if (tau) {
        if (!(*tau >= 0.0)) throw std::invalid_argument("hardt_select: tau must be non-negative");
        return detail::hardt_threshold_known(*tau, n);
    }
    Vec s = f.s;
    std::sort(s.begin(), s.end());
    const Index k = s.size();
    const double med = (k % 2 == 1) ? s[k / 2] : 0.5 * (s[k / 2 - 1] + s[k / 2]);
    return 0.2858 * med;
}

/// Keeps singular values strictly above `cut`, zeroing the rest.
inline Mat hardt_denoise(const SvdFactors& f, double cut) {
    if (!(cut >= 0.0)) throw std::invalid_argument("hardt_denoise: cut must be non-negative");
    Vec vals(f.s.size());
    for (Index i = 0; i < f.s.size(); ++i) vals[i] = f.s[i] > cut ? f.s[i] : 0.0;
    return f.reconstruct(vals);
}

} // namespace lrdp
