#pragma once

#include "svd.hpp"

#include <cmath>
#include <string>

namespace lrdp {

enum class Penalty { Rank, NN, TNN, GWNN };

/// Choice of spectral penalty. TNN leaves the top r singular values
/// unpenalized; GWNN uses weights (sigma_i + eps)^(p-1) from the observed
/// spectrum.
struct Regularizer {
    Penalty kind = Penalty::NN;
    int r = 0;
    double p = 0.7;
    double eps = 1e-6;

    static Regularizer rank() { return {Penalty::Rank}; }
    static Regularizer nn() { return {Penalty::NN}; }
    static Regularizer tnn(int r) { return {Penalty::TNN, r}; }
    static Regularizer gwnn(double p = 0.7, double eps = 1e-6) { return {Penalty::GWNN, 0, p, eps}; }

    void validate(Index spectrum_size) const {
        if (kind == Penalty::TNN && (r < 0 || r >= spectrum_size))
            throw std::invalid_argument("Regularizer: TNN truncation r must satisfy 0 <= r < min(rows, cols)");
        if (kind == Penalty::GWNN) {
            if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("Regularizer: GWNN exponent p must be in [0, 1)");
            if (!(eps > 0.0)) throw std::invalid_argument("Regularizer: GWNN eps must be positive");
        }
    }

    std::string name() const {
        switch (kind) {
            case Penalty::Rank: return "Rank";
            case Penalty::NN: return "NN";
            case Penalty::TNN: return "TNN";
            case Penalty::GWNN: return "GWNN";
        }
        return "?";
    }
};

/// Throws unless w is non-negative and non-descending (zeros can only form a
/// leading prefix, which the ordering already enforces).
inline void require_weights(const Vec& w) {
    if (w.size() == 0) throw std::invalid_argument("weight vector is empty");
    for (Index i = 0; i < w.size(); ++i) {
        if (!(w[i] >= 0.0)) throw std::invalid_argument("weights must be non-negative");
        if (i + 1 < w.size() && w[i] > w[i + 1])
            throw std::invalid_argument("weights must be non-descending");
    }
}

/// w_i = (s_i + eps)^(p-1). Non-descending because s is non-increasing and
/// p - 1 < 0. eps = 0 is allowed when the whole spectrum is positive.
inline Vec weights_gwnn(const Vec& s, double p, double eps) {
    if (!is_valid_spectrum(s)) throw std::invalid_argument("weights_gwnn: spectrum must be non-increasing and non-negative");
    if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("weights_gwnn: p must be in [0, 1)");
    if (!(eps >= 0.0)) throw std::invalid_argument("weights_gwnn: eps must be non-negative");
    if (s[s.size() - 1] + eps <= 0.0)
        throw std::invalid_argument("weights_gwnn: smallest singular value plus eps must be positive");
    Vec w(s.size());
    for (Index i = 0; i < s.size(); ++i) w[i] = std::pow(s[i] + eps, p - 1.0);
    return w;
}

/// Keeps singular values strictly above sqrt(2*lam); the boundary value is
/// dropped. Solves the rank-penalized problem at weight 1/(2*lam).
inline Mat hard_threshold(const SvdFactors& f, double lam) {
    if (!(lam >= 0.0)) throw std::invalid_argument("hard_threshold: lam must be non-negative");
    const double cut = std::sqrt(2.0 * lam);
    Vec vals(f.s.size());
    for (Index i = 0; i < f.s.size(); ++i) vals[i] = f.s[i] > cut ? f.s[i] : 0.0;
    return f.reconstruct(vals);
}

/// Soft-thresholds the spectrum: singular values become (sigma_i - lam)_+.
inline Mat svt(const SvdFactors& f, double lam) {
    if (!(lam >= 0.0)) throw std::invalid_argument("svt: lam must be non-negative");
    Vec vals = (f.s.array() - lam).max(0.0);
    return f.reconstruct(vals);
}

/// Keeps the top r singular values untouched and soft-thresholds the rest.
inline Mat psvt(const SvdFactors& f, int r, double lam) {
    if (r < 0 || r >= f.s.size()) throw std::invalid_argument("psvt: r must satisfy 0 <= r < min(rows, cols)");
    if (!(lam >= 0.0)) throw std::invalid_argument("psvt: lam must be non-negative");
    Vec vals = f.s;
    for (Index i = r; i < f.s.size(); ++i) vals[i] = std::max(f.s[i] - lam, 0.0);
    return f.reconstruct(vals);
}

/// Weighted soft threshold: singular values become (sigma_i - lam*w_i)_+.
/// The non-descending weight ordering keeps the output spectrum sorted.
inline Mat wsvt(const SvdFactors& f, const Vec& w, double lam) {
    require_weights(w);
    if (w.size() != f.s.size()) throw std::invalid_argument("wsvt: weight length must equal the spectrum length");
    if (!(lam >= 0.0)) throw std::invalid_argument("wsvt: lam must be non-negative");
    Vec vals = (f.s.array() - lam * w.array()).max(0.0);
    return f.reconstruct(vals);
}

} // namespace lrdp
