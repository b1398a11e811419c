#pragma once

#include "shrinkage.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace lrdp {

/// Requested residual bound already exceeds the observation energy: the
/// minimizer is the zero matrix and no positive threshold exists.
struct TrivialRegimeError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Knots of the residual function. b[j] (0-based) is the residual energy
/// reached when the threshold hits the (j+1)-th singular value (or weighted
/// singular value); the final entry is 0. Non-increasing, b[0] = |Y|_F^2.
struct Breakpoints {
    Vec b;
    bool weighted = false;
    int k_active = 0;
};

/// Result of a discrepancy fit: threshold lam, active index k (number of
/// shrunk-but-kept singular values), the bound used, and the residual it
/// attains. x_hat is empty for spectrum-only fits.
struct DpSolution {
    double lam = 0.0;
    int k = 0;
    double eta = 0.0;
    double residual_sq = 0.0;
    bool trivial = false;
    Mat x_hat;
};

/// Residual energy of soft thresholding at lam: sum_i min(sigma_i^2, lam^2).
inline double phi(const Vec& s, double lam) {
    if (!(lam >= 0.0)) throw std::invalid_argument("phi: lam must be non-negative");
    const double l2 = lam * lam;
    double acc = 0.0;
    for (Index i = 0; i < s.size(); ++i) acc += std::min(s[i] * s[i], l2);
    return acc;
}

inline double phi(const SvdFactors& f, double lam) { return phi(f.s, lam); }

/// Residual energy of weighted soft thresholding: sum_i min(sigma_i^2, (lam*w_i)^2).
inline double psi(const Vec& s, const Vec& w, double lam) {
    require_weights(w);
    if (w.size() != s.size()) throw std::invalid_argument("psi: weight length must equal the spectrum length");
    if (!(lam >= 0.0)) throw std::invalid_argument("psi: lam must be non-negative");
    double acc = 0.0;
    for (Index i = 0; i < s.size(); ++i) {
        const double cut = lam * w[i];
        acc += std::min(s[i] * s[i], cut * cut);
    }
    return acc;
}

inline double psi(const SvdFactors& f, const Vec& w, double lam) { return psi(f.s, w, lam); }

/// b_j = j*sigma_j^2 + sum_{i>j} sigma_i^2 for j = 1..m, plus a trailing 0.
inline Breakpoints breakpoints_nn(const Vec& s) {
    if (!is_valid_spectrum(s)) throw std::invalid_argument("breakpoints_nn: invalid spectrum");
    const Index m = s.size();
    Vec b(m + 1);
    double tail = 0.0;
    b[m] = 0.0;
    for (Index j = m; j >= 1; --j) {
        b[j - 1] = static_cast<double>(j) * s[j - 1] * s[j - 1] + tail;
        tail += s[j - 1] * s[j - 1];
    }
    return Breakpoints{std::move(b), false, 0};
}

inline Breakpoints breakpoints_nn(const SvdFactors& f) { return breakpoints_nn(f.s); }

/// b_j = (sigma_j/w_j)^2 * sum_{i<=j} w_i^2 + sum_{i>j} sigma_i^2, trailing 0.
/// Weights must be strictly positive; zero-weight prefixes are handled by the
/// truncation rewrite before reaching here.
inline Breakpoints breakpoints_wnn(const Vec& s, const Vec& w) {
    if (!is_valid_spectrum(s)) throw std::invalid_argument("breakpoints_wnn: invalid spectrum");
    require_weights(w);
    if (w.size() != s.size()) throw std::invalid_argument("breakpoints_wnn: weight length must equal the spectrum length");
    if (w[0] <= 0.0) throw std::invalid_argument("breakpoints_wnn: weights must be strictly positive");
    const Index m = s.size();
    Vec b(m + 1);
    b[m] = 0.0;
    std::vector<double> tail(m + 1, 0.0);
    for (Index j = m; j >= 1; --j) tail[j - 1] = tail[j] + s[j - 1] * s[j - 1];
    double wsum = 0.0;
    for (Index j = 1; j <= m; ++j) {
        wsum += w[j - 1] * w[j - 1];
        const double ratio = s[j - 1] / w[j - 1];
        b[j - 1] = ratio * ratio * wsum + tail[j];
    }
    return Breakpoints{std::move(b), true, 0};
}

inline Breakpoints breakpoints_wnn(const SvdFactors& f, const Vec& w) { return breakpoints_wnn(f.s, w); }

namespace detail {

/// Locates k with b_{k+1} < eta <= b_k over the non-increasing knot sequence
/// (1-based k; ties resolve to the last knot still >= eta so the gap below is
/// strict). Requires 0 < eta < b_1.
inline int locate_knot(const Vec& b, double eta) {
    const Index m = b.size() - 1;
    // first index j (0-based) with b[j] < eta; the knot count is j.
    Index lo = 1, hi = m; // b[0] >= eta is guaranteed by the caller's bound check
    while (lo < hi) {
        const Index mid = (lo + hi) / 2;
        if (b[mid] < eta)
            hi = mid;
        else
            lo = mid + 1;
    }
    return static_cast<int>(lo);
}

inline void check_eta(double eta, double energy) {
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
    if (eta >= energy)
        throw TrivialRegimeError("eta >= |Y|_F^2: the constrained minimizer is the zero matrix");
}

} // namespace detail

/// Closed-form threshold with residual energy exactly eta under soft
/// thresholding: lam = sqrt((eta - sum_{i>k} sigma_i^2)/k).
inline DpSolution fit_lambda_nn(const Vec& s, double eta) {
    if (!is_valid_spectrum(s)) throw std::invalid_argument("fit_lambda_nn: invalid spectrum");
    const double energy = s.squaredNorm();
    detail::check_eta(eta, energy);
    Breakpoints bp = breakpoints_nn(s);
    const int k = detail::locate_knot(bp.b, eta);
    double tail = 0.0;
    for (Index i = k; i < s.size(); ++i) tail += s[i] * s[i];
    const double lam = std::sqrt((eta - tail) / static_cast<double>(k));
    return DpSolution{lam, k, eta, phi(s, lam), false, Mat{}};
}

/// Weighted counterpart: lam = sqrt((eta - sum_{i>k} sigma_i^2)/sum_{i<=k} w_i^2).
inline DpSolution fit_lambda_wnn(const Vec& s, const Vec& w, double eta) {
    if (!is_valid_spectrum(s)) throw std::invalid_argument("fit_lambda_wnn: invalid spectrum");
    const double energy = s.squaredNorm();
    detail::check_eta(eta, energy);
    Breakpoints bp = breakpoints_wnn(s, w);
    const int k = detail::locate_knot(bp.b, eta);
    double tail = 0.0;
    for (Index i = k; i < s.size(); ++i) tail += s[i] * s[i];
    double wsum = 0.0;
    for (Index i = 0; i < k; ++i) wsum += w[i] * w[i];
    const double lam = std::sqrt((eta - tail) / wsum);
    return DpSolution{lam, k, eta, psi(s, w, lam), false, Mat{}};
}

inline DpSolution solve_lambda_nn(const SvdFactors& f, double eta) {
    DpSolution sol = fit_lambda_nn(f.s, eta);
    sol.x_hat = svt(f, sol.lam);
    return sol;
}

inline DpSolution solve_lambda_wnn(const SvdFactors& f, const Vec& w, double eta) {
    DpSolution sol = fit_lambda_wnn(f.s, w, eta);
    sol.x_hat = wsvt(f, w, sol.lam);
    return sol;
}

/// Residual bound for zero-mean Gaussian noise of deviation tau: c*m*n*tau^2.
inline double eta_bound(Index m, Index n, double tau, double c = 1.0) {
    if (m < 1 || n < 1) throw std::invalid_argument("eta_bound: dimensions must be positive");
    if (!(tau > 0.0)) throw std::invalid_argument("eta_bound: tau must be positive");
    if (!(c > 0.0)) throw std::invalid_argument("eta_bound: c must be positive");
    return c * static_cast<double>(m) * static_cast<double>(n) * tau * tau;
}

namespace detail {

/// Gavish–Donoho style hard threshold for a known noise level.
inline double hardt_threshold_known(double tau, Index n) {
    return (4.0 / std::sqrt(3.0)) * std::sqrt(static_cast<double>(n)) * tau;
}

/// Recovery with a weighted penalty whose weights may carry a zero prefix:
/// the zero-weight part of the spectrum passes through untouched and the
/// positive-weight tail is solved as a weighted problem on its own.
inline DpSolution recover_weighted(const SvdFactors& f, const Vec& w, double eta) {
    Index r = 0;
    while (r < w.size() && w[r] == 0.0) ++r;
    if (r == 0) return solve_lambda_wnn(f, w, eta);
    if (r >= w.size()) throw std::invalid_argument("recover: weight vector is identically zero");

    const Vec s_tail = f.s.tail(f.s.size() - r);
    const Vec w_tail = w.tail(w.size() - r);
    const double tail_energy = s_tail.squaredNorm();
    Vec vals = f.s;
    if (tail_energy <= eta) {
        // the shifted problem is in the trivial regime; keep only the head
        vals.tail(vals.size() - r).setZero();
        return DpSolution{0.0, 0, eta, tail_energy, true, f.reconstruct(vals)};
    }
    DpSolution fit = fit_lambda_wnn(s_tail, w_tail, eta);
    for (Index i = r; i < vals.size(); ++i) vals[i] = std::max(f.s[i] - fit.lam * w[i], 0.0);
    return DpSolution{fit.lam, fit.k, eta, fit.residual_sq, false, f.reconstruct(vals)};
}

/// Dispatch on a precomputed factorization; assumes |Y|_F^2 > eta.
inline DpSolution recover_factors(const SvdFactors& f, const Regularizer& reg, double eta) {
    reg.validate(f.s.size());
    switch (reg.kind) {
        case Penalty::NN:
            return solve_lambda_nn(f, eta);
        case Penalty::TNN: {
            // shift: keep the top r exactly, solve the plain problem on the tail
            const Vec s_tail = f.s.tail(f.s.size() - reg.r);
            const double tail_energy = s_tail.squaredNorm();
            Vec vals = f.s;
            if (tail_energy <= eta) {
                vals.tail(vals.size() - reg.r).setZero();
                return DpSolution{0.0, 0, eta, tail_energy, true, f.reconstruct(vals)};
            }
            DpSolution fit = fit_lambda_nn(s_tail, eta);
            for (Index i = reg.r; i < vals.size(); ++i) vals[i] = std::max(f.s[i] - fit.lam, 0.0);
            return DpSolution{fit.lam, fit.k, eta, fit.residual_sq, false, f.reconstruct(vals)};
        }
        case Penalty::GWNN: {
            const Vec w = weights_gwnn(f.s, reg.p, reg.eps);
            return recover_weighted(f, w, eta);
        }
        case Penalty::Rank: {
            // no closed-form fit exists for the rank penalty; invert the bound
            // model eta = m*n*tau^2 and apply the known-noise hard threshold.
            const double tau = std::sqrt(eta / (static_cast<double>(f.rows) * static_cast<double>(f.cols)));
            const double cut = hardt_threshold_known(tau, std::max(f.rows, f.cols));
            Vec vals(f.s.size());
            int kept = 0;
            double resid = 0.0;
            for (Index i = 0; i < f.s.size(); ++i) {
                if (f.s[i] > cut) {
                    vals[i] = f.s[i];
                    ++kept;
                } else {
                    vals[i] = 0.0;
                    resid += f.s[i] * f.s[i];
                }
            }
            return DpSolution{cut, kept, eta, resid, false, f.reconstruct(vals)};
        }
    }
    throw std::logic_error("recover: unknown penalty");
}

} // namespace detail

/// Full recovery: returns the zero matrix when the bound already covers the
/// observation energy, otherwise factorizes once and dispatches on the penalty.
inline DpSolution recover(const Mat& y, const Regularizer& reg, double eta) {
    require_finite(y, "recover input");
    if (!(eta > 0.0)) throw std::invalid_argument("recover: eta must be positive");
    const double energy = frobenius_sq(y);
    if (energy <= eta)
        return DpSolution{0.0, 0, eta, energy, true, Mat::Zero(y.rows(), y.cols())};
    return detail::recover_factors(svd(y), reg, eta);
}

/// Median-rule noise estimate: single-level Haar transform, median of the
/// |HH| quadrant divided by 0.6745. Odd dimensions are edge-replicated.
inline double estimate_noise_median(const Mat& y) {
    require_finite(y, "estimate_noise_median input");
    if (y.rows() < 2 || y.cols() < 2)
        throw std::invalid_argument("estimate_noise_median: needs at least 2 rows and 2 columns");
    const Index rows = y.rows() + (y.rows() % 2);
    const Index cols = y.cols() + (y.cols() % 2);
    auto at = [&](Index i, Index j) {
        return y(std::min(i, y.rows() - 1), std::min(j, y.cols() - 1));
    };
    std::vector<double> hh;
    hh.reserve(static_cast<size_t>((rows / 2) * (cols / 2)));
    for (Index i = 0; i < rows; i += 2)
        for (Index j = 0; j < cols; j += 2) {
            const double d = (at(i, j) - at(i, j + 1) - at(i + 1, j) + at(i + 1, j + 1)) / 2.0;
            hh.push_back(std::abs(d));
        }
    const size_t mid = hh.size() / 2;
    std::nth_element(hh.begin(), hh.begin() + mid, hh.end());
    double med = hh[mid];
    if (hh.size() % 2 == 0) {
        const double lower = *std::max_element(hh.begin(), hh.begin() + mid);
        med = 0.5 * (med + lower);
    }
    return med / 0.6745;
}

} // namespace lrdp
