#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace lrdp {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Index = Eigen::Index;

/// Throws std::invalid_argument if `y` is empty or has NaN/Inf entries.
inline void require_finite(const Mat& y, const char* what = "matrix") {
    if (y.rows() == 0 || y.cols() == 0)
        throw std::invalid_argument(std::string(what) + " must be non-empty");
    if (!y.allFinite())
        throw std::invalid_argument(std::string(what) + " has non-finite entries");
}

/// Sum of squared entries.
inline double frobenius_sq(const Mat& y) { return y.squaredNorm(); }

/// True if `s` is sorted non-increasing with non-negative entries.
inline bool is_valid_spectrum(const Vec& s) {
    for (Index i = 0; i < s.size(); ++i) {
        if (!(s[i] >= 0.0)) return false;
        if (i + 1 < s.size() && s[i] < s[i + 1]) return false;
    }
    return s.size() > 0;
}

} // namespace lrdp
