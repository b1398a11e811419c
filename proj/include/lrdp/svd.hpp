#pragma once

#include "matrix.hpp"

#include <Eigen/SVD>

namespace lrdp {

/// Thin SVD of an observation: u is rows x k, v is cols x k, s holds the
/// k = min(rows, cols) singular values sorted non-increasing.
struct SvdFactors {
    Index rows = 0;
    Index cols = 0;
    Mat u;
    Vec s;
    Mat v;

    Index spectrum_size() const { return s.size(); }

    /// U diag(vals) V^T, skipping the zero suffix of `vals`.
    Mat reconstruct(const Vec& vals) const {
        Index r = vals.size();
        while (r > 0 && vals[r - 1] <= 0.0) --r;
        if (r == 0) return Mat::Zero(rows, cols);
        return u.leftCols(r) * vals.head(r).asDiagonal() * v.leftCols(r).transpose();
    }
};

inline SvdFactors svd(const Mat& y) {
    require_finite(y, "svd input");
    Eigen::BDCSVD<Mat> dec(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.info() != Eigen::Success)
        throw std::runtime_error("svd did not converge after the backend's internal iteration limit");
    return SvdFactors{y.rows(), y.cols(), dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

} // namespace lrdp
