#pragma once

#include "matrix.hpp"

#include <Eigen/QR>

#include <cstdint>
#include <random>

namespace lrdp {

/// Orthonormal basis q (cols x ell) approximating the dominant right
/// singular subspace of the matrix it was built from.
struct RangeBasis {
    Mat q;
    int ell = 0;
    int power_iters = 0;
};

namespace detail {

inline Mat thin_q(const Mat& z, Index ell) {
    Eigen::HouseholderQR<Mat> qr(z);
    return qr.householderQ() * Mat::Identity(z.rows(), ell);
}

} // namespace detail

/// Randomized range finder for the row space: Gaussian sketch of Y^T,
/// orthonormalized by QR, refined by `power_iters` rounds of (Y^T Y) with
/// re-orthonormalization. Deterministic for a fixed seed.
inline RangeBasis range_finder(const Mat& y, int ell, int power_iters, std::uint64_t seed) {
    require_finite(y, "range_finder input");
    const Index m = y.rows(), n = y.cols();
    if (ell < 1 || ell > std::min(m, n))
        throw std::invalid_argument("range_finder: ell must be in [1, min(rows, cols)]");
    if (power_iters < 0)
        throw std::invalid_argument("range_finder: power_iters must be non-negative");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat omega(m, ell);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < ell; ++j) omega(i, j) = gauss(rng);

    Mat q = detail::thin_q(y.transpose() * omega, ell);
    for (int it = 0; it < power_iters; ++it)
        q = detail::thin_q(y.transpose() * (y * q), ell);
    return RangeBasis{std::move(q), ell, power_iters};
}

} // namespace lrdp
