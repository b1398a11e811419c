#pragma once

#include "discrepancy.hpp"
#include "range_finder.hpp"

namespace lrdp {

/// Projection of the observation onto a column basis, with the energy `a`
/// lost by the projection and the correspondingly tightened bound.
struct ReducedProblem {
    Mat y_proj;
    RangeBasis basis;
    double a = 0.0;
    double eta_hat = 0.0;

    bool feasible() const { return eta_hat > 0.0; }
};

/// y_proj = Y*Q, a = |Y|_F^2 - |Y*Q|_F^2, eta_hat = eta - a. An infeasible
/// result (eta_hat <= 0) means the basis discards more energy than the bound
/// allows and ell has to grow.
inline ReducedProblem reduce(const Mat& y, const RangeBasis& basis, double eta) {
    require_finite(y, "reduce input");
    if (basis.q.rows() != y.cols())
        throw std::invalid_argument("reduce: basis row count must equal the observation's column count");
    if (!(eta > 0.0)) throw std::invalid_argument("reduce: eta must be positive");
    Mat y_proj = y * basis.q;
    const double a = frobenius_sq(y) - frobenius_sq(y_proj);
    return ReducedProblem{std::move(y_proj), basis, a, eta - a};
}

/// Randomized recovery: build a basis for the dominant right singular
/// subspace, solve the reduced problem under the tightened bound, and lift
/// the solution back with X = A * Q^T.
inline DpSolution recover_reduced(const Mat& y, const Regularizer& reg, double eta,
                                  int ell, int power_iters, std::uint64_t seed) {
    require_finite(y, "recover_reduced input");
    if (!(eta > 0.0)) throw std::invalid_argument("recover_reduced: eta must be positive");
    const double energy = frobenius_sq(y);
    if (energy <= eta)
        return DpSolution{0.0, 0, eta, energy, true, Mat::Zero(y.rows(), y.cols())};

    RangeBasis basis = range_finder(y, ell, power_iters, seed);
    ReducedProblem rp = reduce(y, basis, eta);
    if (!rp.feasible())
        throw std::domain_error("recover_reduced: projection discards more energy than the bound allows; increase ell");

    DpSolution inner = recover(rp.y_proj, reg, rp.eta_hat);
    DpSolution sol;
    sol.lam = inner.lam;
    sol.k = inner.k;
    sol.eta = eta;
    sol.residual_sq = inner.residual_sq + rp.a;
    sol.trivial = inner.trivial;
    sol.x_hat = inner.x_hat * rp.basis.q.transpose();
    return sol;
}

} // namespace lrdp
