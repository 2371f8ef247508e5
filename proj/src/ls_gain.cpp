#include "cldnn/ls_gain.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace cldnn {

std::pair<double, double> LsGain::gamma_eigen_range() const {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gamma_inv_, Eigen::EigenvaluesOnly);
    const double inv_min = eig.eigenvalues().minCoeff();
    const double inv_max = eig.eigenvalues().maxCoeff();
    if (inv_min <= 0.0)
        throw GainDefinitenessError("Gamma inverse lost positive definiteness (lambda_min = " +
                                    std::to_string(inv_min) + "); eigenvalue gates mis-set");
    return {1.0 / inv_max, 1.0 / inv_min};  // lambda_min(Gamma), lambda_max(Gamma)
}

Vector LsGain::apply(const Vector& v) const {
    Eigen::LLT<Matrix> llt(gamma_inv_);
    if (llt.info() != Eigen::Success)
        throw GainDefinitenessError("Gamma inverse is not positive definite");
    return llt.solve(v);
}

void LsGain::step(const Matrix& gram, double gamma1, double dt) {
    gamma_eigen_range();  // throws if the current state lost definiteness

    // Gamma_inv' = -beta*Gamma_inv + gamma1*gram; gram held over the step,
    // so the stage derivatives are affine in Gamma_inv.
    auto deriv = [&](const Matrix& gi) { return Matrix(-beta_ * gi + gamma1 * gram); };
    const Matrix k1 = deriv(gamma_inv_);
    const Matrix k2 = deriv(gamma_inv_ + 0.5 * dt * k1);
    const Matrix k3 = deriv(gamma_inv_ + 0.5 * dt * k2);
    const Matrix k4 = deriv(gamma_inv_ + dt * k3);
    Matrix candidate = gamma_inv_ + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    candidate = 0.5 * (candidate + candidate.transpose()).eval();

    // Gate check on the post-step state: a step that would push an eigenvalue
    // of Gamma outside the gates is discarded, so the gates are never crossed.
    Eigen::SelfAdjointEigenSolver<Matrix> eig(candidate, Eigen::EigenvaluesOnly);
    const double inv_min = eig.eigenvalues().minCoeff();
    const double inv_max = eig.eigenvalues().maxCoeff();
    if (inv_min <= 0.0)
        throw GainDefinitenessError("Gamma inverse lost positive definiteness during a step");
    if (1.0 / inv_max < eig_min_gate_ || 1.0 / inv_min > eig_max_gate_) return;  // hold
    gamma_inv_ = std::move(candidate);
}

}  // namespace cldnn
