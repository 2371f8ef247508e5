#pragma once

#include "cldnn/dnn.hpp"

#include <stdexcept>

namespace cldnn {

class GainDefinitenessError : public std::runtime_error {
public:
    explicit GainDefinitenessError(const std::string& what) : std::runtime_error(what) {}
};

/// Time-varying least-squares adaptation gain Gamma, stored through its
/// inverse. Gamma_inv' = -beta*Gamma_inv + gamma1*gram while the eigenvalues
/// of Gamma stay inside (eig_min_gate, eig_max_gate); frozen otherwise.
class LsGain {
public:
    LsGain() = default;
    LsGain(int rho, double gamma0, double beta, double eig_min_gate = 1e-3,
           double eig_max_gate = 1e3)
        : gamma_inv_(Matrix::Identity(rho, rho) / gamma0), beta_(beta),
          eig_min_gate_(eig_min_gate), eig_max_gate_(eig_max_gate) {
        if (gamma0 <= 0.0) throw std::invalid_argument("Gamma(0) must be positive");
    }

    const Matrix& gamma_inv() const { return gamma_inv_; }
    double beta() const { return beta_; }
    double eig_min_gate() const { return eig_min_gate_; }
    double eig_max_gate() const { return eig_max_gate_; }

    /// Extreme eigenvalues of Gamma (not of the stored inverse).
    std::pair<double, double> gamma_eigen_range() const;

    /// Gamma * v via an SPD solve on the stored inverse.
    Vector apply(const Vector& v) const;

    /// One RK4 step of the inverse-gain dynamics with the gram held.
    /// Holds (no-op) when an eigenvalue gate is active. Throws if the
    /// inverse stops being positive definite.
    void step(const Matrix& gram, double gamma1, double dt);

private:
    Matrix gamma_inv_;
    double beta_ = 0.0;
    double eig_min_gate_ = 1e-3;
    double eig_max_gate_ = 1e3;
};

}  // namespace cldnn
