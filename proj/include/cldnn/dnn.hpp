#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cldnn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Pointwise activation applied to all but the trailing bias entry of a
/// layer. Identity is meant for small test nets where the Jacobian has a
/// closed form by inspection.
enum class ActivationKind { Tanh, Swish, Identity };

double activation_value(ActivationKind kind, double z);
double activation_derivative(ActivationKind kind, double z);

const char* activation_name(ActivationKind kind);
ActivationKind activation_from_name(const std::string& name);

class DimensionError : public std::runtime_error {
public:
    explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

/// Feedforward net description. Layer width L0 = input_dim + 1 (augmented
/// input [x; 1]); hidden widths include the trailing bias slot whose
/// activation is pinned to 1. Weight matrix j has shape L_j x L_{j+1}.
struct DnnModel {
    int input_dim = 0;                    // m
    std::vector<int> layer_widths;        // L1 .. L_{k+1}
    ActivationKind activation = ActivationKind::Tanh;

    int hidden_layers() const { return static_cast<int>(layer_widths.size()) - 1; }
    int output_dim() const { return layer_widths.back(); }

    // L_j for j = 0..k+1
    int width(int j) const {
        return j == 0 ? input_dim + 1 : layer_widths[static_cast<std::size_t>(j - 1)];
    }

    int weight_rows(int j) const { return width(j); }
    int weight_cols(int j) const { return width(j + 1); }

    /// Total parameter count rho = sum_j L_j * L_{j+1}.
    int parameter_count() const {
        int rho = 0;
        for (int j = 0; j <= hidden_layers(); ++j) rho += weight_rows(j) * weight_cols(j);
        return rho;
    }

    void validate() const;
};

/// Convenience: k hidden layers of `neurons` units each (plus the bias
/// slot), output dimension n.
DnnModel make_model(int input_dim, int hidden_layers, int neurons, int output_dim,
                    ActivationKind activation = ActivationKind::Tanh);

/// Column-major stacking of the per-layer weight matrices into one vector.
Vector flatten(const std::vector<Matrix>& layers);

/// Inverse of flatten for the layout implied by `model`.
std::vector<Matrix> unflatten(const Vector& theta, const DnnModel& model);

/// Net output Phi_k via the recursion Phi_0 = v0^T X_a,
/// Phi_j = vj^T phi_j(Phi_{j-1}).
Vector forward(const DnnModel& model, const Vector& x, const Vector& theta);

/// Closed-form parameter Jacobian, shape n x rho, blocks ordered to match
/// the flattened layout. The trailing bias entry of each activation vector
/// contributes a zero derivative row.
Matrix jacobian(const DnnModel& model, const Vector& x, const Vector& theta);

}  // namespace cldnn
