#include "cldnn/dnn.hpp"

#include <cmath>

namespace cldnn {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Activation applied to the leading L_j - 1 entries of a pre-activation
// vector; the trailing entry is replaced by the constant 1.
Vector activate(ActivationKind kind, const Vector& pre) {
    Vector out(pre.size());
    for (Eigen::Index i = 0; i + 1 < pre.size(); ++i) out(i) = activation_value(kind, pre(i));
    out(pre.size() - 1) = 1.0;
    return out;
}

}  // namespace

double activation_value(ActivationKind kind, double z) {
    switch (kind) {
        case ActivationKind::Tanh: return std::tanh(z);
        case ActivationKind::Swish: return z * sigmoid(z);
        case ActivationKind::Identity: return z;
    }
    return 0.0;
}

double activation_derivative(ActivationKind kind, double z) {
    switch (kind) {
        case ActivationKind::Tanh: {
            const double t = std::tanh(z);
            return 1.0 - t * t;
        }
        case ActivationKind::Swish: {
            const double s = sigmoid(z);
            return s + z * s * (1.0 - s);
        }
        case ActivationKind::Identity: return 1.0;
    }
    return 0.0;
}

const char* activation_name(ActivationKind kind) {
    switch (kind) {
        case ActivationKind::Tanh: return "tanh";
        case ActivationKind::Swish: return "swish";
        case ActivationKind::Identity: return "identity";
    }
    return "?";
}

ActivationKind activation_from_name(const std::string& name) {
    if (name == "tanh") return ActivationKind::Tanh;
    if (name == "swish") return ActivationKind::Swish;
    if (name == "identity") return ActivationKind::Identity;
    throw std::invalid_argument("unknown activation: " + name);
}

void DnnModel::validate() const {
    if (input_dim <= 0) throw DimensionError("input_dim must be positive");
    if (layer_widths.size() < 2) throw DimensionError("need at least one hidden layer plus output");
    for (std::size_t i = 0; i < layer_widths.size(); ++i) {
        if (layer_widths[i] <= 0)
            throw DimensionError("layer width " + std::to_string(i + 1) + " must be positive");
    }
    // Hidden widths need room for the bias slot.
    for (std::size_t i = 0; i + 1 < layer_widths.size(); ++i) {
        if (layer_widths[i] < 2)
            throw DimensionError("hidden layer width " + std::to_string(i + 1) +
                                 " must be at least 2 (one unit plus bias)");
    }
}

DnnModel make_model(int input_dim, int hidden_layers, int neurons, int output_dim,
                    ActivationKind activation) {
    DnnModel m;
    m.input_dim = input_dim;
    m.activation = activation;
    m.layer_widths.assign(static_cast<std::size_t>(hidden_layers), neurons + 1);
    m.layer_widths.push_back(output_dim);
    m.validate();
    return m;
}

Vector flatten(const std::vector<Matrix>& layers) {
    Eigen::Index total = 0;
    for (const auto& v : layers) total += v.size();
    Vector theta(total);
    Eigen::Index at = 0;
    for (const auto& v : layers) {
        theta.segment(at, v.size()) = Eigen::Map<const Vector>(v.data(), v.size());
        at += v.size();
    }
    return theta;
}

std::vector<Matrix> unflatten(const Vector& theta, const DnnModel& model) {
    model.validate();
    if (theta.size() != model.parameter_count())
        throw DimensionError("theta length " + std::to_string(theta.size()) + " != rho " +
                             std::to_string(model.parameter_count()));
    std::vector<Matrix> layers;
    layers.reserve(static_cast<std::size_t>(model.hidden_layers() + 1));
    Eigen::Index at = 0;
    for (int j = 0; j <= model.hidden_layers(); ++j) {
        const int rows = model.weight_rows(j);
        const int cols = model.weight_cols(j);
        layers.emplace_back(Eigen::Map<const Matrix>(theta.data() + at, rows, cols));
        at += static_cast<Eigen::Index>(rows) * cols;
    }
    return layers;
}

Vector forward(const DnnModel& model, const Vector& x, const Vector& theta) {
    if (x.size() != model.input_dim)
        throw DimensionError("input length " + std::to_string(x.size()) + " != input_dim " +
                             std::to_string(model.input_dim));
    const auto layers = unflatten(theta, model);
    Vector xa(x.size() + 1);
    xa << x, 1.0;
    Vector phi = layers[0].transpose() * xa;  // Phi_0
    for (int j = 1; j <= model.hidden_layers(); ++j) {
        phi = layers[static_cast<std::size_t>(j)].transpose() * activate(model.activation, phi);
    }
    return phi;
}

Matrix jacobian(const DnnModel& model, const Vector& x, const Vector& theta) {
    if (x.size() != model.input_dim)
        throw DimensionError("input length " + std::to_string(x.size()) + " != input_dim " +
                             std::to_string(model.input_dim));
    const auto layers = unflatten(theta, model);
    const int k = model.hidden_layers();
    const int n = model.output_dim();

    Vector xa(x.size() + 1);
    xa << x, 1.0;

    // Forward pass keeping each layer's pre-activation and activation.
    std::vector<Vector> pre(static_cast<std::size_t>(k + 1));   // Phi_0 .. Phi_k
    std::vector<Vector> act(static_cast<std::size_t>(k + 1));   // phi_j(Phi_{j-1}), index j >= 1
    pre[0] = layers[0].transpose() * xa;
    for (int j = 1; j <= k; ++j) {
        act[static_cast<std::size_t>(j)] = activate(model.activation, pre[static_cast<std::size_t>(j - 1)]);
        pre[static_cast<std::size_t>(j)] =
            layers[static_cast<std::size_t>(j)].transpose() * act[static_cast<std::size_t>(j)];
    }

    Matrix jac(n, model.parameter_count());

    // Right-to-left chain products: start at the output block and fold in
    // v_j^T phi'_j while walking down. The bias row of phi'_j is zero.
    Matrix chain = Matrix::Identity(n, n);
    Eigen::Index col_end = jac.cols();
    for (int j = k; j >= 0; --j) {
        // Block j = chain * (I_{L_{j+1}} (x) s^T), s = phi_j (or X_a at j=0).
        const Vector& s = (j == 0) ? xa : act[static_cast<std::size_t>(j)];
        const int cols_out = model.weight_cols(j);
        const Eigen::Index block_width = static_cast<Eigen::Index>(s.size()) * cols_out;
        col_end -= block_width;
        for (int c = 0; c < cols_out; ++c) {
            jac.block(0, col_end + static_cast<Eigen::Index>(c) * s.size(), n, s.size()).noalias() =
                chain.col(c) * s.transpose();
        }
        if (j > 0) {
            // chain <- chain * v_j^T * phi'_j, with phi'_j diagonal in the
            // pre-activation of layer j and zero in the bias slot.
            Matrix vt = layers[static_cast<std::size_t>(j)].transpose();  // L_{j+1} x L_j
            const Vector& z = pre[static_cast<std::size_t>(j - 1)];
            for (Eigen::Index i = 0; i + 1 < z.size(); ++i)
                vt.col(i) *= activation_derivative(model.activation, z(i));
            vt.col(z.size() - 1).setZero();
            chain = chain * vt;
        }
    }
    return jac;
}

}  // namespace cldnn
