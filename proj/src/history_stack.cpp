#include "cldnn/history_stack.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <limits>
#include <sstream>

namespace cldnn {

bool HistoryStack::record(const StackSample& sample) {
    if (mode_ == StackMode::Control && sample.time < settling_time_) {
        throw StackGatingError("control-mode sample at t = " + std::to_string(sample.time) +
                               " precedes settling time t_Delta = " +
                               std::to_string(settling_time_));
    }
    samples_.push_back(sample);
    if (samples_.size() > static_cast<std::size_t>(capacity_)) samples_.pop_front();
    if (++records_since_refresh_ >= refresh_every_) {
        records_since_refresh_ = 0;
        active_.assign(samples_.begin(), samples_.end());
        return true;
    }
    return false;
}

std::string HistoryStack::to_csv() const {
    std::ostringstream out;
    out.precision(std::numeric_limits<double>::max_digits10);
    for (const auto& s : samples_) {
        out << s.time;
        for (Eigen::Index i = 0; i < s.input.size(); ++i) out << ',' << s.input(i);
        for (Eigen::Index i = 0; i < s.target.size(); ++i) out << ',' << s.target(i);
        out << '\n';
    }
    return out.str();
}

Matrix regressor_gram(const HistoryStack& stack, const DnnModel& model, const Vector& theta_hat) {
    const int rho = model.parameter_count();
    Matrix gram = Matrix::Zero(rho, rho);
    for (const auto& s : stack.active()) {
        const Matrix jac = jacobian(model, s.input, theta_hat);
        gram.selfadjointView<Eigen::Lower>().rankUpdate(jac.transpose());
    }
    gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
    return gram;
}

FeDiagnostic fe_diagnostic(const Matrix& gram, double lambda_e) {
    if (gram.rows() != gram.cols()) throw DimensionError("gram must be square");
    const double asym = (gram - gram.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(1.0, gram.cwiseAbs().maxCoeff()))
        throw DimensionError("gram is not symmetric (max asymmetry " + std::to_string(asym) + ")");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    FeDiagnostic diag;
    diag.lambda_min = eig.eigenvalues().minCoeff();
    diag.satisfied = diag.lambda_min >= lambda_e;
    return diag;
}

IdentifiabilityReport identifiability_rank(const std::vector<Vector>& points,
                                           const DnnModel& model, const Vector& theta) {
    if (points.empty()) throw std::invalid_argument("need at least one point");
    const int rho = model.parameter_count();
    const int n = model.output_dim();
    Matrix stacked(static_cast<Eigen::Index>(points.size()) * n, rho);
    for (std::size_t i = 0; i < points.size(); ++i)
        stacked.middleRows(static_cast<Eigen::Index>(i) * n, n) = jacobian(model, points[i], theta);
    Eigen::JacobiSVD<Matrix> svd(stacked);
    const auto& sv = svd.singularValues();
    const double tol = rho * std::numeric_limits<double>::epsilon() * sv(0);
    IdentifiabilityReport report;
    report.rank = static_cast<int>((sv.array() > tol).count());
    report.identifiable = report.rank == rho;
    return report;
}

}  // namespace cldnn
