#pragma once

#include "cldnn/dnn.hpp"

#include <deque>
#include <optional>
#include <stdexcept>
#include <vector>

namespace cldnn {

class StackGatingError : public std::runtime_error {
public:
    explicit StackGatingError(const std::string& what) : std::runtime_error(what) {}
};

/// One recorded excitation sample. In regression mode `target` is the
/// measured output y_i; in control mode it is the applied input u_i and
/// `observer_output` holds the state-derivative estimate at record time.
struct StackSample {
    Vector input;            // x_i (regression) or X_i = [x; xdot] (control)
    Vector target;           // y_i or u_i
    Vector observer_output;  // Delta_hat_i (control mode only)
    double time = 0.0;       // t_i [s]
};

enum class StackMode { Regression, Control };

/// Sliding window of the most recent samples. Only raw data is stored;
/// regressors are recomputed from the current parameter estimate at every
/// use. The window exposed to update laws is a snapshot refreshed every
/// `refresh_every` records.
class HistoryStack {
public:
    HistoryStack() = default;
    HistoryStack(int capacity, int refresh_every, StackMode mode,
                 double settling_time = 0.0)
        : capacity_(capacity), refresh_every_(refresh_every), mode_(mode),
          settling_time_(settling_time) {
        if (capacity <= 0) throw std::invalid_argument("stack capacity must be positive");
        if (refresh_every <= 0) throw std::invalid_argument("refresh_every must be positive");
    }

    StackMode mode() const { return mode_; }
    int capacity() const { return capacity_; }
    std::size_t size() const { return samples_.size(); }
    double settling_time() const { return settling_time_; }

    /// Appends a sample, evicting the oldest when full. Control-mode
    /// samples timestamped before the settling time are rejected. Returns
    /// true when this record triggered a snapshot refresh.
    bool record(const StackSample& sample);

    /// The snapshot the update laws see (refreshed every refresh_every
    /// records).
    const std::vector<StackSample>& active() const { return active_; }

    /// All buffered samples, oldest first.
    const std::deque<StackSample>& samples() const { return samples_; }

    /// CSV rows (t, input..., target...) of the buffered samples.
    std::string to_csv() const;

private:
    int capacity_ = 200;
    int refresh_every_ = 5;
    StackMode mode_ = StackMode::Regression;
    double settling_time_ = 0.0;
    int records_since_refresh_ = 0;
    std::deque<StackSample> samples_;
    std::vector<StackSample> active_;
};

/// Sum over the stack snapshot of Phi'^T(x_i, theta_hat) Phi'(x_i, theta_hat),
/// evaluated fresh at the supplied estimate. Empty stack yields the zero
/// matrix.
Matrix regressor_gram(const HistoryStack& stack, const DnnModel& model, const Vector& theta_hat);

struct FeDiagnostic {
    double lambda_min = 0.0;
    bool satisfied = false;
};

/// Minimum eigenvalue of a regressor Gram matrix against the finite
/// excitation threshold lambda_e.
FeDiagnostic fe_diagnostic(const Matrix& gram, double lambda_e);

struct IdentifiabilityReport {
    int rank = 0;
    bool identifiable = false;
};

/// Numerical rank of the stacked Jacobian [Phi'(x_1)..; Phi'(x_p)] via
/// singular values; identifiable when the rank reaches rho.
IdentifiabilityReport identifiability_rank(const std::vector<Vector>& points,
                                           const DnnModel& model, const Vector& theta);

}  // namespace cldnn
