#ifndef FLOWSIM_ESTIMATION_HPP
#define FLOWSIM_ESTIMATION_HPP

#include <stdexcept>

#include "flowsim/types.hpp"

namespace flowsim {

class SingularInnovation : public std::runtime_error {
  public:
    SingularInnovation() : std::runtime_error("kalman_gain: innovation matrix is singular") {}
};

/// K = P' H^T (H P' H^T + R)^-1, closed-form 2x2 inversion with a
/// determinant floor of 1e-12. Throws SingularInnovation below the floor.
Matrix2 kalman_gain(const Matrix2& p_prior, const Matrix2& h, const Matrix2& r);

/// Own-velocity lookahead used by the predictive law: v + a*dt.
double predict_own_velocity(double v, double a, double dt);

/// Linear constant-acceleration tracker for one vehicle pair's relative
/// state. The transition model is the same kinematic update the simulator
/// integrates with, so a prediction fed the actually-applied relative
/// acceleration reproduces the next true state exactly.
///
///   F = [[1, dt], [0, 1]]   B = [dt^2/2, dt]^T   H = I
///
/// The cycle runs in the standard predict -> gain -> update order; the gain
/// that corrects a measurement is computed from the covariance propagated to
/// that measurement's time.
class PairFilter {
  public:
    PairFilter(double dt, const Matrix2& q, const Matrix2& r, const Matrix2& p0);

    /// x_hat = F x_tilde + B a_rel; stored as the pending prediction.
    StateVector2 predict_state(double a_rel);

    /// P' = F P F^T + Q. Throws std::domain_error if the result is not PSD
    /// (only possible with an invalid Q).
    Matrix2 propagate_covariance();

    /// x_tilde = x_hat + K (measurement - H x_hat), using the pending
    /// prediction and the current gain.
    StateVector2 best_estimate(const StateVector2& measurement);

    /// P = (I - K H) P', symmetrized before storing.
    Matrix2 update_covariance();

    /// One full cycle against a measurement. `a_rel` is the relative
    /// acceleration in effect over the interval that ends at this
    /// measurement. The first call bootstraps: estimate := measurement,
    /// P := P0. Returns the new estimate.
    StateVector2 filter_tick(const StateVector2& measurement, double a_rel);

    /// One-step lookahead from the current estimate: F x_tilde + B a_rel.
    /// Does not disturb the filter state.
    StateVector2 lookahead(double a_rel) const;

    bool bootstrapped() const { return bootstrapped_; }
    const StateVector2& estimate() const { return estimate_; }
    const StateVector2& prediction() const { return prediction_; }
    const Matrix2& covariance() const { return covariance_; }
    const Matrix2& gain() const { return gain_; }
    const Matrix2& transition() const { return f_; }
    double dt() const { return dt_; }

    // Test seams: preload a specific filter state.
    void set_estimate(const StateVector2& x) { estimate_ = x; bootstrapped_ = true; }
    void set_covariance(const Matrix2& p) { covariance_ = p; }
    void set_gain(const Matrix2& k) { gain_ = k; }
    void set_prediction(const StateVector2& x) { prediction_ = x; }

  private:
    double dt_;
    Matrix2 f_;
    StateVector2 b_;
    Matrix2 h_ = Matrix2::identity();
    Matrix2 q_;
    Matrix2 r_;
    Matrix2 p0_;

    bool bootstrapped_ = false;
    StateVector2 estimate_{};
    StateVector2 prediction_{};
    Matrix2 covariance_;
    Matrix2 prior_;
    Matrix2 gain_ = Matrix2::zero();
};

}  // namespace flowsim

#endif  // FLOWSIM_ESTIMATION_HPP
