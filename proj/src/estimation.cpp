#include "flowsim/estimation.hpp"

namespace flowsim {

Matrix2 kalman_gain(const Matrix2& p_prior, const Matrix2& h, const Matrix2& r) {
    const Matrix2 ht = h.transposed();
    const Matrix2 innovation_cov = h * p_prior * ht + r;
    if (std::abs(innovation_cov.determinant()) < kSingularDetFloor) {
        throw SingularInnovation();
    }
    return p_prior * ht * innovation_cov.inverse();
}

double predict_own_velocity(double v, double a, double dt) { return v + a * dt; }

PairFilter::PairFilter(double dt, const Matrix2& q, const Matrix2& r, const Matrix2& p0)
    : dt_(dt),
      f_{1.0, dt, 0.0, 1.0},
      b_{dt * dt / 2.0, dt},
      q_(q),
      r_(r),
      p0_(p0),
      covariance_(p0) {}

StateVector2 PairFilter::predict_state(double a_rel) {
    prediction_ = f_ * estimate_ + b_ * a_rel;
    return prediction_;
}

Matrix2 PairFilter::propagate_covariance() {
    prior_ = (f_ * covariance_ * f_.transposed() + q_).symmetrized();
    if (!prior_.is_valid_covariance(1e-9)) {
        throw std::domain_error("propagate_covariance: prior is not PSD (check Q)");
    }
    return prior_;
}

StateVector2 PairFilter::best_estimate(const StateVector2& measurement) {
    const StateVector2 innovation = measurement - h_ * prediction_;
    estimate_ = prediction_ + gain_ * innovation;
    return estimate_;
}

Matrix2 PairFilter::update_covariance() {
    covariance_ = ((Matrix2::identity() - gain_ * h_) * prior_).symmetrized();
    return covariance_;
}

StateVector2 PairFilter::filter_tick(const StateVector2& measurement, double a_rel) {
    if (!bootstrapped_) {
        // No prior prediction exists at the first tick.
        estimate_ = measurement;
        prediction_ = measurement;
        covariance_ = p0_;
        bootstrapped_ = true;
        return estimate_;
    }
    predict_state(a_rel);
    propagate_covariance();
    gain_ = kalman_gain(prior_, h_, r_);
    best_estimate(measurement);
    update_covariance();
    return estimate_;
}

StateVector2 PairFilter::lookahead(double a_rel) const {
    return f_ * estimate_ + b_ * a_rel;
}

}  // namespace flowsim
