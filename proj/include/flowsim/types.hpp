#ifndef FLOWSIM_TYPES_HPP
#define FLOWSIM_TYPES_HPP

#include <cmath>
#include <stdexcept>

namespace flowsim {

// Hard comfort limit on commanded acceleration, m/s^2.
inline constexpr double kMaxAcceleration = 3.0;

// Determinant floor below which a 2x2 system is treated as singular.
inline constexpr double kSingularDetFloor = 1e-12;

/// Absolute kinematic state of one vehicle at one tick.
struct VehicleState {
    double position = 0.0;      // m, along-road axis (unbounded, increasing)
    double velocity = 0.0;      // m/s, never negative
    double acceleration = 0.0;  // m/s^2, applied over the current tick
};

/// Relative state of a vehicle pair: front member minus rear member.
struct RelativeState {
    double rel_position = 0.0;  // m, positive while the pair is ordered
    double rel_velocity = 0.0;  // m/s
};

/// Generic two-component state vector [position-like, velocity-like].
/// Used for measurements, predictions and estimates alike.
struct StateVector2 {
    double p = 0.0;
    double v = 0.0;

    StateVector2 operator+(const StateVector2& o) const { return {p + o.p, v + o.v}; }
    StateVector2 operator-(const StateVector2& o) const { return {p - o.p, v - o.v}; }
    StateVector2 operator*(double s) const { return {p * s, v * s}; }
};

inline StateVector2 to_vector(const RelativeState& r) { return {r.rel_position, r.rel_velocity}; }
inline RelativeState to_relative(const StateVector2& x) { return {x.p, x.v}; }

/// Fixed-size 2x2 real matrix, row-major.
struct Matrix2 {
    double m00 = 0.0, m01 = 0.0;
    double m10 = 0.0, m11 = 0.0;

    static Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Matrix2 zero() { return {}; }
    static Matrix2 diagonal(double d0, double d1) { return {d0, 0.0, 0.0, d1}; }

    Matrix2 operator+(const Matrix2& o) const {
        return {m00 + o.m00, m01 + o.m01, m10 + o.m10, m11 + o.m11};
    }
    Matrix2 operator-(const Matrix2& o) const {
        return {m00 - o.m00, m01 - o.m01, m10 - o.m10, m11 - o.m11};
    }
    Matrix2 operator*(const Matrix2& o) const {
        return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
                m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
    }
    Matrix2 operator*(double s) const { return {m00 * s, m01 * s, m10 * s, m11 * s}; }
    StateVector2 operator*(const StateVector2& x) const {
        return {m00 * x.p + m01 * x.v, m10 * x.p + m11 * x.v};
    }

    Matrix2 transposed() const { return {m00, m10, m01, m11}; }
    double trace() const { return m00 + m11; }
    double determinant() const { return m00 * m11 - m01 * m10; }

    /// Closed-form adjugate inverse. Throws when |det| < kSingularDetFloor.
    Matrix2 inverse() const {
        const double det = determinant();
        if (std::abs(det) < kSingularDetFloor) {
            throw std::domain_error("Matrix2::inverse: singular 2x2 system");
        }
        const double inv = 1.0 / det;
        return {m11 * inv, -m01 * inv, -m10 * inv, m00 * inv};
    }

    Matrix2 symmetrized() const {
        const double off = 0.5 * (m01 + m10);
        return {m00, off, off, m11};
    }

    bool is_symmetric(double tol = 1e-9) const { return std::abs(m01 - m10) <= tol; }

    /// Eigenvalues of the symmetric part, ascending.
    void symmetric_eigenvalues(double& lo, double& hi) const {
        const Matrix2 s = symmetrized();
        const double tr = s.trace();
        const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * s.determinant()));
        lo = 0.5 * (tr - disc);
        hi = 0.5 * (tr + disc);
    }

    /// Covariance admissibility: symmetric within tol and eigenvalues >= -tol.
    bool is_valid_covariance(double tol = 1e-9) const {
        if (!is_symmetric(tol)) return false;
        double lo = 0.0, hi = 0.0;
        symmetric_eigenvalues(lo, hi);
        return lo >= -tol;
    }

    bool all_finite() const {
        return std::isfinite(m00) && std::isfinite(m01) && std::isfinite(m10) &&
               std::isfinite(m11);
    }
};

/// Control gains shared by all longitudinal models. All stored as positive
/// magnitudes; the cruise term's damping sign is fixed inside the control
/// laws so a scenario cannot configure an anti-damped cruise gain.
struct ControllerGains {
    double k_d = 0.1;     // 1/s^2, distance gain
    double k_v = 0.5;     // 1/s, relative-velocity gain
    double k_c = 0.1;     // 1/s, cruise (velocity-recovery) gain magnitude
    double v_des = 30.0;  // m/s
    double p_des = 37.5;  // m, desired spacing for the single-pair laws
};

enum class ControllerKind { FM, BCM, MBCM, PBCM };

}  // namespace flowsim

#endif  // FLOWSIM_TYPES_HPP
