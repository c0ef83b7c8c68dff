#ifndef FLOWSIM_CONTROLLERS_HPP
#define FLOWSIM_CONTROLLERS_HPP

#include <optional>
#include <vector>

#include "flowsim/types.hpp"

namespace flowsim {

/// Everything one vehicle's controller may look at for a single decision.
/// Lead vehicles have no front pair, tail vehicles no rear pair.
struct DecisionInput {
    std::optional<RelativeState> front;
    std::optional<RelativeState> rear;
    double own_velocity = 0.0;
    ControllerGains gains;
};

/// One weighted neighbor pair for the multi-node law.
struct NeighborTerm {
    int offset = 0;  // +k: the k-th consecutive pair ahead, -k: behind
    RelativeState state;
    double weight = 0.0;
};

enum class VehicleRole { Lead, Interior, Tail };

// All decision functions return an unclamped acceleration; the simulator
// applies clamp() and any scripted override.

/// Following law: react to the preceding pair only.
/// k_d (gap - p_des) + k_v v_rel - k_c (v_own - v_des).
double fm_decision(const RelativeState& front, double own_velocity,
                   const ControllerGains& gains);

/// Bilateral law: balance front against rear pair.
/// k_d (p_front - p_rear) + k_v (v_front - v_rear) - k_c (v_own - v_des).
double bcm_decision(const RelativeState& front, const RelativeState& rear,
                    double own_velocity, const ControllerGains& gains);

/// Multi-node bilateral law: sum of weighted pair terms plus cruise damping.
/// With weights {(+1, 1), (-1, -1)} this reduces exactly to bcm_decision.
/// Throws std::invalid_argument on an empty neighbor list.
double mbcm_decision(const std::vector<NeighborTerm>& neighbors, double own_velocity,
                     const ControllerGains& gains);

/// Bilateral law evaluated on predicted/estimated quantities. Numerically
/// identical to bcm_decision on the same inputs.
double pbcm_decision(const StateVector2& front_pred, const StateVector2& rear_pred,
                     double own_velocity_pred, const ControllerGains& gains);

/// Chain boundary: the lead vehicle holds constant velocity (0), the tail
/// runs the following law on its front pair.
double boundary_decision(VehicleRole role, const std::optional<RelativeState>& front,
                         double own_velocity, const ControllerGains& gains);

/// Comfort clamp to [-kMaxAcceleration, kMaxAcceleration].
double clamp_acceleration(double a);

}  // namespace flowsim

#endif  // FLOWSIM_CONTROLLERS_HPP
