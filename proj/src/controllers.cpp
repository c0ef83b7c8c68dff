#include "flowsim/controllers.hpp"

#include <algorithm>
#include <stdexcept>

namespace flowsim {

double fm_decision(const RelativeState& front, double own_velocity,
                   const ControllerGains& g) {
    return g.k_d * (front.rel_position - g.p_des) + g.k_v * front.rel_velocity -
           g.k_c * (own_velocity - g.v_des);
}

double bcm_decision(const RelativeState& front, const RelativeState& rear,
                    double own_velocity, const ControllerGains& g) {
    return g.k_d * (front.rel_position - rear.rel_position) +
           g.k_v * (front.rel_velocity - rear.rel_velocity) -
           g.k_c * (own_velocity - g.v_des);
}

double mbcm_decision(const std::vector<NeighborTerm>& neighbors, double own_velocity,
                     const ControllerGains& g) {
    if (neighbors.empty()) {
        throw std::invalid_argument("mbcm_decision: empty neighbor list");
    }
    double acc = 0.0;
    for (const auto& n : neighbors) {
        acc += n.weight * (g.k_d * n.state.rel_position + g.k_v * n.state.rel_velocity);
    }
    return acc - g.k_c * (own_velocity - g.v_des);
}

double pbcm_decision(const StateVector2& front_pred, const StateVector2& rear_pred,
                     double own_velocity_pred, const ControllerGains& g) {
    return bcm_decision(to_relative(front_pred), to_relative(rear_pred),
                        own_velocity_pred, g);
}

double boundary_decision(VehicleRole role, const std::optional<RelativeState>& front,
                         double own_velocity, const ControllerGains& g) {
    switch (role) {
        case VehicleRole::Lead:
            return 0.0;
        case VehicleRole::Tail:
            if (!front) throw std::invalid_argument("tail vehicle needs a front pair");
            return fm_decision(*front, own_velocity, g);
        case VehicleRole::Interior:
            throw std::invalid_argument("boundary_decision called for an interior vehicle");
    }
    return 0.0;
}

double clamp_acceleration(double a) {
    return std::min(std::max(a, -kMaxAcceleration), kMaxAcceleration);
}

}  // namespace flowsim
