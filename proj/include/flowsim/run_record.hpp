#ifndef FLOWSIM_RUN_RECORD_HPP
#define FLOWSIM_RUN_RECORD_HPP

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "flowsim/config.hpp"
#include "flowsim/types.hpp"

namespace flowsim {

/// Column-oriented log of one simulation run. Vehicle quantities are indexed
/// [tick * n_vehicles + i]; pair quantities [tick * n_pairs + j] where pair j
/// sits between vehicle j (front member) and j+1 (rear member).
///
/// Measurements are stored at the tick of the state they observe. Estimates
/// and predictions are likewise stored at the tick they refer to, which
/// trails the simulation clock by the configured delay; slots that no
/// estimate ever referred to stay NaN.
struct RunRecord {
    ScenarioConfig config;
    int n_vehicles = 0;
    int n_pairs = 0;
    double dt = 0.0;
    int ticks_recorded = 0;

    std::vector<double> position;  // m
    std::vector<double> velocity;  // m/s
    std::vector<double> accel;     // m/s^2, applied (clamped) decision

    std::vector<double> meas_p, meas_v;
    bool has_estimates = false;  // true for PBCM runs
    std::vector<double> pred_p, pred_v;
    std::vector<double> est_p, est_v;

    double time_s(int tick) const { return tick * dt; }
    double pos(int tick, int vehicle) const { return position[idx(tick, vehicle)]; }
    double vel(int tick, int vehicle) const { return velocity[idx(tick, vehicle)]; }
    double acc(int tick, int vehicle) const { return accel[idx(tick, vehicle)]; }

    /// Center-to-center distance of pair j at a tick.
    double gap(int tick, int pair) const {
        return pos(tick, pair) - pos(tick, pair + 1);
    }
    /// True relative state of pair j at a tick (front minus rear member).
    RelativeState true_rel(int tick, int pair) const {
        return {gap(tick, pair), vel(tick, pair) - vel(tick, pair + 1)};
    }

    std::size_t idx(int tick, int vehicle) const {
        return static_cast<std::size_t>(tick) * n_vehicles + vehicle;
    }
    std::size_t pidx(int tick, int pair) const {
        return static_cast<std::size_t>(tick) * n_pairs + pair;
    }

    void reserve(int ticks) {
        const std::size_t nv = static_cast<std::size_t>(ticks) * n_vehicles;
        const std::size_t np = static_cast<std::size_t>(ticks) * n_pairs;
        position.reserve(nv);
        velocity.reserve(nv);
        accel.reserve(nv);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        meas_p.assign(np, nan);
        meas_v.assign(np, nan);
        if (has_estimates) {
            pred_p.assign(np, nan);
            pred_v.assign(np, nan);
            est_p.assign(np, nan);
            est_v.assign(np, nan);
        }
    }
};

struct CollisionInfo {
    int tick = 0;        // tick whose integration produced the contact
    int pair_index = 0;  // offending pair
    double gap = 0.0;    // center-to-center distance at contact
};

/// A finished (possibly truncated) run: record plus the collision that ended
/// it early, if any.
struct RunResult {
    RunRecord record;
    std::optional<CollisionInfo> collision;
};

}  // namespace flowsim

#endif  // FLOWSIM_RUN_RECORD_HPP
